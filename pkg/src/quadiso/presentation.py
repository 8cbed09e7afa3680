"""Quadratic rewriting presentations for the three algebra families.

A presentation lists generators in a fixed total order (list position is
the rank) and, for every pair ``a > b``, one rule ``a*b -> sum c_m m``
whose right-hand words are ordered.  Ordered words then span the
algebra, and they form a basis exactly when the rules are confluent
(see :func:`quadiso.rewrite.check_confluence`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .scalar import format_rational, parse_rational

Word = tuple[int, ...]

QUANTUM_AFFINE = "quantum_affine"
HOMOGENIZED_WEYL = "homogenized_weyl"
QUANTUM_MATRIX = "quantum_matrix"
CUSTOM = "custom"
FAMILIES = (QUANTUM_AFFINE, HOMOGENIZED_WEYL, QUANTUM_MATRIX, CUSTOM)


class PresentationError(ValueError):
    """Invalid parameters or a malformed presentation."""


@dataclass(frozen=True)
class ParamMatrix:
    """Square matrix of nonzero rationals, meant to be multiplicatively
    antisymmetric (unit diagonal, ``p[i][j] * p[j][i] == 1``).

    Indexing is 0-based: ``p[i, j]``.  Construction does not validate, so
    that broken inputs can still be reported by :meth:`diagnostics`.
    """

    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "ParamMatrix":
        return cls(tuple(tuple(parse_rational(x) for x in row) for row in rows))

    @classmethod
    def from_upper(cls, n: int, upper: Mapping[tuple[int, int], object] | None = None) -> "ParamMatrix":
        """Build from 1-based entries ``{(i, j): p_ij}`` with ``i < j``.

        Missing entries default to 1; the lower triangle is filled by
        inversion.
        """
        upper = dict(upper or {})
        rows = [[Fraction(1)] * n for _ in range(n)]
        for (i, j), v in upper.items():
            if not 1 <= i < j <= n:
                raise PresentationError(f"upper entry ({i},{j}) out of range for n={n}")
            v = parse_rational(v)
            if v == 0:
                raise PresentationError("parameters must be nonzero")
            rows[i - 1][j - 1] = v
            rows[j - 1][i - 1] = 1 / v
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def trivial(cls, n: int) -> "ParamMatrix":
        return cls.from_upper(n)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "ParamMatrix":
        return ParamMatrix(tuple(zip(*self.entries)))

    def diagnostics(self) -> list[str]:
        out = []
        n = self.n
        if n == 0:
            out.append("parameter matrix is empty")
        for i, row in enumerate(self.entries):
            if len(row) != n:
                out.append(f"parameter matrix row {i + 1} has length {len(row)}, expected {n}")
                return out
        for i in range(n):
            if self[i, i] != 1:
                out.append(f"p_{i + 1}{i + 1} = {format_rational(self[i, i])} is not 1")
            for j in range(n):
                if self[i, j] == 0:
                    out.append(f"p_{i + 1}{j + 1} is zero")
                elif i < j and self[i, j] * self[j, i] != 1:
                    out.append(f"antisymmetry violated: p_{i + 1}{j + 1} * p_{j + 1}{i + 1} != 1")
        return out

    def check(self) -> "ParamMatrix":
        problems = self.diagnostics()
        if problems:
            raise PresentationError("; ".join(problems))
        return self

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.entries]


@dataclass(frozen=True)
class Presentation:
    """Ordered generators plus one quadratic rule per out-of-order pair.

    ``rules[(a, b)]`` (``a > b``) maps each right-hand word to its
    coefficient.  Instances are treated as immutable; a private cache of
    word normal forms hangs off each one.
    """

    generators: tuple[str, ...]
    rules: Mapping[tuple[int, int], Mapping[Word, Fraction]]
    family: str = CUSTOM
    params: Mapping[str, object] = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def rank(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def parse_word(self, text: str) -> Word:
        return tuple(self.rank(tok) for tok in text.split())

    def format_word(self, w: Word) -> str:
        return " ".join(self.generators[i] for i in w)

    def rule(self, a: int, b: int) -> Mapping[Word, Fraction]:
        return self.rules[(a, b)]


# ---------------------------------------------------------------------------
# validation


def validate_presentation(P: Presentation) -> list[str]:
    """Return a list of human-readable violations; empty means valid."""
    out: list[str] = []
    g = P.ngens
    if len(set(P.generators)) != g:
        out.append("generator names are not unique")
    if any(not name or any(c.isspace() for c in name) for name in P.generators):
        out.append("generator names must be non-empty and contain no whitespace")
    if P.family not in FAMILIES:
        out.append(f"unknown family {P.family!r}")
    expected = {(a, b) for a in range(g) for b in range(a)}
    for key in P.rules:
        if key not in expected:
            out.append(f"rule trigger {key} is not an out-of-order generator pair")
    for a, b in sorted(expected - set(P.rules)):
        out.append(f"missing rule for {P.generators[a]} {P.generators[b]}")
    for (a, b), rhs in sorted(P.rules.items()):
        if (a, b) not in expected:
            continue
        lhs = f"{P.generators[a]} {P.generators[b]}"
        for w, c in rhs.items():
            if len(w) != 2:
                out.append(f"rule {lhs}: right-hand word {w} is not quadratic")
                continue
            if any(not 0 <= x < g for x in w):
                out.append(f"rule {lhs}: right-hand word {w} uses an unknown generator")
                continue
            if c == 0:
                out.append(f"rule {lhs}: stored zero coefficient")
            if w[0] > w[1]:
                out.append(f"ordering violation in rule {lhs}: right-hand word "
                           f"{P.format_word(w)} is rank-decreasing")
            elif w >= (a, b):
                out.append(f"ordering violation in rule {lhs}: right-hand word "
                           f"{P.format_word(w)} does not precede the trigger")
    out.extend(_param_diagnostics(P))
    return out


def _param_diagnostics(P: Presentation) -> list[str]:
    out: list[str] = []
    params = P.params
    p = params.get("p")
    if isinstance(p, ParamMatrix):
        out.extend(p.diagnostics())
    gamma = params.get("gamma")
    if gamma is not None:
        if p is not None and len(gamma) != p.n:
            out.append(f"gamma has length {len(gamma)}, expected {p.n}")
        out.extend(f"gamma_{i + 1} is zero" for i, x in enumerate(gamma) if x == 0)
    lam = params.get("lambda")
    if lam is not None and lam in (0, 1, -1):
        out.append(f"lambda = {format_rational(lam)} is excluded (must avoid 0, 1, -1)")
    return out


# ---------------------------------------------------------------------------
# family constructors


def _rules_from(raw: dict) -> dict:
    return {k: {w: c for w, c in rhs.items() if c != 0} for k, rhs in raw.items()}


def make_quantum_affine(p: ParamMatrix) -> Presentation:
    """Quantum affine space: ``x_i x_j = p_ij x_j x_i``."""
    p.check()
    n = p.n
    gens = tuple(f"x{i + 1}" for i in range(n))
    rules = {}
    for j in range(n):
        for i in range(j):
            rules[(j, i)] = {(i, j): p[j, i]}
    return Presentation(gens, _rules_from(rules), QUANTUM_AFFINE, {"p": p})


def weyl_ranks(n: int) -> tuple[int, list[int], list[int]]:
    """Ranks of ``z``, ``y_i``, ``x_i`` in the order z < y1 < x1 < y2 < ..."""
    return 0, [2 * i + 1 for i in range(n)], [2 * i + 2 for i in range(n)]


def make_homogenized_weyl(p: ParamMatrix, gamma: Sequence) -> Presentation:
    """Homogenized quantized Weyl algebra on ``z, y_1, x_1, ..., y_n, x_n``.

    ``z`` is central and ``x_j y_j = z^2 + g_j y_j x_j + sum_{l<j} (g_l - 1) y_l x_l``.
    """
    p.check()
    gamma = tuple(parse_rational(g) for g in gamma)
    n = p.n
    if len(gamma) != n:
        raise PresentationError(f"gamma has length {len(gamma)} but p is {n}x{n}")
    if any(g == 0 for g in gamma):
        raise PresentationError("gamma entries must be nonzero")
    z, Y, X = weyl_ranks(n)
    gens = ["z"]
    for i in range(n):
        gens += [f"y{i + 1}", f"x{i + 1}"]
    rules: dict = {}
    for r in range(1, 2 * n + 1):
        rules[(r, z)] = {(z, r): Fraction(1)}
    for j in range(n):
        for i in range(j):
            # y_j y_i = p_ji y_i y_j
            rules[(Y[j], Y[i])] = {(Y[i], Y[j]): p[j, i]}
            # x_i x_j = g_i p_ij x_j x_i  (i < j)
            rules[(X[j], X[i])] = {(X[i], X[j]): 1 / (gamma[i] * p[i, j])}
            # x_i y_j = p_ji y_j x_i  (i < j)
            rules[(Y[j], X[i])] = {(X[i], Y[j]): p[i, j]}
            # x_j y_i = g_i p_ij y_i x_j  (j > i)
            rules[(X[j], Y[i])] = {(Y[i], X[j]): gamma[i] * p[i, j]}
        rhs = {(z, z): Fraction(1), (Y[j], X[j]): gamma[j]}
        for l in range(j):
            rhs[(Y[l], X[l])] = gamma[l] - 1
        rules[(X[j], Y[j])] = rhs
    return Presentation(tuple(gens), _rules_from(rules), HOMOGENIZED_WEYL,
                        {"p": p, "gamma": gamma})


def qma_name(i: int, j: int, n: int) -> str:
    return f"X{i + 1}{j + 1}" if n < 10 else f"X{i + 1}_{j + 1}"


def make_quantum_matrix(lam, p: ParamMatrix) -> Presentation:
    """Multiparameter quantum n x n matrices, generators ``X_ij`` row-major.

    The parameter matrix enters transposed relative to the usual
    ``p_li`` / ``p_jm`` slots, so that for n = 2 with ``p = p_12`` one gets
    ``X21 X12 = lam p^2 X12 X21`` and ``X22 X11 = X11 X22 + (lam-1) p X12 X21``.
    """
    lam = parse_rational(lam)
    if lam in (0, 1, -1):
        hint = ""
        if lam == 1:
            hint = " (at lambda = 1 the algebra degenerates to a quantum affine space)"
        raise PresentationError(f"lambda = {format_rational(lam)} is excluded{hint}")
    p.check()
    n = p.n

    def slot(a, b):
        return p[b, a]

    def rank(i, j):
        return i * n + j

    gens = tuple(qma_name(i, j, n) for i in range(n) for j in range(n))
    rules: dict = {}
    for l in range(n):
        for m in range(n):
            for i in range(l + 1):
                for j in range(n):
                    if i == l and j >= m:
                        continue
                    lhs = (rank(l, m), rank(i, j))
                    if l > i and m > j:
                        rhs = {(rank(i, j), rank(l, m)): slot(l, i) * slot(j, m),
                               (rank(i, m), rank(l, j)): (lam - 1) * slot(l, i)}
                    elif l > i:
                        rhs = {(rank(i, j), rank(l, m)): lam * slot(l, i) * slot(j, m)}
                    else:
                        rhs = {(rank(i, j), rank(l, m)): slot(j, m)}
                    rules[lhs] = rhs
    return Presentation(gens, _rules_from(rules), QUANTUM_MATRIX, {"lambda": lam, "p": p})


def make_custom(generators: Sequence[str], rules: Mapping) -> Presentation:
    """Presentation from explicit data; unverified until confluence is checked."""
    norm = {}
    for (a, b), rhs in rules.items():
        norm[(a, b)] = {tuple(w): parse_rational(c) for w, c in dict(rhs).items()}
    return Presentation(tuple(generators), _rules_from(norm), CUSTOM, {})


# ---------------------------------------------------------------------------
# JSON algebra-spec files

_FAMILY_KEYS = {
    QUANTUM_AFFINE: {"family", "n", "p"},
    HOMOGENIZED_WEYL: {"family", "n", "p", "gamma"},
    QUANTUM_MATRIX: {"family", "n", "p", "lambda"},
    CUSTOM: {"family", "generators", "rules"},
}
_ALL_KEYS = set().union(*_FAMILY_KEYS.values())


def _read_p(doc: dict, n) -> ParamMatrix:
    if "p" not in doc:
        if n is None:
            raise PresentationError("field 'p' (or 'n') is required")
        return ParamMatrix.trivial(n)
    rows = doc["p"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise PresentationError("field 'p' must be a list of lists of rational strings")
    try:
        p = ParamMatrix.from_rows(rows)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise PresentationError(f"field 'p': {exc}") from None
    if n is not None and p.n != n:
        raise PresentationError(f"field 'p' is {p.n}x{p.n} but n = {n}")
    return p.check()


def presentation_from_spec(doc: Mapping) -> Presentation:
    """Build a presentation from a parsed algebra-spec document."""
    if not isinstance(doc, Mapping):
        raise PresentationError("algebra spec must be a JSON object")
    unknown = set(doc) - _ALL_KEYS
    if unknown:
        raise PresentationError(f"unknown field(s): {', '.join(sorted(unknown))}")
    family = doc.get("family")
    if family not in FAMILIES:
        raise PresentationError(f"field 'family': expected one of {', '.join(FAMILIES)}, got {family!r}")
    extra = set(doc) - _FAMILY_KEYS[family]
    if extra:
        raise PresentationError(f"field(s) not used by family {family}: {', '.join(sorted(extra))}")
    n = doc.get("n")
    if n is not None and (not isinstance(n, int) or isinstance(n, bool) or n < 1):
        raise PresentationError("field 'n' must be a positive integer")

    try:
        if family == QUANTUM_AFFINE:
            return make_quantum_affine(_read_p(doc, n))
        if family == HOMOGENIZED_WEYL:
            p = _read_p(doc, n)
            if "gamma" not in doc:
                raise PresentationError("field 'gamma' is required")
            return make_homogenized_weyl(p, [_field_rational("gamma", g) for g in doc["gamma"]])
        if family == QUANTUM_MATRIX:
            if "lambda" not in doc:
                raise PresentationError("field 'lambda' is required")
            return make_quantum_matrix(_field_rational("lambda", doc["lambda"]), _read_p(doc, n))
        return _custom_from_spec(doc)
    except PresentationError:
        raise
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise PresentationError(str(exc)) from None


def _field_rational(name: str, value) -> Fraction:
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise PresentationError(f"field '{name}': rationals must be strings like \"3/2\"")
    try:
        return parse_rational(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise PresentationError(f"field '{name}': {exc}") from None


def _custom_from_spec(doc: Mapping) -> Presentation:
    gens = doc.get("generators")
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise PresentationError("field 'generators' must be a list of names")
    index = {g: i for i, g in enumerate(gens)}

    def word(text):
        try:
            return tuple(index[t] for t in text.split())
        except KeyError as exc:
            raise PresentationError(f"unknown generator {exc.args[0]!r} in rules") from None

    rules = {}
    for k, entry in enumerate(doc.get("rules", [])):
        if not isinstance(entry, Mapping) or set(entry) != {"lhs", "rhs"}:
            raise PresentationError(f"rules[{k}] must be an object with exactly 'lhs' and 'rhs'")
        lhs = word(entry["lhs"])
        if len(lhs) != 2:
            raise PresentationError(f"rules[{k}].lhs must be a two-letter word")
        rhs: dict = {}
        for term in entry["rhs"]:
            if not isinstance(term, list) or len(term) != 2:
                raise PresentationError(f"rules[{k}].rhs terms must be [coefficient, word] pairs")
            w = word(term[1])
            rhs[w] = rhs.get(w, Fraction(0)) + _field_rational(f"rules[{k}].rhs", term[0])
        if lhs in rules:
            raise PresentationError(f"rules[{k}]: duplicate rule for {entry['lhs']!r}")
        rules[lhs] = rhs
    return make_custom(gens, rules)


def presentation_to_spec(P: Presentation) -> dict:
    """Inverse of :func:`presentation_from_spec`."""
    if P.family == QUANTUM_AFFINE:
        return {"family": P.family, "n": P.params["p"].n, "p": P.params["p"].to_json()}
    if P.family == HOMOGENIZED_WEYL:
        return {"family": P.family, "n": P.params["p"].n, "p": P.params["p"].to_json(),
                "gamma": [format_rational(g) for g in P.params["gamma"]]}
    if P.family == QUANTUM_MATRIX:
        return {"family": P.family, "n": P.params["p"].n, "p": P.params["p"].to_json(),
                "lambda": format_rational(P.params["lambda"])}
    rules = []
    for (a, b), rhs in sorted(P.rules.items()):
        rules.append({"lhs": P.format_word((a, b)),
                      "rhs": [[format_rational(c), P.format_word(w)] for w, c in sorted(rhs.items())]})
    return {"family": CUSTOM, "generators": list(P.generators), "rules": rules}


def load_spec(path) -> Presentation:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise PresentationError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    try:
        return presentation_from_spec(doc)
    except PresentationError as exc:
        raise PresentationError(f"{path}: {exc}") from None

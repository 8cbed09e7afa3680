"""Isomorphism decisions for the three families, with verified witness maps.

Decisions work at the level of parameters.  Witnesses are explicit
degree-one generator matrices and are always checked against every
defining relation in both directions before they are handed out.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .presentation import (
    HOMOGENIZED_WEYL,
    QUANTUM_AFFINE,
    QUANTUM_MATRIX,
    ParamMatrix,
    Presentation,
    weyl_ranks,
)
from .rewrite import NCPoly, format_poly, normal_form
from .scalar import format_rational, rational_sqrt


class IsoError(ValueError):
    pass


# ---------------------------------------------------------------------------
# generator maps


@dataclass(frozen=True)
class GeneratorMap:
    """Degree-one map: source generator i goes to ``sum_j matrix[i][j] * target_j``."""

    source: Presentation
    target: Presentation
    matrix: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, source, target, rows) -> "GeneratorMap":
        return cls(source, target, tuple(tuple(Fraction(x) for x in row) for row in rows))

    @classmethod
    def from_pattern(cls, source, target, pattern: Sequence[int], scalars=None) -> "GeneratorMap":
        """Monomial map ``g_i -> scalars[i] * h_{pattern[i]}``."""
        n = len(pattern)
        scalars = scalars or [Fraction(1)] * n
        rows = [[Fraction(0)] * target.ngens for _ in range(n)]
        for i, (j, s) in enumerate(zip(pattern, scalars)):
            rows[i][j] = Fraction(s)
        return cls.from_rows(source, target, rows)

    def image(self, i: int) -> NCPoly:
        return NCPoly({(j,): c for j, c in enumerate(self.matrix[i])})

    def apply_word(self, w) -> NCPoly:
        acc = NCPoly.one()
        for x in w:
            acc = acc.concat(self.image(x))
        return acc

    def apply(self, f: NCPoly) -> NCPoly:
        out = NCPoly()
        for w, c in f.terms.items():
            out = out + self.apply_word(w) * c
        return normal_form(self.target, out)

    def inverse(self) -> "GeneratorMap":
        return GeneratorMap.from_rows(self.target, self.source, linalg.inverse(self.matrix))

    def then(self, other: "GeneratorMap") -> "GeneratorMap":
        """Composite ``other after self``."""
        return GeneratorMap.from_rows(self.source, other.target, linalg.matmul(self.matrix, other.matrix))

    def describe(self) -> list[str]:
        return [f"{self.source.generators[i]} -> {format_poly(self.target, self.image(i))}"
                for i in range(self.source.ngens)]

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.matrix]


def relation_residuals(phi: GeneratorMap) -> dict:
    """Nonzero images of ``a b - rhs`` for the rules of the source."""
    out = {}
    for (a, b), rhs in phi.source.rules.items():
        expr = phi.apply_word((a, b))
        for w, c in rhs.items():
            expr = expr - phi.apply_word(w) * c
        r = normal_form(phi.target, expr)
        if r:
            out[(a, b)] = r
    return out


def verify_homomorphism(phi: GeneratorMap) -> bool:
    """True iff every defining rule of the source maps to zero in the target."""
    if len(phi.matrix) != phi.source.ngens or any(len(r) != phi.target.ngens for r in phi.matrix):
        raise IsoError("map matrix does not match the generator counts")
    return not relation_residuals(phi)


def isomorphism_failure(phi: GeneratorMap):
    """Reason ``phi`` is not an isomorphism, or None if it is one."""
    if phi.source.ngens != phi.target.ngens:
        return "generator counts differ"
    if linalg.det(phi.matrix) == 0:
        return "map matrix is singular"
    if not verify_homomorphism(phi):
        return "map does not respect the source relations"
    if not verify_homomorphism(phi.inverse()):
        return "inverse map does not respect the target relations"
    return None


def verify_isomorphism(phi: GeneratorMap) -> bool:
    return isomorphism_failure(phi) is None


# ---------------------------------------------------------------------------
# scalar solving for monomial patterns


def _scalar_constraints(source: Presentation, target: Presentation, pattern: Sequence[int]):
    """Polynomial constraints on per-generator scalars, as {monomial: coeff} dicts.

    A monomial is a sorted tuple of source-generator indices.
    """
    cons = []
    for (a, b), rhs in sorted(source.rules.items()):
        acc: dict[tuple, dict] = {}

        def add(word, coeff):
            mono = tuple(sorted(word))
            img = normal_form(target, NCPoly.word(tuple(pattern[x] for x in word)))
            for w, c in img.terms.items():
                slot = acc.setdefault(w, {})
                slot[mono] = slot.get(mono, 0) + coeff * c

        add((a, b), Fraction(1))
        for w, c in rhs.items():
            add(w, -c)
        for poly in acc.values():
            poly = {m: c for m, c in poly.items() if c}
            if poly:
                cons.append(poly)
    return cons


def _substitute(poly: dict, values: dict) -> dict:
    out: dict = {}
    for mono, c in poly.items():
        rest = []
        for v in mono:
            if v in values:
                c = c * values[v]
            else:
                rest.append(v)
        key = tuple(rest)
        out[key] = out.get(key, 0) + c
    return {m: c for m, c in out.items() if c}


def _univariate_roots(poly: dict, v: int) -> list[Fraction]:
    c2 = poly.get((v, v), Fraction(0))
    c1 = poly.get((v,), Fraction(0))
    c0 = poly.get((), Fraction(0))
    if c2 == 0:
        return [] if c1 == 0 else [-c0 / c1]
    root = rational_sqrt(c1 * c1 - 4 * c2 * c0)
    if root is None:
        return []
    return sorted({(-c1 + root) / (2 * c2), (-c1 - root) / (2 * c2)})


def _solve(cons: list[dict], values: dict, nvars: int):
    live = []
    for poly in cons:
        poly = _substitute(poly, values)
        if not poly:
            continue
        if set(poly) == {()}:
            return None
        live.append(poly)
    if not live:
        return {**{v: Fraction(1) for v in range(nvars) if v not in values}, **values}
    for poly in live:
        unknowns = {v for mono in poly for v in mono}
        if len(unknowns) == 1:
            (v,) = unknowns
            for r in _univariate_roots(poly, v):
                if r == 0:
                    continue
                sol = _solve(live, {**values, v: r}, nvars)
                if sol is not None:
                    return sol
            return None
    free = min(v for poly in live for mono in poly for v in mono)
    return _solve(live, {**values, free: Fraction(1)}, nvars)


def solve_scalar_map(source: Presentation, target: Presentation, pattern: Sequence[int]):
    """Nonzero scalars ``s`` making ``g_i -> s_i * h_{pattern[i]}`` a homomorphism.

    Constraints are solved one unknown at a time; when none is forced the
    lowest-rank free scalar is set to 1 (so a central ``z`` gets 1).
    Returns the list of scalars, or None.
    """
    n = source.ngens
    if len(pattern) != n or sorted(pattern) != list(range(target.ngens)):
        raise IsoError("pattern must be a bijection between generator sets")
    sol = _solve(_scalar_constraints(source, target, pattern), {}, n)
    if sol is None:
        return None
    return [sol[i] for i in range(n)]


# ---------------------------------------------------------------------------
# decisions


def decide_qas(p: ParamMatrix, q: ParamMatrix):
    """Least permutation sigma (0-based) with ``q[i, j] == p[sigma[i], sigma[j]]``, or None."""
    n = p.n
    if q.n != n:
        return None
    sigma: list[int] = []
    used = [False] * n

    def extend():
        i = len(sigma)
        if i == n:
            return True
        for k in range(n):
            if used[k] or p[k, k] != q[i, i]:
                continue
            if all(q[i, j] == p[k, sigma[j]] for j in range(i)):
                sigma.append(k)
                used[k] = True
                if extend():
                    return True
                sigma.pop()
                used[k] = False
        return False

    return tuple(sigma) if extend() else None


def _weyl_table(i, j, ei, ej, p, gamma):
    if (ei, ej) == (1, 1):
        return p[i, j]
    if (ei, ej) == (-1, 1):
        return p[j, i]
    if (ei, ej) == (1, -1):
        return p[j, i] / gamma[i]
    return gamma[i] * p[i, j]


def decide_hweyl(p: ParamMatrix, gamma, q: ParamMatrix, mu):
    """First sign vector (``+1`` before ``-1``) relating the two parameter sets, or None."""
    n = p.n
    if q.n != n or len(gamma) != n or len(mu) != n:
        return None
    choices = []
    for g, m in zip(gamma, mu):
        opts = [e for e in (1, -1) if m == (g if e == 1 else 1 / g)]
        if not opts:
            return None
        choices.append(opts)
    for eps in itertools.product(*choices):
        if all(q[i, j] == _weyl_table(i, j, eps[i], eps[j], p, gamma)
               for i in range(n) for j in range(i + 1, n)):
            return eps
    return None


def qma_case_holds(case: int, lam, p: ParamMatrix, mu, q: ParamMatrix) -> bool:
    n = p.n
    upper = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if case == 1:
        return lam == mu and p == q
    if case == 2:
        return lam == mu and all(p[i, j] == q[j, i] / lam for i, j in upper)
    if case == 3:
        return lam * mu == 1 and all(p[i, j] == q[n - 1 - i, n - 1 - j] for i, j in upper)
    if case == 4:
        return lam * mu == 1 and all(p[i, j] == q[n - 1 - j, n - 1 - i] / lam for i, j in upper)
    raise ValueError(f"no case {case}")


def decide_qma(lam, p: ParamMatrix, mu, q: ParamMatrix):
    """Lowest case number 1..4 relating the two quantum matrix algebras, or None."""
    lam, mu = Fraction(lam), Fraction(mu)
    for x in (lam, mu):
        if x in (0, 1, -1):
            raise IsoError(f"lambda = {format_rational(x)} is excluded")
    if p.n != q.n or lam not in (mu, 1 / mu):
        return None
    for case in (1, 2, 3, 4):
        if qma_case_holds(case, lam, p, mu, q):
            return case
    return None


# ---------------------------------------------------------------------------
# witnesses


def qas_witness(sigma: Sequence[int], source: Presentation, target: Presentation) -> GeneratorMap:
    """``x_k -> y_{sigma^-1(k)}`` for the permutation found by :func:`decide_qas`."""
    inv = [0] * len(sigma)
    for i, k in enumerate(sigma):
        inv[k] = i
    return GeneratorMap.from_pattern(source, target, inv)


def transpose_pattern(n: int) -> list[int]:
    return [j * n + i for i in range(n) for j in range(n)]


def flip_pattern(n: int) -> list[int]:
    return [(n - 1 - i) * n + (n - 1 - j) for i in range(n) for j in range(n)]


def qma_witness(case: int, source: Presentation, target: Presentation) -> GeneratorMap:
    n = source.params["p"].n
    if case == 1:
        return GeneratorMap.from_pattern(source, target, list(range(n * n)))
    if case == 2:
        return GeneratorMap.from_pattern(source, target, transpose_pattern(n))
    if case == 3:
        return GeneratorMap.from_pattern(source, target, flip_pattern(n))
    if case == 4:
        t, f = transpose_pattern(n), flip_pattern(n)
        return GeneratorMap.from_pattern(source, target, [f[t[k]] for k in range(n * n)])
    raise ValueError(f"no case {case}")


def weyl_pattern(eps: Sequence[int]) -> list[int]:
    n = len(eps)
    z, Y, X = weyl_ranks(n)
    pattern = [z] + [0] * (2 * n)
    for i, e in enumerate(eps):
        pattern[Y[i]], pattern[X[i]] = (Y[i], X[i]) if e == 1 else (X[i], Y[i])
    return pattern


def weyl_witness(eps: Sequence[int], source: Presentation, target: Presentation):
    """Scalar-solved monomial map for a sign vector, or None if the solver fails."""
    pattern = weyl_pattern(eps)
    scalars = solve_scalar_map(source, target, pattern)
    if scalars is None:
        return None
    return GeneratorMap.from_pattern(source, target, pattern, scalars)


@dataclass
class IsoCertificate:
    """Outcome of an isomorphism decision.

    ``kind``/``data`` hold the parameter-level witness (sigma, epsilon or
    case).  ``map`` is the verified generator map when one was built.
    """

    isomorphic: bool
    kind: str | None = None
    data: object = None
    map: GeneratorMap | None = None
    obstructions: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_json(self, include_matrix: bool = True) -> dict:
        doc: dict = {"isomorphic": self.isomorphic, "witness": None,
                     "obstructions": self.obstructions}
        if self.isomorphic:
            w: dict = {"kind": self.kind}
            if self.kind == "qas_permutation":
                w["sigma"] = [k + 1 for k in self.data]
            elif self.kind == "weyl_sign_vector":
                w["epsilon"] = list(self.data)
                if self.map is not None:
                    w["scalars"] = {self.map.source.generators[i]: format_rational(
                        next(x for x in row if x)) for i, row in enumerate(self.map.matrix)}
            elif self.kind == "qma_case":
                w["case"] = self.data
            w["verified"] = self.map is not None
            if self.map is not None:
                w["images"] = self.map.describe()
                if include_matrix:
                    w["matrix"] = self.map.to_json()
            doc["witness"] = w
        if self.notes:
            doc["notes"] = self.notes
        return doc


def build_witness(kind: str, data, source: Presentation, target: Presentation):
    """Construct and verify the witness map for a positive decision.

    Returns the map, or None when no verified map could be produced
    (only expected for mixed sign vectors of larger homogenized Weyl algebras).
    """
    if kind == "qas_permutation":
        phi = qas_witness(data, source, target)
    elif kind == "qma_case":
        phi = qma_witness(data, source, target)
    elif kind == "weyl_sign_vector":
        phi = weyl_witness(data, source, target)
        if phi is None:
            return None
    else:
        raise IsoError(f"unknown witness kind {kind!r}")
    if not verify_isomorphism(phi):
        return None
    return phi


# ---------------------------------------------------------------------------
# obstructions and dispatch


def _offdiag_multiset(p: ParamMatrix) -> Counter:
    return Counter(p[i, j] for i in range(p.n) for j in range(p.n) if i != j and p[i, j] != 1)


def _fmt_counter(c: Counter) -> list[str]:
    return sorted(format_rational(x) for x in c.elements())


def obstruction_report(A: Presentation, B: Presentation) -> list[dict]:
    """Every applicable reason the two algebras cannot be isomorphic.

    An empty list means no obstruction was found, not that they are isomorphic.
    """
    out: list[dict] = []
    if A.family != B.family:
        out.append({"kind": "family_mismatch", "detail": f"{A.family} vs {B.family}"})
    if A.ngens != B.ngens:
        out.append({"kind": "generator_count",
                    "detail": f"{A.ngens} vs {B.ngens} generators (growth exponents differ)"})
    if out:
        return out
    fam = A.family
    if fam == QUANTUM_AFFINE:
        p, q = A.params["p"], B.params["p"]
        if _offdiag_multiset(p) != _offdiag_multiset(q):
            out.append({"kind": "parameter_multiset",
                        "detail": f"{_fmt_counter(_offdiag_multiset(p))} vs {_fmt_counter(_offdiag_multiset(q))}"})
        elif decide_qas(p, q) is None:
            out.append({"kind": "permutation_exhaustion", "detail": "no permutation relates the matrices"})
    elif fam == HOMOGENIZED_WEYL:
        p, g = A.params["p"], A.params["gamma"]
        q, m = B.params["p"], B.params["gamma"]
        bad = [i for i in range(len(g)) if m[i] not in (g[i], 1 / g[i])]
        for i in bad:
            out.append({"kind": "gamma_component",
                        "detail": f"component {i + 1}: {format_rational(m[i])} is neither "
                                  f"{format_rational(g[i])} nor its inverse"})
        if not bad and decide_hweyl(p, g, q, m) is None:
            out.append({"kind": "sign_vector_exhaustion",
                        "detail": "no sign vector matches the p/q table"})
    elif fam == QUANTUM_MATRIX:
        lam, mu = A.params["lambda"], B.params["lambda"]
        if lam not in (mu, 1 / mu):
            out.append({"kind": "lambda_relation",
                        "detail": f"lambda = {format_rational(lam)} is neither "
                                  f"{format_rational(mu)} nor its inverse"})
        elif decide_qma(lam, A.params["p"], mu, B.params["p"]) is None:
            out.append({"kind": "case_exhaustion", "detail": "none of the four cases holds"})
    return out


def decide_isomorphism(A: Presentation, B: Presentation, witness: bool = True) -> IsoCertificate:
    """Dispatch on family; build and verify a witness map when asked."""
    if A.family != B.family or A.family not in (QUANTUM_AFFINE, HOMOGENIZED_WEYL, QUANTUM_MATRIX):
        raise IsoError(f"cannot compare {A.family} with {B.family}")
    obstructions = obstruction_report(A, B)
    if any(o["kind"] == "generator_count" for o in obstructions):
        return IsoCertificate(False, obstructions=obstructions)
    if A.family == QUANTUM_AFFINE:
        kind, data = "qas_permutation", decide_qas(A.params["p"], B.params["p"])
    elif A.family == HOMOGENIZED_WEYL:
        kind, data = "weyl_sign_vector", decide_hweyl(A.params["p"], A.params["gamma"],
                                                      B.params["p"], B.params["gamma"])
    else:
        kind, data = "qma_case", decide_qma(A.params["lambda"], A.params["p"],
                                            B.params["lambda"], B.params["p"])
    if data is None:
        return IsoCertificate(False, obstructions=obstructions)
    cert = IsoCertificate(True, kind, data)
    if witness:
        cert.map = build_witness(kind, data, A, B)
        if cert.map is None:
            cert.notes.append("witness unavailable: no verified generator map was found "
                              "for this decision")
    return cert

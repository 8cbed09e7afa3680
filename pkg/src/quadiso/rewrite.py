"""Noncommutative polynomials, normal forms and confluence checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from .presentation import Presentation, Word
from .scalar import format_rational, parse_rational


class RewriteError(RuntimeError):
    """Raised when the defensive fuel bound is exceeded or input is unusable."""


class NotConfluentError(ValueError):
    pass


def word_key(w: Word):
    return (len(w), w)


class NCPoly:
    """Finite linear combination of words with Fraction coefficients.

    Zero coefficients are never stored.  ``*`` only scales; use
    :meth:`concat` for the free (unreduced) product and
    :func:`multiply` for the product in an algebra.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, object] | None = None):
        clean: dict[Word, Fraction] = {}
        for w, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(w)] = c
        self.terms = clean

    @classmethod
    def word(cls, w: Iterable[int], coeff=1) -> "NCPoly":
        return cls({tuple(w): coeff})

    @classmethod
    def gen(cls, i: int, coeff=1) -> "NCPoly":
        return cls({(i,): coeff})

    @classmethod
    def one(cls) -> "NCPoly":
        return cls({(): 1})

    @classmethod
    def linear(cls, coeffs: Iterable) -> "NCPoly":
        """Degree-one element ``sum coeffs[i] * g_i``."""
        return cls({(i,): c for i, c in enumerate(coeffs)})

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda t: word_key(t[0])))

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, NCPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"NCPoly({dict(self)!r})"

    def coeff(self, w: Word) -> Fraction:
        return self.terms.get(tuple(w), Fraction(0))

    def __add__(self, other: "NCPoly") -> "NCPoly":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NCPoly(out)

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def __mul__(self, scalar) -> "NCPoly":
        if isinstance(scalar, NCPoly):
            raise TypeError("use concat() or multiply() for products of polynomials")
        s = Fraction(scalar)
        return NCPoly({w: s * c for w, c in self.terms.items()})

    __rmul__ = __mul__

    def concat(self, other: "NCPoly") -> "NCPoly":
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return NCPoly(out)

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def is_homogeneous(self, d: int) -> bool:
        return bool(self.terms) and self.degrees() == {d}

    def linear_coeffs(self, ngens: int) -> list[Fraction]:
        if self.terms and self.degrees() != {1}:
            raise ValueError("not a degree-one element")
        return [self.coeff((i,)) for i in range(ngens)]


# ---------------------------------------------------------------------------
# printing / parsing


def format_poly(P: Presentation, f: NCPoly) -> str:
    """``coeff*word`` terms joined by `` + `` / `` - ``; ``1`` is the empty word."""
    if not f:
        return "0"
    parts = []
    for k, (w, c) in enumerate(f):
        neg = c < 0
        a = -c if neg else c
        if not w:
            body = format_rational(a)
        elif a == 1:
            body = P.format_word(w)
        else:
            body = f"{format_rational(a)}*{P.format_word(w)}"
        if k == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def parse_poly(P: Presentation, text: str) -> NCPoly:
    """Inverse of :func:`format_poly`; also accepts a bare word."""
    text = text.strip()
    if text in ("", "1"):
        return NCPoly.one()
    if text == "0":
        return NCPoly()
    tokens = text.replace(" - ", " + -").split(" + ")
    out = NCPoly()
    for tok in tokens:
        tok = tok.strip()
        sign = 1
        if tok.startswith("-"):
            sign, tok = -1, tok[1:]
        if "*" in tok:
            c, w = tok.split("*", 1)
            out = out + NCPoly.word(P.parse_word(w), sign * parse_rational(c))
        else:
            try:
                c = parse_rational(tok)
            except ValueError:
                out = out + NCPoly.word(P.parse_word(tok), sign)
            else:
                out = out + NCPoly.word((), sign * c)
    return out


# ---------------------------------------------------------------------------
# normal forms


def _inversion(w: Word, strategy: str):
    rng = range(len(w) - 1)
    if strategy == "right":
        rng = reversed(rng)
    for k in rng:
        if w[k] > w[k + 1]:
            return k
    return None


def _fuel(P: Presentation, length: int) -> int:
    return length * length * max(P.ngens - 1, 1) + length


def _nf_word(P: Presentation, w: Word, strategy: str, cache: dict, depth: int, fuel: int) -> dict:
    hit = cache.get(w)
    if hit is not None:
        return hit
    k = _inversion(w, strategy)
    if k is None:
        res = {w: Fraction(1)}
    else:
        if depth > fuel:
            raise RewriteError(f"rewriting exceeded fuel bound {fuel} on word {w}")
        res: dict[Word, Fraction] = {}
        head, tail = w[:k], w[k + 2:]
        for m, c in P.rules[(w[k], w[k + 1])].items():
            sub = _nf_word(P, head + m + tail, strategy, cache, depth + 1, fuel)
            for v, d in sub.items():
                res[v] = res.get(v, 0) + c * d
        res = {v: c for v, c in res.items() if c}
    cache[w] = res
    return res


def normal_form(P: Presentation, f: NCPoly, strategy: str = "left") -> NCPoly:
    """Rewrite every word of ``f`` until all words are rank-nondecreasing.

    ``strategy`` picks the leftmost (default) or rightmost inversion at
    each step; for confluent presentations the result does not depend
    on it.
    """
    if strategy not in ("left", "right"):
        raise ValueError(f"unknown strategy {strategy!r}")
    cache = P._cache.setdefault(("nf", strategy), {})
    out: dict[Word, Fraction] = {}
    for w, c in f.terms.items():
        for v, d in _nf_word(P, w, strategy, cache, 0, _fuel(P, len(w))).items():
            out[v] = out.get(v, 0) + c * d
    return NCPoly(out)


def multiply(P: Presentation, *factors: NCPoly) -> NCPoly:
    """Product in the algebra presented by ``P``, in normal form."""
    acc = NCPoly.one()
    for f in factors:
        acc = normal_form(P, acc.concat(f))
    return acc


def is_ordered(w: Word) -> bool:
    return all(a <= b for a, b in zip(w, w[1:]))


# ---------------------------------------------------------------------------
# confluence


@dataclass(frozen=True)
class Overlap:
    c: int
    b: int
    a: int
    left: NCPoly
    right: NCPoly

    @property
    def resolved(self) -> bool:
        return self.left == self.right


@dataclass(frozen=True)
class ConfluenceReport:
    overlaps: tuple[Overlap, ...]

    @property
    def resolved(self) -> bool:
        return all(o.resolved for o in self.overlaps)

    @property
    def unresolved(self) -> list[Overlap]:
        return [o for o in self.overlaps if not o.resolved]

    def to_json(self, P: Presentation) -> dict:
        return {
            "resolved": self.resolved,
            "total": len(self.overlaps),
            "resolved_count": sum(o.resolved for o in self.overlaps),
            "overlaps": [
                {"word": P.format_word((o.c, o.b, o.a)), "resolved": o.resolved,
                 "leftmost": format_poly(P, o.left), "rightmost": format_poly(P, o.right)}
                for o in self.overlaps
            ],
        }


def check_confluence(P: Presentation) -> ConfluenceReport:
    """Reduce every overlap ``c b a`` (c > b > a) both ways and compare."""
    cached = P._cache.get("confluence")
    if cached is not None:
        return cached
    overlaps = []
    for c in range(P.ngens):
        for b in range(c):
            for a in range(b):
                w = NCPoly.word((c, b, a))
                overlaps.append(Overlap(c, b, a, normal_form(P, w, "left"), normal_form(P, w, "right")))
    report = ConfluenceReport(tuple(overlaps))
    P._cache["confluence"] = report
    return report


def require_confluent(P: Presentation) -> None:
    if not check_confluence(P).resolved:
        raise NotConfluentError("presentation is not confluent; ordered words are not a basis")


# ---------------------------------------------------------------------------
# graded dimensions

BRUTE_DEGREE = 3


def ordered_words(g: int, d: int) -> list[Word]:
    return list(itertools.combinations_with_replacement(range(g), d))


def brute_dimension(P: Presentation, d: int) -> int:
    """Reduce all ``g**d`` words and count the distinct words in their supports."""
    support: set[Word] = set()
    for w in itertools.product(range(P.ngens), repeat=d):
        support.update(normal_form(P, NCPoly.word(w)).terms)
    return len(support)


def hilbert_table(P: Presentation, d_max: int) -> list[dict]:
    require_confluent(P)
    g = P.ngens
    rows = []
    for d in range(d_max + 1):
        dim = comb(g + d - 1, d)
        brute = brute_dimension(P, d) if d <= BRUTE_DEGREE else None
        if brute is not None and brute != dim:
            raise RewriteError(f"degree {d}: brute-force count {brute} != {dim}")
        rows.append({"degree": d, "dim": dim, "brute_checked": brute is not None})
    return rows


def hilbert_dims(P: Presentation, d_max: int) -> list[int]:
    """Graded dimensions for d = 0..d_max (ordered-word counts, brute-checked for d <= 3)."""
    return [row["dim"] for row in hilbert_table(P, d_max)]


def growth_exponent(P: Presentation) -> int:
    """GK dimension of a confluent presentation of this shape: the generator count."""
    require_confluent(P)
    return P.ngens

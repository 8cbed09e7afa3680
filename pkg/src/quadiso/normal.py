"""Degree-one normal elements and iterated quotients by them.

An element ``u`` of degree one is normal when ``Au = uA``.  For algebras
generated in degree one it suffices that for every generator ``g`` there
are degree-one ``r_g, s_g`` with ``g u = u r_g`` and ``u g = s_g u``; each
of those is an exact linear system over the ordered degree-two words.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from . import linalg
from .presentation import CUSTOM, HOMOGENIZED_WEYL, Presentation, validate_presentation
from .rewrite import NCPoly, format_poly, normal_form, require_confluent


class NormalityError(ValueError):
    pass


@dataclass(frozen=True)
class NormalityCertificate:
    """Witnesses ``g u = u r_g`` (``left``) and ``u g = s_g u`` (``right``)."""

    u: NCPoly
    left: tuple[NCPoly, ...]
    right: tuple[NCPoly, ...]

    def verify(self, P: Presentation) -> bool:
        for g in range(P.ngens):
            x = NCPoly.gen(g)
            if normal_form(P, x.concat(self.u) - self.u.concat(self.left[g])):
                return False
            if normal_form(P, self.u.concat(x) - self.right[g].concat(self.u)):
                return False
        return True


def _check_degree_one(P: Presentation, u: NCPoly) -> None:
    if not u:
        raise NormalityError("zero is not a valid candidate")
    if not u.is_homogeneous(1):
        raise NormalityError("candidate must be homogeneous of degree one")
    if any(not 0 <= w[0] < P.ngens for w in u.terms):
        raise NormalityError("candidate uses an unknown generator")


def is_normal_degree_one(P: Presentation, u: NCPoly):
    """Certificate that ``u`` is normal, or None."""
    _check_degree_one(P, u)
    g = P.ngens
    gens = [NCPoly.gen(i) for i in range(g)]
    u_times = [normal_form(P, u.concat(h)).terms for h in gens]
    times_u = [normal_form(P, h.concat(u)).terms for h in gens]
    left, right = [], []
    for i in range(g):
        c = linalg.solve_columns(u_times, times_u[i])
        if c is None:
            return None
        left.append(NCPoly.linear(c))
    for i in range(g):
        c = linalg.solve_columns(times_u, u_times[i])
        if c is None:
            return None
        right.append(NCPoly.linear(c))
    return NormalityCertificate(u, tuple(left), tuple(right))


# ---------------------------------------------------------------------------
# search


def _normalize(vec: Sequence[Fraction]) -> tuple[Fraction, ...]:
    lead = next(x for x in vec if x != 0)
    return tuple(Fraction(x) / lead for x in vec)


def _in_span(basis: list[Sequence[Fraction]], vec: Sequence[Fraction]) -> bool:
    if not basis:
        return not any(vec)
    return linalg.rank(list(basis) + [list(vec)]) == linalg.rank(list(basis))


_T = sympy.Symbol("t")


def _interpolate(points: list[Fraction], values: list[Fraction]) -> sympy.Poly:
    k = len(points)
    vander = [[x ** e for e in range(k)] for x in points]
    sol = linalg.solve_columns(
        [{r: vander[r][e] for r in range(k)} for e in range(k)],
        {r: values[r] for r in range(k)},
    )
    coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(sol)]
    return sympy.Poly(coeffs, _T, domain=sympy.QQ)


def _pair_systems(P: Presentation, i: int, j: int):
    """Yield ``(cols0, cols1, b0, b1)`` for every normality system of ``g_i + t g_j``.

    The coefficient columns are ``cols0 + t cols1`` and the right side ``b0 + t b1``.
    """
    g = P.ngens
    gens = [NCPoly.gen(k) for k in range(g)]
    gi, gj = gens[i], gens[j]

    def nf(f):
        return normal_form(P, f).terms

    ui = [nf(gi.concat(h)) for h in gens]
    uj = [nf(gj.concat(h)) for h in gens]
    iu = [nf(h.concat(gi)) for h in gens]
    ju = [nf(h.concat(gj)) for h in gens]
    # g u = u r_g  and  u g = s_g u
    for k in range(g):
        yield ui, uj, iu[k], ju[k]
    for k in range(g):
        yield iu, ju, ui[k], uj[k]


def _dense(cols0, cols1, b0, b1):
    keys = sorted({w for c in cols0 + cols1 for w in c} | set(b0) | set(b1))
    idx = {w: r for r, w in enumerate(keys)}
    nc = len(cols0)

    def mat(cols, b):
        m = [[Fraction(0)] * (nc + 1) for _ in keys]
        for c, col in enumerate(cols):
            for w, v in col.items():
                m[idx[w]][c] = v
        for w, v in b.items():
            m[idx[w]][nc] = v
        return m

    return mat(cols0, b0), mat(cols1, b1)


def _bordered_minors(M0, M1):
    """Yield nonzero bordered-minor polynomials in t of the system ``M0 + t M1``.

    Rows are chosen where the system is inconsistent at a generic point,
    so every yielded polynomial is nonzero; systems that are consistent
    there yield nothing.
    """
    nrows, ncols = len(M0), len(M0[0]) - 1
    t0 = Fraction(1009, 17)
    At0 = [[M0[r][c] + t0 * M1[r][c] for c in range(ncols + 1)] for r in range(nrows)]
    _, col_piv = linalg.rref([row[:ncols] for row in At0])
    transposed = [[At0[r][c] for r in range(nrows)] for c in col_piv]
    _, row_piv = linalg.rref(transposed)
    rho = len(col_piv)
    cols = col_piv + [ncols]
    x0 = linalg.solve_columns(
        [{r: At0[r][c] for r in row_piv} for c in col_piv], {r: At0[r][ncols] for r in row_piv})
    points = [Fraction(k) for k in range(rho + 2)]
    for r in range(nrows):
        if r in row_piv:
            continue
        residual = At0[r][ncols] - sum(At0[r][c] * x for c, x in zip(col_piv, x0))
        if residual == 0:
            continue
        rows = list(row_piv) + [r]
        vals = [linalg.det([[M0[rr][c] + x * M1[rr][c] for c in cols] for rr in rows])
                for x in points]
        yield _interpolate(points, vals)


def _pair_candidates(P: Presentation, i: int, j: int, extra_minors: int = 3):
    """Nonzero rational t where ``g_i + t g_j`` might be normal, or None if unrestricted."""
    gcd = None
    used = 0
    for cols0, cols1, b0, b1 in _pair_systems(P, i, j):
        M0, M1 = _dense(cols0, cols1, b0, b1)
        for poly in _bordered_minors(M0, M1):
            gcd = poly if gcd is None else sympy.gcd(gcd, poly)
            used += 1
            if gcd.degree() <= 0 or used > extra_minors:
                break
        if gcd is not None and (gcd.degree() <= 0 or used > extra_minors):
            break
    if gcd is None:
        return None
    if gcd.degree() <= 0:
        return []
    roots = [Fraction(int(r.p), int(r.q)) for r in gcd.ground_roots()]
    return sorted(r for r in roots if r != 0)


def find_normal_degree_one(P: Presentation, support_bound: int = 2) -> list[NCPoly]:
    """Spanning list of degree-one normal elements with support <= support_bound.

    Elements are scaled so that the lowest-rank coefficient is 1; anything
    in the span of elements already found is dropped.
    """
    if support_bound not in (1, 2):
        raise ValueError("support_bound must be 1 or 2")
    require_confluent(P)
    g = P.ngens
    found: list[NCPoly] = []
    basis: list[list[Fraction]] = []

    def accept(vec):
        if _in_span(basis, vec):
            return
        basis.append(list(vec))
        found.append(NCPoly.linear(_normalize(vec)))

    single = []
    for i in range(g):
        ok = is_normal_degree_one(P, NCPoly.gen(i)) is not None
        single.append(ok)
        if ok:
            accept([Fraction(int(k == i)) for k in range(g)])
    if support_bound == 2:
        for i in range(g):
            for j in range(i + 1, g):
                if single[i] and single[j]:
                    continue
                cands = _pair_candidates(P, i, j)
                if cands is None:
                    cands = [Fraction(k) for k in range(1, 6)]
                for t in cands:
                    vec = [Fraction(0)] * g
                    vec[i], vec[j] = Fraction(1), t
                    if _in_span(basis, vec):
                        continue
                    if is_normal_degree_one(P, NCPoly.linear(vec)) is not None:
                        accept(vec)
    return found


# ---------------------------------------------------------------------------
# quotients


def _coordinate_generators(P: Presentation, elements: Sequence[NCPoly]) -> list[int]:
    vecs = [e.linear_coeffs(P.ngens) for e in elements]
    red, pivots = linalg.rref(vecs)
    killed = []
    for row, c in zip(red, pivots):
        if any(x != 0 for k, x in enumerate(row) if k != c):
            raise NormalityError("elements do not span a set of coordinate generators")
        killed.append(c)
    return sorted(killed)


def quotient_by_degree_one(P: Presentation, elements: Sequence[NCPoly]) -> Presentation:
    """Factor out the ideal generated by the given normal coordinate generators."""
    if not elements:
        return P
    for e in elements:
        _check_degree_one(P, e)
        if is_normal_degree_one(P, e) is None:
            raise NormalityError(f"{format_poly(P, e)} is not normal")
    killed = set(_coordinate_generators(P, elements))
    keep = [k for k in range(P.ngens) if k not in killed]
    new_rank = {old: new for new, old in enumerate(keep)}
    rules = {}
    for (a, b), rhs in P.rules.items():
        surviving = {w: c for w, c in rhs.items() if not killed.intersection(w)}
        if a in killed or b in killed:
            if surviving:
                raise NormalityError(
                    f"rule {P.format_word((a, b))} leaves a relation among surviving generators")
            continue
        rules[(new_rank[a], new_rank[b])] = {
            tuple(new_rank[x] for x in w): c for w, c in surviving.items()}
    Q = Presentation(tuple(P.generators[k] for k in keep), rules, CUSTOM, {})
    problems = validate_presentation(Q)
    if problems:
        raise NormalityError("quotient is invalid: " + "; ".join(problems))
    require_confluent(Q)
    return Q


@dataclass(frozen=True)
class ChainStep:
    index: int
    killed: tuple[NCPoly, ...]
    killed_names: tuple[str, ...]
    source: Presentation
    quotient: Presentation

    def to_json(self) -> dict:
        return {
            "step": self.index,
            "killed": [format_poly(self.source, f) for f in self.killed],
            "quotient_generators": list(self.quotient.generators),
        }


def iterative_chain(P: Presentation, max_steps: int | None = None,
                    support_bound: int = 2) -> list[ChainStep]:
    """Repeatedly kill all degree-one normal elements until none remain."""
    require_confluent(P)
    steps: list[ChainStep] = []
    cur = P
    while cur.ngens and (max_steps is None or len(steps) < max_steps):
        normals = find_normal_degree_one(cur, support_bound)
        if not normals:
            break
        Q = quotient_by_degree_one(cur, normals)
        names = tuple(n for n in cur.generators if n not in Q.generators)
        steps.append(ChainStep(len(steps), tuple(normals), names, cur, Q))
        cur = Q
    return steps


def quantum_plane_parameter(P: Presentation):
    """``q`` if ``P`` is ``b a = q a b`` on two generators, else None."""
    if P.ngens != 2:
        return None
    rhs = P.rules.get((1, 0), {})
    if set(rhs) != {(0, 1)}:
        return None
    return rhs[(0, 1)]


def chain_summary(P: Presentation, chain: Sequence[ChainStep]) -> dict:
    """Locate the two-generator quantum plane in the chain and compare parameters."""
    out: dict = {"quantum_plane": None}
    for step in chain:
        q = quantum_plane_parameter(step.quotient)
        if q is not None:
            out["quantum_plane"] = {"after_step": step.index,
                                    "generators": list(step.quotient.generators),
                                    "q": q}
            break
    if out["quantum_plane"] and P.family == HOMOGENIZED_WEYL:
        gamma = P.params["gamma"]
        q = out["quantum_plane"]["q"]
        out["quantum_plane"]["equals_gamma_first"] = q == gamma[0]
        out["quantum_plane"]["equals_gamma_last"] = q == gamma[-1]
    return out


# ---------------------------------------------------------------------------
# randomized evidence


@dataclass(frozen=True)
class FalsifyReport:
    trials: int
    tested: int
    seed: int
    counterexamples: tuple[NCPoly, ...]

    @property
    def vacuous(self) -> bool:
        return self.tested == 0


def falsify_completeness(P: Presentation, claimed_span: Sequence[NCPoly], trials: int,
                         seed: int = 0, bound: int = 5) -> FalsifyReport:
    """Sample degree-one elements outside ``claimed_span`` and report any that are normal.

    Coefficients are uniform integers in ``[-bound, bound]``.
    """
    require_confluent(P)
    g = P.ngens
    basis = [e.linear_coeffs(g) for e in claimed_span]
    rng = random.Random(seed)
    full = linalg.rank(basis) == g if basis else g == 0
    found = []
    tested = 0
    if not full:
        while tested < trials:
            vec = [Fraction(rng.randint(-bound, bound)) for _ in range(g)]
            if _in_span(basis, vec):
                continue
            tested += 1
            u = NCPoly.linear(vec)
            if is_normal_degree_one(P, u) is not None:
                found.append(u)
    return FalsifyReport(trials, tested, seed, tuple(found))


__all__ = [
    "ChainStep", "FalsifyReport", "NormalityCertificate", "NormalityError",
    "chain_summary", "falsify_completeness", "find_normal_degree_one",
    "is_normal_degree_one", "iterative_chain", "quantum_plane_parameter",
    "quotient_by_degree_one",
]

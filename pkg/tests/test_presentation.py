import json
import random
from fractions import Fraction as F

import pytest

from conftest import DATA, hweyl, qas, qma, rand_matrix, rand_param
from quadiso.presentation import (
    CUSTOM,
    ParamMatrix,
    Presentation,
    PresentationError,
    load_spec,
    make_custom,
    make_homogenized_weyl,
    make_quantum_affine,
    make_quantum_matrix,
    presentation_from_spec,
    presentation_to_spec,
    validate_presentation,
)
from quadiso.rewrite import NCPoly, normal_form, parse_poly


def rule_of(P, lhs):
    a, b = P.parse_word(lhs)
    return P.rules[(a, b)]


class TestParamMatrix:
    def test_from_upper_fills_inverse(self):
        p = ParamMatrix.from_upper(3, {(1, 2): 2, (2, 3): F(-1, 5)})
        assert p[0, 1] == 2 and p[1, 0] == F(1, 2)
        assert p[2, 1] == -5 and p[0, 2] == 1

    def test_antisymmetry_violation(self):
        p = ParamMatrix.from_rows([["1", "2"], ["2", "1"]])
        assert any("antisymm" in d for d in p.diagnostics())
        with pytest.raises(PresentationError):
            p.check()

    def test_diagonal_and_zero(self):
        p = ParamMatrix.from_rows([["2", "0"], ["0", "1"]])
        assert len(p.diagnostics()) >= 2

    def test_from_upper_rejects_lower_keys(self):
        with pytest.raises(PresentationError):
            ParamMatrix.from_upper(2, {(2, 1): 3})


class TestQuantumAffine:
    def test_plane(self):
        P = qas(2, {(1, 2): 2})
        assert rule_of(P, "x2 x1") == {(0, 1): F(1, 2)}

    def test_n1_has_no_rules(self):
        P = make_quantum_affine(ParamMatrix.trivial(1))
        assert P.generators == ("x1",) and P.rules == {}

    def test_n3_coefficients(self):
        P = qas(3, {(1, 2): 2, (1, 3): 3, (2, 3): 5})
        coeffs = sorted(next(iter(r.values())) for r in P.rules.values())
        assert coeffs == [F(1, 5), F(1, 3), F(1, 2)]
        assert validate_presentation(P) == []


class TestHomogenizedWeyl:
    def test_order(self):
        P = hweyl(2, {(1, 2): 5}, (2, 3))
        assert P.generators == ("z", "y1", "x1", "y2", "x2")

    def test_n1(self):
        P = hweyl(1, {}, (3,))
        assert rule_of(P, "x1 y1") == {(0, 0): 1, (1, 2): 3}

    def test_homogenized_first_weyl(self):
        P = hweyl(1, {}, (1,))
        assert rule_of(P, "x1 y1") == {(0, 0): 1, (1, 2): 1}

    def test_n2_tail(self):
        P = hweyl(2, {(1, 2): 5}, (2, 3))
        assert rule_of(P, "x2 y2") == {(0, 0): 1, (3, 4): 3, (1, 2): 1}

    def test_defining_relations_hold(self):
        # each relation "lhs = rhs" of the family, written out independently,
        # must reduce to zero in the constructed algebra
        rng = random.Random(3)
        for _ in range(5):
            n = 3
            p = rand_matrix(rng, n)
            gamma = [rand_param(rng) for _ in range(n)]
            P = make_homogenized_weyl(p, gamma)
            gen = {name: NCPoly.gen(P.rank(name)) for name in P.generators}

            def w(*names):
                out = NCPoly.one()
                for s in names:
                    out = out.concat(gen[s])
                return out

            rels = []
            for i in range(1, n + 1):
                yi, xi = f"y{i}", f"x{i}"
                rels.append(w(xi, yi) - w("z", "z") - w(yi, xi) * gamma[i - 1]
                            - sum((w(f"y{l}", f"x{l}") * (gamma[l - 1] - 1) for l in range(1, i)),
                                  NCPoly()))
                for g in P.generators:
                    rels.append(w("z", g) - w(g, "z"))
                for j in range(1, n + 1):
                    if i == j:
                        continue
                    yj, xj = f"y{j}", f"x{j}"
                    pij = p[i - 1, j - 1]
                    rels.append(w(yi, yj) - w(yj, yi) * pij)
                    if i < j:
                        rels.append(w(xi, xj) - w(xj, xi) * (gamma[i - 1] * pij))
                        rels.append(w(xi, yj) - w(yj, xi) * p[j - 1, i - 1])
                    else:
                        rels.append(w(xi, yj) - w(yj, xi) * (gamma[j - 1] * p[j - 1, i - 1]))
            for r in rels:
                assert normal_form(P, r) == 0


class TestQuantumMatrix:
    def test_ranks(self):
        P = qma(2, 2, {(1, 2): 3})
        assert P.generators == ("X11", "X12", "X21", "X22")

    def test_lambda_p_squared(self):
        P = qma(2, 2, {(1, 2): 3})
        assert rule_of(P, "X21 X12") == {(1, 2): 18}

    def test_two_term_rule(self):
        lam, p = F(5, 3), F(7, 2)
        P = qma(2, lam, {(1, 2): p})
        assert rule_of(P, "X22 X11") == {(0, 3): 1, (1, 2): lam * p - p}

    def test_n1(self):
        P = qma(1, 2, {})
        assert P.generators == ("X11",) and P.rules == {}

    @pytest.mark.parametrize("lam", [0, 1, -1])
    def test_excluded_lambda(self, lam):
        with pytest.raises(PresentationError):
            qma(2, lam, {(1, 2): 3})

    def test_lambda_one_hint(self):
        with pytest.raises(PresentationError, match="quantum affine"):
            qma(2, 1, {(1, 2): 3})

    def test_names_with_two_digits(self):
        P = make_quantum_matrix(F(2), ParamMatrix.trivial(10))
        assert P.generators[0] == "X1_1" and P.generators[-1] == "X10_10"


def test_family_constructors_validate():
    rng = random.Random(11)
    for n in (1, 2, 3):
        for _ in range(5):
            p = rand_matrix(rng, n)
            gam = [rand_param(rng) for _ in range(n)]
            lam = rng.choice([F(2), F(-3), F(5, 2), F(1, 3)])
            for P, g in ((make_quantum_affine(p), n),
                         (make_homogenized_weyl(p, gam), 2 * n + 1),
                         (make_quantum_matrix(lam, p), n * n)):
                assert validate_presentation(P) == []
                assert P.ngens == g


class TestValidation:
    def test_ordering_violation(self):
        P = make_custom(["a", "b"], {(1, 0): {(1, 0): F(1)}})
        assert any("ordering" in d for d in validate_presentation(P))

    def test_missing_rule(self):
        P = make_custom(["a", "b", "c"], {(1, 0): {(0, 1): F(1)}})
        assert any("missing" in d for d in validate_presentation(P))

    def test_non_quadratic(self):
        P = make_custom(["a", "b"], {(1, 0): {(0,): F(1)}})
        assert validate_presentation(P)

    def test_gamma_length(self):
        P = Presentation(("z",), {}, "homogenized_weyl",
                         {"p": ParamMatrix.trivial(2), "gamma": (F(1),)})
        assert any("gamma" in d for d in validate_presentation(P))


class TestAlgebraFiles:
    @pytest.mark.parametrize("name", ["plane_p2", "h1_g3", "h2", "qma2_2_3", "qma3", "broken_custom"])
    def test_roundtrip(self, name):
        P = load_spec(DATA / f"{name}.json")
        doc = json.loads(json.dumps(presentation_to_spec(P)))
        Q = presentation_from_spec(doc)
        assert Q == P

    def test_custom_rules(self):
        P = load_spec(DATA / "broken_custom.json")
        assert P.family == CUSTOM
        assert rule_of(P, "c b") == {(1, 2): 5, (0, 0): 1}

    @pytest.mark.parametrize("doc, msg", [
        ({"family": "quantum_affine", "n": 2, "colour": "red"}, "unknown"),
        ({"family": "quantum_affine", "n": 2, "gamma": ["2"]}, "not used"),
        ({"family": "quantum_matrix", "n": 2}, "lambda"),
        ({"family": "quantum_matrix", "n": 2, "lambda": 2.5}, "strings"),
        ({"family": "homogenized_weyl", "n": 1}, "gamma"),
        ({"family": "nope"}, "family"),
        ({"family": "quantum_affine", "n": 3, "p": [["1", "2"], ["1/2", "1"]]}, "n = 3"),
        ({"family": "quantum_affine", "p": [["1", "2"], ["2", "1"]]}, "antisymm"),
        ({"family": "custom", "generators": ["a", "b"], "rules": [{"lhs": "b q", "rhs": []}]}, "unknown generator"),
    ])
    def test_rejections(self, doc, msg):
        with pytest.raises(PresentationError, match=msg):
            presentation_from_spec(doc)

    def test_json_error_has_line(self, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text('{\n"family": "quantum_affine",\n"n": 2,,\n}')
        with pytest.raises(PresentationError, match="line 3"):
            load_spec(f)

    def test_trivial_p_default(self):
        P = presentation_from_spec({"family": "quantum_affine", "n": 3})
        assert P.params["p"] == ParamMatrix.trivial(3)


def test_parse_poly_roundtrip():
    P = hweyl(1, {}, (3,))
    f = parse_poly(P, "z z + 3*y1 x1 - 1/2*x1")
    assert f.coeff((0, 0)) == 1 and f.coeff((1, 2)) == 3 and f.coeff((2,)) == F(-1, 2)

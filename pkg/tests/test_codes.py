import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bbcodes import codes, gf2
from bbcodes.codes import CodeIntegrityError, CodeParams, CodeSpec, build_checks, dimension
from bbcodes.gf2 import BinMatrix
from bbcodes.polyring import UniPoly

from conftest import random_spec


def test_monomial_matrix_examples():
    assert codes.monomial_matrix(0, 0, 3, 4) == BinMatrix.identity(12)
    assert codes.monomial_matrix(1, 0, 3, 1) == BinMatrix.shift(3)
    assert codes.monomial_matrix(1, 1, 3, 5) == codes.monomial_matrix(1, 0, 3, 5) @ codes.monomial_matrix(0, 1, 3, 5)
    with pytest.raises(ValueError):
        codes.monomial_matrix(3, 0, 3, 5)


def test_build_checks_table_row(code_54):
    pc = build_checks(code_54)
    assert pc.h_x.shape == (27, 54) and pc.h_z.shape == (27, 54)
    assert set(pc.h_x.row_weights()) == {6} and set(pc.h_z.row_weights()) == {6}
    assert set(pc.h_x.col_weights()) == {3}
    A = codes.poly_matrix_dense(code_54.a)
    B = codes.poly_matrix_dense(code_54.b)
    np.testing.assert_array_equal(pc.h_x.to_dense(), np.hstack([A, B]))
    np.testing.assert_array_equal(pc.h_z.to_dense(), np.hstack([B.T, A.T]))


def test_single_monomials_give_k_zero():
    pc = build_checks(CodeSpec.xy(3, 4, "x", "x"))
    assert set(pc.h_x.row_weights()) == {2}
    assert dimension(pc) == 0
    assert dimension(build_checks(CodeSpec.xy(4, 5, "x2y", "y3"))) == 0


def test_coprime_matches_bivariate_image(code_30):
    image = CodeSpec(3, 5, code_30.a, code_30.b)
    assert build_checks(code_30).h_x == build_checks(image).h_x
    assert build_checks(code_30).h_z == build_checks(image).h_z


def test_dimension_examples(code_54, code_30):
    assert dimension(build_checks(code_54)) == 8
    assert dimension(build_checks(CodeSpec.xy(6, 12, "x4+y2+y6", "y5+x3+x4"))) == 8
    assert codes.dimension_coprime(code_30.a_uni, code_30.b_uni, 15) == 4
    row5 = CodeSpec.pi(7, 9, "1+p+p58", "p3+p16+p44")
    assert codes.dimension_coprime(row5.a_uni, row5.b_uni, 63) == 12
    # both are irreducible of order 7, so neither divides p^15+1
    coprime = CodeSpec.pi(3, 5, "1+p+p3", "1+p2+p3")
    assert codes.dimension_coprime(coprime.a_uni, coprime.b_uni, 15) == 0


def test_dimension_rejects_zero():
    with pytest.raises(ValueError):
        codes.dimension_coprime(UniPoly(0, 15), UniPoly(1, 15), 15)


def test_connectivity_examples(code_54):
    assert codes.is_connected(code_54)
    split = CodeSpec.xy(3, 2, "1+x+x2", "1+x+x2")
    assert not codes.is_connected(split)
    assert codes.tanner_components(build_checks(split)) == 2
    full = CodeSpec.xy(2, 2, "1+x+y+xy", "1")
    assert codes.is_connected(full)


def test_spec_validation():
    with pytest.raises(ValueError):
        CodeSpec.pi(3, 6, "1+p", "1+p2")
    with pytest.raises(ValueError):
        CodeSpec.xy(1, 5, "1", "y")
    with pytest.raises(ValueError):
        CodeSpec.xy(3, 3, "x+x", "y")
    with pytest.raises(ValueError):
        CodeSpec.from_json({"l": 3, "m": 5, "a": "1", "b": "p", "form": "uv"})
    with pytest.raises(ValueError):
        CodeParams(10, 3)
    with pytest.raises(ValueError):
        CodeParams(10, 2, d_upper=3, d_exact=4)


def test_json_round_trip(code_54, code_30):
    for spec in (code_54, code_30):
        doc = json.loads(json.dumps(spec.to_json()))
        again = CodeSpec.from_json(doc)
        assert again == spec
    assert code_30.to_json()["form"] == "pi"


def test_transform_five_is_not_an_equivalence():
    spec = CodeSpec.xy(6, 12, "x4+y2+y6", "y5+x3+x4")
    c5 = spec.transform(5)
    assert c5.a == CodeSpec.xy(6, 12, "x2+y6+y10", "1").a
    with pytest.raises(ValueError):
        spec.transform(6)


@pytest.mark.parametrize("fmt", ["alist", "dense"])
def test_matrix_round_trip(code_54, code_30, fmt):
    for spec in (code_54, code_30):
        pc = build_checks(spec)
        text = codes.checks_to_text(pc, fmt)
        back = codes.checks_from_text(text)
        assert back == pc and back.spec == spec


def test_alist_single_matrix():
    M = BinMatrix.from_dense([[1, 0, 1, 0], [0, 0, 1, 1], [0, 0, 0, 0]])
    text = codes.matrix_to_alist(M)
    assert text.split("\n")[:2] == ["4 3", "2 2"]
    assert codes.matrix_from_alist(text) == M
    assert codes.matrix_from_dense_text(codes.matrix_to_dense_text(M)) == M
    with pytest.raises(ValueError):
        codes.matrix_from_dense_text("10\n1")


def test_loaded_checks_must_commute():
    bad = "# format dense\n[h_x]\n11\n[h_z]\n10\n"
    with pytest.raises(CodeIntegrityError):
        codes.checks_from_text(bad)


def test_support_connectivity_agrees_with_graph():
    rng = np.random.default_rng(7)
    for _ in range(150):
        l, m = rng.integers(2, 7, size=2)
        spec = random_spec(rng, int(l), int(m), weight=int(rng.integers(1, 4)))
        assert codes.is_connected_support(spec) == codes.is_connected(spec)


COPRIME = [(l, m) for l in range(2, 16) for m in range(2, 16) if math.gcd(l, m) == 1 and l * m <= 105]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(COPRIME), st.data())
def test_rank_dimension_equals_gcd_dimension(lm, data):
    l, m = lm
    N = l * m
    exps = st.lists(st.integers(0, N - 1), min_size=1, max_size=4, unique=True)
    a = "+".join(f"p{e}" for e in data.draw(exps))
    b = "+".join(f"p{e}" for e in data.draw(exps))
    spec = CodeSpec.pi(l, m, a, b)
    assert dimension(build_checks(spec)) == codes.dimension_coprime(spec.a_uni, spec.b_uni, N)


def test_css_and_weights_random():
    rng = np.random.default_rng(3)
    for _ in range(200):
        l, m = (int(v) for v in rng.integers(2, 9, size=2))
        w = int(rng.integers(1, 4))
        spec = random_spec(rng, l, m, weight=w)
        pc = build_checks(spec)
        assert (pc.h_x @ pc.h_z.T).is_zero()
        assert pc.n == 2 * l * m
        assert set(pc.h_x.row_weights()) == {2 * w}
        assert pc.h_x.col_weights().max() <= w


def test_k_invariant_under_companion_codes():
    rng = np.random.default_rng(11)
    for _ in range(50):
        l, m = (int(v) for v in rng.integers(2, 9, size=2))
        spec = random_spec(rng, l, m)
        ks = {dimension(build_checks(spec.transform(t))) for t in (1, 2, 3, 4)}
        assert len(ks) == 1
        assert gf2.rank(build_checks(spec).h_x) == gf2.rank(build_checks(spec).h_z)

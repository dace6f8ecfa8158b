import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bbcodes import polyring as pr
from bbcodes.codes import poly_matrix_dense
from bbcodes.polyring import BivPoly, UniPoly

P = lambda text, N=None: pr.parse_uni(text, N)  # noqa: E731


def sympy_factors(N):
    """Irreducible factors of x^N + 1 over GF(2) as (bitset, multiplicity)."""
    x = sympy.symbols("x")
    _, facs = sympy.Poly(x**N + 1, x, modulus=2).factor_list()
    out = []
    for f, e in facs:
        coeffs = [int(c) % 2 for c in f.all_coeffs()[::-1]]
        out.append((sum(c << i for i, c in enumerate(coeffs)), e))
    return sorted(out)


def test_ring_examples():
    N = 15
    p = P("1+p3+p7", N)
    assert (p + p).is_zero()
    assert pr.poly_mulmod(UniPoly.from_exponents([N - 1], N), P("p", N), N) == P("1", N)
    assert pr.poly_mulmod(P("1+p", N), P("1+p+p2", N), N) == P("1+p3", N)
    with pytest.raises(ValueError):
        pr.poly_add(P("1", 15), P("1", 21))


def test_mulmod_reduces():
    prod = pr.poly_mulmod(P("p10+p14", 15), P("p3", 15), 15)
    assert prod == P("p2+p13", 15)
    assert max(prod.exponents) < 15


def test_gcd_examples():
    g = pr.poly_gcd(P("1+p+p2"), P("p+p3+p8"), pr.circulant_modulus(15))
    assert g == P("1+p+p2") and g.degree == 2
    assert pr.poly_gcd(P("1+p2+p3"), UniPoly(0)) == P("1+p2+p3")
    assert pr.poly_gcd(P("1+p2"), P("1+p")) == P("1+p")
    with pytest.raises(ZeroDivisionError):
        pr.poly_mod(P("1+p"), UniPoly(0))


def test_zero_polynomial_has_no_degree():
    assert UniPoly(0).degree is None
    assert UniPoly(0).exponents == []


@pytest.mark.parametrize("N, expected", [
    (3, ["1+p", "1+p+p2"]),
    (2, ["1+p"]),
    (15, ["1+p", "1+p+p2", "1+p+p4", "1+p3+p4", "1+p+p2+p3+p4"]),
])
def test_factor_examples(N, expected):
    fact = pr.factorize_circulant(N)
    assert sorted(f.bits for f, _ in fact.factors) == sorted(P(t).bits for t in expected)
    assert fact.product() == pr.circulant_modulus(N)
    if N == 2:
        assert fact.factors[0][1] == 2


@pytest.mark.parametrize("N", range(1, 201))
def test_factorization_matches_sympy(N):
    fact = pr.factorize_circulant(N)
    assert fact.product() == pr.circulant_modulus(N)
    assert sorted((f.bits, e) for f, e in fact.factors) == sympy_factors(N)
    assert all(pr.is_irreducible(f.bits) for f, _ in fact.factors)


def test_divisor_examples():
    got = {d.bits for d in pr.divisors(pr.factorize_circulant(3), 1, 2)}
    assert got == {P("1+p").bits, P("1+p+p2").bits}
    got = {d.bits for d in pr.divisors(pr.factorize_circulant(2), 1, 2)}
    assert got == {P("1+p").bits, P("1+p2").bits}
    for N in (7, 12, 15):
        assert [d.bits for d in pr.divisors(pr.factorize_circulant(N), 0, 0)] == [1]


@pytest.mark.parametrize("N", [9, 12, 21, 28, 45])
def test_divisors_divide(N):
    mod = pr.circulant_modulus(N)
    divs = list(pr.divisors(pr.factorize_circulant(N)))
    assert len({d.bits for d in divs}) == len(divs)
    assert all(pr.poly_mod(mod, d).is_zero() for d in divs)
    # every divisor found by brute force over low degrees is listed
    brute = [b for b in range(1, 1 << 6) if pr._mod(mod.bits, b) == 0]
    assert {d.bits for d in divs if d.degree < 6} == set(brute)


def test_cyclotomic_cosets():
    cosets = sorted(map(sorted, pr.cyclotomic_cosets(15)))
    assert cosets == [[0], [1, 2, 4, 8], [3, 6, 9, 12], [5, 10], [7, 11, 13, 14]]
    assert pr.multiplicative_order(2, 15) == 4


def test_crt_examples():
    assert pr.biv_to_uni(BivPoly.from_terms([(1, 0)], 3, 5)) == UniPoly.from_exponents([10], 15)
    assert pr.biv_to_uni(BivPoly.from_terms([(0, 0)], 3, 5)) == UniPoly.from_exponents([0], 15)
    assert pr.biv_to_uni(BivPoly.from_terms([(1, 1)], 3, 5)) == UniPoly.from_exponents([1], 15)
    with pytest.raises(ValueError):
        pr.biv_to_uni(BivPoly.from_terms([(1, 0)], 2, 4))


def test_crt_exponent_by_matrix_power():
    Sx = np.kron(np.roll(np.eye(3, dtype=np.int64), 1, axis=1), np.eye(5, dtype=np.int64))
    Sy = np.kron(np.eye(3, dtype=np.int64), np.roll(np.eye(5, dtype=np.int64), 1, axis=1))
    pi = Sx @ Sy
    np.testing.assert_array_equal(np.linalg.matrix_power(pi, 10), Sx)
    np.testing.assert_array_equal(np.linalg.matrix_power(pi, 6), Sy)


def test_bivariate_cancellation():
    p = BivPoly.from_terms([(1, 2), (0, 0), (1, 2)], 3, 4)
    assert p.sorted_terms() == ((0, 0),)
    assert BivPoly.from_terms([(4, 5)], 3, 4).sorted_terms() == ((1, 1),)


def test_parse_format():
    assert pr.parse_uni("1 + π + π^2") == P("1+p+p2")
    assert pr.parse_uni("P3+p") == P("p+p3")
    b = pr.parse_biv("x^2y + y3 + 1", 3, 6)
    assert b.sorted_terms() == ((0, 0), (0, 3), (2, 1))
    assert pr.parse_biv(pr.format_biv(b), 3, 6) == b
    with pytest.raises(ValueError):
        pr.parse_uni("1+q")


COPRIME = [(l, m) for l in range(2, 16) for m in range(2, 16) if math.gcd(l, m) == 1 and l * m <= 105]


@st.composite
def biv_polys(draw):
    l, m = draw(st.sampled_from(COPRIME))
    terms = draw(st.lists(st.tuples(st.integers(0, l - 1), st.integers(0, m - 1)), min_size=1, max_size=6))
    return BivPoly.from_terms(terms, l, m)


@settings(max_examples=200, deadline=None)
@given(biv_polys())
def test_crt_round_trip(p):
    assert pr.uni_to_biv(pr.biv_to_uni(p), p.l, p.m) == p


@settings(max_examples=40, deadline=None)
@given(biv_polys())
def test_crt_matrix_consistency(p):
    l, m = p.l, p.m
    Sx = np.kron(np.roll(np.eye(l, dtype=np.int64), 1, axis=1), np.eye(m, dtype=np.int64))
    Sy = np.kron(np.eye(l, dtype=np.int64), np.roll(np.eye(m, dtype=np.int64), 1, axis=1))
    pi = Sx @ Sy
    M = np.zeros((l * m, l * m), np.int64)
    for e in pr.biv_to_uni(p).exponents:
        M += np.linalg.matrix_power(pi, e)
    np.testing.assert_array_equal(M % 2, poly_matrix_dense(p))


def _random_uni(draw, max_deg=40):
    return UniPoly(draw(st.integers(1, (1 << max_deg) - 1)))


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_gcd_properties(data):
    common = _random_uni(data.draw, 8)
    a = UniPoly(pr._clmul(common.bits, _random_uni(data.draw, 20).bits))
    b = UniPoly(pr._clmul(common.bits, _random_uni(data.draw, 20).bits))
    g = pr.poly_gcd(a, b)
    assert pr.poly_mod(a, g).is_zero() and pr.poly_mod(b, g).is_zero()
    assert pr.poly_mod(g, common).is_zero()


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 60), st.data())
def test_shift_and_transpose(N, data):
    p = UniPoly(data.draw(st.integers(1, (1 << N) - 1)), N)
    t = data.draw(st.integers(0, 3 * N))
    assert p.shift(t) == pr.poly_mulmod(p, UniPoly.from_exponents([t % N], N), N)
    assert p.transpose().transpose() == p
    assert p.shift(t).weight == p.weight

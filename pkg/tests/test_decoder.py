import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bbcodes import gf2
from bbcodes.codes import build_checks
from bbcodes.decoder import (
    DecoderConfig,
    channel_llr,
    decode,
    min_sum_bp,
    osd_order_of,
    osd_postprocess,
    parse_osd,
)
from bbcodes.distance import LogicalTestContext
from bbcodes.gf2 import BinMatrix


def random_tree_checks(rng, n_checks):
    """Tanner tree: each new check joins one existing bit plus fresh bits.

    Every check owns a private bit, so no bit is pinned by the syndrome.
    """
    rows, n = [], 0
    for c in range(n_checks):
        fresh = int(rng.integers(1, 3)) if c else 2
        support = list(range(n, n + fresh))
        if c:
            support.append(int(rng.integers(0, n)))
        n += fresh
        rows.append(support)
    H = np.zeros((n_checks, n), np.uint8)
    for i, sup in enumerate(rows):
        H[i, sup] = 1
    return H


def brute_max_marginals(H, s, prior):
    """``min cost | x_v = 1`` minus ``min cost | x_v = 0`` over solutions of ``Hx = s``."""
    n = H.shape[1]
    best = np.full((n, 2), np.inf)
    for bits in itertools.product((0, 1), repeat=n):
        x = np.array(bits)
        if np.array_equal((H.astype(np.int64) @ x) & 1, s):
            cost = float(prior @ x)
            for v in range(n):
                best[v, x[v]] = min(best[v, x[v]], cost)
    return best[:, 1] - best[:, 0]


def test_parse_osd():
    assert parse_osd("cs7") == ("cs", 7)
    assert parse_osd("osd0") == ("osd0", 0)
    assert parse_osd("none") == ("none", 0)
    with pytest.raises(ValueError):
        parse_osd("cs")


def test_config_validation():
    with pytest.raises(ValueError):
        DecoderConfig(max_iterations=0)
    with pytest.raises(ValueError):
        DecoderConfig(scaling=1.5)
    with pytest.raises(ValueError):
        DecoderConfig(osd="osd9")
    assert DecoderConfig().with_prior(0.05).prior_p == 0.05


def test_zero_syndrome(ctx_30):
    out = decode(ctx_30.h_x, np.zeros(ctx_30.h_x.rows, np.uint8), DecoderConfig())
    assert not out.estimate.any() and out.bp_converged and out.iterations_run == 1
    bp = min_sum_bp(ctx_30.h_x, np.zeros(ctx_30.h_x.rows, np.uint8), DecoderConfig())
    assert not bp.estimate.any() and bp.bp_converged and bp.iterations_run == 1


@pytest.mark.parametrize("which", ["h_x", "h_z"])
def test_single_errors_recovered_exactly(code_30, which):
    H = getattr(build_checks(code_30), which)
    cfg = DecoderConfig()
    for q in range(30):
        e = np.zeros(30, np.uint8)
        e[q] = 1
        out = min_sum_bp(H, gf2.syndrome(H, e), cfg)
        np.testing.assert_array_equal(out.estimate, e)


def test_min_sum_matches_max_marginals_on_trees():
    rng = np.random.default_rng(4)
    cfg = DecoderConfig(max_iterations=40, scaling=1.0, osd="none")
    for _ in range(60):
        H = random_tree_checks(rng, int(rng.integers(2, 6)))
        n = H.shape[1]
        if n > 12:
            continue
        e = (rng.random(n) < 0.3).astype(np.uint8)
        s = (H.astype(np.int64) @ e) & 1
        prior = rng.uniform(0.5, 4.0, n)
        out = min_sum_bp(BinMatrix.from_dense(H), s, cfg, stop_early=False, prior=prior)
        expected = brute_max_marginals(H, s, prior)
        np.testing.assert_allclose(out.soft_reliabilities, expected, atol=1e-9)
        np.testing.assert_array_equal(out.estimate, (expected < 0).astype(np.uint8))


def test_osd0_with_perfect_reliabilities(ctx_30):
    H = ctx_30.h_x
    rng = np.random.default_rng(0)
    for _ in range(20):
        e = np.zeros(30, np.uint8)
        e[rng.choice(30, 3, replace=False)] = 1
        rel = np.where(e == 1, -5.0, 5.0)
        out = osd_postprocess(H, gf2.syndrome(H, e), rel, "osd0")
        assert not gf2.syndrome(H, out ^ e).any()
        assert out.sum() <= e.sum() or not (out ^ e)[osd_order_of(rel)[:3]].any()


def test_order_tie_break():
    np.testing.assert_array_equal(osd_order_of([1.0, -1.0, 1.0, -1.0]), [1, 3, 0, 2])


def _random_check_matrix(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(3, 16)), int(rng.integers(8, 40))
    return BinMatrix.from_dense((rng.random((m, n)) < 0.25).astype(np.uint8)), rng


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_osd_always_satisfies_syndrome(seed):
    H, rng = _random_check_matrix(seed)
    e = (rng.random(H.cols) < 0.3).astype(np.uint8)
    s = gf2.syndrome(H, e)
    for osd in ("osd0", "cs"):
        out = decode(H, s, DecoderConfig(max_iterations=5, osd=osd, osd_order=4))
        np.testing.assert_array_equal(gf2.syndrome(H, out.estimate), s)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_cs_never_heavier_than_osd0(seed):
    H, rng = _random_check_matrix(seed)
    e = (rng.random(H.cols) < 0.3).astype(np.uint8)
    s = gf2.syndrome(H, e)
    rel = rng.normal(size=H.cols)
    w0 = osd_postprocess(H, s, rel, "osd0").sum()
    wcs = osd_postprocess(H, s, rel, "cs", 5).sum()
    assert wcs <= w0


def test_syndrome_satisfaction_on_code(ctx_30):
    rng = np.random.default_rng(17)
    cfg = DecoderConfig(max_iterations=50)
    for _ in range(1000):
        e = (rng.random(30) < 0.15).astype(np.uint8)
        s = gf2.syndrome(ctx_30.h_z, e)
        out = decode(ctx_30.h_z, s, cfg)
        np.testing.assert_array_equal(gf2.syndrome(ctx_30.h_z, out.estimate), s)


def test_high_weight_syndrome_goes_through_osd(fixtures):
    H = build_checks(fixtures["II:5"].spec).h_x
    rng = np.random.default_rng(2)
    e = (rng.random(H.cols) < 0.3).astype(np.uint8)
    s = gf2.syndrome(H, e)
    out = decode(H, s, DecoderConfig(max_iterations=3))
    assert not out.bp_converged
    np.testing.assert_array_equal(gf2.syndrome(H, out.estimate), s)


def test_determinism(ctx_30):
    rng = np.random.default_rng(1)
    e = (rng.random(30) < 0.2).astype(np.uint8)
    s = gf2.syndrome(ctx_30.h_x, e)
    a = decode(ctx_30.h_x, s, DecoderConfig())
    b = decode(ctx_30.h_x, s, DecoderConfig())
    np.testing.assert_array_equal(a.estimate, b.estimate)
    np.testing.assert_array_equal(a.soft_reliabilities, b.soft_reliabilities)
    assert a.iterations_run == b.iterations_run


def test_llr_clamp():
    H = BinMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
    out = min_sum_bp(H, [1, 1], DecoderConfig(max_iterations=50, scaling=1.0),
                     stop_early=False, prior=np.full(3, 40.0))
    assert np.all(np.abs(out.soft_reliabilities) <= 50.0)
    assert channel_llr(0.5) == 0.0

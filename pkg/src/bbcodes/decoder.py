"""BP-OSD: min-sum belief propagation with ordered-statistics fallback."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np

from . import _kernels, gf2
from .gf2 import BinMatrix

LLR_CLAMP = _kernels.LLR_CLAMP


@dataclass(frozen=True)
class DecoderConfig:
    """BP-OSD settings.

    ``scaling`` is a fixed min-sum factor in (0, 1] or ``"variable"``, which
    uses ``1 - 2**-t`` at iteration ``t``. ``osd`` is ``"none"``, ``"osd0"`` or
    ``"cs"`` (combination sweep of order ``osd_order``).
    """

    max_iterations: int = 1000
    scaling: float | Literal["variable"] = "variable"
    osd: Literal["none", "osd0", "cs"] = "cs"
    osd_order: int = 7
    prior_p: float = 0.01

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.scaling != "variable" and not 0.0 < float(self.scaling) <= 1.0:
            raise ValueError("scaling factor must lie in (0, 1]")
        if self.osd not in ("none", "osd0", "cs"):
            raise ValueError(f"unknown osd method {self.osd!r}")
        if self.osd_order < 0:
            raise ValueError("osd_order must be >= 0")
        if not 0.0 < self.prior_p < 0.5:
            raise ValueError("prior_p must lie in (0, 0.5)")

    def with_prior(self, p: float) -> DecoderConfig:
        return DecoderConfig(self.max_iterations, self.scaling, self.osd, self.osd_order, p)


def parse_osd(text: str) -> tuple[str, int]:
    """``none``, ``osd0`` or ``cs<order>`` (e.g. ``cs7``)."""
    text = text.strip().lower()
    if text in ("none", "osd0"):
        return text, 0
    mt = re.fullmatch(r"(?:cs|osd_cs|osdcs)(\d+)", text)
    if not mt:
        raise ValueError(f"cannot parse OSD method {text!r}")
    return "cs", int(mt.group(1))


@dataclass
class DecodeOutcome:
    estimate: np.ndarray
    bp_converged: bool
    iterations_run: int
    soft_reliabilities: np.ndarray


class TannerGraph:
    """CSR views of a parity-check matrix for the compiled kernels."""

    def __init__(self, H: BinMatrix):
        dense = H.to_dense()
        self.m, self.n = dense.shape
        rows, cols = np.nonzero(dense)
        self.chk_ptr = np.zeros(self.m + 1, np.int64)
        np.add.at(self.chk_ptr, rows + 1, 1)
        self.chk_ptr = np.cumsum(self.chk_ptr)
        self.chk_var = cols.astype(np.int64)
        self.chk_edge = np.arange(rows.size, dtype=np.int64)
        by_var = np.argsort(cols, kind="stable")
        self.var_edge = by_var.astype(np.int64)
        self.var_ptr = np.zeros(self.n + 1, np.int64)
        np.add.at(self.var_ptr, cols + 1, 1)
        self.var_ptr = np.cumsum(self.var_ptr)
        # one spare column receives the syndrome during OSD
        self.packed = gf2.pack_rows(dense, self.n + 1)


@lru_cache(maxsize=64)
def tanner_graph(H: BinMatrix) -> TannerGraph:
    return TannerGraph(H)


def _syndrome_array(H: BinMatrix, syndrome) -> np.ndarray:
    s = np.asarray(syndrome.to_dense()[0] if isinstance(syndrome, BinMatrix) else syndrome,
                   dtype=np.uint8).ravel()
    if s.shape[0] != H.rows:
        raise ValueError(f"syndrome length {s.shape[0]} does not match {H.rows} checks")
    return s & 1


def channel_llr(p: float) -> float:
    return math.log((1.0 - p) / p)


def min_sum_bp(H: BinMatrix, syndrome, config: DecoderConfig, *, stop_early: bool = True,
               prior: np.ndarray | None = None) -> DecodeOutcome:
    """Scaled min-sum with a flooding schedule.

    Stops at the first iteration whose hard decision satisfies the syndrome
    unless ``stop_early`` is false, in which case all iterations run.
    """
    g = tanner_graph(H)
    s = _syndrome_array(H, syndrome)
    if prior is None:
        prior = np.full(g.n, channel_llr(config.prior_p))
    variable = config.scaling == "variable"
    alpha = 1.0 if variable else float(config.scaling)
    hard, post, conv, it = _kernels.min_sum(
        g.chk_ptr, g.chk_var, g.chk_edge, g.var_ptr, g.var_edge, g.n, s,
        np.asarray(prior, dtype=np.float64), config.max_iterations, alpha, variable, stop_early)
    return DecodeOutcome(hard, bool(conv), int(it), post)


def osd_order_of(reliabilities: np.ndarray) -> np.ndarray:
    """Column order for OSD: most likely flipped (lowest LLR) first, ties by index."""
    return np.argsort(np.asarray(reliabilities, dtype=np.float64), kind="stable").astype(np.int64)


def osd_postprocess(H: BinMatrix, syndrome, reliabilities, osd: str = "cs",
                    order: int = 7) -> np.ndarray:
    """Ordered-statistics solution of ``H x = syndrome``.

    Pivots are chosen greedily along the reliability order, non-pivot bits
    are set by the candidate assignment and pivot bits are solved for. The
    lowest-weight candidate wins; ``osd0`` keeps only the all-zero one.
    """
    g = tanner_graph(H)
    s = _syndrome_array(H, syndrome)
    rel = np.asarray(reliabilities, dtype=np.float64).ravel()
    if rel.shape[0] != g.n:
        raise ValueError("reliabilities length does not match H columns")
    if osd == "none":
        raise ValueError("osd_postprocess needs osd0 or cs")
    return _kernels.osd_solve(g.packed, s, osd_order_of(rel), g.n, order, osd == "cs")


def decode(H: BinMatrix, syndrome, config: DecoderConfig) -> DecodeOutcome:
    """BP first; OSD on the posterior LLRs when BP does not converge."""
    s = _syndrome_array(H, syndrome)
    if not s.any():
        return DecodeOutcome(np.zeros(H.cols, np.uint8), True, 1,
                             np.full(H.cols, channel_llr(config.prior_p)))
    out = min_sum_bp(H, s, config)
    if out.bp_converged or config.osd == "none":
        return out
    est = osd_postprocess(H, s, out.soft_reliabilities, config.osd, config.osd_order)
    return DecodeOutcome(est, False, out.iterations_run, out.soft_reliabilities)

"""Code-capacity Monte Carlo for CSS codes under independent X and Z noise."""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.stats import binomtest

from . import decoder as _decoder
from .codes import CodeIntegrityError, CodeSpec, ParityChecks, build_checks
from .decoder import DecoderConfig
from .distance import LogicalTestContext, NoLogicalOperators
from .gf2 import BinMatrix

log = logging.getLogger(__name__)

DecodeFn = Callable[[BinMatrix, np.ndarray, DecoderConfig], np.ndarray]

CSV_COLUMNS = ("p", "shots", "logical_errors", "ler", "ci_low", "ci_high",
               "x_failures", "z_failures", "seed")


def _bp_osd(H: BinMatrix, syndrome: np.ndarray, config: DecoderConfig) -> np.ndarray:
    return _decoder.decode(H, syndrome, config).estimate


@dataclass(frozen=True)
class CapacityRun:
    """One code-capacity point.

    With ``match_prior`` the decoder's channel prior is set to ``p``.
    ``x_only`` samples bit flips only (decoded against ``h_z``).
    """

    spec: CodeSpec | ParityChecks
    p: float
    decoder: DecoderConfig = field(default_factory=DecoderConfig)
    stop_at_logical_errors: int = 100
    max_shots: int = 10_000_000
    seed: int = 0
    x_only: bool = False
    match_prior: bool = True

    def __post_init__(self):
        if not 0.0 < self.p < 0.5:
            raise ValueError("p must lie in (0, 0.5)")
        if self.stop_at_logical_errors < 1:
            raise ValueError("stop_at_logical_errors must be >= 1")
        if self.max_shots < 1:
            raise ValueError("max_shots must be >= 1")


@dataclass(frozen=True)
class SimResult:
    p: float
    shots: int
    logical_errors: int
    x_failures: int
    z_failures: int
    seed: int

    @property
    def ler(self) -> float:
        return self.logical_errors / self.shots if self.shots else 0.0

    @property
    def wilson_ci(self) -> tuple[float, float]:
        return wilson_interval(self.logical_errors, self.shots)

    def row(self) -> dict:
        lo, hi = self.wilson_ci
        return {"p": self.p, "shots": self.shots, "logical_errors": self.logical_errors,
                "ler": self.ler, "ci_low": lo, "ci_high": hi,
                "x_failures": self.x_failures, "z_failures": self.z_failures,
                "seed": self.seed}


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    ci = binomtest(successes, trials).proportion_ci(confidence, method="wilson")
    return float(ci.low), float(ci.high)


class _Shots:
    """Per-kind decoding of a batch of sampled errors."""

    def __init__(self, ctx: LogicalTestContext, config: DecoderConfig, decode_fn: DecodeFn):
        self.ctx = ctx
        self.config = config
        self.decode_fn = decode_fn
        self.dense = {kind: ctx.checks(kind).to_dense().astype(np.int64) for kind in "XZ"}
        self.detect = {kind: ctx.detector(kind).astype(np.int64) for kind in "XZ"}
        self.strict = config.osd != "none"

    def failures(self, errors: np.ndarray, kind: str) -> np.ndarray:
        """Boolean mask of shots whose residual is a logical of ``kind``
        (or, without OSD, is not even syndrome-consistent)."""
        H = self.ctx.checks(kind)
        syn = (errors.astype(np.int64) @ self.dense[kind].T) & 1
        est = np.empty_like(errors)
        for t in range(errors.shape[0]):
            est[t] = self.decode_fn(H, syn[t].astype(np.uint8), self.config)
        residual = (errors ^ est).astype(np.int64)
        bad_syn = ((residual @ self.dense[kind].T) & 1).any(axis=1)
        if self.strict and bad_syn.any():
            raise CodeIntegrityError("syndrome-inconsistent estimate with OSD enabled")
        logical = ((residual @ self.detect[kind].T) & 1).any(axis=1)
        return logical | bad_syn


def _batch(shots: _Shots, p: float, seed: int, b: int, size: int, x_only: bool):
    rng = np.random.default_rng([seed, b])
    n = shots.ctx.n
    x_err = (rng.random((size, n)) < p).astype(np.uint8)
    x_fail = shots.failures(x_err, "X")
    if x_only:
        z_fail = np.zeros(size, dtype=bool)
    else:
        z_err = (rng.random((size, n)) < p).astype(np.uint8)
        z_fail = shots.failures(z_err, "Z")
    return size, int((x_fail | z_fail).sum()), int(x_fail.sum()), int(z_fail.sum())


def run_capacity(run: CapacityRun, *, batch_size: int = 256, workers: int = 1,
                 decode_fn: DecodeFn | None = None) -> SimResult:
    """Sample, decode and tally until the logical-error target or ``max_shots``.

    Shots are drawn in seeded batches; the stopping rule is checked after
    each batch in order, so the result depends on ``seed`` and
    ``batch_size`` but not on ``workers``.
    """
    pc = run.spec if isinstance(run.spec, ParityChecks) else build_checks(run.spec)
    ctx = LogicalTestContext(pc)
    if ctx.k == 0:
        raise NoLogicalOperators("k = 0: no logical operators can fail")
    config = run.decoder.with_prior(run.p) if run.match_prior else run.decoder
    shots = _Shots(ctx, config, decode_fn or _bp_osd)
    tally = [0, 0, 0, 0]
    stop = False

    def sizes(b):
        return min(batch_size, run.max_shots - b * batch_size)

    def merge(res):
        nonlocal stop
        for i, v in enumerate(res):
            tally[i] += v
        stop = tally[1] >= run.stop_at_logical_errors or tally[0] >= run.max_shots

    b = 0
    if workers <= 1:
        while not stop:
            merge(_batch(shots, run.p, run.seed, b, sizes(b), run.x_only))
            b += 1
    else:
        with ThreadPoolExecutor(workers) as pool:
            while not stop:
                idx = [i for i in range(b, b + workers) if sizes(i) > 0]
                results = list(pool.map(
                    lambda i: _batch(shots, run.p, run.seed, i, sizes(i), run.x_only), idx))
                for res in results:
                    merge(res)
                    if stop:
                        break
                b += len(idx)
    log.info("p=%g: %d logical errors in %d shots", run.p, tally[1], tally[0])
    return SimResult(run.p, tally[0], tally[1], tally[2], tally[3], run.seed)


def derive_seeds(seed: int, count: int) -> list[int]:
    return [int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def sweep(spec: CodeSpec | ParityChecks, p_list: Sequence[float], decoder: DecoderConfig | None = None,
          stop: int = 100, seed: int = 0, *, max_shots: int = 10_000_000, x_only: bool = False,
          batch_size: int = 256, workers: int = 1) -> list[SimResult]:
    """One :func:`run_capacity` per ``p`` with seeds spawned from ``seed``."""
    if len(p_list) == 0:
        raise ValueError("p_list is empty")
    decoder = decoder or DecoderConfig()
    pc = spec if isinstance(spec, ParityChecks) else build_checks(spec)
    out = []
    for p, s in zip(p_list, derive_seeds(seed, len(p_list))):
        run = CapacityRun(pc, float(p), decoder, stop, max_shots, s, x_only)
        out.append(run_capacity(run, batch_size=batch_size, workers=workers))
    return out


def to_csv(results: Sequence[SimResult], path=None) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in results:
        writer.writerow(r.row())
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def parse_p_range(text: str) -> list[float]:
    """``0.01:0.10:0.01`` (inclusive) or a comma list ``0.01,0.02``."""
    if ":" in text:
        start, stop, step = (float(t) for t in text.split(":"))
        if step <= 0:
            raise ValueError("step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    return [float(t) for t in text.split(",") if t.strip()]

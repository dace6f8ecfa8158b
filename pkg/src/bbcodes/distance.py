"""Code distance: exhaustive search for small codes, decoder probes for bounds.

The exhaustive search is a meet-in-the-middle over syndromes. A logical
operator of weight at most ``w`` splits into two disjoint parts of sizes at
most ``ceil(w/2)`` and ``floor(w/2)`` with equal syndromes but different
logical signatures, so every weight-``w`` vector is covered while only
subsets of half that size are ever listed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from . import _kernels, gf2
from .codes import ParityChecks
from .decoder import DecoderConfig, decode
from .gf2 import BinMatrix, RowSpace

Kind = Literal["X", "Z"]

DEFAULT_BUDGET = 30_000_000


class DistanceBudgetExceeded(RuntimeError):
    pass


class NoLogicalOperators(ValueError):
    pass


def _quotient_basis(commute: BinMatrix, stabilizers: RowSpace) -> np.ndarray:
    """Basis of ker(commute) modulo the stabilizer rowspace."""
    rows = [(r.copy(), int(p)) for r, p in zip(stabilizers._rows, stabilizers._pivots)]
    picked = []
    for v in gf2.kernel_basis(commute).to_dense():
        v = v.copy()
        for row, p in rows:
            if v[p]:
                v ^= row
        nz = np.flatnonzero(v)
        if nz.size:
            rows.append((v, int(nz[0])))
            picked.append(v)
    return np.array(picked, dtype=np.uint8).reshape(len(picked), commute.cols)


class LogicalTestContext:
    """Parity checks plus cached echelon forms and logical bases.

    ``logical["Z"]`` spans Z-type logicals (kernel of ``h_x`` modulo the
    rowspace of ``h_z``); ``logical["X"]`` likewise with roles swapped.
    """

    def __init__(self, h_x: BinMatrix | ParityChecks, h_z: BinMatrix | None = None):
        # BB codes are invariant under the joint x^i y^j translation of both
        # halves, so every logical has a translate touching qubit 0 or lm
        self.anchors: tuple[int, ...] = ()
        if isinstance(h_x, ParityChecks):
            if h_x.spec is not None:
                self.anchors = (0, h_x.spec.l * h_x.spec.m)
            h_x, h_z = h_x.h_x, h_x.h_z
        if h_x.cols != h_z.cols:
            raise ValueError("h_x and h_z act on different numbers of qubits")
        self.h_x = h_x
        self.h_z = h_z
        self.n = h_x.cols
        self.rowspace = {"X": RowSpace(h_x), "Z": RowSpace(h_z)}
        self.logical = {
            "Z": _quotient_basis(h_x, self.rowspace["Z"]),
            "X": _quotient_basis(h_z, self.rowspace["X"]),
        }
        self.k = self.logical["Z"].shape[0]
        if self.logical["X"].shape[0] != self.k:
            raise ArithmeticError("X and Z logical counts differ")

    def checks(self, kind: Kind) -> BinMatrix:
        """Checks that detect errors of ``kind`` (``h_x`` detects Z)."""
        return self.h_x if kind == "Z" else self.h_z

    def stabilizers(self, kind: Kind) -> BinMatrix:
        return self.h_z if kind == "Z" else self.h_x

    def detector(self, kind: Kind) -> np.ndarray:
        """Logicals of the opposite type; they flag nontrivial ``kind`` operators."""
        return self.logical["X" if kind == "Z" else "Z"]

    def is_logical_fast(self, v: np.ndarray, kind: Kind) -> bool:
        v = np.asarray(v, dtype=np.uint8)
        if gf2.syndrome(self.checks(kind), v).any():
            return False
        return bool(((self.detector(kind).astype(np.int64) @ v) & 1).any())


def is_logical(v, ctx: LogicalTestContext, kind: Kind) -> bool:
    """True iff ``v`` commutes with all opposite checks and is not a stabilizer."""
    vec = gf2._as_vector(v, ctx.n)
    if gf2.syndrome(ctx.checks(kind), vec).any():
        return False
    return not ctx.rowspace[kind].contains(vec)


@dataclass
class DistanceReport:
    d_upper: int | None
    d_exact: int | None
    witness: np.ndarray | None
    trials_used: int
    method: Literal["exhaustive", "decoder-probe"]
    kind: Kind | None = None
    lower_bound: int | None = None
    below_threshold: bool = False
    candidates: dict = field(default_factory=dict)


def _check_witness(ctx: LogicalTestContext, report: DistanceReport) -> DistanceReport:
    if report.witness is not None:
        w = int(report.witness.sum())
        if w != report.d_upper or not is_logical(report.witness, ctx, report.kind):
            raise ArithmeticError("distance witness failed verification")
    return report


# ---------------------------------------------------------------------------
# exhaustive


def _void(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    return a.view(np.dtype((np.void, a.dtype.itemsize * a.shape[1]))).ravel()


def subset_count(n: int, h: int) -> int:
    return sum(math.comb(n, i) for i in range(h + 1))


def _stored_count(n: int, h: int, n_anchor: int) -> int:
    if n_anchor == 0:
        return subset_count(n, h)
    return subset_count(n, h) - subset_count(n - n_anchor, h)


def _stored_half(col_keys: np.ndarray, h: int, anchors: np.ndarray):
    """Distinct keys of the stored half plus one support for each."""
    n, nw = col_keys.shape
    mark = np.zeros(n, np.int64)
    mark[anchors] = 1
    count = _stored_count(n, h, len(anchors))
    keys = np.empty((count, nw), np.uint64)
    sup = np.empty((count, max(h, 1)), np.int64)
    written = _kernels.enum_subsets(col_keys, h, mark, len(anchors) > 0, keys, sup)
    assert written == count
    _, first = np.unique(_void(keys), return_index=True)
    return np.ascontiguousarray(keys[first]), sup[first]


def _mitm(check: np.ndarray, detector: np.ndarray, w_max: int, budget: int, w_min: int = 1,
          anchors=()):
    """Smallest ``w <= w_max`` admitting a logical; returns ``(w, witness)`` or ``(None, None)``.

    A weight-``w`` logical splits into a stored part of size ``ceil(w/2)``
    and a streamed part of size ``floor(w/2)`` with equal syndromes and
    different logical signatures. When every logical has a translate
    meeting ``anchors``, only stored parts containing an anchor are kept.
    """
    n = check.shape[1]
    anchors = np.asarray(anchors, dtype=np.int64)
    h_max = (w_max + 1) // 2
    need = max(_stored_count(n, h_max, len(anchors)), subset_count(n, w_max // 2))
    if need > budget:
        raise DistanceBudgetExceeded(
            f"{need} subsets needed for weight {w_max} on {n} qubits (budget {budget})")
    syn_cols = gf2.pack_rows(check.T)
    sig_cols = gf2.pack_rows(detector.T)
    ws = syn_cols.shape[1]
    col_keys = np.ascontiguousarray(np.hstack([syn_cols, sig_cols]))
    stored_h, keys, sup, table = -1, None, None, None
    for w in range(max(1, w_min), w_max + 1):
        h1, h2 = (w + 1) // 2, w // 2
        if h1 != stored_h:
            keys, sup = _stored_half(col_keys, h1, anchors)
            size = 1 << max(4, int(2 * len(keys)).bit_length())
            table = _kernels.build_table(keys, ws, size)
            stored_h = h1
        e, part = _kernels.probe_subsets(col_keys, h2, ws, keys, table)
        if e < 0:
            continue
        v = np.zeros(n, np.uint8)
        for q in part:
            v[q] ^= 1
        for q in sup[e]:
            if q >= 0:
                v[q] ^= 1
        return int(v.sum()), v
    return None, None


def exact_distance(ctx: LogicalTestContext, w_max: int, kinds: Sequence[Kind] = ("Z", "X"),
                   budget: int = DEFAULT_BUDGET) -> DistanceReport:
    """Exact minimum distance if it is at most ``w_max``.

    Returns a report with ``d_exact=None`` and ``lower_bound=w_max+1`` when no
    logical operator of weight ``<= w_max`` exists.
    """
    if w_max < 1:
        raise ValueError("w_max must be >= 1")
    if ctx.k == 0:
        raise NoLogicalOperators("no logical operators exist (k = 0)")
    best = None
    for kind in kinds:
        limit = w_max if best is None else best[0] - 1
        if limit < 1:
            break
        w, v = _mitm(ctx.checks(kind).to_dense(), ctx.detector(kind), limit, budget,
                     anchors=ctx.anchors)
        if w is not None:
            best = (w, v, kind)
    if best is None:
        return DistanceReport(None, None, None, 0, "exhaustive", lower_bound=w_max + 1)
    w, v, kind = best
    report = DistanceReport(w, w, v, 0, "exhaustive", kind=kind, lower_bound=w)
    return _check_witness(ctx, report)


def exact_distance_kind(ctx: LogicalTestContext, kind: Kind, w_max: int,
                        budget: int = DEFAULT_BUDGET) -> int | None:
    if ctx.k == 0:
        raise NoLogicalOperators("no logical operators exist (k = 0)")
    w, _ = _mitm(ctx.checks(kind).to_dense(), ctx.detector(kind), w_max, budget,
                 anchors=ctx.anchors)
    return w


def has_logical_below(ctx: LogicalTestContext, w: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether some logical of either kind has weight ``< w``."""
    if w <= 1:
        return False
    return exact_distance(ctx, w - 1, budget=budget).d_exact is not None


# ---------------------------------------------------------------------------
# decoder probes


def minimize_witness(v: np.ndarray, stabilizers: np.ndarray) -> np.ndarray:
    """Greedily add stabilizer rows while that lowers the weight."""
    v = v.copy()
    stab = stabilizers.astype(np.uint8)
    while True:
        weights = (stab ^ v).sum(axis=1)
        j = int(np.argmin(weights))
        if weights[j] >= v.sum():
            return v
        v ^= stab[j]


class _Prober:
    def __init__(self, ctx: LogicalTestContext, decoder: DecoderConfig, tau_d: int, schedule: str):
        self.ctx = ctx
        self.decoder = decoder
        self.schedule = schedule
        n = ctx.n
        scale = max(tau_d, 2) / n
        self.p_grid = [min(0.45, max(1e-3, f * scale)) for f in (0.25, 0.5, 0.75, 1.0)]
        self.weights = list(range(max(1, tau_d // 2), max(tau_d, 2) + 1))
        self.packed = {kind: gf2.pack_rows(ctx.checks(kind).to_dense(), n + 1) for kind in ("X", "Z")}
        self.stab = {kind: ctx.stabilizers(kind).to_dense() for kind in ("X", "Z")}

    def residual(self, rng: np.random.Generator, kind: Kind) -> np.ndarray | None:
        n = self.ctx.n
        if rng.random() < 0.5:
            p = self.p_grid[rng.integers(len(self.p_grid))]
            e = (rng.random(n) < p).astype(np.uint8)
        else:
            w = self.weights[rng.integers(len(self.weights))]
            p = min(0.45, w / n)
            e = np.zeros(n, np.uint8)
            e[rng.choice(n, size=w, replace=False)] = 1
        H = self.ctx.checks(kind)
        out = decode(H, gf2.syndrome(H, e), self.decoder.with_prior(p))
        r = e ^ out.estimate
        return r if r.any() else None

    def targeted(self, rng: np.random.Generator, kind: Kind) -> np.ndarray:
        """Solve ``H r = 0, l . r = 1`` by OSD on random reliabilities."""
        n = self.ctx.n
        det = self.ctx.detector(kind)
        coeffs = np.zeros(det.shape[0], np.uint8)
        while not coeffs.any():
            coeffs = rng.integers(0, 2, det.shape[0]).astype(np.uint8)
        row = (coeffs.astype(np.int64) @ det & 1).astype(np.uint8)
        packed = np.vstack([self.packed[kind], gf2.pack_rows(row[None, :], n + 1)])
        syn = np.zeros(packed.shape[0], np.uint8)
        syn[-1] = 1
        order = rng.permutation(n).astype(np.int64)
        return _kernels.osd_solve(packed, syn, order, n, self.decoder.osd_order, True)

    def trial(self, rng: np.random.Generator, kind: Kind) -> np.ndarray | None:
        mode = self.schedule
        if mode == "mixed":
            mode = "residual" if rng.random() < 0.5 else "targeted"
        r = self.residual(rng, kind) if mode == "residual" else self.targeted(rng, kind)
        if r is None or not self.ctx.is_logical_fast(r, kind):
            return None
        return minimize_witness(r, self.stab[kind])


def _probe_batch(prober: _Prober, seed: int, batch: int, size: int, kinds: Sequence[Kind],
                 stop_at: int = 0):
    """Best witness of one seeded batch; returns early once its weight is <= ``stop_at``."""
    rng = np.random.default_rng([seed, batch])
    best = None
    for t in range(size):
        kind = kinds[(batch * size + t) % len(kinds)]
        r = prober.trial(rng, kind)
        if r is not None and (best is None or r.sum() < best[0].sum()):
            best = (r, kind)
            if r.sum() <= stop_at:
                return best, t + 1
    return best, size


def distance_upperbound(ctx: LogicalTestContext, tau_d: int = 1, trials: int = 10_000,
                        decoder: DecoderConfig | None = None, seed: int = 0, *,
                        schedule: Literal["mixed", "residual", "targeted"] = "mixed",
                        target: int | None = None, kinds: Sequence[Kind] = ("Z", "X"),
                        batch_size: int = 200, workers: int = 1) -> DistanceReport:
    """Upper bound on the distance from logical residuals found by decoding.

    Each trial either decodes a random error and keeps the residual when it
    is a logical operator (``residual``), or asks OSD for a solution that
    anticommutes with a random logical of the other type (``targeted``).
    Stops early once the bound drops below ``tau_d`` or reaches ``target``.
    Results depend only on ``seed`` and ``batch_size``, not on ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if ctx.k == 0:
        raise NoLogicalOperators("no logical operators exist (k = 0)")
    decoder = decoder or DecoderConfig()
    prober = _Prober(ctx, decoder, tau_d, schedule)
    n_batches = -(-trials // batch_size)
    sizes = [min(batch_size, trials - b * batch_size) for b in range(n_batches)]
    best, used, stop = None, 0, False

    stop_at = max(tau_d - 1, target or 0)

    def merge(out, b):
        nonlocal best, used, stop
        result, n_used = out
        used += n_used
        if result is not None and (best is None or result[0].sum() < best[0].sum()):
            best = result
        if best is not None:
            w = int(best[0].sum())
            if w < tau_d or (target is not None and w <= target):
                stop = True

    if workers <= 1:
        for b in range(n_batches):
            merge(_probe_batch(prober, seed, b, sizes[b], kinds, stop_at), b)
            if stop:
                break
    else:
        with ThreadPoolExecutor(workers) as pool:
            for start in range(0, n_batches, workers):
                idx = range(start, min(n_batches, start + workers))
                results = list(pool.map(
                    lambda b: _probe_batch(prober, seed, b, sizes[b], kinds, stop_at), idx))
                for b, res in zip(idx, results):
                    merge(res, b)
                    if stop:
                        break
                if stop:
                    break
    if best is None:
        return DistanceReport(None, None, None, used, "decoder-probe")
    v, kind = best
    w = int(v.sum())
    report = DistanceReport(w, None, v, used, "decoder-probe", kind=kind, below_threshold=w < tau_d)
    return _check_witness(ctx, report)

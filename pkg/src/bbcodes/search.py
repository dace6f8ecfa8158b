"""Searches for BB codes (restricted trinomial form) and coprime-BB codes.

Both searches shrink the candidate list with code-equivalence rules before
the expensive distance probing: the four companion codes
``(a, b), (a^T, b^T), (b, a), (b^T, a^T)`` share ``[[n, k, d]]``, and for
coprime codes so does ``(pi^i a, pi^j b)``.
"""

from __future__ import annotations

import itertools
import logging
import math
import zlib
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .codes import (
    CodeIntegrityError,
    CodeParams,
    CodeSpec,
    build_checks,
    dimension,
    gcd_with_modulus,
    is_connected,
    is_connected_support,
)
from .decoder import DecoderConfig
from . import distance
from .distance import LogicalTestContext, distance_upperbound, exact_distance
from .polyring import (
    BivPoly,
    UniPoly,
    _gcd,
    _mod,
    circulant_modulus,
    divisors,
    factorize_circulant,
    format_uni,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    l: int
    m: int
    tau_k: int = 2
    tau_d: int = 1
    term_weight: int = 3
    probe_trials: int = 10_000
    seed: int = 0
    g_restriction: UniPoly | tuple[int, int] | None = None
    irreducible_only: bool = False
    connectivity_filter: bool = True
    decoder: DecoderConfig = DecoderConfig()
    screen_budget: int = 200_000

    def __post_init__(self):
        if self.tau_k < 2 or self.tau_k % 2:
            raise ValueError("tau_k must be an even number >= 2")
        if self.tau_d < 1:
            raise ValueError("tau_d must be >= 1")
        if self.term_weight < 1:
            raise ValueError("term_weight must be >= 1")


@dataclass(frozen=True)
class SearchHit:
    spec: CodeSpec
    params: CodeParams
    canonical_key: tuple
    witness_weight: int
    g: UniPoly | None = None

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "n": self.params.n,
            "k": self.params.k,
            "d_upper": self.params.d_upper,
            "witness_weight": self.witness_weight,
            "canonical_key": key_text(self.canonical_key),
        }


# ---------------------------------------------------------------------------
# equivalence


def _rotation_normal(p: UniPoly) -> tuple[int, ...]:
    """Smallest sorted exponent tuple among the shifts ``pi^t p``."""
    N = p.N
    exps = p.exponents
    return min(tuple(sorted((e - s) % N for e in exps)) for s in exps)


def _biv_terms(p: BivPoly) -> tuple:
    return p.sorted_terms()


def canonical_key(spec: CodeSpec) -> tuple:
    """Orbit representative under the companion-code and shift rules."""
    if spec.origin == "coprime-bb":
        keys = []
        for t in (1, 2, 3, 4):
            c = spec.transform(t)
            keys.append((_rotation_normal(c.a_uni), _rotation_normal(c.b_uni)))
        return ("pi", spec.l, spec.m, min(keys))
    keys = []
    for t in (1, 2, 3, 4):
        c = spec.transform(t)
        keys.append((_biv_terms(c.a), _biv_terms(c.b)))
    return ("xy", spec.l, spec.m, min(keys))


def key_text(key: tuple) -> str:
    form, l, m, (a, b) = key
    if form == "pi":
        fmt = lambda exps: "+".join(("1", "p")[e] if e < 2 else f"p{e}" for e in exps)  # noqa: E731
    else:
        fmt = lambda terms: "+".join(  # noqa: E731
            (("x" + (str(i) if i > 1 else "")) if i else "")
            + (("y" + (str(j) if j > 1 else "")) if j else "") or "1" for i, j in terms)
    return f"{form}:{l}:{m}:{fmt(a)}|{fmt(b)}"


def remove_equivalent(candidates: Iterable[CodeSpec]) -> list[CodeSpec]:
    """Keep the first spec of every equivalence class, preserving order."""
    seen = set()
    out = []
    for spec in candidates:
        key = canonical_key(spec)
        if key not in seen:
            seen.add(key)
            out.append(spec)
    return out


# ---------------------------------------------------------------------------
# candidate generation


def enumerate_vanilla(l: int, m: int) -> Iterator[tuple[BivPoly, BivPoly]]:
    """All ``a = x^i + y^j + y^k`` (j < k), ``b = y^r + x^s + x^t`` (s < t)."""
    if l < 2 or m < 2:
        raise ValueError("l and m must be >= 2")
    a_forms = [BivPoly.from_terms([(i, 0), (0, j), (0, k)], l, m)
               for i in range(l) for j, k in itertools.combinations(range(m), 2)]
    b_forms = [BivPoly.from_terms([(0, r), (s, 0), (t, 0)], l, m)
               for r in range(m) for s, t in itertools.combinations(range(l), 2)]
    for a in a_forms:
        for b in b_forms:
            yield a, b


def enumerate_weighted(N: int, weight: int) -> Iterator[UniPoly]:
    """Weight-``weight`` polynomials in F2[pi]/(pi^N+1) containing the constant term."""
    for rest in itertools.combinations(range(1, N), weight - 1):
        yield UniPoly.from_exponents((0,) + rest, N)


# ---------------------------------------------------------------------------
# evaluation


def _seed_for(seed: int, key: tuple) -> int:
    return (seed * 1_000_003 + zlib.crc32(key_text(key).encode())) % (2**32)


def _screen_weight(n: int, tau_d: int, budget: int) -> int:
    """Largest ``w < tau_d`` whose exhaustive check stays within ``budget``."""
    w = 0
    while w + 1 < tau_d and distance.subset_count(n, (w + 2) // 2) <= budget:
        w += 1
    return w


def _evaluate(spec: CodeSpec, key: tuple, config: SearchConfig, k: int,
              g: UniPoly | None = None) -> SearchHit | None:
    ctx = LogicalTestContext(build_checks(spec))
    # exact and cheap: any logical lighter than tau_d rejects the candidate
    w = _screen_weight(spec.n, config.tau_d, config.screen_budget)
    if w and exact_distance(ctx, w, budget=config.screen_budget).d_exact is not None:
        return None
    report = distance_upperbound(ctx, config.tau_d, config.probe_trials, config.decoder,
                                 _seed_for(config.seed, key))
    if report.d_upper is not None and report.d_upper < config.tau_d:
        return None
    d = report.d_upper
    return SearchHit(spec, CodeParams(spec.n, k, d_upper=d), key,
                     d if d is not None else -1, g)


def _connected(spec: CodeSpec) -> bool:
    return is_connected_support(spec) and is_connected(spec)


def search_bb(config: SearchConfig, *, start: int = 0, dedupe: bool = True,
              progress: Callable[[int, int], None] | None = None) -> list[SearchHit]:
    """Trinomial-form BB search.

    Candidates are deduplicated, filtered by Tanner connectivity and by
    ``k >= tau_k``, then probed for distance in order of decreasing ``k``.
    ``start`` skips already-processed survivors when resuming;
    ``dedupe=False`` probes every candidate (for checking the pruning).
    """
    l, m = config.l, config.m
    if config.tau_k > 2 * l * m:
        return []
    specs = [CodeSpec(l, m, a, b) for a, b in enumerate_vanilla(l, m) if a.terms and b.terms]
    if dedupe:
        specs = remove_equivalent(specs)
    scored = []
    for spec in specs:
        if config.connectivity_filter and not _connected(spec):
            continue
        k = dimension(build_checks(spec))
        if k >= config.tau_k:
            scored.append((k, spec))
    scored.sort(key=lambda item: -item[0])
    log.info("search_bb l=%d m=%d: %d classes, %d pass k >= %d", l, m, len(specs),
             len(scored), config.tau_k)
    hits = []
    for idx, (k, spec) in enumerate(scored):
        if idx < start:
            continue
        hit = _evaluate(spec, canonical_key(spec), config, k)
        if hit is not None:
            hits.append(hit)
        if progress:
            progress(idx + 1, len(scored))
    return sorted(hits, key=lambda h: h.canonical_key)


def _admissible_g(config: SearchConfig, N: int) -> list[UniPoly]:
    min_deg = -(-config.tau_k // 2)
    max_deg = N // 2
    restriction = config.g_restriction
    if isinstance(restriction, UniPoly):
        g = restriction.with_modulus(None)
        if _mod(circulant_modulus(N).bits, g.bits):
            raise ValueError(f"{format_uni(g)} does not divide pi^{N}+1")
        return [g] if 2 * g.degree >= config.tau_k else []
    if isinstance(restriction, tuple):
        min_deg, max_deg = max(min_deg, restriction[0]), min(max_deg, restriction[1])
    if min_deg > max_deg:
        return []
    return list(divisors(factorize_circulant(N), min_deg, max_deg, config.irreducible_only))


def search_coprime(config: SearchConfig) -> list[SearchHit]:
    """Coprime-BB search: the dimension is fixed by the chosen ``g``.

    For every admissible divisor ``g`` of ``pi^lm + 1`` (``2 deg g >= tau_k``)
    the candidates are pairs of weight-3 multiples of ``g`` whose joint gcd
    with ``pi^lm + 1`` is exactly ``g``.
    """
    l, m = config.l, config.m
    if math.gcd(l, m) != 1:
        raise ValueError(f"l={l} and m={m} are not coprime")
    N = l * m
    modulus = circulant_modulus(N).bits
    polys = {}
    for c in enumerate_weighted(N, config.term_weight):
        polys.setdefault(_rotation_normal(c), c)
    content = {key: _gcd(modulus, c.bits) for key, c in polys.items()}
    by_content: dict[int, list[UniPoly]] = {}
    for key, c in polys.items():
        by_content.setdefault(content[key], []).append(c)
    hits = []
    for g in _admissible_g(config, N):
        classes = [G for G in by_content if _mod(G, g.bits) == 0]
        if not classes:
            continue
        multiples = sorted((c for G in classes for c in by_content[G]), key=lambda c: c.bits)
        pairs = []
        for a, b in itertools.combinations_with_replacement(multiples, 2):
            if _gcd(content[_rotation_normal(a)], content[_rotation_normal(b)]) == g.bits:
                pairs.append(CodeSpec.pi(l, m, a, b))
        survivors = remove_equivalent(pairs)
        log.info("search_coprime g=%s: %d pairs, %d classes", format_uni(g), len(pairs),
                 len(survivors))
        for spec in survivors:
            if config.connectivity_filter and not _connected(spec):
                continue
            k = dimension(build_checks(spec))
            if k != 2 * g.degree:
                raise CodeIntegrityError(
                    f"rank dimension {k} != 2 deg g = {2 * g.degree} for {spec.to_json()}")
            if gcd_with_modulus(spec.a_uni, spec.b_uni, N).bits != g.bits:
                raise CodeIntegrityError("candidate gcd drifted from g")
            hit = _evaluate(spec, canonical_key(spec), config, k, g)
            if hit is not None:
                hits.append(hit)
    return sorted(hits, key=lambda h: h.canonical_key)

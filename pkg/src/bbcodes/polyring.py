"""Binary polynomials: F2[pi]/(pi^N + 1), F2[x,y]/(x^l + 1, y^m + 1).

Univariate polynomials are Python ints used as coefficient bitsets (bit ``t``
is the coefficient of ``pi^t``). Besides ring arithmetic this module factors
``pi^N + 1`` through 2-cyclotomic cosets and maps between the bivariate and
univariate pictures when ``gcd(l, m) = 1`` via ``pi = xy``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from sympy import factorint

# ---------------------------------------------------------------------------
# raw bitset arithmetic


def _deg(a: int) -> int:
    return a.bit_length() - 1


def _clmul(a: int, b: int) -> int:
    if a.bit_count() > b.bit_count():
        a, b = b, a
    out = 0
    while a:
        low = a & -a
        out ^= b << (low.bit_length() - 1)
        a ^= low
    return out


def _divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = _deg(b)
    q = 0
    while a and _deg(a) >= db:
        s = _deg(a) - db
        q |= 1 << s
        a ^= b << s
    return q, a


def _mod(a: int, b: int) -> int:
    return _divmod(a, b)[1]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _mod(a, b)
    return a


def _reduce_cyclic(a: int, N: int) -> int:
    """Fold exponents modulo N (pi^N = 1)."""
    mask = (1 << N) - 1
    while a >> N:
        a = (a & mask) ^ (a >> N)
    return a


def _square(a: int) -> int:
    return int("0".join(format(a, "b")), 2) if a else 0


def _powmod(base: int, e: int, f: int) -> int:
    result = 1
    base = _mod(base, f)
    while e:
        if e & 1:
            result = _mod(_clmul(result, base), f)
        e >>= 1
        if e:
            base = _mod(_square(base), f)
    return result


# ---------------------------------------------------------------------------
# univariate polynomials


@dataclass(frozen=True)
class UniPoly:
    """Binary polynomial in ``pi``; ``N`` names the ring F2[pi]/(pi^N+1).

    ``N=None`` means a plain polynomial in F2[pi] (no reduction).
    """

    bits: int
    N: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "bits", int(self.bits))
        if self.bits < 0:
            raise ValueError("coefficient bitset must be non-negative")
        if self.N is not None:
            object.__setattr__(self, "N", int(self.N))
            if self.N < 1:
                raise ValueError("modulus exponent must be >= 1")
            object.__setattr__(self, "bits", _reduce_cyclic(self.bits, self.N))

    @classmethod
    def from_exponents(cls, exps: Iterable[int], N: int | None = None) -> UniPoly:
        bits = 0
        for e in exps:
            e = int(e)
            if e < 0:
                if N is None:
                    raise ValueError("negative exponent needs a modulus")
                e %= N
            bits ^= 1 << e
        return cls(bits, N)

    @property
    def degree(self) -> int | None:
        """Degree, or ``None`` for the zero polynomial."""
        return _deg(self.bits) if self.bits else None

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    @property
    def exponents(self) -> list[int]:
        return [t for t in range(self.bits.bit_length()) if (self.bits >> t) & 1]

    def is_zero(self) -> bool:
        return self.bits == 0

    def with_modulus(self, N: int | None) -> UniPoly:
        return UniPoly(self.bits, N)

    def shift(self, t: int) -> UniPoly:
        """Multiply by ``pi^t`` (negative ``t`` allowed in a ring)."""
        if self.N is None:
            if t < 0:
                raise ValueError("negative shift needs a modulus")
            return UniPoly(self.bits << t)
        return UniPoly.from_exponents((e + t for e in self.exponents), self.N)

    def transpose(self) -> UniPoly:
        """``p(pi^-1)``: the polynomial of the transposed circulant."""
        if self.N is None:
            raise ValueError("transpose needs a modulus")
        return UniPoly.from_exponents((-e for e in self.exponents), self.N)

    def __add__(self, other: UniPoly) -> UniPoly:
        return poly_add(self, other)

    def __mul__(self, other: UniPoly) -> UniPoly:
        _check_context(self, other)
        prod = _clmul(self.bits, other.bits)
        return UniPoly(prod, self.N)

    def __str__(self) -> str:
        return format_uni(self)


def _check_context(p: UniPoly, q: UniPoly) -> None:
    if p.N is not None and q.N is not None and p.N != q.N:
        raise ValueError(f"ring mismatch: pi^{p.N}+1 vs pi^{q.N}+1")


def poly_add(p: UniPoly, q: UniPoly) -> UniPoly:
    _check_context(p, q)
    return UniPoly(p.bits ^ q.bits, p.N if p.N is not None else q.N)


def poly_mulmod(p: UniPoly, q: UniPoly, N: int) -> UniPoly:
    for r in (p, q):
        if r.N is not None and r.N != N:
            raise ValueError(f"ring mismatch: pi^{r.N}+1 vs pi^{N}+1")
    return UniPoly(_clmul(p.bits, q.bits), N)


def poly_mod(p: UniPoly, q: UniPoly) -> UniPoly:
    """Remainder of ordinary polynomial division (exponents < N assumed)."""
    if q.is_zero():
        raise ZeroDivisionError("polynomial modulus is zero")
    return UniPoly(_mod(p.bits, q.bits))


def poly_gcd(*polys: UniPoly) -> UniPoly:
    """Monic gcd in F2[pi]; ``gcd(p, 0) = p``; all-zero input gives 0."""
    g = 0
    for p in polys:
        g = _gcd(g, p.bits) if g else p.bits
    return UniPoly(g)


def circulant_modulus(N: int) -> UniPoly:
    """``pi^N + 1`` as a plain polynomial."""
    return UniPoly((1 << N) | 1)


# ---------------------------------------------------------------------------
# factorization of pi^N + 1


@dataclass(frozen=True)
class Factorization:
    N: int
    factors: tuple[tuple[UniPoly, int], ...]

    def product(self) -> UniPoly:
        out = 1
        for f, mult in self.factors:
            for _ in range(mult):
                out = _clmul(out, f.bits)
        return UniPoly(out)

    def __len__(self) -> int:
        return len(self.factors)


def cyclotomic_cosets(N: int) -> list[list[int]]:
    """2-cyclotomic cosets modulo ``N``, each sorted, ordered by leader."""
    seen: set[int] = set()
    cosets = []
    for s in range(N):
        if s in seen:
            continue
        coset = []
        c = s
        while c not in coset:
            coset.append(c)
            c = (2 * c) % N
        seen.update(coset)
        cosets.append(sorted(coset))
    return cosets


def multiplicative_order(a: int, N: int) -> int:
    if N == 1:
        return 1
    r, x = 1, a % N
    while x != 1:
        x = (x * a) % N
        r += 1
    return r


def is_irreducible(f: int) -> bool:
    """Rabin's irreducibility test for a binary polynomial bitset."""
    r = _deg(f)
    if r < 1:
        return False
    if r == 1:
        return True
    if not f & 1:
        return False
    x = 2
    t = x
    for _ in range(r):
        t = _mod(_square(t), f)
    if t != x:
        return False
    for q in factorint(r):
        t = x
        for _ in range(r // q):
            t = _mod(_square(t), f)
        if _gcd(f, t ^ x) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def _field_modulus(r: int) -> int:
    """Smallest irreducible binary polynomial of degree r."""
    for tail in range(1, 1 << r, 2):
        f = (1 << r) | tail
        if is_irreducible(f):
            return f
    raise RuntimeError(f"no irreducible polynomial of degree {r}")


def _primitive_root_of_unity(N: int, f: int) -> int:
    r = _deg(f)
    cofactor = ((1 << r) - 1) // N
    primes = list(factorint(N))
    for g in range(2, 1 << r):
        w = _powmod(g, cofactor, f)
        if w == 1:
            continue
        if all(_powmod(w, N // q, f) != 1 for q in primes):
            return w
    raise RuntimeError(f"no element of order {N}")


def _minimal_polynomial(w: int, degree: int, f: int) -> int:
    """Binary minimal polynomial of field element ``w`` with known degree.

    The powers ``1, w, ..., w^degree`` are linearly dependent over GF(2);
    elimination finds the unique relation, which is the minimal polynomial.
    """
    basis: dict[int, tuple[int, int]] = {}
    power = 1
    for i in range(degree + 1):
        vec, combo = power, 1 << i
        while vec:
            top = _deg(vec)
            if top not in basis:
                break
            bvec, bcombo = basis[top]
            vec ^= bvec
            combo ^= bcombo
        if vec == 0:
            if i != degree:
                raise ArithmeticError("minimal polynomial degree mismatch")
            return combo
        basis[_deg(vec)] = (vec, combo)
        power = _mod(_clmul(power, w), f)
    raise ArithmeticError("powers unexpectedly independent")


@lru_cache(maxsize=None)
def factorize_circulant(N: int) -> Factorization:
    """Irreducible factorization of ``pi^N + 1`` over GF(2).

    For ``N = 2^s N'`` with ``N'`` odd, ``pi^N + 1 = (pi^N' + 1)^(2^s)``.
    The odd part splits into one minimal polynomial per 2-cyclotomic coset
    of ``N'``, computed in GF(2^r) with ``r`` the order of 2 modulo ``N'``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    s = (N & -N).bit_length() - 1
    odd = N >> s
    mult = 1 << s
    if odd == 1:
        return Factorization(N, ((UniPoly(0b11), mult),))
    r = multiplicative_order(2, odd)
    f = _field_modulus(r)
    w = _primitive_root_of_unity(odd, f)
    factors = []
    for coset in cyclotomic_cosets(odd):
        leader = coset[0]
        wc = _powmod(w, leader, f) if leader else 1
        factors.append(_minimal_polynomial(wc, len(coset), f))
    factors.sort(key=lambda b: (_deg(b), b))
    result = Factorization(N, tuple((UniPoly(b), mult) for b in factors))
    if result.product().bits != circulant_modulus(N).bits:
        raise ArithmeticError(f"factorization of pi^{N}+1 does not multiply back")
    return result


def divisors(fact: Factorization, min_deg: int = 0, max_deg: int | None = None,
             irreducible_only: bool = False) -> Iterator[UniPoly]:
    """Monic divisors of ``pi^N + 1`` with degree in ``[min_deg, max_deg]``.

    Sorted by degree, then by coefficient bitset.
    """
    if max_deg is None:
        max_deg = fact.N
    if min_deg > max_deg:
        raise ValueError("min_deg exceeds max_deg")
    if irreducible_only:
        found = [f.bits for f, _ in fact.factors if min_deg <= _deg(f.bits) <= max_deg]
    else:
        degs = [_deg(f.bits) for f, _ in fact.factors]
        found = []
        for exps in itertools.product(*(range(mult + 1) for _, mult in fact.factors)):
            d = sum(e * dg for e, dg in zip(exps, degs))
            if not min_deg <= d <= max_deg:
                continue
            g = 1
            for (fac, _), e in zip(fact.factors, exps):
                for _ in range(e):
                    g = _clmul(g, fac.bits)
            found.append(g)
    for g in sorted(found, key=lambda b: (_deg(b), b)):
        yield UniPoly(g)


# ---------------------------------------------------------------------------
# bivariate polynomials


@dataclass(frozen=True)
class BivPoly:
    """Element of F2[x,y]/(x^l+1, y^m+1) as a set of exponent pairs."""

    terms: frozenset
    l: int
    m: int

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]], l: int, m: int) -> BivPoly:
        counts = Counter((i % l, j % m) for i, j in terms)
        return cls(frozenset(t for t, c in counts.items() if c % 2), l, m)

    def sorted_terms(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.terms))

    @property
    def weight(self) -> int:
        return len(self.terms)

    def transpose(self) -> BivPoly:
        return BivPoly.from_terms(((-i, -j) for i, j in self.terms), self.l, self.m)

    def __str__(self) -> str:
        return format_biv(self)


def crt_exponent(i: int, j: int, l: int, m: int) -> int:
    """Unique ``t`` in ``[0, lm)`` with ``t = i mod l`` and ``t = j mod m``."""
    if math.gcd(l, m) != 1:
        raise ValueError(f"l={l} and m={m} are not coprime")
    return (i * m * pow(m, -1, l) + j * l * pow(l, -1, m)) % (l * m)


def biv_to_uni(p: BivPoly, l: int | None = None, m: int | None = None) -> UniPoly:
    l = p.l if l is None else l
    m = p.m if m is None else m
    if math.gcd(l, m) != 1:
        raise ValueError(f"l={l} and m={m} are not coprime")
    return UniPoly.from_exponents((crt_exponent(i, j, l, m) for i, j in p.terms), l * m)


def uni_to_biv(p: UniPoly, l: int, m: int) -> BivPoly:
    if math.gcd(l, m) != 1:
        raise ValueError(f"l={l} and m={m} are not coprime")
    u = p.with_modulus(l * m)
    return BivPoly.from_terms(((t % l, t % m) for t in u.exponents), l, m)


# ---------------------------------------------------------------------------
# text format

_MONO = re.compile(r"([xyp])\^?(\d*)")


def _parse_terms(text: str, letters: str) -> list[dict[str, int]]:
    clean = re.sub(r"\s+", "", text).lower().replace("π", "p")
    if not clean:
        raise ValueError("empty polynomial")
    out = []
    for term in clean.split("+"):
        if term == "":
            raise ValueError(f"malformed polynomial {text!r}")
        if term == "1":
            out.append({})
            continue
        powers: dict[str, int] = {}
        pos = 0
        for mt in _MONO.finditer(term):
            if mt.start() != pos:
                break
            letter = mt.group(1)
            if letter not in letters:
                raise ValueError(f"unexpected variable {letter!r} in {text!r}")
            powers[letter] = powers.get(letter, 0) + int(mt.group(2) or 1)
            pos = mt.end()
        if pos != len(term):
            raise ValueError(f"cannot parse term {term!r} in {text!r}")
        out.append(powers)
    return out


def parse_biv(text: str, l: int, m: int) -> BivPoly:
    """Parse e.g. ``1+y2+y4`` or ``x^3 + x2y``."""
    terms = [(t.get("x", 0), t.get("y", 0)) for t in _parse_terms(text, "xy")]
    return BivPoly.from_terms(terms, l, m)


def parse_uni(text: str, N: int | None = None) -> UniPoly:
    """Parse e.g. ``1+p+p2`` (``p`` stands for pi)."""
    return UniPoly.from_exponents((t.get("p", 0) for t in _parse_terms(text, "p")), N)


def _mono(letter: str, e: int) -> str:
    return "" if e == 0 else (letter if e == 1 else f"{letter}{e}")


def format_uni(p: UniPoly, letter: str = "p") -> str:
    if p.is_zero():
        return "0"
    return "+".join(_mono(letter, e) or "1" for e in p.exponents)


def format_biv(p: BivPoly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for i, j in sorted(p.terms, key=lambda t: (t[0] + t[1], t)):
        parts.append((_mono("x", i) + _mono("y", j)) or "1")
    return "+".join(parts)

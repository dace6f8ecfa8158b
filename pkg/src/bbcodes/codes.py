"""Bivariate-bicycle code construction, dimension and connectivity."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import gf2
from .gf2 import BinMatrix
from .polyring import (
    BivPoly,
    UniPoly,
    biv_to_uni,
    circulant_modulus,
    format_biv,
    format_uni,
    parse_biv,
    parse_uni,
    poly_gcd,
    uni_to_biv,
)

Origin = Literal["vanilla-bb", "coprime-bb"]


class CodeIntegrityError(RuntimeError):
    """A constructed code violates an identity that must always hold."""


@dataclass(frozen=True)
class CodeSpec:
    """Input description of a BB code: ``(l, m, a, b)``.

    Coprime specs keep the univariate polynomials next to their CRT image.
    """

    l: int
    m: int
    a: BivPoly
    b: BivPoly
    origin: Origin = "vanilla-bb"
    a_uni: UniPoly | None = None
    b_uni: UniPoly | None = None

    def __post_init__(self):
        if self.l < 2 or self.m < 2:
            raise ValueError(f"l and m must be >= 2, got l={self.l}, m={self.m}")
        if not self.a.terms or not self.b.terms:
            raise ValueError("a and b must be nonzero")
        for p in (self.a, self.b):
            if (p.l, p.m) != (self.l, self.m):
                raise ValueError("polynomial ring does not match (l, m)")
        if self.origin == "coprime-bb":
            if math.gcd(self.l, self.m) != 1:
                raise ValueError(f"coprime-bb requires gcd(l, m) = 1, got l={self.l}, m={self.m}")
            if self.a_uni is None or self.b_uni is None:
                raise ValueError("coprime-bb spec needs its univariate polynomials")

    @classmethod
    def xy(cls, l: int, m: int, a, b) -> CodeSpec:
        a = parse_biv(a, l, m) if isinstance(a, str) else a
        b = parse_biv(b, l, m) if isinstance(b, str) else b
        return cls(l, m, a, b)

    @classmethod
    def pi(cls, l: int, m: int, a, b) -> CodeSpec:
        N = l * m
        if math.gcd(l, m) != 1:
            raise ValueError(f"pi form requires gcd(l, m) = 1, got l={l}, m={m}")
        a = parse_uni(a, N) if isinstance(a, str) else a.with_modulus(N)
        b = parse_uni(b, N) if isinstance(b, str) else b.with_modulus(N)
        if a.is_zero() or b.is_zero():
            raise ValueError("a and b must be nonzero")
        return cls(l, m, uni_to_biv(a, l, m), uni_to_biv(b, l, m), "coprime-bb", a, b)

    @classmethod
    def from_json(cls, doc: dict | str) -> CodeSpec:
        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            l, m, a, b = int(doc["l"]), int(doc["m"]), doc["a"], doc["b"]
        except KeyError as exc:
            raise ValueError(f"code spec missing field {exc}") from None
        form = doc.get("form", "xy")
        if form == "xy":
            return cls.xy(l, m, a, b)
        if form == "pi":
            return cls.pi(l, m, a, b)
        raise ValueError(f"unknown form {form!r}")

    def to_json(self) -> dict:
        if self.origin == "coprime-bb":
            return {"l": self.l, "m": self.m, "a": format_uni(self.a_uni),
                    "b": format_uni(self.b_uni), "form": "pi"}
        return {"l": self.l, "m": self.m, "a": format_biv(self.a), "b": format_biv(self.b),
                "form": "xy"}

    @property
    def n(self) -> int:
        return 2 * self.l * self.m

    def _with(self, a: BivPoly, b: BivPoly, a_uni=None, b_uni=None) -> CodeSpec:
        if self.origin == "coprime-bb":
            return CodeSpec(self.l, self.m, a, b, "coprime-bb", a_uni, b_uni)
        return CodeSpec(self.l, self.m, a, b)

    def transform(self, which: int) -> CodeSpec:
        """Companion code: 1 ``(a, b)``, 2 ``(a^T, b^T)``, 3 ``(b, a)``,
        4 ``(b^T, a^T)``, 5 ``(a^T, b)``.

        Codes 1-4 always share ``[[n, k, d]]``; code 5 need not.
        """
        aT, bT = self.a.transpose(), self.b.transpose()
        if self.origin == "coprime-bb":
            au, bu = self.a_uni, self.b_uni
            auT, buT = au.transpose(), bu.transpose()
        else:
            au = bu = auT = buT = None
        table = {
            1: (self.a, self.b, au, bu),
            2: (aT, bT, auT, buT),
            3: (self.b, self.a, bu, au),
            4: (bT, aT, buT, auT),
            5: (aT, self.b, auT, bu),
        }
        if which not in table:
            raise ValueError(f"transform must be 1..5, got {which}")
        return self._with(*table[which])


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    d_upper: int | None = None
    d_exact: int | None = None

    def __post_init__(self):
        if self.k % 2 or not 0 <= self.k <= self.n:
            raise ValueError(f"invalid dimension k={self.k} for n={self.n}")
        if self.d_upper is not None and self.d_exact is not None and self.d_exact > self.d_upper:
            raise ValueError("exact distance exceeds upper bound")


@dataclass(frozen=True)
class ParityChecks:
    h_x: BinMatrix
    h_z: BinMatrix
    spec: CodeSpec | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return self.h_x.cols


def monomial_matrix(i: int, j: int, l: int, m: int) -> BinMatrix:
    """``S_l^i (x) S_m^j``, the matrix of the monomial ``x^i y^j``."""
    if not (0 <= i < l and 0 <= j < m):
        raise ValueError(f"exponent ({i}, {j}) out of range for l={l}, m={m}")
    return BinMatrix.from_dense(_monomial_dense(i, j, l, m))


def _monomial_dense(i: int, j: int, l: int, m: int) -> np.ndarray:
    u, v = np.divmod(np.arange(l * m), m)
    out = np.zeros((l * m, l * m), dtype=np.uint8)
    out[np.arange(l * m), ((u + i) % l) * m + (v + j) % m] = 1
    return out


def poly_matrix_dense(p: BivPoly) -> np.ndarray:
    lm = p.l * p.m
    out = np.zeros((lm, lm), dtype=np.uint8)
    for i, j in p.terms:
        out ^= _monomial_dense(i, j, p.l, p.m)
    return out


def poly_matrix(p: BivPoly) -> BinMatrix:
    return BinMatrix.from_dense(poly_matrix_dense(p))


def build_checks(spec: CodeSpec) -> ParityChecks:
    """``H_X = [A|B]`` and ``H_Z = [B^T|A^T]``."""
    A = poly_matrix_dense(spec.a)
    B = poly_matrix_dense(spec.b)
    h_x = BinMatrix.from_dense(np.hstack([A, B]))
    h_z = BinMatrix.from_dense(np.hstack([B.T, A.T]))
    if not (h_x @ h_z.T).is_zero():
        raise CodeIntegrityError("H_X H_Z^T != 0")
    return ParityChecks(h_x, h_z, spec)


def dimension(pc: ParityChecks) -> int:
    """``k = n - 2 rank(H_X)``, after checking ``rank(H_X) = rank(H_Z)``."""
    rx, rz = gf2.rank(pc.h_x), gf2.rank(pc.h_z)
    if rx != rz:
        raise CodeIntegrityError(f"rank(H_X)={rx} differs from rank(H_Z)={rz}")
    return pc.n - 2 * rx


def gcd_with_modulus(a: UniPoly, b: UniPoly, N: int) -> UniPoly:
    if a.is_zero() or b.is_zero():
        raise ValueError("zero polynomial has no defined gcd here")
    return poly_gcd(a.with_modulus(None), b.with_modulus(None), circulant_modulus(N))


def dimension_coprime(a: UniPoly, b: UniPoly, N: int) -> int:
    """``k = 2 deg gcd(a, b, pi^N + 1)``."""
    return 2 * gcd_with_modulus(a, b, N).degree


def code_params(spec: CodeSpec) -> CodeParams:
    return CodeParams(spec.n, dimension(build_checks(spec)))


def tanner_components(pc: ParityChecks, checks: Literal["both", "x", "z"] = "both") -> int:
    """Number of connected components of the Tanner graph."""
    blocks = {"both": [pc.h_x, pc.h_z], "x": [pc.h_x], "z": [pc.h_z]}[checks]
    H = np.vstack([b.to_dense() for b in blocks])
    n_checks, n = H.shape
    r, c = np.nonzero(H)
    size = n + n_checks
    adj = coo_matrix((np.ones(r.size, dtype=np.int8), (n + r, c)), shape=(size, size))
    count, _ = connected_components(adj, directed=False)
    return int(count)


def is_connected(spec: CodeSpec | ParityChecks, checks: Literal["both", "x", "z"] = "both") -> bool:
    pc = spec if isinstance(spec, ParityChecks) else build_checks(spec)
    return tanner_components(pc, checks) == 1


def is_connected_support(spec: CodeSpec) -> bool:
    """Connectivity from term supports alone.

    Check-to-check moves in the Tanner graph shift by differences of two
    terms of ``a`` or of two terms of ``b``; the graph is connected exactly
    when those differences generate ``Z_l x Z_m``.
    """
    gens = set()
    for poly in (spec.a, spec.b):
        terms = sorted(poly.terms)
        for (i0, j0), (i1, j1) in zip(terms, terms[1:]):
            gens.add(((i1 - i0) % spec.l, (j1 - j0) % spec.m))
    reached = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        i, j = frontier.pop()
        for gi, gj in gens:
            for s in (1, -1):
                nxt = ((i + s * gi) % spec.l, (j + s * gj) % spec.m)
                if nxt not in reached:
                    reached.add(nxt)
                    frontier.append(nxt)
    return len(reached) == spec.l * spec.m


def univariate_image(spec: CodeSpec) -> tuple[UniPoly, UniPoly]:
    """``(a(pi), b(pi))`` for a spec with coprime ``l``, ``m``."""
    if spec.a_uni is not None:
        return spec.a_uni, spec.b_uni
    return biv_to_uni(spec.a), biv_to_uni(spec.b)


# ---------------------------------------------------------------------------
# matrix export

MatrixFormat = Literal["alist", "dense"]


def matrix_to_alist(M: BinMatrix) -> str:
    """Sparse alist text: sizes, max weights, weights, then 1-based supports."""
    D = M.to_dense()
    rows, cols = D.shape
    col_sup = [np.flatnonzero(D[:, j]) + 1 for j in range(cols)]
    row_sup = [np.flatnonzero(D[i]) + 1 for i in range(rows)]
    cw = [len(s) for s in col_sup]
    rw = [len(s) for s in row_sup]
    lines = [f"{cols} {rows}", f"{max(cw, default=0)} {max(rw, default=0)}",
             " ".join(map(str, cw)), " ".join(map(str, rw))]
    lines += [" ".join(map(str, s)) for s in col_sup]
    lines += [" ".join(map(str, s)) for s in row_sup]
    return "\n".join(lines) + "\n"


def matrix_from_alist(text: str) -> BinMatrix:
    lines = text.lstrip("\n").split("\n")
    cols, rows = map(int, lines[0].split())
    lines += [""] * max(0, 4 + cols + rows - len(lines))
    cw = [int(t) for t in lines[2].split()]
    rw = [int(t) for t in lines[3].split()]
    if len(cw) != cols or len(rw) != rows:
        raise ValueError("alist weight lines do not match the declared size")
    D = np.zeros((rows, cols), dtype=np.uint8)
    for j in range(cols):
        sup = [int(t) - 1 for t in lines[4 + j].split()]
        if len(sup) != cw[j]:
            raise ValueError(f"alist column {j + 1} support does not match its weight")
        D[sup, j] = 1
    for i in range(rows):
        sup = [int(t) - 1 for t in lines[4 + cols + i].split()]
        if sorted(sup) != list(np.flatnonzero(D[i])):
            raise ValueError(f"alist row {i + 1} disagrees with the column lists")
    return BinMatrix.from_dense(D)


def matrix_to_dense_text(M: BinMatrix) -> str:
    return "".join("".join("1" if x else "0" for x in row) + "\n" for row in M.to_dense())


def matrix_from_dense_text(text: str) -> BinMatrix:
    rows = [ln.replace(" ", "") for ln in text.strip("\n").split("\n") if ln.strip()]
    if not rows or any(set(r) - {"0", "1"} for r in rows):
        raise ValueError("dense matrix text must contain only 0/1 rows")
    if len({len(r) for r in rows}) != 1:
        raise ValueError("dense matrix rows have unequal lengths")
    return BinMatrix.from_dense(np.array([[c == "1" for c in r] for r in rows], dtype=np.uint8))


def checks_to_text(pc: ParityChecks, fmt: MatrixFormat = "alist") -> str:
    """Both check matrices in one document with ``[h_x]``/``[h_z]`` sections."""
    dump = {"alist": matrix_to_alist, "dense": matrix_to_dense_text}[fmt]
    head = f"# format {fmt}\n"
    if pc.spec is not None:
        head += f"# spec {json.dumps(pc.spec.to_json())}\n"
    return head + "[h_x]\n" + dump(pc.h_x) + "[h_z]\n" + dump(pc.h_z)


def checks_from_text(text: str) -> ParityChecks:
    fmt, spec, section, parts = "alist", None, None, {"h_x": [], "h_z": []}
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("# format"):
            fmt = s.split()[-1]
        elif s.startswith("# spec"):
            spec = CodeSpec.from_json(s[len("# spec"):].strip())
        elif s in ("[h_x]", "[h_z]"):
            section = s[1:-1]
        elif not s.startswith("#"):
            if section is None:
                if not s:
                    continue
                raise ValueError("matrix data before any [h_x]/[h_z] section")
            parts[section].append(line)
    load = {"alist": matrix_from_alist, "dense": matrix_from_dense_text}.get(fmt)
    if load is None:
        raise ValueError(f"unknown matrix format {fmt!r}")
    h_x, h_z = (load("\n".join(parts[k])) for k in ("h_x", "h_z"))
    if not (h_x @ h_z.T).is_zero():
        raise CodeIntegrityError("loaded matrices violate H_X H_Z^T = 0")
    return ParityChecks(h_x, h_z, spec)

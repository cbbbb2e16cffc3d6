"""Exact integer lattices: Hermite/Smith normal forms, kernels, indices.

Matrices are plain ``list[list[int]]`` (row-major) and every computation is
done with Python integers, so nothing overflows.  Lattices are row spans.

The Hermite normal form used throughout is row-style: upper echelon,
positive pivots, and every entry above a pivot reduced into ``[0, pivot)``.
Two lattices are equal exactly when their bases are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import NotSublattice

Matrix = list[list[int]]


class _Infinite:
    """Marker for the index of a sublattice of smaller rank."""

    _instance: _Infinite | None = None

    def __new__(cls) -> _Infinite:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITE"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _echelon(rows: Iterable[Sequence[int]], ncols: int) -> tuple[Matrix, list[int]]:
    """Row-style HNF of the given rows; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        if r == len(work):
            break
        cands = [i for i in range(r, len(work)) if work[i][col]]
        if not cands:
            continue
        k = min(cands, key=lambda i: abs(work[i][col]))
        work[r], work[k] = work[k], work[r]
        p = work[r]
        for i in range(r + 1, len(work)):
            ri = work[i]
            b = ri[col]
            if not b:
                continue
            a = p[col]
            if b % a == 0:
                q = b // a
                ri[col:] = [x - q * y for x, y in zip(ri[col:], p[col:])]
            else:
                g, s, t = xgcd(a, b)
                ag, bg = a // g, b // g
                tail_p, tail_i = p[col:], ri[col:]
                p[col:] = [s * x + t * y for x, y in zip(tail_p, tail_i)]
                ri[col:] = [ag * y - bg * x for x, y in zip(tail_p, tail_i)]
        if p[col] < 0:
            p[col:] = [-x for x in p[col:]]
        pv = p[col]
        for j in range(r):
            q = work[j][col] // pv
            if q:
                rj = work[j]
                rj[col:] = [x - q * y for x, y in zip(rj[col:], p[col:])]
        pivots.append(col)
        r += 1
    return work[:r], pivots


def hnf(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Canonical row-style Hermite normal form of ``m``.

    The result has the same shape as ``m``; zero rows are moved to the bottom.
    """
    if ncols is None:
        ncols = len(m[0]) if m else 0
    rows, _ = _echelon(m, ncols)
    return rows + [[0] * ncols for _ in range(len(m) - len(rows))]


def snf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form: returns ``(U, D, V)`` with ``U*m*V == D``.

    ``U`` and ``V`` are unimodular and the diagonal entries of ``D`` are
    non-negative, each dividing the next.
    """
    nr = len(m)
    nc = len(m[0]) if m else 0
    d = [list(r) for r in m]
    u = identity(nr)
    v = identity(nc)

    def row_op(dst: int, src: int, q: int) -> None:
        # row dst -= q * row src
        d[dst] = [x - q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def col_op(dst: int, src: int, q: int) -> None:
        for row in d:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    for t in range(min(nr, nc)):
        entries = [(abs(d[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if d[i][j]]
        if not entries:
            break
        _, i0, j0 = min(entries)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            dirty = False
            for i in range(t + 1, nr):
                if d[i][t]:
                    row_op(i, t, d[i][t] // d[t][t])
                    if d[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if d[t][j]:
                    col_op(j, t, d[t][j] // d[t][t])
                    if d[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            piv = d[t][t]
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if d[i][j] % piv),
                None,
            )
            if bad is None:
                break
            # pull a non-divisible row into row t and keep reducing
            row_op(t, bad, -1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v


@dataclass(frozen=True)
class IntLattice:
    """Sublattice of ``Z^ambient_rank`` stored as its canonical HNF basis."""

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Integer coefficients of ``v`` in the basis, or None if ``v`` is not in the lattice."""
        rest = list(v)
        coeffs = []
        for row, col in zip(self.basis, self.pivots):
            q, r = divmod(rest[col], row[col])
            if r:
                return None
            if q:
                rest[col:] = [x - q * y for x, y in zip(rest[col:], row[col:])]
            coeffs.append(q)
        if any(rest):
            return None
        return coeffs

    def __contains__(self, v: Sequence[int]) -> bool:
        return self.coordinates(v) is not None

    def contains(self, other: IntLattice) -> bool:
        return all(row in self for row in other.basis)

    def __add__(self, other: IntLattice) -> IntLattice:
        return lattice_from(list(self.basis) + list(other.basis), self.ambient_rank)

    def scaled(self, k: int) -> IntLattice:
        return lattice_from([[k * x for x in row] for row in self.basis], self.ambient_rank)

    def is_full(self) -> bool:
        return self.rank == self.ambient_rank and all(
            row[c] == 1 for row, c in zip(self.basis, self.pivots)
        )


def lattice_from(generators: Iterable[Sequence[int]], ambient_rank: int) -> IntLattice:
    rows, _ = _echelon(generators, ambient_rank)
    for row in rows:
        if len(row) != ambient_rank:
            raise ValueError(f"generator of length {len(row)} in Z^{ambient_rank}")
    return IntLattice(ambient_rank, tuple(tuple(r) for r in rows))


def full_lattice(r: int) -> IntLattice:
    return IntLattice(r, tuple(tuple(row) for row in identity(r)))


def zero_lattice(r: int) -> IntLattice:
    return IntLattice(r, ())


def index(sup: IntLattice, sub: IntLattice) -> int | _Infinite:
    """Group index ``[sup : sub]``; INFINITE when ``sub`` has smaller rank."""
    coords = []
    for row in sub.basis:
        c = sup.coordinates(row)
        if c is None:
            raise NotSublattice(f"vector {row} is not in the ambient lattice")
        coords.append(c)
    if sub.rank < sup.rank:
        return INFINITE
    rows, _ = _echelon(coords, sup.rank)
    out = 1
    for i, row in enumerate(rows):
        out *= row[i]
    return out


def member(lat: IntLattice, v: Sequence[int]) -> bool:
    return v in lat


def saturate(lat: IntLattice) -> IntLattice:
    """Smallest saturated lattice containing ``lat`` (its Q-span intersected with Z^r)."""
    b = [list(row) for row in lat.basis]
    d = len(b)
    if d == 0:
        return lat
    # Column HNF: b * V = [T | 0] with T lower triangular, T = w^T.
    w, _ = _echelon(transpose(b), d)
    # Solve T * y = b by forward substitution; rows of y span the saturation.
    y: Matrix = []
    for k in range(d):
        acc = list(b[k])
        for j in range(k):
            c = w[j][k]
            if c:
                acc = [x - c * z for x, z in zip(acc, y[j])]
        piv = w[k][k]
        row = []
        for x in acc:
            q, r = divmod(x, piv)
            if r:
                raise ArithmeticError("saturation produced a non-integral vector")
            row.append(q)
        y.append(row)
    return lattice_from(y, lat.ambient_rank)


def _nullspace_generators(m: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Integer vectors spanning the rational kernel of ``m`` (not yet saturated)."""
    work = [list(r) for r in m if any(r)]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        k = next((i for i in range(r, len(work)) if work[i][col]), None)
        if k is None:
            continue
        work[r], work[k] = work[k], work[r]
        p = work[r]
        a = p[col]
        for i in range(len(work)):
            if i == r or not work[i][col]:
                continue
            b = work[i][col]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            row = [fa * x - fb * y for x, y in zip(work[i], p)]
            c = reduce(gcd, row, 0)
            work[i] = [x // c for x in row] if c > 1 else row
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    work = work[:r]
    pivot_set = set(pivots)
    gens = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        used = [(k, row) for k, row in enumerate(work) if row[f]]
        scale = lcm(*(row[pivots[k]] for k, row in used)) if used else 1
        vec = [0] * ncols
        vec[f] = scale
        for k, row in used:
            vec[pivots[k]] = -row[f] * scale // row[pivots[k]]
        gens.append(vec)
    return gens


def kernel(m: Sequence[Sequence[int]], ncols: int | None = None) -> IntLattice:
    """Saturated basis of ``{x in Z^ncols : m x = 0}``."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    gens = _nullspace_generators(m, ncols)
    return saturate(lattice_from(gens, ncols))


def fixed_sublattice(actions: Sequence[Sequence[Sequence[int]]], dim: int | None = None) -> IntLattice:
    """Vectors fixed by every matrix in ``actions`` (acting on column vectors)."""
    if dim is None:
        dim = len(actions[0]) if actions else 0
    stacked: Matrix = []
    for mat in actions:
        if len(mat) != dim or any(len(row) != dim for row in mat):
            raise ValueError("actions must be square matrices of equal size")
        for i, row in enumerate(mat):
            stacked.append([x - (i == j) for j, x in enumerate(row)])
    if not stacked:
        return full_lattice(dim)
    return kernel(stacked, dim)


@dataclass(frozen=True)
class RatLattice:
    """Lattice in ``Q^ambient_rank`` written as ``numerator / denominator``."""

    ambient_rank: int
    numerator: IntLattice
    denominator: int

    @property
    def rank(self) -> int:
        return self.numerator.rank

    @property
    def basis(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.denominator) for x in row] for row in self.numerator.basis]

    def __contains__(self, v: Sequence[Fraction | int]) -> bool:
        scaled = [Fraction(x) * self.denominator for x in v]
        if any(x.denominator != 1 for x in scaled):
            return False
        return [int(x) for x in scaled] in self.numerator

    def contains_integers(self) -> bool:
        """True when ``Z^ambient_rank`` lies inside the lattice."""
        return all(row in self for row in identity(self.ambient_rank))


def rat_lattice_from(rows: Iterable[Sequence[Fraction | int]], ambient_rank: int) -> RatLattice:
    rows = [[Fraction(x) for x in row] for row in rows]
    den = lcm(1, *(x.denominator for row in rows for x in row))
    num = lattice_from([[int(x * den) for x in row] for row in rows], ambient_rank)
    content = reduce(gcd, (x for row in num.basis for x in row), 0)
    g = gcd(den, content)
    if g > 1:
        num = IntLattice(ambient_rank, tuple(tuple(x // g for x in row) for row in num.basis))
        den //= g
    return RatLattice(ambient_rank, num, den)


def preimage_lattice(s: Sequence[Sequence[int]], ncols: int | None = None) -> RatLattice:
    """All ``c`` in ``Q^ncols`` with ``s c`` integral.

    This is the dual of the row lattice of ``s``, so ``s`` must have full
    column rank (otherwise the preimage contains a line and is not a lattice).
    """
    if ncols is None:
        ncols = len(s[0]) if s else 0
    rows, _ = _echelon(s, ncols)
    if len(rows) != ncols:
        raise ValueError("preimage is not a lattice: matrix lacks full column rank")
    # Dual basis = rows of (B^-1)^T with B upper triangular.
    inv = [[Fraction(0)] * ncols for _ in range(ncols)]
    for i in reversed(range(ncols)):
        for j in range(ncols):
            acc = Fraction(int(i == j))
            for k in range(i + 1, ncols):
                if rows[i][k]:
                    acc -= rows[i][k] * inv[k][j]
            inv[i][j] = acc / rows[i][i]
    return rat_lattice_from(transpose(inv), ncols)

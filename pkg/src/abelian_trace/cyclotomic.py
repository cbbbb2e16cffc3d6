"""Exact arithmetic in the cyclotomic field Q(zeta_n).

Elements are integer coordinate vectors over the power basis
``1, zeta, ..., zeta^(phi(n)-1)`` together with one positive denominator.
Reduction goes through a per-conductor table giving every power
``zeta^k`` (``0 <= k < n``) in that basis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import ConductorMismatch, NotCoprime, NotWildShape, check_conductor


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def v2(n: int) -> int:
    return (n & -n).bit_length() - 1


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    """Exact division of integer polynomials (coefficients low to high, den monic)."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in reversed(range(len(out))):
        c = num[k + dd]
        out[k] = c
        if c:
            for i, d in enumerate(den):
                num[k + i] -= c * d
    if any(num[:dd]):
        raise ArithmeticError("polynomial division is not exact")
    return out


@lru_cache(maxsize=None)
def cyclo_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant term first."""
    if n < 1:
        raise ValueError("n must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divexact(num, cyclo_poly(d))
    return tuple(num)


@dataclass(frozen=True)
class ReductionTable:
    n: int
    phi_n_coeffs: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]  # rows[k] = zeta^k over the power basis, 0 <= k < n

    @property
    def phi(self) -> int:
        return len(self.phi_n_coeffs) - 1


@lru_cache(maxsize=None)
def reduction_table(n: int) -> ReductionTable:
    poly = cyclo_poly(n)
    phi = len(poly) - 1
    rows = []
    cur = [1] + [0] * (phi - 1)
    for _ in range(n):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, poly)]
    return ReductionTable(n, poly, tuple(rows))


@dataclass(frozen=True)
class CycElt:
    """An element ``sum(coeffs[k] * zeta_n^k) / den`` of Q(zeta_n)."""

    n: int
    coeffs: tuple[int, ...]
    den: int = 1

    @classmethod
    def make(cls, n: int, coeffs: Iterable[int], den: int = 1) -> CycElt:
        coeffs = tuple(coeffs)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            coeffs, den = tuple(-c for c in coeffs), -den
        g = reduce(gcd, coeffs, den)
        if g > 1:
            coeffs, den = tuple(c // g for c in coeffs), den // g
        return cls(n, coeffs, den)

    @classmethod
    def from_rational(cls, n: int, q: Fraction | int) -> CycElt:
        q = Fraction(q)
        phi = euler_phi(n)
        return cls.make(n, [q.numerator] + [0] * (phi - 1), q.denominator)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> CycElt:
        return cls(n, reduction_table(n).rows[k % n])

    @property
    def is_integral_vector(self) -> bool:
        return self.den == 1

    @property
    def vector(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.coeffs]

    def _check(self, other: CycElt) -> None:
        if other.n != self.n:
            raise ConductorMismatch(f"elements of Q(zeta_{self.n}) and Q(zeta_{other.n})")

    def __add__(self, other: CycElt | int) -> CycElt:
        if isinstance(other, int):
            other = CycElt.from_rational(self.n, other)
        self._check(other)
        d = self.den * other.den
        return CycElt.make(
            self.n,
            (a * other.den + b * self.den for a, b in zip(self.coeffs, other.coeffs)),
            d,
        )

    __radd__ = __add__

    def __neg__(self) -> CycElt:
        return CycElt(self.n, tuple(-c for c in self.coeffs), self.den)

    def __sub__(self, other: CycElt | int) -> CycElt:
        return self + (-other)

    def scale(self, q: Fraction | int) -> CycElt:
        q = Fraction(q)
        return CycElt.make(self.n, (c * q.numerator for c in self.coeffs), self.den * q.denominator)

    def __mul__(self, other: CycElt | int | Fraction) -> CycElt:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(self, other)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            if mono and abs(c) == 1:
                term = ("-" if c < 0 else "") + mono
            else:
                term = f"{c}*{mono}" if mono else str(c)
            terms.append(term)
        body = " + ".join(terms).replace("+ -", "- ") or "0"
        return body if self.den == 1 else f"({body})/{self.den}"


def _reduce_dense(n: int, dense: Sequence[int]) -> list[int]:
    """Reduce a coefficient list over arbitrary exponents to the power basis."""
    table = reduction_table(n)
    phi = table.phi
    out = [0] * phi
    for k, c in enumerate(dense):
        if not c:
            continue
        k %= n
        if k < phi:
            out[k] += c
        else:
            for i, x in enumerate(table.rows[k]):
                if x:
                    out[i] += c * x
    return out


def mul(a: CycElt, b: CycElt) -> CycElt:
    a._check(b)
    prod = [0] * (2 * len(a.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                if y:
                    prod[i + j] += x * y
    return CycElt.make(a.n, _reduce_dense(a.n, prod), a.den * b.den)


def galois_vector(n: int, k: int, v: Sequence[int]) -> list[int]:
    """Apply ``zeta -> zeta^k`` to an integer coordinate vector (no coprimality check)."""
    rows = reduction_table(n).rows
    out = [0] * len(v)
    for j, c in enumerate(v):
        if c:
            for i, x in enumerate(rows[(j * k) % n]):
                if x:
                    out[i] += c * x
    return out


def galois_matrix(n: int, k: int) -> list[list[int]]:
    """Matrix of ``zeta -> zeta^k`` acting on column coordinate vectors."""
    rows = reduction_table(n).rows
    phi = euler_phi(n)
    cols = [rows[(j * k) % n] for j in range(phi)]
    return [[cols[j][i] for j in range(phi)] for i in range(phi)]


def galois_apply(k: int, x: CycElt) -> CycElt:
    if gcd(k, x.n) != 1:
        raise NotCoprime(f"{k} is not a unit modulo {x.n}")
    return CycElt(x.n, tuple(galois_vector(x.n, k, x.coeffs)), x.den)


def trace_vector(n: int, group: Iterable[int], v: Sequence[int]) -> list[int]:
    out = [0] * len(v)
    for h in group:
        out = [a + b for a, b in zip(out, galois_vector(n, h, v))]
    return out


def trace_over_subgroup(x: CycElt, group: Iterable[int]) -> CycElt:
    """Sum of the conjugates of ``x`` over the automorphisms indexed by ``group``."""
    return CycElt.make(x.n, trace_vector(x.n, group, x.coeffs), x.den)


def embed(x: CycElt, n: int) -> CycElt:
    """Map ``x`` in Q(zeta_d) into Q(zeta_n) via ``zeta_d -> zeta_n^(n/d)``, d | n."""
    if n % x.n:
        raise ConductorMismatch(f"Q(zeta_{x.n}) is not contained in Q(zeta_{n})")
    step = n // x.n
    dense = [0] * (step * (len(x.coeffs) - 1) + 1)
    for k, c in enumerate(x.coeffs):
        dense[k * step] = c
    return CycElt.make(n, _reduce_dense(n, dense), x.den)


@dataclass(frozen=True)
class TensorSplit:
    """Change of basis between the zeta_n power basis and the mixed basis.

    The mixed basis element ``(i, j)`` (``0 <= i < 2^(e-1)``, ``0 <= j < phi(m)``)
    is ``zeta_n^c`` with ``c = i mod 2^e`` and ``c = j mod m``, i.e. it is
    ``zeta_{2^e}^i * zeta_m^j`` for the roots of unity ``zeta_n^(CRT(1, 0))``
    and ``zeta_n^(CRT(0, 1))``.  Mixed coordinates are indexed ``i*phi(m) + j``.
    """

    n: int
    e: int
    m: int
    forward: tuple[tuple[int, ...], ...]  # power coords -> mixed coords
    backward: tuple[tuple[int, ...], ...]  # mixed coords -> power coords

    @property
    def phi_m(self) -> int:
        return euler_phi(self.m)

    def to_mixed(self, v: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(row, v)) for row in self.forward]

    def to_power(self, v: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(row, v)) for row in self.backward]


def crt_exponent(i: int, j: int, two_power: int, m: int) -> int:
    """Smallest c >= 0 with c = i mod two_power and c = j mod m."""
    inv = pow(two_power, -1, m) if m > 1 else 0
    c = i % two_power + two_power * (((j - i) * inv) % m if m > 1 else 0)
    return c % (two_power * m)


@lru_cache(maxsize=None)
def tensor_split(n: int) -> TensorSplit:
    check_conductor(n)
    e = v2(n)
    if e < 3:
        raise NotWildShape(f"tensor split needs 8 | n, got n = {n}")
    q = 1 << e
    m = n >> e
    half = q // 2
    phi, phi_m = euler_phi(n), euler_phi(m)
    rows_n = reduction_table(n).rows
    rows_m = reduction_table(m).rows
    back_cols = [
        rows_n[crt_exponent(i, j, q, m)] for i in range(half) for j in range(phi_m)
    ]
    backward = tuple(tuple(back_cols[c][r] for c in range(phi)) for r in range(phi))
    fwd_cols = []
    for k in range(phi):
        a, b = k % q, k % m
        sign = 1
        if a >= half:
            a, sign = a - half, -1
        col = [0] * phi
        for j, x in enumerate(rows_m[b]):
            col[a * phi_m + j] = sign * x
        fwd_cols.append(col)
    forward = tuple(tuple(fwd_cols[c][r] for c in range(phi)) for r in range(phi))
    return TensorSplit(n, e, m, forward, backward)


class Variant(enum.Enum):
    REAL = "real"
    SKEW = "skew"


def two_power_basis(variant: Variant, e: int) -> list[CycElt]:
    """The sets A (REAL) and B (SKEW) inside Q(zeta_{2^e}).

    A holds ``zeta^j + zeta^-j`` for ``1 <= j < 2^(e-2)``; B multiplies the
    odd-j members by ``i = zeta^(2^(e-2))``.
    """
    if e < 3:
        raise NotWildShape(f"two-power bases need e >= 3, got {e}")
    n = 1 << e
    i_unit = CycElt.zeta(n, 1 << (e - 2))
    out = []
    for j in range(1, 1 << (e - 2)):
        x = CycElt.zeta(n, j) + CycElt.zeta(n, -j)
        if variant is Variant.SKEW and j % 2:
            x = mul(i_unit, x)
        out.append(x)
    return out

"""Trace images, the index I(L/K), the adjusted trace and Leopoldt's generator.

``index_I`` is computed from lattices alone; ``predicted_I`` evaluates the
closed formula from the character data.  Comparing the two is the point of
the verification harness, so neither one calls the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import chargroup as cg
from .cyclotomic import (
    CycElt,
    TensorSplit,
    Variant,
    embed,
    euler_phi,
    factorize,
    galois_vector,
    mul,
    reduction_table,
    tensor_split,
    trace_vector,
    two_power_basis,
)
from .errors import ConductorMismatch, NotFullConductor, NotSubfield, NotWild
from .fields import (
    AbelianField,
    cyclotomic_field,
    cyclotomic_is_wild_over,
    intersect,
    is_wild_extension,
    ring_of_integers,
    subcyclotomic,
    wild_compositum_L,
)
from .lattice import INFINITE, IntLattice, _Infinite, RatLattice, index, lattice_from, preimage_lattice


def coset_representatives(big: cg.Subgroup, small: cg.Subgroup) -> list[int]:
    """Smallest element of each coset of ``small`` in ``big``, sorted."""
    n = big.n
    seen: set[int] = set()
    reps = []
    for a in big.elements:
        if a in seen:
            continue
        reps.append(a)
        seen.update(a * h % n for h in small.elements)
    return reps


def _check_pair(l: AbelianField, k: AbelianField) -> None:
    if l.n != k.n:
        raise ConductorMismatch(f"fields live in Q(zeta_{l.n}) and Q(zeta_{k.n})")
    if not l.H.issubset(k.H):
        raise NotSubfield("the base field is not contained in the top field")


def relative_trace(l: AbelianField, k: AbelianField, v: Sequence[int]) -> list[int]:
    """T_{L/K} of an L-element given by power-basis coordinates."""
    _check_pair(l, k)
    return trace_vector(k.n, coset_representatives(k.H, l.H), v)


def trace_lattice(l: AbelianField, k: AbelianField) -> IntLattice:
    """The image T_{L/K}(O_L) in ambient power-basis coordinates."""
    _check_pair(l, k)
    reps = coset_representatives(k.H, l.H)
    ol = ring_of_integers(l).lattice
    return lattice_from((trace_vector(k.n, reps, b) for b in ol.basis), ol.ambient_rank)


def _check_equal_conductor(l: AbelianField, k: AbelianField) -> None:
    _check_pair(l, k)
    for f in (l, k):
        if not f.full_conductor:
            raise ConductorMismatch(
                f"field {f.describe()} does not have conductor exactly {f.n}"
            )


def trace_index(l: AbelianField, k: AbelianField) -> int:
    """[O_K : T_{L/K}(O_L)] for any pair K inside L in a common ambient field."""
    out = index(ring_of_integers(k).lattice, trace_lattice(l, k))
    assert out is not INFINITE, "the trace is surjective over Q"
    return out


def index_I(l: AbelianField, k: AbelianField) -> int:
    """I(L/K) for fields of equal conductor, by lattice computation."""
    _check_equal_conductor(l, k)
    return trace_index(l, k)


def predicted_I(l: AbelianField, k: AbelianField) -> int:
    """The closed formula: 2^[K cap Q(zeta_m) : Q] when L/K is wild, else 1."""
    _check_equal_conductor(l, k)
    if not is_wild_extension(l, k):
        return 1
    e, m = k.e, k.m
    via_intersection = 2 ** intersect(k, subcyclotomic(k.n, m)).degree
    q, r = divmod(k.degree, 2 ** (e - 2))
    if r or via_intersection != 2**q:
        raise ArithmeticError(
            f"formula forms disagree for {k.describe()}: {via_intersection} vs 2^({k.degree}/{2 ** (e - 2)})"
        )
    return via_intersection


def two_part_variant(k: AbelianField) -> Variant:
    """Whether K_2 is Q(zeta + 1/zeta) (REAL) or Q(i(zeta + 1/zeta)) (SKEW)."""
    x2 = cg.projection_p(k.chars, 2)
    if cg.psi(k.n, 2) in x2:
        return Variant.REAL
    if (cg.omega(k.n, 2) * cg.psi(k.n, 2)) in x2:
        return Variant.SKEW
    raise NotWild(f"2-part of {k.describe()} is the full group")


def decompose_DE(k: AbelianField) -> tuple[IntLattice, IntLattice]:
    """Split O_K as D + E with D from O^(m) and E from Span(C) (x) O^(m).

    Raises ArithmeticError if the sum is not direct or does not give O_K.
    """
    if not cyclotomic_is_wild_over(k):
        raise NotWild(f"Q(zeta_{k.n})/K is tame for {k.describe()}")
    n, e, m = k.n, k.e, k.m
    lfield = wild_compositum_L(k)
    reps = coset_representatives(k.H, lfield.H)
    rows = reduction_table(n).rows
    phi = euler_phi(n)
    step = 1 << e
    om = [rows[(step * j) % n] for j in range(euler_phi(m))]
    d = lattice_from((trace_vector(n, reps, b) for b in om), phi)
    c_set = [embed(c, n) for c in two_power_basis(two_part_variant(k), e)]
    e_gens = []
    for c in c_set:
        for b in om:
            prod = mul(c, CycElt(n, b))
            e_gens.append(trace_vector(n, reps, prod.coeffs))
    e_lat = lattice_from(e_gens, phi)
    total = d + e_lat
    if total.rank != d.rank + e_lat.rank:
        raise ArithmeticError("D and E intersect nontrivially")
    if total != ring_of_integers(k).lattice:
        raise ArithmeticError("D + E is not the ring of integers")
    return d, e_lat


@dataclass(frozen=True)
class AdjustedTraceTable:
    field: AbelianField
    split: TensorSplit
    halving_mask: tuple[bool, ...]  # per mixed index: True where the factor is 1/2


@lru_cache(maxsize=None)
def adjusted_trace_table(k: AbelianField) -> AdjustedTraceTable:
    split = tensor_split(k.n)
    phi_m = split.phi_m
    mask = tuple(idx < phi_m for idx in range(euler_phi(k.n)))
    return AdjustedTraceTable(k, split, mask)


def _require_full(k: AbelianField) -> None:
    if not k.full_conductor:
        raise NotFullConductor(
            f"field has conductor {k.conductor}, not its ambient conductor {k.n}"
        )


def adjusted_trace_vector(k: AbelianField, v: Sequence[int]) -> tuple[list[int], int]:
    """Adjusted trace of an integer vector, returned as (numerator vector, denominator)."""
    _require_full(k)
    n = k.n
    full = trace_vector(n, k.H.elements, v)
    if not cyclotomic_is_wild_over(k):
        return full, 1
    table = adjusted_trace_table(k)
    mixed = table.split.to_mixed(v)
    low = [x if half else 0 for x, half in zip(mixed, table.halving_mask)]
    low_trace = trace_vector(n, k.H.elements, table.split.to_power(low))
    return [2 * a - b for a, b in zip(full, low_trace)], 2


def adjusted_trace(k: AbelianField, x: CycElt) -> CycElt:
    if x.n != k.n:
        raise ConductorMismatch(f"element of Q(zeta_{x.n}) for a field in Q(zeta_{k.n})")
    num, den = adjusted_trace_vector(k, x.coeffs)
    return CycElt.make(k.n, num, den * x.den)


def adjusted_trace_image(k: AbelianField) -> IntLattice:
    """Lattice spanned by the adjusted traces of the power basis of Z[zeta_n]."""
    _require_full(k)
    phi = euler_phi(k.n)
    gens = []
    for j in range(phi):
        vec = [0] * phi
        vec[j] = 1
        num, den = adjusted_trace_vector(k, vec)
        if any(a % den for a in num):
            raise ArithmeticError(f"adjusted trace of zeta^{j} is not integral")
        gens.append([a // den for a in num])
    return lattice_from(gens, phi)


def radical(n: int) -> int:
    out = 1
    for p in factorize(n):
        out *= p
    return out


def divisor_set_D(n: int) -> list[int]:
    r = radical(n)
    return [d for d in range(r, n + 1, r) if n % d == 0]


def leopoldt_alpha(k: AbelianField) -> CycElt:
    """Adjusted trace of the sum of zeta_n^(n/d) over d in D(n)."""
    _require_full(k)
    n = k.n
    s = CycElt.from_rational(n, 0)
    for d in divisor_set_D(n):
        s = s + CycElt.zeta(n, n // d)
    alpha = adjusted_trace(k, s)
    if alpha.den != 1 or alpha.coeffs not in ring_of_integers(k).lattice:
        raise ArithmeticError(f"generator {alpha} is not in O_K")
    return alpha


@dataclass(frozen=True)
class GroupAlgebraElt:
    """Element of Q[G/H], one coefficient per coset in ``coset_representatives`` order."""

    field: AbelianField
    coefficients: tuple[Fraction, ...]

    def act(self, x: CycElt) -> CycElt:
        reps = galois_representatives(self.field)
        out = CycElt.from_rational(x.n, 0)
        for c, g in zip(self.coefficients, reps):
            if c:
                out = out + CycElt(x.n, tuple(galois_vector(x.n, g, x.coeffs)), x.den).scale(c)
        return out


def galois_representatives(k: AbelianField) -> list[int]:
    """Coset representatives of G/H for G = (Z/nZ)^x."""
    return coset_representatives(cg.full_subgroup(k.n), k.H)


def action_matrices(k: AbelianField) -> list[list[list[int]]]:
    """For each coset representative g, the matrix of g on the O_K basis (row i = g(b_i))."""
    ok = ring_of_integers(k).lattice
    out = []
    for g in galois_representatives(k):
        rows = []
        for b in ok.basis:
            c = ok.coordinates(galois_vector(k.n, g, b))
            assert c is not None, "O_K is Galois stable"
            rows.append(c)
        out.append(rows)
    return out


@lru_cache(maxsize=1024)
def associated_order(k: AbelianField) -> RatLattice:
    """{gamma in Q[G/H] : gamma(O_K) inside O_K} in coset coordinates."""
    mats = action_matrices(k)
    d = k.degree
    s = [[mat[i][j] for mat in mats] for i in range(d) for j in range(d)]
    return preimage_lattice(s, len(mats))


def associated_order_basis(k: AbelianField) -> list[GroupAlgebraElt]:
    return [GroupAlgebraElt(k, tuple(row)) for row in associated_order(k).basis]


def module_index(k: AbelianField, beta: CycElt) -> int | _Infinite:
    """Index of A_K * beta in O_K for beta in O_K (INFINITE if the rank drops)."""
    ok = ring_of_integers(k).lattice
    images = []
    for gamma in associated_order_basis(k):
        y = gamma.act(beta)
        if y.den != 1 or y.coeffs not in ok:
            raise ArithmeticError("associated order does not preserve O_K")
        images.append(y.coeffs)
    return index(ok, lattice_from(images, ok.ambient_rank))


def leopoldt_index(k: AbelianField) -> int:
    """Index of A_K * alpha in O_K; 1 exactly when alpha generates O_K over A_K."""
    return module_index(k, leopoldt_alpha(k))


def cyclotomic_trace_index(k: AbelianField) -> int:
    """I(Q(zeta_n)/K)."""
    return index_I(cyclotomic_field(k.n), k)


def observed_two_exponent(k: AbelianField) -> int:
    """r with I(Q(zeta_n)/L) = 2^r for L = K_2 Q(zeta_m)."""
    val = cyclotomic_trace_index(wild_compositum_L(k))
    return val.bit_length() - 1


"""Abelian number fields as fixed fields of subgroups of (Z/nZ)^x.

A field is the pair ``(n, H)``: the subfield of Q(zeta_n) fixed by the
automorphisms ``zeta -> zeta^h``, ``h in H``.  Its ring of integers is the
H-fixed part of Z[zeta_n], written in the zeta_n power basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable

from . import chargroup as cg
from .chargroup import CharGroup, Subgroup
from .cyclotomic import euler_phi, galois_matrix, galois_vector, v2
from .errors import AmbientMismatch, ConductorMismatch, NotFullConductor, NotSubfield, check_conductor
from .lattice import IntLattice, fixed_sublattice


@dataclass(frozen=True)
class AbelianField:
    n: int
    H: Subgroup

    @cached_property
    def conductor(self) -> int:
        return cg.conductor(self.H)

    @cached_property
    def degree(self) -> int:
        return euler_phi(self.n) // len(self.H)

    @cached_property
    def chars(self) -> CharGroup:
        return cg.annihilator(self.H)

    @property
    def full_conductor(self) -> bool:
        return self.conductor == self.n

    @property
    def e(self) -> int:
        return v2(self.n)

    @property
    def m(self) -> int:
        return self.n >> v2(self.n)

    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.n, self.H.elements)

    def is_subfield_of(self, other: AbelianField) -> bool:
        if other.n != self.n:
            raise AmbientMismatch(f"fields live in Q(zeta_{self.n}) and Q(zeta_{other.n})")
        return other.H.issubset(self.H)

    def lift(self, n: int) -> AbelianField:
        """The same field viewed inside Q(zeta_n) for a multiple n of the ambient conductor."""
        if n % self.n:
            raise AmbientMismatch(f"{self.n} does not divide {n}")
        check_conductor(n)
        units = cg.unit_group(n).elements
        return AbelianField(n, Subgroup.from_elements(n, (a for a in units if a % self.n in self.H)))

    def describe(self) -> str:
        gens = ",".join(map(str, self.H.generators)) or "-"
        return f"K(n={self.n}, H=<{gens}>, degree={self.degree}, conductor={self.conductor})"


def field_from_subgroup(n: int, generators: Iterable[int]) -> AbelianField:
    check_conductor(n)
    return AbelianField(n, Subgroup.generated(n, generators))


def field_from_chars(x: CharGroup) -> AbelianField:
    return AbelianField(x.n, cg.annihilator(x))


def cyclotomic_field(n: int) -> AbelianField:
    check_conductor(n)
    return AbelianField(n, cg.trivial_subgroup(n))


def rationals(n: int = 1) -> AbelianField:
    check_conductor(n)
    return AbelianField(n, cg.full_subgroup(n))


def subcyclotomic(n: int, d: int) -> AbelianField:
    """Q(zeta_d) inside Q(zeta_n)."""
    return AbelianField(n, cg.congruence_kernel(n, d))


def maximal_real(n: int) -> AbelianField:
    return field_from_subgroup(n, [n - 1])


def full_conductor_fields(n: int) -> list[AbelianField]:
    """All subfields of Q(zeta_n) whose conductor is exactly n, in subgroup order."""
    fields = (AbelianField(n, h) for h in cg.enumerate_subgroups(cg.unit_group(n)))
    return [k for k in fields if k.full_conductor]


@dataclass(frozen=True)
class RingOfIntegers:
    field: AbelianField
    lattice: IntLattice

    @property
    def basis(self) -> tuple[tuple[int, ...], ...]:
        return self.lattice.basis


@lru_cache(maxsize=4096)
def ring_of_integers(k: AbelianField) -> RingOfIntegers:
    """H-fixed sublattice of Z[zeta_n] in power-basis coordinates."""
    phi = euler_phi(k.n)
    gens = k.H.generators
    actions = [galois_matrix(k.n, h) for h in gens]
    lat = fixed_sublattice(actions, phi)
    assert lat.rank == k.degree
    return RingOfIntegers(k, lat)


def is_galois_stable(lat: IntLattice, n: int) -> bool:
    units = cg.unit_group(n)
    return all(
        galois_vector(n, g, row) in lat for g in units.generators for row in lat.basis
    )


def _same_ambient(k1: AbelianField, k2: AbelianField) -> None:
    if k1.n != k2.n:
        raise AmbientMismatch(f"fields live in Q(zeta_{k1.n}) and Q(zeta_{k2.n})")


def compose(k1: AbelianField, k2: AbelianField) -> AbelianField:
    _same_ambient(k1, k2)
    return AbelianField(k1.n, k1.H.meet(k2.H))


def intersect(k1: AbelianField, k2: AbelianField) -> AbelianField:
    _same_ambient(k1, k2)
    return AbelianField(k1.n, k1.H.join(k2.H))


def _require_full(k: AbelianField) -> None:
    if not k.full_conductor:
        raise NotFullConductor(
            f"field has conductor {k.conductor}, not its ambient conductor {k.n}"
        )


def K2_of(k: AbelianField) -> AbelianField:
    """The subfield of Q(zeta_{2^e}) cut out by the 2-part of the characters of k."""
    _require_full(k)
    return field_from_chars(cg.projection_p(k.chars, 2))


def wild_compositum_L(k: AbelianField) -> AbelianField:
    """K_2 * Q(zeta_m), the field of X_2 x X^(m)."""
    _require_full(k)
    x2 = cg.projection_p(k.chars, 2)
    return field_from_chars(x2.join(cg.characters_of_modulus(k.n, k.m)))


def cyclotomic_is_wild_over(k: AbelianField) -> bool:
    """Whether Q(zeta_n)/k is wildly ramified (above 2)."""
    _require_full(k)
    if k.e <= 2:
        return False
    return len(cg.projection_p(k.chars, 2)) != len(cg.block_characters(k.n, 2))


def is_wild_extension(l: AbelianField, k: AbelianField) -> bool:
    """Whether l/k is wildly ramified, for fields of equal conductor with k inside l."""
    if l.n != k.n:
        raise AmbientMismatch(f"fields live in Q(zeta_{l.n}) and Q(zeta_{k.n})")
    if not k.is_subfield_of(l):
        raise NotSubfield("the base field is not contained in the top field")
    if k.conductor != l.conductor:
        raise ConductorMismatch(f"conductors {k.conductor} and {l.conductor} differ")
    return cyclotomic_is_wild_over(k) and not cyclotomic_is_wild_over(l)

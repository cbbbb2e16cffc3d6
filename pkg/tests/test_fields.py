from __future__ import annotations

import pytest

from abelian_trace import chargroup as cg
from abelian_trace.cyclotomic import CycElt, Variant, embed, euler_phi, galois_vector, reduction_table, two_power_basis
from abelian_trace.errors import (
    AmbientMismatch,
    BadConductor,
    ConductorMismatch,
    NotFullConductor,
    NotSubfield,
)
from abelian_trace.fields import (
    AbelianField,
    K2_of,
    compose,
    cyclotomic_field,
    cyclotomic_is_wild_over,
    field_from_subgroup,
    full_conductor_fields,
    intersect,
    is_galois_stable,
    is_wild_extension,
    rationals,
    ring_of_integers,
    wild_compositum_L,
)
from abelian_trace.lattice import full_lattice, lattice_from
from abelian_trace.trace import trace_index

UP_TO_64 = [n for n in range(1, 65) if n % 4 != 2]
UP_TO_40 = [n for n in range(1, 41) if n % 4 != 2]


def all_fields(n: int) -> list[AbelianField]:
    return [AbelianField(n, h) for h in cg.enumerate_subgroups(cg.unit_group(n))]


def power_lattice(n: int, d: int):
    """Z[zeta_d] inside the zeta_n power basis."""
    rows = reduction_table(n).rows
    return lattice_from([rows[(n // d) * j] for j in range(euler_phi(d))], euler_phi(n))


# examples

def test_field_examples():
    k = field_from_subgroup(8, [7])
    assert (k.degree, k.conductor) == (2, 8)
    k = field_from_subgroup(8, [3])
    assert (k.degree, k.conductor) == (2, 8)
    k = field_from_subgroup(15, cg.unit_group(15).elements)
    assert (k.degree, k.conductor) == (1, 1)
    with pytest.raises(BadConductor):
        field_from_subgroup(6, [5])


def test_ring_of_integers_examples():
    assert ring_of_integers(cyclotomic_field(12)).lattice == full_lattice(4)
    assert ring_of_integers(field_from_subgroup(8, [7])).basis == ((1, 0, 0, 0), (0, 1, 0, -1))
    assert ring_of_integers(field_from_subgroup(8, [5])).basis == ((1, 0, 0, 0), (0, 0, 1, 0))


def test_compose_intersect_examples():
    k = field_from_subgroup(8, [7])
    q_i = field_from_subgroup(8, [5])
    assert compose(k, rationals(8)) == k
    assert compose(k, q_i) == cyclotomic_field(8)
    assert intersect(k, q_i) == rationals(8)
    with pytest.raises(AmbientMismatch):
        compose(k, rationals(16))


def test_lift_preserves_field():
    k = field_from_subgroup(8, [7])
    lifted = k.lift(24)
    assert lifted.degree == 2 and lifted.conductor == 8
    # the lifted O_K is O_K pushed through zeta_8 -> zeta_24^3
    emb = [CycElt(8, b) for b in ring_of_integers(k).basis]
    assert lattice_from([embed(x, 24).coeffs for x in emb], 8) == ring_of_integers(lifted).lattice


def test_K2_and_L_examples():
    sqrt2 = field_from_subgroup(8, [7])
    k = compose(sqrt2.lift(24), AbelianField(24, cg.congruence_kernel(24, 3)))
    assert k.full_conductor and k.degree == 4
    assert K2_of(k) == sqrt2.lift(24)
    assert wild_compositum_L(k) == k
    assert K2_of(cyclotomic_field(8)) == cyclotomic_field(8)
    assert K2_of(cyclotomic_field(15)) == rationals(15)
    assert wild_compositum_L(cyclotomic_field(24)) == cyclotomic_field(24)
    assert wild_compositum_L(sqrt2) == sqrt2
    # K = Q(sqrt2, zeta_3) written without the compositum helper
    k2 = field_from_subgroup(24, [7])
    assert k2 == k
    with pytest.raises(NotFullConductor):
        K2_of(field_from_subgroup(8, [5]))


def test_wild_predicate_examples():
    assert cyclotomic_is_wild_over(field_from_subgroup(8, [7]))
    assert not cyclotomic_is_wild_over(cyclotomic_field(8))
    assert not cyclotomic_is_wild_over(field_from_subgroup(15, [14]))
    assert is_wild_extension(cyclotomic_field(8), field_from_subgroup(8, [7]))
    assert not is_wild_extension(cyclotomic_field(15), field_from_subgroup(15, [14]))
    k = field_from_subgroup(16, [15])
    assert not is_wild_extension(k, k)
    with pytest.raises(NotSubfield):
        is_wild_extension(field_from_subgroup(8, [7]), cyclotomic_field(8))
    with pytest.raises(ConductorMismatch):
        is_wild_extension(cyclotomic_field(8), field_from_subgroup(8, [5]))
    with pytest.raises(NotFullConductor):
        cyclotomic_is_wild_over(field_from_subgroup(8, [5]))


# invariants

@pytest.mark.parametrize("n", UP_TO_64)
def test_ring_of_integers_rank_and_stability(n):
    for k in all_fields(n):
        lat = ring_of_integers(k).lattice
        assert lat.rank == k.degree
        assert k.degree * len(k.H) == euler_phi(n)
        assert is_galois_stable(lat, n)
        for b in lat.basis:
            assert all(galois_vector(n, h, b) == list(b) for h in k.H.generators)


@pytest.mark.parametrize("n", UP_TO_40)
def test_conductor_matches_lattice_containment(n):
    """The conductor is the least f with O_K inside Z[zeta_f]."""
    for k in all_fields(n):
        ok = ring_of_integers(k).lattice
        fits = [f for f in cg.divisors(n) if f % 4 != 2 and power_lattice(n, f).contains(ok)]
        assert k.conductor == fits[0]
        assert k.full_conductor == (k.conductor == n)


@pytest.mark.parametrize("e", [3, 4, 5, 6])
def test_two_proper_fields_of_two_power_conductor(e):
    q = 1 << e
    proper = [k for k in full_conductor_fields(q) if len(k.H) > 1]
    assert len(proper) == 2
    assert {k.H for k in proper} == {cg.Subgroup.generated(q, [q - 1]), cg.Subgroup.generated(q, [q // 2 - 1])}


@pytest.mark.parametrize("e", [3, 4, 5])
def test_two_power_rings_of_integers(e):
    q = 1 << e
    one = CycElt.from_rational(q, 1).coeffs
    for gens, variant in (([q - 1], Variant.REAL), ([q // 2 - 1], Variant.SKEW)):
        k = field_from_subgroup(q, gens)
        span = lattice_from([one] + [x.coeffs for x in two_power_basis(variant, e)], euler_phi(q))
        assert ring_of_integers(k).lattice == span


@pytest.mark.parametrize("n", UP_TO_64)
def test_wildness_matches_trace_surjectivity(n):
    top = cyclotomic_field(n)
    for k in full_conductor_fields(n):
        assert cyclotomic_is_wild_over(k) == (trace_index(top, k) != 1)


@pytest.mark.parametrize("n", UP_TO_64)
def test_wild_compositum_has_index_two(n):
    for k in full_conductor_fields(n):
        if cyclotomic_is_wild_over(k):
            l = wild_compositum_L(k)
            assert k.is_subfield_of(l)
            assert euler_phi(n) == 2 * l.degree
            assert l.full_conductor and cyclotomic_is_wild_over(l)


def quadratic_radicands(k: AbelianField) -> list[int]:
    """Squarefree d with Q(sqrt d) inside k, read off from index-2 overgroups of H."""
    n = k.n
    out = []
    for h in cg.enumerate_subgroups(cg.unit_group(n)):
        if 2 * len(h) != euler_phi(n) or not k.H.issubset(h):
            continue
        f = cg.conductor(h)
        sign = 1 if (n - 1) % n in h else -1
        out.append(sign * (f if f % 2 else f // 4))
    return out


def test_quadratic_radicands_sanity():
    assert sorted(quadratic_radicands(cyclotomic_field(8))) == [-2, -1, 2]
    assert sorted(quadratic_radicands(cyclotomic_field(12))) == [-3, -1, 3]


def test_three_mod_four_radicand_forces_tameness():
    seen_wild_shape = 0
    for n in range(8, 129, 8):
        for k in full_conductor_fields(n):
            ds = [d for d in quadratic_radicands(k) if d % 4 == 3]
            if ds:
                seen_wild_shape += 1
                assert not cyclotomic_is_wild_over(k)
    assert seen_wild_shape > 0

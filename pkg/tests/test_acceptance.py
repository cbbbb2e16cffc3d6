"""Acceptance gate: one group of checks per numbered criterion.

Every check carries an ``acceptance`` marker; ``conftest.py`` folds the
outcomes into one PASS/FAIL line per criterion in the terminal summary.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from math import gcd

import pytest

from abelian_trace import chargroup as cg
from abelian_trace.cli import main
from abelian_trace.cyclotomic import (
    CycElt,
    Variant,
    euler_phi,
    factorize,
    galois_apply,
    mul,
    trace_over_subgroup,
    two_power_basis,
    v2,
)
from abelian_trace.fields import (
    AbelianField,
    cyclotomic_field,
    cyclotomic_is_wild_over,
    field_from_subgroup,
    full_conductor_fields,
    intersect,
    ring_of_integers,
    subcyclotomic,
)
from abelian_trace.lattice import det, full_lattice, hnf, identity, index, lattice_from, matmul
from abelian_trace.trace import (
    adjusted_trace_image,
    decompose_DE,
    index_I,
    leopoldt_index,
    trace_index,
    trace_lattice,
)
from abelian_trace.verify import conductors, expected_pair_count

UP_TO_64 = conductors(1, 64)
UP_TO_40 = conductors(1, 40)


def acceptance(cid: int, title: str):
    return pytest.mark.acceptance(cid, title)


def run_verify(tmp_path, capsys, max_conductor: int) -> tuple[int, list[dict], float]:
    out = tmp_path / f"verify{max_conductor}.jsonl"
    start = time.perf_counter()
    code = main(["verify", "--max-conductor", str(max_conductor), "--out", str(out)])
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    return code, recs, elapsed


C1 = "index formula holds for every nested pair up to conductor 176"


@acceptance(1, C1)
def test_c1_ci_gate_conductor_64(tmp_path, capsys):
    code, recs, elapsed = run_verify(tmp_path, capsys, 64)
    print(f"criterion 1 (CI gate): {len(recs)} pairs up to 64 in {elapsed:.1f}s, exit {code}")
    assert code == 0
    assert elapsed < 300
    assert len(recs) == sum(expected_pair_count(n) for n in conductors(1, 64))
    assert all(r["I_computed"] == r["I_predicted"] for r in recs)


@acceptance(1, C1)
def test_c1_full_range_176(tmp_path, capsys):
    code, recs, elapsed = run_verify(tmp_path, capsys, 176)
    wild = sum(r["wild"] for r in recs)
    print(f"criterion 1: {len(recs)} pairs ({wild} wild) up to 176 in {elapsed:.1f}s, exit {code}")
    assert code == 0
    assert len(recs) == sum(expected_pair_count(n) for n in conductors(1, 176))
    assert all(r["match"] and r["I_computed"] == r["I_predicted"] for r in recs)
    assert {r["n"] for r in recs} == set(conductors(1, 176))


def two_power_fields(e: int) -> list[tuple[AbelianField, Variant]]:
    q = 1 << e
    return [
        (field_from_subgroup(q, [q - 1]), Variant.REAL),
        (field_from_subgroup(q, [q // 2 - 1]), Variant.SKEW),
    ]


@acceptance(2, "I(Q(zeta_2^e)/K2) = 2 with the explicit trace image, e = 3..6")
@pytest.mark.parametrize("e", [3, 4, 5, 6])
def test_c2_two_power_index(e):
    q = 1 << e
    top = cyclotomic_field(q)
    two = CycElt.from_rational(q, 2).coeffs
    for k2, variant in two_power_fields(e):
        assert k2.full_conductor
        assert index_I(top, k2) == 2
        x = two_power_basis(variant, e)[0]
        ok = ring_of_integers(k2).lattice
        expected = lattice_from([two] + [mul(x, CycElt(q, b)).coeffs for b in ok.basis], euler_phi(q))
        assert trace_lattice(top, k2) == expected


@acceptance(3, "O_K equals the span of {1} with A (real) or B (skew), e = 3..5")
@pytest.mark.parametrize("e", [3, 4, 5])
def test_c3_two_power_rings(e):
    q = 1 << e
    one = CycElt.from_rational(q, 1).coeffs
    for k2, variant in two_power_fields(e):
        span = lattice_from([one] + [x.coeffs for x in two_power_basis(variant, e)], euler_phi(q))
        assert ring_of_integers(k2).lattice == span


@acceptance(4, "character-side wildness agrees with trace surjectivity, n <= 64")
def test_c4_wildness_cross_check():
    checked = mismatches = 0
    for n in UP_TO_64:
        top = cyclotomic_field(n)
        for k in full_conductor_fields(n):
            checked += 1
            mismatches += cyclotomic_is_wild_over(k) != (trace_index(top, k) != 1)
    print(f"criterion 4: {checked} fields, {mismatches} mismatches")
    assert mismatches == 0


@acceptance(5, "O_K = D + E directly, 2D + E = trace image, D = O of K meet Q(zeta_m), n <= 64")
def test_c5_decomposition():
    wild = 0
    for n in UP_TO_64:
        top = cyclotomic_field(n)
        for k in full_conductor_fields(n):
            if not cyclotomic_is_wild_over(k):
                continue
            wild += 1
            d, e = decompose_DE(k)
            assert (d + e).rank == d.rank + e.rank
            assert d + e == ring_of_integers(k).lattice
            assert d.scaled(2) + e == trace_lattice(top, k)
            assert d == ring_of_integers(intersect(k, subcyclotomic(n, k.m))).lattice
    print(f"criterion 5: {wild} wild fields decomposed")
    assert wild > 0


@acceptance(6, "adjusted trace image equals O_K, n <= 64")
def test_c6_adjusted_trace():
    count = 0
    for n in UP_TO_64:
        for k in full_conductor_fields(n):
            assert adjusted_trace_image(k) == ring_of_integers(k).lattice
            count += 1
    print(f"criterion 6: {count} fields")


@acceptance(7, "Leopoldt generator has index 1, n <= 40")
def test_c7_leopoldt():
    count = 0
    for n in UP_TO_40:
        for k in full_conductor_fields(n):
            assert leopoldt_index(k) == 1
            count += 1
    print(f"criterion 7: {count} fields")


# criterion 8: property suites

C8 = "property suites"


def random_matrix(rng: random.Random) -> list[list[int]]:
    r, c = rng.randint(1, 12), rng.randint(1, 12)
    return [[rng.randint(-50, 50) for _ in range(c)] for _ in range(r)]


def random_unimodular(n: int, rng: random.Random) -> list[list[int]]:
    u = identity(n)
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i != j:
            q = rng.randint(-3, 3)
            u[i] = [a + q * b for a, b in zip(u[i], u[j])]
        if rng.random() < 0.2:
            u[i], u[j] = u[j], u[i]
        if rng.random() < 0.2:
            u[i] = [-a for a in u[i]]
    return u


@acceptance(8, C8)
def test_c8_hnf_idempotent_and_invariant():
    rng = random.Random(8001)
    for _ in range(200):
        m = random_matrix(rng)
        h = hnf(m)
        assert hnf(h) == h
        u = random_unimodular(len(m), rng)
        assert abs(det(u)) == 1
        assert hnf(matmul(u, m)) == h


@acceptance(8, C8)
def test_c8_index_multiplicative():
    rng = random.Random(8002)

    def sub(lat):
        while True:
            t = [[rng.randint(-4, 4) for _ in range(lat.rank)] for _ in range(lat.rank)]
            if det(t):
                return lattice_from(matmul(t, [list(b) for b in lat.basis]), lat.ambient_rank)

    for _ in range(200):
        l1 = sub(full_lattice(rng.randint(1, 6)))
        l2 = sub(l1)
        l3 = sub(l2)
        assert index(l1, l3) == index(l1, l2) * index(l2, l3)


@acceptance(8, C8)
def test_c8_duality_round_trip():
    for n in UP_TO_64:
        for h in cg.enumerate_subgroups(cg.unit_group(n)):
            x = cg.annihilator(h)
            assert len(x) * len(h) == euler_phi(n)
            assert cg.annihilator(x) == h


def random_element(n: int, rng: random.Random) -> CycElt:
    return CycElt.make(n, [rng.randint(-5, 5) for _ in range(euler_phi(n))], rng.randint(1, 3))


@acceptance(8, C8)
def test_c8_galois_composition():
    rng = random.Random(8004)
    for _ in range(300):
        n = rng.choice(conductors(3, 176))
        units = [a for a in range(1, n) if gcd(a, n) == 1]
        k, l = rng.choice(units), rng.choice(units)
        x = random_element(n, rng)
        assert galois_apply(k, galois_apply(l, x)) == galois_apply(k * l % n, x)


@acceptance(8, C8)
def test_c8_trace_transitivity():
    rng = random.Random(8005)
    for _ in range(300):
        n = rng.choice(conductors(3, 64))
        subs = cg.enumerate_subgroups(cg.unit_group(n))
        big = rng.choice(subs)
        small = rng.choice([h for h in subs if h.issubset(big)])
        reps, seen = [], set()
        for a in big.elements:
            if a not in seen:
                reps.append(a)
                seen.update(a * h % n for h in small)
        x = random_element(n, rng)
        t = trace_over_subgroup(x, big)
        assert trace_over_subgroup(trace_over_subgroup(x, small), reps) == t
        assert all(galois_apply(h, t) == t for h in big.generators)


def psi_component(n: int, chi: tuple[int, ...]) -> tuple[int, ...]:
    g = cg.unit_group(n)
    out = []
    for p, e in sorted(factorize(n).items()):
        _, slots = g.block(p)
        if p == 2 and e >= 3:
            out.append(chi[slots[1]])
        elif p > 2 and e >= 2:
            out.append(chi[slots[0]] % p ** (e - 1))
    return tuple(out)


@acceptance(8, C8)
def test_c8_character_group_identities():
    for n in UP_TO_64:
        target = 1
        for p, e in factorize(n).items():
            target *= 2 ** (e - 2) if p == 2 and e >= 3 else (p ** (e - 1) if p > 2 else 1)
        full2 = cg.block_characters(n, 2)
        allowed = [full2]
        if n % 2 == 0:
            w, p = cg.omega(n, 2), cg.psi(n, 2)
            allowed += [cg.CharGroup.generated(n, [p]), cg.CharGroup.generated(n, [w * p])]
        omegas = cg.CharGroup.generated(n, [cg.omega(n, q) for q in factorize(n) if q > 2])
        xm = cg.characters_of_modulus(n, n >> v2(n))
        for k in full_conductor_fields(n):
            x = k.chars
            assert len({psi_component(n, chi) for chi in x.elements}) == target
            x2 = cg.projection_p(x, 2)
            assert x2 in allowed
            assert x.join(omegas) == x2.join(xm)


@acceptance(8, C8)
def test_c8_tame_top_step_towers():
    towers = 0
    for n in UP_TO_40:
        fields = [AbelianField(n, h) for h in cg.enumerate_subgroups(cg.unit_group(n))]
        for low, mid, top in itertools.product(fields, repeat=3):
            if top.H.issubset(mid.H) and mid.H.issubset(low.H) and trace_index(top, mid) == 1:
                assert trace_index(top, low) == trace_index(mid, low)
                towers += 1
    print(f"criterion 8: {towers} towers with a tame top step")


@acceptance(8, C8)
def test_c8_degree_identity():
    wild = 0
    for n in UP_TO_64:
        for k in full_conductor_fields(n):
            if cyclotomic_is_wild_over(k):
                wild += 1
                assert intersect(k, subcyclotomic(n, k.m)).degree * 2 ** (k.e - 2) == k.degree
    assert wild > 0

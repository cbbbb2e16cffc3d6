"""Units modulo n, their subgroups, and groups of Dirichlet characters.

Characters are stored additively: a character is an exponent vector over
the canonical generators of (Z/nZ)^x, the k-th entry ``a_k`` meaning
``chi(g_k) = exp(2 pi i a_k / ord(g_k))``.  Everything here is finite set
manipulation; groups are small enough (phi(n) at most a few hundred) that
full element sets are kept.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence

from .cyclotomic import euler_phi, factorize
from .errors import BadArgs, NotCoprime, NotDivisor, TooLarge, check_conductor

MAX_ENUMERATION_ORDER = 1024


def multiplicative_order(a: int, n: int) -> int:
    if n == 1:
        return 1
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


def _crt_lift(residue: int, modulus: int, n: int) -> int:
    """The unit mod n that is ``residue`` mod ``modulus`` and 1 mod ``n / modulus``."""
    rest = n // modulus
    if rest == 1:
        return residue % n
    t = ((residue - 1) * pow(rest, -1, modulus)) % modulus
    return (1 + rest * t) % n


def smallest_primitive_root(q: int) -> int:
    phi = euler_phi(q)
    for g in range(2, q):
        if gcd(g, q) == 1 and multiplicative_order(g, q) == phi:
            return g
    return 1 % q


@dataclass(frozen=True)
class UnitGroup:
    """(Z/nZ)^x with one canonical generator per cyclic factor.

    ``blocks`` maps each prime p | n to the generator slots belonging to its
    prime-power part: one slot for odd p, the pair (-1, 5) for 2^e with
    e >= 3, and -1 alone for 4.
    """

    n: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    blocks: tuple[tuple[int, int, tuple[int, ...]], ...]  # (p, e, slots)

    @property
    def order(self) -> int:
        return euler_phi(self.n)

    @cached_property
    def exponent(self) -> int:
        return lcm(1, *self.orders)

    @cached_property
    def log(self) -> dict[int, tuple[int, ...]]:
        """Exponent vector of every unit over the generators."""
        out = {}
        for vec in itertools.product(*(range(o) for o in self.orders)):
            x = 1 % self.n
            for g, k in zip(self.generators, vec):
                x = x * pow(g, k, self.n) % self.n
            out[x] = vec
        return out

    @cached_property
    def elements(self) -> tuple[int, ...]:
        return tuple(sorted(self.log))

    def block(self, p: int) -> tuple[int, tuple[int, ...]]:
        for q, e, slots in self.blocks:
            if q == p:
                return e, slots
        return 0, ()


@lru_cache(maxsize=None)
def unit_group(n: int) -> UnitGroup:
    check_conductor(n)
    gens: list[int] = []
    orders: list[int] = []
    blocks = []
    for p, e in sorted(factorize(n).items()):
        q = p**e
        start = len(gens)
        if p == 2:
            gens.append(_crt_lift(-1, q, n))
            orders.append(2)
            if e >= 3:
                gens.append(_crt_lift(5, q, n))
                orders.append(1 << (e - 2))
        else:
            gens.append(_crt_lift(smallest_primitive_root(q), q, n))
            orders.append(euler_phi(q))
        blocks.append((p, e, tuple(range(start, len(gens)))))
    for g, o in zip(gens, orders):
        assert multiplicative_order(g, n) == o
    return UnitGroup(n, tuple(gens), tuple(orders), tuple(blocks))


def _closure(n: int, gens: Iterable[int]) -> frozenset[int]:
    elems = {1 % n}
    frontier = [1 % n]
    gens = [g % n for g in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g % n
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(elems)


def _greedy_generators(n: int, elements: Sequence[int]) -> tuple[int, ...]:
    """Irredundant generating set: largest orders first, then drop any generator the rest cover."""
    target = frozenset(elements)
    gens: list[int] = []
    span = {1 % n}
    for a in sorted(elements, key=lambda a: (-multiplicative_order(a, n), a)):
        if a not in span:
            gens.append(a)
            span = set(_closure(n, gens))
    for g in list(gens):
        rest = [h for h in gens if h != g]
        if _closure(n, rest) == target:
            gens = rest
    return tuple(sorted(gens))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of (Z/nZ)^x; equality is equality of element sets."""

    n: int
    elements: tuple[int, ...]
    generators: tuple[int, ...] = field(compare=False, default=())

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[int]) -> Subgroup:
        elems = tuple(sorted(set(elements)))
        return cls(n, elems, _greedy_generators(n, elems))

    @classmethod
    def generated(cls, n: int, gens: Iterable[int]) -> Subgroup:
        gens = list(gens)
        for g in gens:
            if gcd(g, n) != 1:
                raise NotCoprime(f"{g} is not a unit modulo {n}")
        return cls.from_elements(n, _closure(n, gens))

    @cached_property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def __contains__(self, a: int) -> bool:
        return a % self.n in self.element_set

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def issubset(self, other: Subgroup) -> bool:
        return self.element_set <= other.element_set

    def join(self, other: Subgroup) -> Subgroup:
        n = self.n
        return Subgroup.from_elements(n, {a * b % n for a in self.elements for b in other.elements})

    def meet(self, other: Subgroup) -> Subgroup:
        return Subgroup.from_elements(self.n, self.element_set & other.element_set)

    def key(self) -> tuple[int, tuple[int, ...]]:
        return (len(self.elements), self.elements)


def full_subgroup(n: int) -> Subgroup:
    return Subgroup.from_elements(n, unit_group(n).elements)


def trivial_subgroup(n: int) -> Subgroup:
    return Subgroup(n, (1 % n,), ())


def enumerate_subgroups(g: UnitGroup, bound: int = MAX_ENUMERATION_ORDER) -> list[Subgroup]:
    """Every subgroup of ``g`` exactly once, sorted by size then elements."""
    if g.order > bound:
        raise TooLarge(f"phi({g.n}) = {g.order} exceeds the enumeration bound {bound}")
    n = g.n
    cyclic = {}
    for a in g.elements:
        c = _closure(n, [a])
        cyclic.setdefault(c, a)
    cyclic_sets = list(cyclic)
    seen = {frozenset({1 % n})}
    frontier = list(seen)
    while frontier:
        nxt = []
        for s in frontier:
            for c in cyclic_sets:
                if c <= s:
                    continue
                t = frozenset(a * b % n for a in s for b in c)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    subs = [Subgroup.from_elements(n, s) for s in seen]
    subs.sort(key=Subgroup.key)
    return subs


def congruence_kernel(n: int, f: int) -> Subgroup:
    """Units mod n that are congruent to 1 mod f."""
    if f < 1 or n % f:
        raise NotDivisor(f"{f} does not divide {n}")
    return Subgroup.from_elements(
        n, (a for a in unit_group(n).elements if a % f == 1 % f)
    )


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def conductor(h: Subgroup) -> int:
    """Conductor of the fixed field of ``h`` inside Q(zeta_n)."""
    for f in divisors(h.n):
        if f % 4 == 2:
            continue
        if congruence_kernel(h.n, f).issubset(h):
            return f
    raise AssertionError("unreachable: f = n always qualifies")


@dataclass(frozen=True)
class DirichletChar:
    n: int
    exponents: tuple[int, ...]

    def __call__(self, a: int) -> Fraction:
        """The value at ``a`` as an element of [0, 1) (the angle over 2 pi)."""
        g = unit_group(self.n)
        log = g.log.get(a % self.n)
        if log is None:
            raise NotCoprime(f"{a} is not a unit modulo {self.n}")
        return sum((Fraction(x * k, o) for x, k, o in zip(self.exponents, log, g.orders)), Fraction(0)) % 1

    def __mul__(self, other: DirichletChar) -> DirichletChar:
        g = unit_group(self.n)
        return DirichletChar(
            self.n, tuple((a + b) % o for a, b, o in zip(self.exponents, other.exponents, g.orders))
        )

    @property
    def order(self) -> int:
        g = unit_group(self.n)
        return lcm(1, *(o // gcd(o, x) for x, o in zip(self.exponents, g.orders)))


def _pairing_zero(g: UnitGroup, chi: Sequence[int], log: Sequence[int]) -> bool:
    big = g.exponent
    return sum(x * k * (big // o) for x, k, o in zip(chi, log, g.orders)) % big == 0


def _char_closure(g: UnitGroup, gens: Iterable[Sequence[int]]) -> frozenset[tuple[int, ...]]:
    zero = tuple(0 for _ in g.orders)
    elems = {zero}
    frontier = [zero]
    gens = [tuple(x) for x in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for y in gens:
                z = tuple((a + b) % o for a, b, o in zip(x, y, g.orders))
                if z not in elems:
                    elems.add(z)
                    nxt.append(z)
        frontier = nxt
    return frozenset(elems)


@dataclass(frozen=True)
class CharGroup:
    """A group of Dirichlet characters modulo n, as a set of exponent vectors."""

    n: int
    elements: frozenset[tuple[int, ...]]

    @classmethod
    def generated(cls, n: int, chars: Iterable[DirichletChar | Sequence[int]]) -> CharGroup:
        vecs = [c.exponents if isinstance(c, DirichletChar) else tuple(c) for c in chars]
        return cls(n, _char_closure(unit_group(n), vecs))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, chi: DirichletChar | Sequence[int]) -> bool:
        vec = chi.exponents if isinstance(chi, DirichletChar) else tuple(chi)
        return vec in self.elements

    def issubset(self, other: CharGroup) -> bool:
        return self.elements <= other.elements

    def join(self, other: CharGroup) -> CharGroup:
        g = unit_group(self.n)
        return CharGroup(
            self.n,
            frozenset(
                tuple((a + b) % o for a, b, o in zip(x, y, g.orders))
                for x in self.elements
                for y in other.elements
            ),
        )

    def characters(self) -> list[DirichletChar]:
        return [DirichletChar(self.n, v) for v in sorted(self.elements)]


def all_characters(g: UnitGroup) -> CharGroup:
    return CharGroup(g.n, frozenset(itertools.product(*(range(o) for o in g.orders))))


def trivial_characters(n: int) -> CharGroup:
    return CharGroup(n, frozenset({tuple(0 for _ in unit_group(n).orders)}))


def annihilator(obj: Subgroup | CharGroup) -> CharGroup | Subgroup:
    """Characters killing a subgroup, or units killed by a character group."""
    g = unit_group(obj.n)
    if isinstance(obj, Subgroup):
        logs = [g.log[h] for h in (obj.generators or obj.elements)]
        return CharGroup(
            g.n,
            frozenset(
                chi
                for chi in itertools.product(*(range(o) for o in g.orders))
                if all(_pairing_zero(g, chi, lg) for lg in logs)
            ),
        )
    if isinstance(obj, CharGroup):
        chars = list(obj.elements)
        return Subgroup.from_elements(
            g.n, (a for a, lg in g.log.items() if all(_pairing_zero(g, c, lg) for c in chars))
        )
    raise TypeError(f"cannot take the annihilator of {type(obj).__name__}")


def characters_of_modulus(n: int, d: int) -> CharGroup:
    """X^(d) viewed inside the characters mod n: those of conductor dividing d."""
    return annihilator(congruence_kernel(n, d))


def projection_p(x: CharGroup, p: int) -> CharGroup:
    """Image of ``x`` in the characters of the p-power part of n."""
    g = unit_group(x.n)
    _, slots = g.block(p)
    keep = set(slots)
    return CharGroup(
        x.n,
        frozenset(tuple(a if k in keep else 0 for k, a in enumerate(v)) for v in x.elements),
    )


def block_characters(n: int, p: int) -> CharGroup:
    """All characters supported on the p-power block, i.e. X^(p^e) with e = v_p(n)."""
    return projection_p(all_characters(unit_group(n)), p)


def ram_index(x: CharGroup, p: int) -> int:
    return len(projection_p(x, p))


def _block_char(n: int, p: int, which: str) -> DirichletChar:
    g = unit_group(n)
    e, slots = g.block(p)
    if not slots:
        raise BadArgs(f"{p} does not divide {n}")
    vec = [0] * len(g.orders)
    if p == 2:
        if which == "omega":
            vec[slots[0]] = 1
        elif len(slots) == 2:
            vec[slots[1]] = 1
    else:
        k = slots[0]
        vec[k] = p ** (e - 1) if which == "omega" else p - 1
        vec[k] %= g.orders[k]
    return DirichletChar(n, tuple(vec))


def omega(n: int, p: int) -> DirichletChar:
    """Generator of the characters of (Z/p*Z)^x (p* = 4 for p = 2), inside mod n."""
    return _block_char(n, p, "omega")


def psi(n: int, p: int) -> DirichletChar:
    """Generator of the characters of the wild factor (1 + p*Z)/(1 + p^eZ), e = v_p(n).

    Trivial when p is odd with e = 1, or p = 2 with e <= 2.
    """
    return _block_char(n, p, "psi")

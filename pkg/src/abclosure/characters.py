"""Dirichlet characters presented on explicit generators of (Z/fZ)^x.

The unit group modulo f is decomposed per prime power; odd prime powers
contribute one generator (a primitive root), the 2-part contributes the
pair (-1, 5) once 8 | f.  Characters are exponent vectors against that
generator list, with values recorded exactly as fractions t meaning
exp(2*pi*i*t).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from . import numtheory

CONDUCTOR_CAP = 10**6


class UnitGroupModF:
    """(Z/fZ)^x with a fixed generator list and discrete-log tables.

    Generators are ordered by ascending prime power, the 2-part first and
    presented as (-1, 5) when 8 | f.  The product of the generator orders
    is phi(f).
    """

    def __init__(self, f: int):
        if f < 1:
            raise ValueError("modulus must be positive")
        if f > CONDUCTOR_CAP:
            raise ValueError(f"modulus {f} exceeds the cap {CONDUCTOR_CAP}")
        self.f = f
        self.prime_powers = [(p, e, p**e) for p, e in numtheory.factor(f)]
        gens: list[int] = []
        orders: list[int] = []
        comp: list[tuple[int, int, int]] = []  # (prime, prime_power, local generator)
        for p, e, q in self.prime_powers:
            if p == 2:
                if e == 1:
                    continue
                if e == 2:
                    gens.append(self._lift(q - 1, q))
                    orders.append(2)
                    comp.append((2, q, q - 1))
                else:
                    gens.append(self._lift(q - 1, q))
                    orders.append(2)
                    comp.append((2, q, q - 1))
                    gens.append(self._lift(5, q))
                    orders.append(q // 4)
                    comp.append((2, q, 5))
            else:
                g = numtheory.primitive_root(q)
                gens.append(self._lift(g, q))
                orders.append(q - q // p)
                comp.append((p, q, g))
        self.generators = gens
        self.orders = orders
        self._components = comp
        self._dlog_tables: dict[int, dict[int, int]] = {}

    def _lift(self, g: int, q: int) -> int:
        """CRT lift of g mod q to a unit mod f congruent to 1 elsewhere."""
        if self.f == q:
            return g % q
        rest = self.f // q
        inv_q = pow(q, -1, rest)
        inv_rest = pow(rest, -1, q)
        return (g * rest * inv_rest + q * inv_q) % self.f

    def phi(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    def units(self):
        f = self.f
        return (x for x in range(1, f + 1) if gcd(x, f) == 1) if f > 1 else iter((1,))

    def _table_for(self, q: int, g: int, size: int) -> dict[int, int]:
        key = q
        tab = self._dlog_tables.get(key)
        if tab is None:
            tab = {}
            acc = 1
            for i in range(size):
                tab[acc] = i
                acc = acc * g % q
            self._dlog_tables[key] = tab
        return tab

    def dlog(self, x: int) -> tuple[int, ...]:
        """Exponent vector of a unit x against the generator list."""
        x %= self.f
        if gcd(x, self.f) != 1:
            raise ValueError(f"{x} is not a unit mod {self.f}")
        out = []
        idx = 0
        for p, e, q in self.prime_powers:
            r = x % q
            if p == 2:
                if e == 1:
                    continue
                if e == 2:
                    out.append(0 if r == 1 else 1)
                    idx += 1
                else:
                    s = 0 if r % 4 == 1 else 1
                    out.append(s)
                    idx += 1
                    target = r if s == 0 else (q - r) % q
                    tab = self._table_for(q, 5, q // 4)
                    out.append(tab[target])
                    idx += 1
            else:
                g = self._components[idx][2]
                tab = self._table_for(q, g, q - q // p)
                out.append(tab[r])
                idx += 1
        return tuple(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, UnitGroupModF) and other.f == self.f

    def __hash__(self) -> int:
        return hash(("UnitGroupModF", self.f))

    def __repr__(self) -> str:
        return f"UnitGroupModF({self.f})"


@lru_cache(maxsize=None)
def unit_group(f: int) -> UnitGroupModF:
    return UnitGroupModF(f)


class DirichletCharacter:
    """A character mod f as an exponent vector over the group generators."""

    __slots__ = ("group", "exps")

    def __init__(self, group: UnitGroupModF, exps):
        exps = tuple(e % o for e, o in zip(exps, group.orders))
        if len(exps) != len(group.orders):
            raise ValueError("exponent vector has wrong length")
        self.group = group
        self.exps = exps

    @property
    def modulus(self) -> int:
        return self.group.f

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if other.group != self.group:
            raise ValueError("characters live mod different moduli")
        return DirichletCharacter(
            self.group, [a + b for a, b in zip(self.exps, other.exps)]
        )

    def inverse(self) -> "DirichletCharacter":
        return DirichletCharacter(self.group, [-a for a in self.exps])

    def __pow__(self, k: int) -> "DirichletCharacter":
        return DirichletCharacter(self.group, [a * k for a in self.exps])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DirichletCharacter)
            and other.group == self.group
            and other.exps == self.exps
        )

    def __hash__(self) -> int:
        return hash((self.group.f, self.exps))

    def __repr__(self) -> str:
        return f"DirichletCharacter(mod {self.modulus}, exps={self.exps})"

    def is_trivial(self) -> bool:
        return all(e == 0 for e in self.exps)

    def order(self) -> int:
        out = 1
        for e, o in zip(self.exps, self.group.orders):
            out = lcm(out, o // gcd(o, e))
        return out

    def value(self, x: int) -> Fraction | None:
        """chi(x) as a fraction t in [0, 1) meaning exp(2*pi*i*t).

        Returns None when gcd(x, f) > 1 (the character value is 0).
        """
        x %= self.group.f
        if self.group.f > 1 and gcd(x, self.group.f) != 1:
            return None
        dl = self.group.dlog(x)
        t = Fraction(0)
        for e, o, k in zip(self.exps, self.group.orders, dl):
            t += Fraction(e * k, o)
        return t % 1

    def value_is_one(self, x: int) -> bool:
        v = self.value(x)
        return v is not None and v == 0

    def parity(self) -> int:
        """chi(-1), either +1 (even) or -1 (odd)."""
        if self.group.f <= 2:
            return 1
        v = self.value(self.group.f - 1)
        return 1 if v == 0 else -1

    def conductor(self) -> int:
        """Conductor, computed per prime-power component from the local order."""
        cond = 1
        idx = 0
        for p, e, q in self.group.prime_powers:
            if p == 2:
                if e == 1:
                    continue
                if e == 2:
                    if self.exps[idx]:
                        cond *= 4
                    idx += 1
                else:
                    s = self.exps[idx]
                    t = self.exps[idx + 1]
                    o5 = self.group.orders[idx + 1]
                    o5 //= gcd(o5, t)
                    if o5 > 1:
                        cond *= 4 * o5
                    elif s:
                        cond *= 4
                    idx += 2
            else:
                o = self.group.orders[idx]
                o //= gcd(o, self.exps[idx])
                if o > 1:
                    cond *= p ** (numtheory.valuation(o, p) + 1) if o % p == 0 else p
                idx += 1
        return cond

    def value_primitive(self, x: int) -> Fraction | None:
        """Value of the primitive character of the same conductor at x.

        Defined for x coprime to the conductor even when gcd(x, f) > 1:
        x is shifted by multiples of the conductor until coprime to f.
        """
        c = self.conductor()
        if c == 1:
            return Fraction(0)
        if gcd(x, c) != 1:
            return None
        y = x % self.group.f
        while gcd(y, self.group.f) != 1:
            y = (y + c) % self.group.f
        return self.value(y)

    def restricted_two_part_order(self) -> int:
        """Order of the component on the generator 5 of the 2-part (1 if absent).

        The 2-part generators, when 8 | f, sit first in the generator list
        as (-1, 5); the 5-component order is what separates the layers of
        the 2-power cyclotomic tower.
        """
        if self.group.f % 8 != 0:
            return 1
        o5 = self.group.orders[1]
        t = self.exps[1]
        return o5 // gcd(o5, t)


def trivial_character(f: int) -> DirichletCharacter:
    g = unit_group(f)
    return DirichletCharacter(g, [0] * len(g.orders))


def kronecker_character(disc: int) -> DirichletCharacter:
    """The quadratic character a -> kronecker(disc, a), modulo |disc|.

    disc must be a fundamental discriminant (of a quadratic field).
    """
    f = abs(disc)
    g = unit_group(f)
    exps = []
    for gen, order in zip(g.generators, g.orders):
        v = numtheory.kronecker(disc, gen)
        if v == 1:
            exps.append(0)
        else:
            if order % 2:
                raise ValueError(f"{disc} is not a fundamental discriminant")
            exps.append(order // 2)
    chi = DirichletCharacter(g, exps)
    return chi


def character_subgroup(gens: list[DirichletCharacter]) -> set[DirichletCharacter]:
    """Closure of a list of characters (all mod the same f) under product."""
    if not gens:
        raise ValueError("need at least one character")
    group = gens[0].group
    closure = {trivial_character(group.f)}
    frontier = list(closure)
    while frontier:
        nxt = []
        for chi in frontier:
            for g in gens:
                prod = chi * g
                if prod not in closure:
                    closure.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return closure

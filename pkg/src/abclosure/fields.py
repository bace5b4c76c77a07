"""Abelian number fields presented by finite groups of Dirichlet characters.

A field is a Galois-closed character group X modulo its conductor; degree,
signature, ramification and Frobenius orders all read off X.  Constructors
cover Q, quadratic fields, cyclotomic fields and their maximal real
subfields, and raw character lists.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from . import numtheory
from .characters import (
    CONDUCTOR_CAP,
    DirichletCharacter,
    character_subgroup,
    kronecker_character,
    trivial_character,
    unit_group,
)


@dataclass(frozen=True)
class SplittingData:
    """Decomposition of a rational prime: e*f*g = degree, residue order l^f - 1."""

    ell: int
    ramified: bool
    e: int
    f: int
    g: int

    @property
    def residue_order(self) -> int:
        return self.ell**self.f - 1

    @property
    def split(self) -> bool:
        """Totally split: unramified with trivial Frobenius."""
        return not self.ramified and self.f == 1

    @property
    def inert(self) -> bool:
        return not self.ramified and self.g == 1


class FieldDescriptor:
    """An abelian field over Q, canonicalized so modulus == conductor."""

    def __init__(self, chars: set[DirichletCharacter], label: str | None = None):
        chars = set(chars)
        if not chars:
            raise ValueError("character group must contain the trivial character")
        modulus = next(iter(chars)).modulus
        cond = 1
        for chi in chars:
            cond = lcm(cond, chi.conductor())
        if cond != modulus:
            chars = {_reduce_character(chi, cond) for chi in chars}
            modulus = cond
        self.modulus = modulus
        self.group = unit_group(modulus)
        self.characters = frozenset(chars)
        self.degree = len(self.characters)
        self.kernel = frozenset(self._compute_kernel())
        if self.group.phi() != self.degree * len(self.kernel):
            raise ValueError("character set is not a subgroup")
        self.totally_real = (modulus - 1) % modulus in self.kernel or modulus <= 2
        if self.totally_real:
            self.signature = (self.degree, 0)
        else:
            if self.degree % 2:
                raise ValueError("odd-degree field must be totally real")
            self.signature = (0, self.degree // 2)
        self.label = label if label is not None else self._default_label()

    # -- construction helpers -------------------------------------------------

    def _compute_kernel(self) -> set[int]:
        f = self.modulus
        if f == 1:
            return {0}
        gens = [chi for chi in self.characters if not chi.is_trivial()]
        kernel = set()
        for x in self.group.units():
            if all(chi.value_is_one(x) for chi in gens):
                kernel.add(x % f)
        return kernel

    def _default_label(self) -> str:
        return f"Q[f={self.modulus},deg={self.degree}]"

    # -- basic attributes ------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self.modulus

    @property
    def r1(self) -> int:
        return self.signature[0]

    @property
    def r2(self) -> int:
        return self.signature[1]

    def is_rationals(self) -> bool:
        return self.degree == 1

    def is_quadratic(self) -> bool:
        return self.degree == 2

    def quadratic_d(self) -> int:
        """The squarefree d with K = Q(sqrt(d)); only for quadratic fields."""
        if not self.is_quadratic():
            raise ValueError("not a quadratic field")
        chi = next(c for c in self.characters if not c.is_trivial())
        disc = self.modulus if chi.value_primitive(-1 % self.modulus) == 0 else -self.modulus
        # conductor of Q(sqrt(d)) is |disc|; recover d from disc
        d = disc if disc % 4 == 1 else disc // 4
        return d

    def __repr__(self) -> str:
        return f"FieldDescriptor({self.label})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldDescriptor)
            and other.modulus == self.modulus
            and other.characters == self.characters
        )

    def __hash__(self) -> int:
        return hash((self.modulus, self.characters))

    # -- arithmetic queries ----------------------------------------------------

    def is_ramified(self, ell: int) -> bool:
        return self.modulus % ell == 0

    def frobenius_order(self, ell: int) -> int:
        """Residue degree f of an unramified prime (order of Frobenius)."""
        if self.is_ramified(ell):
            raise ValueError(f"{ell} is ramified")
        if self.modulus == 1:
            return 1
        x = ell % self.modulus
        y = x
        k = 1
        while y not in self.kernel:
            y = y * x % self.modulus
            k += 1
        return k

    def splitting(self, ell: int) -> SplittingData:
        """Exact (e, f, g) decomposition data of a rational prime."""
        if not numtheory.is_prime(ell):
            raise ValueError(f"{ell} is not prime")
        if not self.is_ramified(ell):
            f = self.frobenius_order(ell)
            return SplittingData(ell, False, 1, f, self.degree // f)
        unram = [chi for chi in self.characters if chi.conductor() % ell != 0]
        e = self.degree // len(unram)
        fv = 1
        while True:
            target = pow(ell, fv)
            if all(chi.value_primitive(target) == 0 for chi in unram):
                break
            fv += 1
        return SplittingData(ell, True, e, fv, self.degree // (e * fv))

    def contains_mu(self, m: int) -> bool:
        """Whether Q(zeta_m) is a subfield, for m a prime power or 4*2^k."""
        if m <= 2:
            return True
        if m % 4 == 2:
            m //= 2
            if m <= 2:
                return True
        if self.modulus % m != 0:
            return False
        return all(x % m == 1 for x in self.kernel)

    def two_power_characters(self) -> list[DirichletCharacter]:
        """Characters whose conductor is a power of 2 (including the trivial one)."""
        return [c for c in self.characters if _is_prime_power_or_one(c.conductor(), 2)]

    def p_power_characters(self, p: int) -> list[DirichletCharacter]:
        return [c for c in self.characters if _is_prime_power_or_one(c.conductor(), p)]


def _is_prime_power_or_one(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _reduce_character(chi: DirichletCharacter, new_modulus: int) -> DirichletCharacter:
    """Rewrite chi as a character modulo new_modulus (its conductor divides it)."""
    if chi.modulus == new_modulus:
        return chi
    g = unit_group(new_modulus)
    exps = []
    for gen, order in zip(g.generators, g.orders):
        t = chi.value_primitive(gen)
        e = t * order
        if e.denominator != 1:
            raise ValueError("character does not descend to the requested modulus")
        exps.append(int(e) % order)
    return DirichletCharacter(g, exps)


# -- constructors ---------------------------------------------------------------


def field_rationals() -> FieldDescriptor:
    return FieldDescriptor({trivial_character(1)}, label="Q")


def quadratic_discriminant(d: int) -> int:
    """Fundamental discriminant of Q(sqrt(d)) for squarefree d."""
    return d if d % 4 == 1 else 4 * d


def field_from_sqrt(d: int) -> FieldDescriptor:
    """Q(sqrt(d)) for squarefree d not in {0, 1}."""
    if d in (0, 1):
        raise ValueError("d must differ from 0 and 1")
    if not numtheory.is_squarefree(d):
        raise ValueError(f"{d} is not squarefree")
    disc = quadratic_discriminant(d)
    chi = kronecker_character(disc)
    label = f"Q(sqrt({d}))"
    return FieldDescriptor(character_subgroup([chi]), label=label)


def field_from_cyclotomic(n: int, real_part: bool = False) -> FieldDescriptor:
    """Q(zeta_n), or its maximal real subfield when real_part is set."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if n % 4 == 2:
        n //= 2  # Q(zeta_{2m}) = Q(zeta_m) for odd m
    g = unit_group(n)
    basis = []
    for i, order in enumerate(g.orders):
        exps = [0] * len(g.orders)
        exps[i] = 1
        basis.append(DirichletCharacter(g, exps))
    full = character_subgroup(basis) if basis else {trivial_character(n)}
    if real_part:
        chars = {chi for chi in full if chi.parity() == 1}
        label = f"Q(zeta_{n})+"
    else:
        chars = full
        label = f"Q(zeta_{n})"
    return FieldDescriptor(chars, label=label)


def field_from_characters(f: int, vectors: list[list[int]], label: str | None = None) -> FieldDescriptor:
    """Field generated by explicit exponent vectors modulo f.

    Vectors index the canonical generator list of (Z/fZ)^x (ascending prime
    powers, 2-part first as (-1, 5) when 8 | f).
    """
    g = unit_group(f)
    gens = []
    for vec in vectors:
        if len(vec) != len(g.orders):
            raise ValueError(
                f"exponent vector length {len(vec)} != {len(g.orders)} generators of (Z/{f})^x"
            )
        gens.append(DirichletCharacter(g, vec))
    if not gens:
        gens = [trivial_character(f)]
    return FieldDescriptor(character_subgroup(gens), label=label)


def field_from_spec(spec: str) -> FieldDescriptor:
    """Parse a CLI field spec: sqrt:<d> | zeta:<n> | zeta+:<n> | chars:<f>:<vectors> | Q."""
    spec = spec.strip()
    if spec in ("Q", "q", "rationals"):
        return field_rationals()
    head, _, rest = spec.partition(":")
    if not rest and head not in ("Q",):
        raise FieldSpecError(f"malformed field spec {spec!r}")
    try:
        if head == "sqrt":
            return field_from_sqrt(int(rest))
        if head == "zeta":
            return field_from_cyclotomic(int(rest), real_part=False)
        if head == "zeta+":
            return field_from_cyclotomic(int(rest), real_part=True)
        if head == "chars":
            f_str, _, vec_str = rest.partition(":")
            f = int(f_str)
            vectors = []
            if vec_str:
                for block in vec_str.split(";"):
                    block = block.strip()
                    if block:
                        vectors.append([int(x) for x in block.split(",")])
            return field_from_characters(f, vectors, label=f"chars:{f}")
    except ValueError as exc:
        raise FieldDomainError(str(exc)) from exc
    raise FieldSpecError(f"unknown field spec kind {head!r}")


class FieldSpecError(ValueError):
    """Malformed field spec string (a usage error)."""


class FieldDomainError(ValueError):
    """Well-formed spec whose parameters violate a precondition."""

"""Global arithmetic of quadratic fields.

Fundamental units come from the continued fraction of the maximal-order
generator; imaginary class groups from reduced positive definite binary
quadratic forms with composition done through ideal lattice bases; real
class numbers from cycles of reduced indefinite forms.  Everything is
exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import numtheory
from .fields import quadratic_discriminant

_SEARCH_CAP = 10**7


@dataclass(frozen=True)
class FundamentalUnit:
    """epsilon = (a + b*sqrt(d))/denom > 1 of norm +-1, minimal above 1."""

    d: int
    a: int
    b: int
    denom: int
    norm: int

    def coordinates_mod(self, modulus: int) -> tuple[int, int]:
        """(x, y) with epsilon = x + y*sqrt(d) in Z/modulus (denom inverted)."""
        if self.denom == 1:
            return self.a % modulus, self.b % modulus
        inv = pow(self.denom, -1, modulus)
        return self.a * inv % modulus, self.b * inv % modulus


def _norm_in_omega(x: int, y: int, d: int) -> int:
    # norm of x + y*omega, omega = sqrt(d) or (1+sqrt(d))/2
    if d % 4 == 1:
        return x * x + x * y + y * y * (1 - d) // 4
    return x * x - d * y * y


@lru_cache(maxsize=None)
def fundamental_unit(d: int) -> FundamentalUnit:
    """Fundamental unit of Q(sqrt(d)) for squarefree d > 1.

    Runs the continued fraction of omega (the maximal-order generator) and
    returns the first convergent of norm +-1.
    """
    if d <= 1:
        raise ValueError("d must exceed 1")
    if not numtheory.is_squarefree(d):
        raise ValueError(f"{d} is not squarefree")
    s = math.isqrt(d)
    if d % 4 == 1:
        pp, qq = 1, 2  # omega = (1 + sqrt d)/2
        trace = 1
    else:
        pp, qq = 0, 1  # omega = sqrt d
        trace = 0
    h2, h1 = 0, 1  # convergent numerators p_{k-2}, p_{k-1}
    k2, k1 = 1, 0  # denominators
    for _ in range(_SEARCH_CAP):
        a = (pp + s) // qq
        h2, h1 = h1, a * h1 + h2
        k2, k1 = k1, a * k1 + k2
        # candidate p - q*conj(omega) = (p - q*trace) + q*omega
        x = h1 - k1 * trace
        y = k1
        n = _norm_in_omega(x, y, d)
        if n in (1, -1):
            if d % 4 == 1:
                aa, bb = 2 * x + y, y
                if aa % 2 == 0 and bb % 2 == 0:
                    return FundamentalUnit(d, aa // 2, bb // 2, 1, n)
                return FundamentalUnit(d, aa, bb, 2, n)
            return FundamentalUnit(d, x, y, 1, n)
        pp = a * qq - pp
        qq = (d - pp * pp) // qq
    raise RuntimeError(f"continued fraction for d={d} did not close")


# -- imaginary quadratic form class groups ---------------------------------------


def is_fundamental_discriminant(disc: int) -> bool:
    if disc % 4 == 1:
        return numtheory.is_squarefree(disc)
    if disc % 4 == 0:
        q = disc // 4
        return q % 4 in (2, 3) and numtheory.is_squarefree(q)
    return False


def reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Reduce a positive definite form; ties resolved with b >= 0."""
    while True:
        if -a < b <= a <= c:
            break
        if a > c:
            a, b, c = c, -b, a
            continue
        # normalize b into (-a, a]
        r = (a - b) // (2 * a)
        b2 = b + 2 * r * a
        c2 = a * r * r + b * r + c
        b, c = b2, c2
    if (b < 0) and (a == c or b == -a):
        b = -b
    return a, b, c


def reduced_forms(disc: int) -> list[tuple[int, int, int]]:
    """All reduced positive definite forms of discriminant disc < 0."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ValueError("need a negative discriminant = 0, 1 mod 4")
    out = []
    a = 1
    while 3 * a * a <= -disc:  # a <= sqrt(|D|/3)
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == c or b == -a):
                continue
            out.append((a, b, c))
        a += 1
    return sorted(out)


def _ideal_product_form(
    f1: tuple[int, int, int], f2: tuple[int, int, int], disc: int
) -> tuple[int, int, int]:
    # form (a,b,c) <-> ideal with Z-basis {a, (-b+sqrt D)/2}; elements are
    # pairs (u, v) meaning (u + v*sqrt D)/2, with u = v*D mod 2.
    a1, b1, _ = f1
    a2, b2, _ = f2
    gens = [(2 * a1, 0), (-b1, 1)]
    gens2 = [(2 * a2, 0), (-b2, 1)]
    prod = []
    for u1, v1 in gens:
        for u2, v2 in gens2:
            u = (u1 * u2 + v1 * v2 * disc) // 2
            v = (u1 * v2 + u2 * v1) // 2
            prod.append((u, v))
    # 2d lattice HNF: second basis vector has minimal positive v = gcd(v_i)
    r, s = 0, 0
    for u, v in prod:
        if v == 0:
            continue
        if r == 0:
            r, s = abs(v), u if v > 0 else -u
            continue
        g, x, y = _xgcd(r, v)
        s = x * s + y * u
        r = g
    us = []
    for u, v in prod:
        us.append(u - (v // r) * s)
    t = 0
    for u in us:
        t = math.gcd(t, u)
    # ideal basis: [(t, 0), (s, r)] with r | s and 2r | t (forced by O-module closure)
    t = abs(t)
    if s % r or t % (2 * r):
        raise ArithmeticError("ideal product lattice is not an O-module")
    a = t // (2 * r)
    b = (-s // r) % (2 * a)
    if (b - disc) % 2:
        raise ArithmeticError("composed form has wrong parity")
    c = (b * b - disc) // (4 * a)
    return reduce_form(a, b, c)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


class FormClassGroup:
    """The class group of a negative fundamental discriminant.

    Elements are reduced forms; the law is ideal multiplication followed by
    reduction.  Orders, Sylow structure and subgroup generation are exact.
    """

    def __init__(self, disc: int):
        if disc >= 0:
            raise ValueError("discriminant must be negative")
        if not is_fundamental_discriminant(disc):
            raise ValueError(f"{disc} is not a fundamental discriminant")
        self.disc = disc
        self.forms = reduced_forms(disc)
        self.h = len(self.forms)
        k = disc % 2
        self.identity = reduce_form(1, k, (k * k - disc) // 4)

    def compose(self, f1: tuple[int, int, int], f2: tuple[int, int, int]) -> tuple[int, int, int]:
        return _ideal_product_form(f1, f2, self.disc)

    def power(self, f: tuple[int, int, int], n: int) -> tuple[int, int, int]:
        if n < 0:
            f = self.inverse(f)
            n = -n
        out = self.identity
        base = f
        while n:
            if n & 1:
                out = self.compose(out, base)
            base = self.compose(base, base)
            n >>= 1
        return out

    def inverse(self, f: tuple[int, int, int]) -> tuple[int, int, int]:
        a, b, c = f
        return reduce_form(a, -b, c)

    def order(self, f: tuple[int, int, int]) -> int:
        n = 1
        acc = reduce_form(*f)
        while acc != self.identity:
            acc = self.compose(acc, f)
            n += 1
            if n > self.h:
                raise ArithmeticError("element order exceeds the class number")
        return n

    def subgroup(self, gens: list[tuple[int, int, int]]) -> set[tuple[int, int, int]]:
        closure = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for f in frontier:
                for g in gens:
                    h = self.compose(f, g)
                    if h not in closure:
                        closure.add(h)
                        nxt.append(h)
            frontier = nxt
        return closure

    def sylow_structure(self, p: int) -> list[int]:
        """Cyclic factor orders of the p-Sylow subgroup, descending.

        Determined from the multiset of element orders (which pins down a
        finite abelian p-group exactly).
        """
        vp = numtheory.valuation(self.h, p) if self.h % p == 0 else 0
        if vp == 0:
            return []
        cof = self.h // p**vp
        sylow = {self.power(f, cof) for f in self.forms}
        # count elements of order dividing p^j
        counts = []
        j = 0
        while True:
            cnt = sum(1 for f in sylow if self.power(f, p**j) == self.identity)
            counts.append(cnt)
            if cnt == len(sylow):
                break
            j += 1
        # lambda_i = multiset of cyclic exponents: #\{x : x^{p^j} = 1\} = p^{sum min(lam_i, j)}
        exps = []
        prev = 0
        for j in range(1, len(counts)):
            ej = numtheory.valuation(counts[j], p) - numtheory.valuation(counts[j - 1], p)
            # ej = number of cyclic factors with lambda >= j
            exps.append(ej)
        factors: list[int] = []
        for j, ej in enumerate(exps, start=1):
            nxt = exps[j] if j < len(exps) else 0
            for _ in range(ej - nxt):
                factors.append(p**j)
        return sorted(factors, reverse=True)


@lru_cache(maxsize=None)
def class_group(disc: int) -> FormClassGroup:
    return FormClassGroup(disc)


def prime_form(disc: int, ell: int) -> tuple[int, int, int] | None:
    """An (unreduced) form (ell, b, c) for a split or ramified prime ell.

    Returns None when ell is inert.  The root b is the canonical choice in
    [0, 2*ell) with b = disc mod 2.
    """
    if ell == 2:
        m8 = disc % 8
        if m8 == 1:
            b = 1
        elif m8 == 0:
            b = 0
        elif m8 == 4:
            b = 2
        else:
            return None
    else:
        r = numtheory.sqrt_mod_prime(disc % ell, ell)
        if r is None:
            return None
        # keep the root class of r mod ell; r and r + ell have opposite parity
        b = r if (r - disc) % 2 == 0 else r + ell
    c = (b * b - disc) // (4 * ell)
    return (ell, b, c)


# -- real quadratic class numbers -------------------------------------------------


def _reduced_indefinite(disc: int) -> list[tuple[int, int, int]]:
    s = math.isqrt(disc)
    out = []
    for b in range(1, s + 1):
        if (b - disc) % 2:
            continue
        m = (b * b - disc) // 4  # negative
        for a in _divisors_signed(-m):
            c = m // a
            aa = abs(a)
            # reduced: |sqrt(D) - 2|a|| < b < sqrt(D)
            lo = 2 * aa - b  # need 2|a| - b < sqrt(D)
            if lo >= 0 and lo * lo >= disc:
                continue
            hi = 2 * aa + b  # need 2|a| + b > sqrt(D)
            if hi * hi <= disc:
                continue
            out.append((a, b, c))
    return out


def _divisors_signed(n: int) -> list[int]:
    divs = []
    for i in range(1, math.isqrt(n) + 1):
        if n % i == 0:
            divs.extend((i, -i))
            j = n // i
            if j != i:
                divs.extend((j, -j))
    return sorted(divs, key=abs)


def narrow_class_number(disc: int) -> int:
    """Narrow class number of a positive fundamental discriminant.

    Counts the rho-reduction cycles of reduced indefinite forms.
    """
    if disc <= 0 or not is_fundamental_discriminant(disc):
        raise ValueError("need a positive fundamental discriminant")
    forms = set(_reduced_indefinite(disc))
    s = math.isqrt(disc)
    cycles = 0
    seen: set[tuple[int, int, int]] = set()
    for f in sorted(forms):
        if f in seen:
            continue
        cycles += 1
        g = f
        while g not in seen:
            seen.add(g)
            a, b, c = g
            ac = abs(c)
            r = s - (s + b) % (2 * ac)
            g = (c, r, (r * r - disc) // (4 * c))
    return cycles


@lru_cache(maxsize=None)
def real_class_number(d: int) -> int:
    """Class number (wide) of the real quadratic field Q(sqrt(d))."""
    if d <= 1 or not numtheory.is_squarefree(d):
        raise ValueError("d must be squarefree and > 1")
    hplus = narrow_class_number(quadratic_discriminant(d))
    if fundamental_unit(d).norm == -1:
        return hplus
    if hplus % 2:
        raise ArithmeticError("narrow class number parity contradicts the unit norm")
    return hplus // 2


def class_number(d: int) -> int:
    """Class number of Q(sqrt(d)) for squarefree d (either sign)."""
    if d > 1:
        return real_class_number(d)
    return class_group(quadratic_discriminant(d)).h


# -- principal power witnesses ----------------------------------------------------


@dataclass(frozen=True)
class IdealClassWitness:
    """A prime ideal above ell with class order m and generator of its m-th power.

    alpha = (x + y*sqrt(D))/2 has norm ell^m exactly; root_b pins which of
    the two conjugate ideals the witness belongs to.
    """

    disc: int
    ell: int
    root_b: int
    order: int
    x: int
    y: int

    @property
    def norm(self) -> int:
        return self.ell**self.order

    def sqrt_d_coordinates(self) -> tuple[int, int, int]:
        """alpha as (a + b*sqrt(d))/denom over the squarefree radicand d."""
        if self.disc % 4 == 1:
            return (self.x, self.y, 2)
        # sqrt(D) = 2 sqrt(d); x is even since x^2 = 4 ell^m + disc y^2 with 4 | disc
        return (self.x // 2, self.y, 1)


def principal_power_generator(disc: int, ell: int, m: int) -> IdealClassWitness:
    """Generator alpha of l^m for the prime ideal l above ell (class order m).

    Solves x^2 - disc*y^2 = 4*ell^m and checks the l-adic valuation so the
    witness matches the chosen root (not its conjugate).  Raises
    ArithmeticError when the bounded search fails (impossible for m the
    true class order at desk scale).
    """
    if disc >= 0:
        raise ValueError("imaginary discriminants only")
    form = prime_form(disc, ell)
    if form is None:
        raise ValueError(f"{ell} is inert in discriminant {disc}")
    b_root = form[1]
    target = 4 * ell**m
    ybound = math.isqrt(target // (-disc)) + 1
    if ybound > _SEARCH_CAP:
        raise ArithmeticError(
            f"witness search bound {ybound} exceeds the cap for ell={ell}, m={m}"
        )
    ramified = disc % ell == 0
    for y in range(0, ybound + 1):
        rhs = target + disc * y * y
        if rhs < 0:
            break
        x = math.isqrt(rhs)
        if x * x != rhs:
            continue
        for sy in ((y,) if y == 0 else (y, -y)):
            if ramified:
                return IdealClassWitness(disc, ell, b_root, m, x, sy)
            # split: require v_l(alpha) = m, v_lbar(alpha) = 0
            v = (x + sy * b_root) // 2 % ell
            vbar = (x - sy * b_root) // 2 % ell
            if v == 0 and vbar != 0:
                return IdealClassWitness(disc, ell, b_root, m, x, sy)
            if v == 0 and vbar == 0:
                break  # both ideals divide; alpha is ell times something
    raise ArithmeticError(
        f"no primitive generator with norm {ell}^{m} for disc {disc} (is m the class order?)"
    )

"""Exact integer arithmetic primitives: primality, factoring, symbols, sieves.

Everything here is exact (arbitrary-precision integers, no floating point)
and stateless.  Primality is deterministic for the input sizes this package
ever produces: the Miller-Rabin witness set used is proven complete below
3.3 * 10**14, far above any conductor, discriminant or scan bound at desk
scale.
"""

from __future__ import annotations

import math
from typing import Iterator

from . import kernels

# The first 13 primes are a complete witness set for every
# n < 3_317_044_064_679_887_385_961_981 (~3.3 * 10**24); inputs here stay
# far below that (the spec only needs completeness below 3.3 * 10**14).
_MR_LIMIT = 3_317_044_064_679_887_385_961_981
_MR_WITNESSES_BIG = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test.

    Exact for all n < 3.3 * 10**24 (and in particular for every value this
    package feeds it).
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n >= _MR_LIMIT:
        raise ValueError(f"primality input {n} exceeds the deterministic witness range")
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES_BIG:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's cycle variant; n must be odd, composite, not a prime power issue-free.
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor(n: int) -> list[tuple[int, int]]:
    """Exact factorization of n >= 1 as an ascending list of (prime, exponent).

    Trial division by small primes, then Pollard rho on what remains.
    factor(1) == [].
    """
    if n < 1:
        raise ValueError("factor requires n >= 1")
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # trial division up to a fixed cushion keeps rho off easy inputs
    p = 49
    while p * p <= n and p < 10_000:
        if n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        else:
            p += 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend((root, root))
            continue
        d = _pollard_rho(m)
        stack.extend((d, m // d))
    return sorted(out.items())


def unfactor(fac: list[tuple[int, int]]) -> int:
    n = 1
    for p, e in fac:
        n *= p**e
    return n


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) with the standard conventions, for any integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # strip the 2-part of n
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 == 1 and a % 8 in (3, 5):
            sign = -sign
    a %= n
    # Jacobi on the odd part
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n % a, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
    return sign if n == 1 else 0


def powmod(b: int, e: int, m: int) -> int:
    """b**e mod m by square-and-multiply (thin exact wrapper over pow)."""
    if m < 1:
        raise ValueError("powmod requires m >= 1")
    if e < 0:
        raise ValueError("powmod requires e >= 0")
    return pow(b, e, m)


def primes_up_to(bound: int) -> Iterator[int]:
    """Ascending primes <= bound (sieve-backed; see abclosure.kernels)."""
    if bound < 2:
        raise ValueError("primes_up_to requires bound >= 2")
    return iter(kernels.sieve_primes(bound))


def valuation(n: int, p: int) -> int:
    """Exact p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def squarefree_part(n: int) -> int:
    """The squarefree kernel of n (sign preserved)."""
    if n == 0:
        return 0
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factor(abs(n)):
        if e % 2 == 1:
            out *= p
    return sign * out


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return abs(squarefree_part(n)) == abs(n)


def multiplicative_order(a: int, modulus: int) -> int:
    """Order of a in (Z/modulus)^x; a must be coprime to modulus."""
    if math.gcd(a, modulus) != 1:
        raise ValueError("element not a unit")
    order = euler_phi(modulus)
    for p, _ in factor(order):
        while order % p == 0 and pow(a, order // p, modulus) == 1:
            order //= p
    return order


def euler_phi(n: int) -> int:
    out = 1
    for p, e in factor(n):
        out *= (p - 1) * p ** (e - 1)
    return out


def primitive_root(q: int) -> int:
    """Smallest primitive root modulo an odd prime power q."""
    fac = factor(q)
    if len(fac) != 1 or fac[0][0] == 2:
        raise ValueError("primitive_root expects an odd prime power")
    p, e = fac[0]
    phi_p = p - 1
    rad = [r for r, _ in factor(phi_p)]
    g = 2
    while True:
        if all(pow(g, phi_p // r, p) != 1 for r in rad):
            break
        g += 1
    if e == 1:
        return g
    # lift: g works mod p^e unless g^(p-1) = 1 mod p^2
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a modulo an odd prime p, or None (Tonelli-Shanks)."""
    a %= p
    if a == 0:
        return 0
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p-1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t = t * c % p
        r = r * b % p
    return r


def sqrt_mod_prime_power(a: int, p: int, k: int) -> int | None:
    """A square root of a modulo p**k for a a unit mod p (Hensel lift)."""
    if p == 2:
        if a % 2 == 0:
            raise ValueError("unit required")
        if k == 1:
            return 1
        if k == 2:
            return 1 if a % 4 == 1 else None
        if a % 8 != 1:
            return None
        # lift bit by bit: x odd with x^2 = a mod 2^j
        x = 1
        for j in range(3, k):
            if (x * x - a) % (1 << (j + 1)):
                x += 1 << (j - 1)
        return x % (1 << k)
    r = sqrt_mod_prime(a % p, p)
    if r is None or r == 0:
        return None if r is None else 0
    pk = p**k
    # Newton iteration doubles correct digits per step
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        mod = p**prec
        r = (r + a * pow(r, -1, mod)) * pow(2, -1, mod) % mod
    return r % pk

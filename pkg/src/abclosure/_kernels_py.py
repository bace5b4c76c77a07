"""Pure-Python implementations of the hot scan kernels.

Same contract as the compiled kernel in _kernels_cy.pyx; this module is the
fallback selected by abclosure.kernels when the extension is unavailable.
"""

from __future__ import annotations


def sieve_primes(bound: int) -> list[int]:
    """All primes <= bound, ascending (bytearray Eratosthenes)."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    limit = int(bound**0.5)
    while limit * limit > bound:
        limit -= 1
    while (limit + 1) * (limit + 1) <= bound:
        limit += 1
    for i in range(2, limit + 1):
        if sieve[i]:
            step = i
            start = i * i
            sieve[start : bound + 1 : step] = bytearray(len(range(start, bound + 1, step)))
    return [i for i in range(2, bound + 1) if sieve[i]]


def scan_unit_fermat(primes, d: int, a: int, b: int, denom: int) -> list[int]:
    """Primes p in `primes` where the unit Fermat quotient vanishes.

    For each odd prime p coprime to d and denom, computes the sqrt(d)
    component y of ((a + b*sqrt(d))/denom)**(p - (d/p)) modulo p**2 and
    reports p when y == 0 (the power is congruent to a rational number
    mod p**2, i.e. the quotient test fails).  Callers pre-filter p | 2dh.
    """
    hits = []
    for p in primes:
        if p == 2 or d % p == 0:
            continue
        m = p * p
        # Euler criterion: (d/p) for odd prime p
        chi = pow(d % p, (p - 1) >> 1, p)
        if chi == p - 1:
            chi = -1
        e = p - chi
        x, y = a % m, b % m
        if denom != 1:
            inv = pow(denom, -1, m)
            x = x * inv % m
            y = y * inv % m
        # square-and-multiply from the top bit; base (x, y) stays fixed
        rx, ry = 1, 0
        bits = e.bit_length()
        for i in range(bits - 1, -1, -1):
            rx, ry = (rx * rx + d * ry * ry) % m, 2 * rx * ry % m
            if (e >> i) & 1:
                rx, ry = (rx * x + d * ry * y) % m, (rx * y + ry * x) % m
        if ry == 0:
            hits.append(p)
    return hits


def backend() -> str:
    return "python"

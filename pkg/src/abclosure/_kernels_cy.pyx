# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels (same contract as _kernels_py).

The quadratic-unit power walk runs entirely in C integers; 128-bit
intermediates keep products of residues mod p**2 exact for scan bounds
up to ~3 * 10**6.
"""

from libc.stdlib cimport free, malloc

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64
ctypedef long long i64


def sieve_primes(long long bound):
    """All primes <= bound, ascending."""
    if bound < 2:
        return []
    cdef long long n = bound + 1
    cdef unsigned char* sieve = <unsigned char*> malloc(n)
    if sieve is NULL:
        raise MemoryError()
    cdef long long i, j
    for i in range(n):
        sieve[i] = 1
    sieve[0] = 0
    sieve[1] = 0
    i = 2
    while i * i <= bound:
        if sieve[i]:
            j = i * i
            while j <= bound:
                sieve[j] = 0
                j += i
        i += 1
    out = []
    for i in range(2, n):
        if sieve[i]:
            out.append(i)
    free(sieve)
    return out


cdef inline u64 mulmod(u64 a, u64 b, u64 m) noexcept:
    return <u64> ((<u128> a * b) % m)


cdef inline u64 powmod_u64(u64 b, u64 e, u64 m) noexcept:
    cdef u64 r = 1 % m
    b %= m
    while e:
        if e & 1:
            r = mulmod(r, b, m)
        b = mulmod(b, b, m)
        e >>= 1
    return r


def scan_unit_fermat(primes, long long d, long long a, long long b, long long denom):
    """Primes p in `primes` where the unit Fermat quotient vanishes.

    See _kernels_py.scan_unit_fermat for the contract.
    """
    cdef u64 p, m, e, x, y, rx, ry, tx, chi, inv, dm
    cdef i64 dd = d
    cdef int i, bits
    hits = []
    for q in primes:
        p = <u64> q
        if p == 2 or dd % <i64> p == 0:
            continue
        m = p * p
        dm = <u64> ((dd % <i64> m + <i64> m) % <i64> m)
        chi = powmod_u64(dm % p, (p - 1) >> 1, p)
        if chi == p - 1:
            e = p + 1
        else:
            e = p - 1
        x = <u64> ((a % <i64> m + <i64> m) % <i64> m)
        y = <u64> ((b % <i64> m + <i64> m) % <i64> m)
        if denom != 1:
            inv = powmod_u64(<u64> denom % m, m - m // p - 1, m)  # phi(p^2)-1 = p^2-p-1
            x = mulmod(x, inv, m)
            y = mulmod(y, inv, m)
        rx = 1
        ry = 0
        bits = 0
        while (e >> bits) != 0:
            bits += 1
        for i in range(bits - 1, -1, -1):
            tx = (mulmod(rx, rx, m) + mulmod(dm, mulmod(ry, ry, m), m)) % m
            ry = mulmod(2 * rx % m, ry, m)
            rx = tx
            if (e >> i) & 1:
                tx = (mulmod(rx, x, m) + mulmod(dm, mulmod(ry, y, m), m)) % m
                ry = (mulmod(rx, y, m) + mulmod(ry, x, m)) % m
                rx = tx
        if ry == 0:
            hits.append(p)
    return hits


def backend():
    return "cython"

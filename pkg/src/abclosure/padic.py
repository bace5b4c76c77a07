"""Bounded-precision p-adic arithmetic in Q_p and quadratic extensions.

Elements live in Z/p^N coordinates.  The quadratic local algebra uses the
integral basis (1, theta): theta = sqrt(d) except when p = 2 and
d = 1 mod 4, where theta = (1 + sqrt(d))/2 so that Z_2[theta] is the full
local ring.  The logarithm is the Iwasawa extension (log p = 0, roots of
unity killed): torsion is removed by exponentiation before the series is
summed, and every division records its precision cost, so results carry an
honest "trusted digits" count.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import numtheory
from .fields import quadratic_discriminant

_LOG_SLACK = 6  # working digits beyond the requested precision


def _vp(x: int, p: int, cap: int) -> int:
    """p-adic valuation of x, capped (x == 0 reads as cap)."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


class QuadLocalRing:
    """Z[theta] tensor Z/p^M, with the splitting data of p in Q(sqrt(d)).

    Elements are coordinate pairs (x, y) meaning x + y*theta reduced mod
    p**M.  theta^2 = t1*theta + t0.
    """

    def __init__(self, d: int, p: int, digits: int):
        if not numtheory.is_squarefree(d) or d in (0, 1):
            raise ValueError("d must be squarefree, not 0 or 1")
        self.d = d
        self.p = p
        self.digits = digits
        self.modulus = p**digits
        disc = quadratic_discriminant(d)
        chi = numtheory.kronecker(disc, p)
        self.splitting = "ramified" if chi == 0 else ("split" if chi == 1 else "inert")
        self.e = 2 if self.splitting == "ramified" else 1
        self.f = 2 if self.splitting == "inert" else 1
        if p == 2 and d % 4 == 1:
            self.theta_is_omega = True
            self.t1, self.t0 = 1, (d - 1) // 4
        else:
            self.theta_is_omega = False
            self.t1, self.t0 = 0, d

    # -- coordinate conversions ---------------------------------------------

    def from_sqrt_coords(self, a: int, b: int, denom: int = 1) -> tuple[int, int]:
        """(a + b*sqrt(d))/denom as a (1, theta) coordinate pair."""
        m = self.modulus
        if self.theta_is_omega:
            # sqrt(d) = 2*theta - 1
            x, y = a - b, 2 * b
        else:
            x, y = a, b
        if denom != 1:
            if self.theta_is_omega and denom == 2 and (x % 2 == 0 and y % 2 == 0):
                x //= 2
                y //= 2
            else:
                inv = pow(denom, -1, m)
                x, y = x * inv, y * inv
        return x % m, y % m

    def sqrt_component(self, z: tuple[int, int]) -> tuple[int, int]:
        """The sqrt(d) coordinate of z as (numerator, scale): value = num / p**scale."""
        if self.theta_is_omega:
            return z[1], 1  # x + y*theta = (x + y/2) + (y/2) sqrt(d)
        return z[1], 0

    # -- ring operations ------------------------------------------------------

    def one(self) -> tuple[int, int]:
        return (1, 0)

    def add(self, z1, z2):
        m = self.modulus
        return (z1[0] + z2[0]) % m, (z1[1] + z2[1]) % m

    def sub(self, z1, z2):
        m = self.modulus
        return (z1[0] - z2[0]) % m, (z1[1] - z2[1]) % m

    def mul(self, z1, z2):
        m = self.modulus
        x1, y1 = z1
        x2, y2 = z2
        yy = y1 * y2
        return (x1 * x2 + self.t0 * yy) % m, (x1 * y2 + y1 * x2 + self.t1 * yy) % m

    def scalar_mul(self, c: int, z):
        m = self.modulus
        return c * z[0] % m, c * z[1] % m

    def pow(self, z, n: int):
        out = self.one()
        base = z
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def norm(self, z) -> int:
        # exact norm of the representative: (x + y theta)(x + y theta-bar)
        x, y = z
        return x * x + self.t1 * x * y - self.t0 * y * y

    def uniformizer(self) -> tuple[int, int]:
        if self.splitting != "ramified":
            return (self.p, 0)
        if self.p == 2 and self.d % 4 == 3:
            return (1, 1)  # 1 + sqrt(d), norm 1 - d = 2 * odd
        return (0, 1)  # sqrt(d)

    def val_pi(self, z) -> int:
        """pi-adic valuation, capped at e * digits."""
        cap = self.e * self.digits
        x, y = z
        if self.splitting != "ramified":
            return min(_vp(x, self.p, self.digits), _vp(y, self.p, self.digits), self.digits)
        n = self.norm(z)
        return _vp(n, self.p, cap)

    def exact_div_p(self, z, k: int):
        if z[0] % self.p**k or z[1] % self.p**k:
            raise ArithmeticError("inexact division by p^k")
        return z[0] // self.p**k, z[1] // self.p**k


@lru_cache(maxsize=None)
def quad_ring(d: int, p: int, digits: int) -> QuadLocalRing:
    return QuadLocalRing(d, p, digits)


# -- logarithm series ------------------------------------------------------------


def _tail_start(w: int, e: int, p: int, target_pi: int) -> int:
    """First index k such that j*w - e*(v_p(j)) >= target_pi for all j >= k."""
    k = 1
    while True:
        lo = k * w - e * (_ilog(k, p) + 1)
        if lo >= target_pi and k >= 3:
            return k
        k += 1


def _ilog(n: int, p: int) -> int:
    out = 0
    while n >= p:
        n //= p
        out += 1
    return out


def _log_series_scalar(x: int, p: int, digits: int) -> tuple[int, int]:
    """log(1 + x) mod p^digits for v_p(x) >= 1 (>= 2 when p = 2).

    Returns (value, trusted_digits).
    """
    m = p**digits
    x %= m
    w = _vp(x, p, digits)
    if w < (2 if p == 2 else 1):
        raise ValueError("argument outside the logarithm's convergence domain")
    if w >= digits:
        return 0, digits
    k_stop = _tail_start(w, 1, p, digits)
    acc = 0
    xk = x
    max_loss = 0
    for k in range(1, k_stop + 1):
        a = _vp(k, p, digits)
        kk = k // p**a
        term = xk // p**a * pow(kk, -1, m) % m
        max_loss = max(max_loss, a)
        acc = (acc - term) % m if k % 2 == 0 else (acc + term) % m
        xk = xk * x % m
    return acc, digits - max_loss


def _log_series_quad(ring: QuadLocalRing, zm1, digits: int) -> tuple[tuple[int, int], int]:
    """log(1 + zm1) in the quadratic ring; returns (pair, trusted_digits).

    Requires v_pi(zm1) >= 1 for odd p and >= e + 1 for p = 2.
    """
    p, e = ring.p, ring.e
    w = ring.val_pi(zm1)
    if p == 2 and w < e + 1:
        raise ValueError("2-adic quad log needs v_pi(u - 1) > e")
    if w < 1:
        raise ValueError("argument is not a principal unit")
    if w >= e * digits:
        return (0, 0), digits
    k_stop = _tail_start(w, e, p, e * digits)
    acc = (0, 0)
    zk = zm1
    max_loss = 0
    for k in range(1, k_stop + 1):
        a = _vp(k, p, digits)
        kk = k // p**a
        t = ring.exact_div_p(zk, a) if a else zk
        term = ring.scalar_mul(pow(kk, -1, ring.modulus), t)
        max_loss = max(max_loss, a)
        acc = ring.sub(acc, term) if k % 2 == 0 else ring.add(acc, term)
        zk = ring.mul(zk, zm1)
    return acc, digits - max_loss


def log_principal_unit_pair(
    ring: QuadLocalRing, z: tuple[int, int], digits: int
) -> tuple[tuple[int, int], int]:
    """log of a principal unit of the quadratic ring; ((x, y), trusted_digits).

    For p = 2 the argument is squared until it sits safely inside the
    convergence domain, and the result divided back out.
    """
    one = ring.one()
    z = (z[0] % ring.modulus, z[1] % ring.modulus)
    if ring.val_pi(ring.sub(z, one)) < 1:
        raise ValueError("not a principal unit")
    div_val = 0
    if ring.p == 2:
        while ring.val_pi(ring.sub(z, one)) < ring.e + 1:
            z = ring.mul(z, z)
            div_val += 1
    pair, trusted = _log_series_quad(ring, ring.sub(z, one), digits)
    if div_val:
        pair = ring.exact_div_p(pair, div_val)
        trusted -= div_val
    return pair, trusted


def _exp_series_scalar(x: int, p: int, digits: int) -> int:
    """exp(x) mod p^digits for odd p and v_p(x) >= 1 (internal, tests only)."""
    if p == 2:
        raise ValueError("internal exp is for odd p")
    m = p**digits
    x %= m
    if x and _vp(x, p, digits) < 1:
        raise ValueError("exp argument must be divisible by p")
    acc = 1
    xk = 1
    fact_val = 0
    fact_unit_inv = 1
    k = 0
    while True:
        k += 1
        xk = xk * x % (m * p**digits)
        fact_val += _vp(k, p, digits)
        kk = k // p ** _vp(k, p, digits)
        fact_unit_inv = fact_unit_inv * pow(kk, -1, m) % m
        if k - fact_val >= digits:
            break
        acc = (acc + xk // p**fact_val * fact_unit_inv) % m
    return acc


# -- public bounded-precision types ----------------------------------------------


@dataclass(frozen=True)
class PAdicInt:
    """An element of Z/p^N with valuation bookkeeping."""

    p: int
    precision: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p**self.precision)

    def valuation(self) -> int:
        """min(v_p(value), N); exact unless valuation_is_floor()."""
        return _vp(self.value, self.p, self.precision)

    def valuation_is_floor(self) -> bool:
        """True when the element vanishes mod p^N, so v >= N is all we know."""
        return self.value == 0

    def __add__(self, other: "PAdicInt") -> "PAdicInt":
        self._check(other)
        n = min(self.precision, other.precision)
        return PAdicInt(self.p, n, self.value + other.value)

    def __sub__(self, other: "PAdicInt") -> "PAdicInt":
        self._check(other)
        n = min(self.precision, other.precision)
        return PAdicInt(self.p, n, self.value - other.value)

    def __mul__(self, other: "PAdicInt") -> "PAdicInt":
        self._check(other)
        n = min(self.precision, other.precision)
        return PAdicInt(self.p, n, self.value * other.value)

    def _check(self, other):
        if other.p != self.p:
            raise ValueError("mixed primes")

    def log(self) -> "PAdicInt":
        """Iwasawa log of a unit (torsion removed via u^(p-1), or u^2 at p=2)."""
        p, n = self.p, self.precision
        if self.value % p == 0:
            raise ValueError("log of a non-unit")
        m = p ** (n + _LOG_SLACK)
        u = self.value % m
        if p == 2:
            val, trusted = _log_series_scalar(u * u % m - 1, 2, n + _LOG_SLACK)
            if val % 2:
                raise ArithmeticError("2-adic log not divisible by 2")
            out, trusted = val // 2, trusted - 1
        else:
            t = pow(u, p - 1, m)
            val, trusted = _log_series_scalar(t - 1, p, n + _LOG_SLACK)
            out = val * pow(p - 1, -1, m) % m
        if trusted < n:
            raise ArithmeticError("precision underflow in log")
        return PAdicInt(p, n, out)


@dataclass(frozen=True)
class PAdicQuadElement:
    """x + y*sqrt(d) in Z[sqrt(d)]/p^N (sqrt-basis; p odd, or p=2 with d != 1 mod 4)."""

    p: int
    precision: int
    d: int
    x: int
    y: int

    def __post_init__(self):
        if self.p == 2 and self.d % 4 == 1:
            raise ValueError("p=2 with d=1 mod 4 needs the omega basis; use iwasawa_log")
        m = self.p**self.precision
        object.__setattr__(self, "x", self.x % m)
        object.__setattr__(self, "y", self.y % m)

    def _ring(self) -> QuadLocalRing:
        return quad_ring(self.d, self.p, self.precision)

    def _pair(self):
        return (self.x, self.y)

    def __mul__(self, other: "PAdicQuadElement") -> "PAdicQuadElement":
        if (other.p, other.d) != (self.p, self.d):
            raise ValueError("incompatible elements")
        n = min(self.precision, other.precision)
        r = quad_ring(self.d, self.p, n)
        x, y = r.mul((self.x, self.y), (other.x, other.y))
        return PAdicQuadElement(self.p, n, self.d, x, y)

    def __neg__(self) -> "PAdicQuadElement":
        return PAdicQuadElement(self.p, self.precision, self.d, -self.x, -self.y)

    def __pow__(self, k: int) -> "PAdicQuadElement":
        r = self._ring()
        x, y = r.pow((self.x, self.y), k)
        return PAdicQuadElement(self.p, self.precision, self.d, x, y)

    def __add__(self, other: "PAdicQuadElement") -> "PAdicQuadElement":
        if (other.p, other.d) != (self.p, self.d):
            raise ValueError("incompatible elements")
        n = min(self.precision, other.precision)
        return PAdicQuadElement(self.p, n, self.d, self.x + other.x, self.y + other.y)

    def sqrt_component_valuation(self) -> int:
        """v_p of the sqrt(d) coefficient, capped at the precision."""
        return _vp(self.y, self.p, self.precision)

    def is_principal_unit(self) -> bool:
        r = self._ring()
        return r.val_pi(r.sub(self._pair(), r.one())) >= 1

    def log(self) -> "PAdicQuadElement":
        """Iwasawa log of a principal unit, same representation."""
        p, n, d = self.p, self.precision, self.d
        work = n + _LOG_SLACK
        r = quad_ring(d, p, work)
        pair, trusted = log_principal_unit_pair(r, (self.x, self.y), work)
        if trusted < n:
            raise ArithmeticError("precision underflow in log")
        return PAdicQuadElement(p, n, d, pair[0], pair[1])


def log1p(u):
    """Iwasawa logarithm of a principal unit (PAdicInt or PAdicQuadElement).

    Requires u = 1 mod p for odd p, u = 1 mod 4 for p = 2.
    """
    if isinstance(u, PAdicInt):
        need = 2 if u.p == 2 else 1
        if _vp(u.value - 1, u.p, u.precision) < need:
            raise ValueError("log1p requires a principal unit (1 mod 4 when p = 2)")
        return u.log()
    if isinstance(u, PAdicQuadElement):
        if not u.is_principal_unit():
            raise ValueError("log1p requires a principal unit")
        return u.log()
    raise TypeError("log1p expects a p-adic element")


# -- the Iwasawa logarithm on global elements -------------------------------------


@dataclass(frozen=True)
class LogValue:
    """log_p of a global element, in the completions above p of Q(sqrt(d)).

    splitting 'split': components are the two Q_p logs (embedding order
    fixed by the canonical square root of d mod p^N).  'inert'/'ramified':
    components is a single (1, theta) coordinate pair.  Every coordinate is
    an integer divided by p**scale, trusted modulo p**(precision - scale).
    """

    p: int
    d: int
    precision: int
    splitting: str
    components: tuple
    scale: int = 0

    def _aligned(self, other: "LogValue") -> tuple[int, tuple, tuple, int]:
        if (other.p, other.d, other.splitting) != (self.p, self.d, self.splitting):
            raise ValueError("incompatible log values")
        scale = max(self.scale, other.scale)
        prec = min(
            self.precision - self.scale, other.precision - other.scale
        ) + scale
        m = self.p**prec
        f1 = self.p ** (scale - self.scale)
        f2 = self.p ** (scale - other.scale)
        c1 = tuple(c * f1 % m for c in self.components)
        c2 = tuple(c * f2 % m for c in other.components)
        return prec, c1, c2, scale

    def __add__(self, other: "LogValue") -> "LogValue":
        prec, c1, c2, scale = self._aligned(other)
        m = self.p**prec
        comps = tuple((a + b) % m for a, b in zip(c1, c2))
        return LogValue(self.p, self.d, prec, self.splitting, comps, scale)

    def __sub__(self, other: "LogValue") -> "LogValue":
        prec, c1, c2, scale = self._aligned(other)
        m = self.p**prec
        comps = tuple((a - b) % m for a, b in zip(c1, c2))
        return LogValue(self.p, self.d, prec, self.splitting, comps, scale)

    def scaled_by_int(self, k: int) -> "LogValue":
        m = self.p**self.precision
        comps = tuple(c * k % m for c in self.components)
        return LogValue(self.p, self.d, self.precision, self.splitting, comps, self.scale)

    def scaled_by_inverse(self, mdiv: int) -> "LogValue":
        """(1/mdiv) * self; p-part of mdiv raises the scale."""
        a = _vp(mdiv, self.p, 64)
        unit = mdiv // self.p**a
        m = self.p**self.precision
        inv = pow(unit % m, -1, m)
        comps = tuple(c * inv % m for c in self.components)
        return LogValue(self.p, self.d, self.precision, self.splitting, comps, self.scale + a)

    def sqrt_coefficient_valuation(self) -> int:
        """Valuation of the sqrt(d) component (the regulator-test reading).

        Capped at the trusted precision; a capped reading means
        "indistinguishable from zero at this precision".
        """
        p = self.p
        cap = self.precision - self.scale
        if self.splitting == "split":
            diff = (self.components[0] - self.components[1]) % p**self.precision
            v = _vp(diff, p, self.precision)
            if p == 2:
                v -= 1
            return min(v - self.scale, cap) if v >= self.scale else v - self.scale
        ring = quad_ring(self.d, p, self.precision)
        num, extra = ring.sqrt_component(self.components)
        v = _vp(num, p, self.precision) - extra
        return min(v - self.scale, cap)

    def trusted_precision(self) -> int:
        return self.precision - self.scale


def _canonical_root(d: int, p: int, digits: int) -> int:
    """The canonical square root of d mod p^digits (split p only)."""
    r = numtheory.sqrt_mod_prime_power(d % p**digits, p, digits)
    if r is None:
        raise ValueError("d is not a square at p")
    if p == 2:
        if r % 4 == 3:
            r = -r % 2**digits
    else:
        if r % p > p - r % p:
            r = -r % p**digits
    return r


def _iwasawa_log_unit_scalar(z: int, p: int, m: int, digits: int) -> tuple[int, int]:
    """Iwasawa log of a p-adic unit z mod p^digits: (value, trusted)."""
    if p == 2:
        t = z * z % m
        val, trusted = _log_series_scalar(t - 1, 2, digits)
        return val // 2 % m, trusted - 1
    t = pow(z, p - 1, m)
    val, trusted = _log_series_scalar(t - 1, p, digits)
    return val * pow(p - 1, -1, m) % m, trusted


def _iwasawa_log_scalar(n: int, p: int, digits: int) -> tuple[int, int]:
    """Iwasawa log of a nonzero rational integer (p-part discarded)."""
    m = p**digits
    v = numtheory.valuation(n, p) if n % p == 0 else 0
    u = abs(n) // p**v  # sign is torsion, log(-1) = 0
    return _iwasawa_log_unit_scalar(u % m, p, m, digits)


def iwasawa_log(a: int, b: int, c: int, d: int, p: int, precision: int) -> LogValue:
    """log_p of alpha = (a + b*sqrt(d))/c in prod_{v|p} K_v at the given precision.

    alpha may have any p-content: the Iwasawa normalization (log p = 0)
    strips it, and residue torsion is killed by exponentiation.
    """
    if a == 0 and b == 0:
        raise ValueError("log of zero")
    if c == 0:
        raise ValueError("zero denominator")
    digits = precision + _LOG_SLACK + 4
    ring = quad_ring(d, p, digits)
    m = p**digits
    out_m = p**precision

    log_c, trusted_c = _iwasawa_log_scalar(c, p, digits) if abs(c) != 1 else (0, digits)

    if ring.splitting == "split":
        r = _canonical_root(d, p, digits)
        comps = []
        trusted = trusted_c
        for root in (r, (-r) % m):
            z = (a + b * root) % m
            v = _vp(z, p, digits - precision)
            if v >= digits - precision:
                raise ArithmeticError("p-content too large for the working precision")
            u = z // p**v
            dv = digits - v
            mv = p**dv
            lv, tr = _iwasawa_log_unit_scalar(u % mv, p, mv, dv)
            comps.append((lv - log_c) % m)
            trusted = min(trusted, tr)
        if trusted < precision:
            raise ArithmeticError("precision underflow in iwasawa_log")
        return LogValue(p, d, precision, "split", tuple(x % out_m for x in comps))

    # inert / ramified: raise z to an exponent n = e * (q - 1) * 2^s clearing
    # the uniformizer and all torsion, take the series, divide by n.
    z = ring.from_sqrt_coords(a, b, 1)
    if ring.splitting == "inert":
        t = ring.val_pi(z)
        w = ring.exact_div_p(z, t)
        torsion_exp = p * p - 1
        exponent = torsion_exp
    else:
        sq = ring.mul(z, z)
        vz2 = ring.val_pi(sq)
        if vz2 % 2:
            raise ArithmeticError("odd pi-valuation after squaring")
        w = ring.exact_div_p(sq, vz2 // 2)
        torsion_exp = p - 1
        exponent = 2 * torsion_exp if torsion_exp > 1 else 2
    w = ring.pow(w, torsion_exp) if torsion_exp > 1 else w
    if p == 2:
        while ring.val_pi(ring.sub(w, ring.one())) < ring.e + 1:
            w = ring.mul(w, w)
            exponent *= 2
    pair, trusted = _log_series_quad(ring, ring.sub(w, ring.one()), digits)
    ploss = _vp(exponent, p, digits)
    unit = exponent // p**ploss
    if unit > 1:
        pair = ring.scalar_mul(pow(unit, -1, m), pair)
    if ploss:
        pair = ring.exact_div_p(pair, ploss)
        trusted -= ploss
    trusted = min(trusted, trusted_c)
    pair = ring.sub(pair, (log_c, 0))
    if trusted < precision:
        raise ArithmeticError("precision underflow in iwasawa_log")
    return LogValue(
        p, d, precision, ring.splitting, (pair[0] % out_m, pair[1] % out_m)
    )


# -- local torsion (mu_p of the completions) ---------------------------------------


def local_torsion_orders(d: int | None, p: int) -> list[tuple[str, int]]:
    """|mu_p(K_v)| for each place v | p of Q(sqrt(d)) (d None means K = Q).

    Case analysis: mu_p needs Q_p(zeta_p) inside K_v, impossible for p >= 5;
    p = 3 forces the ramified completion Q_3(sqrt(-3)); at p = 2 the order is
    4 exactly when the completion is Q_2(i), else 2.
    """
    if d is None:
        return [("v", 2 if p == 2 else 1)]
    ring = quad_ring(d, p, 4)
    if p >= 5:
        places = ["v1", "v2"] if ring.splitting == "split" else ["v"]
        return [(v, 1) for v in places]
    if p == 3:
        if ring.splitting == "split":
            return [("v1", 1), ("v2", 1)]
        if ring.splitting == "inert":
            return [("v", 1)]
        return [("v", 3 if (d // 3) % 3 == 2 else 1)]
    # p == 2
    if ring.splitting == "split":
        return [("v1", 2), ("v2", 2)]
    if ring.splitting == "inert":
        return [("v", 2)]
    if d % 2 == 0:
        return [("v", 2)]
    return [("v", 4 if d % 8 == 7 else 2)]


def local_torsion(field, p: int, place_index: int = 0) -> int:
    """|mu_p(K_v)| for the place of index place_index above p (K quadratic or Q)."""
    if field.is_rationals():
        orders = local_torsion_orders(None, p)
    elif field.is_quadratic():
        orders = local_torsion_orders(field.quadratic_d(), p)
    else:
        raise ValueError("local torsion case analysis covers Q and quadratic fields")
    if place_index >= len(orders):
        raise ValueError("no such place above p")
    return orders[place_index][1]


def global_mu_p_order(d: int | None, p: int) -> int:
    """|mu_p(K)| for K = Q(sqrt(d)) (d None: K = Q)."""
    if p == 2:
        if d == -1:
            return 4
        return 2
    if p == 3 and d == -3:
        return 3
    return 1

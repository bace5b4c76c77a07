"""p-rationality tests for Q and quadratic fields.

The three conditions checked are: local p-power torsion matches the global
roots of unity; the p-class field sits inside the composite of the
Z_p-extensions (tested through the ideal-logarithm lattice for imaginary
quadratic fields); and the p-adic regulator has minimal valuation (the
Fermat-quotient test on the fundamental unit for real quadratic fields).
Leopoldt's conjecture is assumed throughout and surfaced in every report.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels, numtheory, padic, quadratic, snf
from .fields import FieldDescriptor, quadratic_discriminant
from .padic import LogValue

HOLDS = "holds"
FAILS = "fails"
UNDETERMINED = "undetermined"
VACUOUS = "holds (vacuous)"

ASSUMPTIONS = ("leopoldt",)

DEFAULT_PRECISION = 3
_GENERATOR_PRIME_CAP = 10**5


# -- condition 1: local vs global p-power roots of unity ---------------------------


def condition_mu(K: FieldDescriptor, p: int) -> str:
    """prod_{v|p} mu_p(K_v) = i_p(mu_p(K)): 'holds' or 'fails'."""
    if K.is_rationals():
        d = None
    elif K.is_quadratic():
        d = K.quadratic_d()
    else:
        raise ValueError("mu condition implemented for Q and quadratic fields")
    local = 1
    for _, o in padic.local_torsion_orders(d, p):
        local *= o
    return HOLDS if local == padic.global_mu_p_order(d, p) else FAILS


# -- condition 3: Fermat quotients of the fundamental unit -------------------------


@dataclass(frozen=True)
class FermatQuotientReport:
    """The unit power eta = +-eps^(p -+ 1) mod p^N and its sqrt(d) valuation."""

    d: int
    p: int
    splitting: str
    exponent: int
    eta: tuple[int, int]  # (x, y): eta = x + y sqrt(d) mod p^N, x = 1 mod p
    sqrt_valuation: int
    valuation_is_floor: bool  # sqrt component vanished mod p^N entirely
    verdict: str  # regulator condition: holds / fails / undetermined-at-precision
    a_mod_p: int | None  # unit coefficient when the valuation is exactly 2
    tp_order_estimate: int | str
    precision: int

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "p": self.p,
            "splitting": self.splitting,
            "exponent": self.exponent,
            "eta": list(self.eta),
            "sqrt_valuation": self.sqrt_valuation,
            "valuation_is_floor": self.valuation_is_floor,
            "verdict": self.verdict,
            "a_mod_p": self.a_mod_p,
            "tp_estimate": str(self.tp_order_estimate),
            "precision": self.precision,
        }


def fermat_quotient_test(d: int, p: int, precision: int = DEFAULT_PRECISION) -> FermatQuotientReport:
    """Regulator-minimality test for Q(sqrt(d)), d > 1, at an odd prime p.

    Computes eta = +-eps^(p+1) (p inert) or +-eps^(p-1) (p split) modulo
    p^precision, sign-normalized to eta = 1 mod p.  The condition fails
    exactly when the sqrt(d) component of eta - 1 has valuation >= 2.
    """
    if d <= 1 or not numtheory.is_squarefree(d):
        raise ValueError("d must be squarefree and > 1")
    if p == 2 or not numtheory.is_prime(p):
        raise ValueError("p must be an odd prime")
    if d % p == 0:
        raise ValueError(f"{p} is ramified in Q(sqrt({d}))")
    h = quadratic.real_class_number(d)
    if h % p == 0:
        raise ValueError(f"{p} divides the class number {h}; use the class-condition path")
    if precision < 2:
        raise ValueError("need at least 2 digits")
    eps = quadratic.fundamental_unit(d)
    disc = quadratic_discriminant(d)
    chi = numtheory.kronecker(disc, p)
    exponent = p - chi
    ring = padic.quad_ring(d, p, precision)
    x0, y0 = eps.coordinates_mod(ring.modulus)
    x, y = ring.pow((x0, y0), exponent)
    if x % p == p - 1:
        x, y = (-x) % ring.modulus, (-y) % ring.modulus
    if x % p != 1 or y % p != 0:
        raise ArithmeticError("unit power failed to normalize to 1 mod p")
    v = padic._vp(y, p, precision)
    floor = y == 0
    verdict = HOLDS if v < 2 else FAILS
    a = None
    tp: int | str
    if v == 1:
        tp = 1
    elif not floor:
        a = y // p**v % p
        tp = p ** (v - 1)
    else:
        verdict = "undetermined-at-precision"
        tp = f"unknown (>= {p}^{precision - 1}); increase precision"
    return FermatQuotientReport(
        d=d,
        p=p,
        splitting="split" if chi == 1 else "inert",
        exponent=exponent,
        eta=(x, y),
        sqrt_valuation=v,
        valuation_is_floor=floor,
        verdict=verdict,
        a_mod_p=a,
        tp_order_estimate=tp,
        precision=precision,
    )


def fermat_quotient_scan(d: int, bound: int, jobs: int = 1) -> list[int]:
    """All odd primes p <= bound, p coprime to 2dh, failing the regulator test.

    Ascending and deterministic; each hit is re-verified through the full
    mod-p^3 report before being returned.
    """
    if bound < 3:
        raise ValueError("bound must be at least 3")
    h = quadratic.real_class_number(d)
    eps = quadratic.fundamental_unit(d)
    primes = [p for p in kernels.sieve_primes(bound) if p != 2 and d % p and h % p]
    if jobs > 1:
        hits = _scan_parallel(primes, d, eps, jobs)
    else:
        hits = kernels.scan_unit_fermat(primes, d, eps.a, eps.b, eps.denom)
    for p in hits:
        report = fermat_quotient_test(d, p)
        if report.verdict == HOLDS:
            raise ArithmeticError(f"scan hit {p} not confirmed by the mod-p^3 test")
    return list(hits)


def _scan_parallel(primes: list[int], d: int, eps, jobs: int) -> list[int]:
    from concurrent.futures import ProcessPoolExecutor

    chunks = []
    step = max(1, len(primes) // (jobs * 8))
    for i in range(0, len(primes), step):
        chunks.append(primes[i : i + step])
    out: list[int] = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(kernels.scan_unit_fermat, chunk, d, eps.a, eps.b, eps.denom)
            for chunk in chunks
        ]
        for fut in futures:  # submission order keeps the merge ascending
            out.extend(fut.result())
    return out


# -- the known Z_2-compositum family (CLI: classify-footnote3) ---------------------


def in_z2_compositum_family(disc: int) -> bool:
    """Whether the 2-class field of the imaginary quadratic field of this
    discriminant lies in the compositum of its Z_2-extensions.

    The family is given by explicit congruence patterns on the radicand:
    -1, -2, -l (l prime, 3, 5, 7 mod 8), -2l (l prime, 3, 5 mod 8),
    -l*q (l, q prime, l = 3 and q = 5 mod 8).
    """
    if disc >= 0 or not quadratic.is_fundamental_discriminant(disc):
        raise ValueError("need a negative fundamental discriminant")
    d = disc if disc % 4 == 1 else disc // 4
    n = -d
    if n in (1, 2):
        return True
    fac = numtheory.factor(n)
    if len(fac) == 1 and fac[0][1] == 1:
        return fac[0][0] % 8 in (3, 5, 7)
    if len(fac) == 2 and all(e == 1 for _, e in fac):
        (p1, _), (p2, _) = fac
        if p1 == 2:
            return p2 % 8 in (3, 5)
        pair = {p1 % 8, p2 % 8}
        return pair == {3, 5}
    return False


# -- condition 2: the ideal-logarithm lattice --------------------------------------


def _local_unit_log_rows(d: int, p: int, digits: int) -> tuple[list[tuple[int, int]], int]:
    """Generators of prod_{v|p} log(U_v^1) as lattice rows; (rows, trusted).

    Rows are coordinates in the frame used by LogValue: two scalar slots
    for split p, the (1, theta) basis otherwise.  log(U^k) = pi^k O once
    k > e/(p-1); lower layers contribute logs of explicit generators.
    """
    ring = padic.quad_ring(d, p, digits)
    m = ring.modulus
    if ring.splitting == "split":
        c = 4 if p == 2 else p
        return [(c, 0), (0, c)], digits
    if ring.splitting == "inert":
        if p != 2:
            return [(p, 0), (0, p)], digits
        rows = [(4, 0), (0, 4)]
        trusted = digits
        for g in ((3, 0), (1, 2)):  # generators of U^1/U^2 = O/2
            pair, tr = padic.log_principal_unit_pair(ring, g, digits)
            rows.append(pair)
            trusted = min(trusted, tr)
        return rows, trusted
    # ramified
    pi = ring.uniformizer()
    if p >= 5:
        return [pi, ring.mul(pi, (0, 1))], digits
    if p == 3:
        pair, trusted = padic.log_principal_unit_pair(ring, ring.add(ring.one(), pi), digits)
        pi2 = ring.mul(pi, pi)
        return [pair, pi2, ring.mul(pi2, (0, 1))], trusted
    # p == 2: log(U^1) = <log(1+pi), log(1+pi^2)> + pi^3 O
    pi2 = ring.mul(pi, pi)
    pi3 = ring.mul(pi2, pi)
    rows = [pi3, ring.mul(pi3, (0, 1))]
    trusted = digits
    for g in (ring.add(ring.one(), pi), ring.add(ring.one(), pi2)):
        pair, tr = padic.log_principal_unit_pair(ring, g, digits)
        rows.append(pair)
        trusted = min(trusted, tr)
    return rows, trusted


def _class_group_generator_ideals(disc: int, p: int) -> list[tuple[int, int]]:
    """Split primes (ell, class order) whose classes generate the p-Sylow."""
    G = quadratic.class_group(disc)
    target_vp = padic._vp(G.h, p, 64)
    gens: list[tuple[int, int]] = []
    gen_forms: list[tuple[int, int, int]] = []
    for ell in kernels.sieve_primes(_GENERATOR_PRIME_CAP):
        if padic._vp(len(G.subgroup(gen_forms)), p, 64) >= target_vp:
            break
        if ell == p or disc % ell == 0:
            continue
        if numtheory.kronecker(disc, ell) != 1:
            continue
        form = quadratic.prime_form(disc, ell)
        cls = quadratic.reduce_form(*form)
        if cls in G.subgroup(gen_forms):
            continue
        gen_forms.append(cls)
        gens.append((ell, G.order(cls)))
    else:
        raise ArithmeticError("could not generate the class group from small split primes")
    return gens


@dataclass(frozen=True)
class LogLattice:
    """The lattice data behind the class-field containment test."""

    disc: int
    p: int
    precision: int
    generator_ideals: tuple[tuple[int, int], ...]  # (ell, class order)
    unit_log_valuation: int  # v_p det of prod log(U_v^1)
    full_lattice_valuation: int  # v_p det after adjoining the ideal logs
    quotient_order: int
    certified: bool


def condition_class_test(
    K: FieldDescriptor, p: int, precision: int
) -> tuple[str, LogLattice | None]:
    """Whether the p-class field lies in the composite of the Z_p-extensions.

    For imaginary quadratic K: builds Z_p Log_p(I_p) / prod log(U_v^1) from
    principal-power witnesses of class-group generators and compares the
    quotient order with |Cl_p| by p-adic elementary divisors.  Verdicts:
    'holds', 'fails', or 'undetermined' when the precision cannot certify
    the divisors.
    """
    if not K.is_quadratic() or K.quadratic_d() > 0:
        raise ValueError("lattice test implemented for imaginary quadratic fields")
    d = K.quadratic_d()
    disc = quadratic_discriminant(d)
    G = quadratic.class_group(disc)
    clp = p ** padic._vp(G.h, p, 64)
    if clp == 1:
        return HOLDS, None
    gens = _class_group_generator_ideals(disc, p)
    digits = precision + padic._LOG_SLACK + max(padic._vp(m, p, 64) for _, m in gens) + 2
    log_rows: list[LogValue] = []
    for ell, m in gens:
        witness = quadratic.principal_power_generator(disc, ell, m)
        a, b, denom = witness.sqrt_d_coordinates()
        lv = padic.iwasawa_log(a, b, denom, d, p, digits - 2).scaled_by_inverse(m)
        log_rows.append(lv)
    unit_rows, unit_trusted = _local_unit_log_rows(d, p, digits)

    scale = max(lv.scale for lv in log_rows)
    work = min(
        min(lv.precision - lv.scale for lv in log_rows),
        unit_trusted,
    )
    if work < precision:
        return UNDETERMINED, None
    work_digits = work + scale
    mod = p**work_digits
    base_rows = [
        [c * p**scale % mod for c in row] for row in unit_rows
    ]
    stacked = list(base_rows)
    for lv in log_rows:
        f = p ** (scale - lv.scale)
        stacked.append([c * f % mod for c in lv.components])

    vals0, cert0 = snf.elementary_divisor_valuations(base_rows, p, work_digits)
    vals1, cert1 = snf.elementary_divisor_valuations(stacked, p, work_digits)
    lattice = LogLattice(
        disc,
        p,
        precision,
        tuple(gens),
        sum(vals0),
        sum(vals1),
        p ** (sum(vals0) - sum(vals1)),
        cert0 and cert1,
    )
    if not lattice.certified:
        return UNDETERMINED, lattice
    if clp % lattice.quotient_order:
        raise ArithmeticError(
            f"lattice quotient {lattice.quotient_order} does not divide |Cl_p| = {clp}"
        )
    return (HOLDS if lattice.quotient_order == clp else FAILS), lattice


# -- Log_p on ideals ---------------------------------------------------------------


def log_ideal(
    K: FieldDescriptor,
    factors: list[tuple[int, int]],
    p: int,
    precision: int,
) -> LogValue:
    """Log_p of an ideal prime to p, given as [(ell, exponent), ...].

    Each prime ideal above ell is taken with the canonical root; inert
    primes contribute log_p(ell) directly (m = 1, alpha = ell).  The result
    is (1/m) log_p(alpha) summed over the factor list, independent of the
    witness choices.
    """
    if not K.is_quadratic() or K.quadratic_d() > 0:
        raise ValueError("Log_p is implemented for imaginary quadratic fields")
    d = K.quadratic_d()
    disc = quadratic_discriminant(d)
    if not factors:
        raise ValueError("empty ideal factor list")
    total: LogValue | None = None
    for ell, e in factors:
        if ell == p:
            raise ValueError("ideal must be prime to p")
        if not numtheory.is_prime(ell):
            raise ValueError(f"{ell} is not prime")
        chi = numtheory.kronecker(disc, ell)
        if chi == -1:
            lv = padic.iwasawa_log(ell, 0, 1, d, p, precision)
        else:
            G = quadratic.class_group(disc)
            form = quadratic.prime_form(disc, ell)
            m = G.order(quadratic.reduce_form(*form))
            witness = quadratic.principal_power_generator(disc, ell, m)
            a, b, denom = witness.sqrt_d_coordinates()
            extra = padic._vp(m, p, 64)
            lv = padic.iwasawa_log(a, b, denom, d, p, precision + extra).scaled_by_inverse(m)
        lv = lv.scaled_by_int(e) if e != 1 else lv
        total = lv if total is None else total + lv
    return total


# -- the combined verdict -----------------------------------------------------------


@dataclass(frozen=True)
class RationalityVerdict:
    """The three conditions and the overall p-rationality verdict."""

    field_label: str
    p: int
    condition_mu: str
    condition_class: str
    condition_regulator: str
    overall: str  # p-rational | not-p-rational | undetermined
    tp_order_estimate: int | str
    precision: int
    notes: tuple[str, ...] = ()
    assumed: tuple[str, ...] = ASSUMPTIONS

    def to_json(self) -> dict:
        return {
            "field": self.field_label,
            "p": self.p,
            "conditions": {
                "mu": self.condition_mu,
                "class": self.condition_class,
                "regulator": self.condition_regulator,
            },
            "verdict": self.overall,
            "tp_estimate": str(self.tp_order_estimate),
            "precision": self.precision,
            "notes": list(self.notes),
            "assumed": list(self.assumed),
        }


def rationality_verdict(
    K: FieldDescriptor, p: int, precision: int = DEFAULT_PRECISION
) -> RationalityVerdict:
    """Combine the three conditions for K in {Q, quadratic}.

    Routing: the regulator condition is vacuous for Q and imaginary
    quadratic fields; for real quadratic fields it is the Fermat-quotient
    test, reported as undetermined at p = 2, ramified p, and p | h (the
    clean test needs the unramified, p-coprime-to-h regime).
    """
    if K.is_rationals():
        return RationalityVerdict(K.label, p, HOLDS, HOLDS, VACUOUS, "p-rational", 1, precision)
    if not K.is_quadratic():
        raise ValueError("p-rationality tests cover Q and quadratic fields")
    d = K.quadratic_d()
    notes: list[str] = []
    mu = condition_mu(K, p)
    tp: int | str = "unknown"

    if d < 0:
        regulator = VACUOUS  # unit group is finite, nothing to test
        cls, lattice = condition_class_test(K, p, max(precision, 6))
        if cls == UNDETERMINED:
            notes.append("lattice elementary divisors not certified at this precision")
    else:
        h = quadratic.real_class_number(d)
        cls = HOLDS if h % p else UNDETERMINED
        if h % p == 0:
            notes.append(f"p divides h = {h}; deep class test for real fields not provided")
        if p == 2:
            regulator = UNDETERMINED
            notes.append("regulator test at p = 2 not provided")
        elif d % p == 0:
            regulator = UNDETERMINED
            notes.append("p ramifies; regulator test needs an unramified prime")
        elif h % p == 0:
            regulator = UNDETERMINED
            notes.append("regulator test requires p coprime to the class number")
        else:
            report = fermat_quotient_test(d, p, precision)
            regulator = report.verdict
            if regulator == FAILS:
                tp = report.tp_order_estimate

    conditions = (mu, cls, regulator)
    if any(c == FAILS for c in conditions):
        overall = "not-p-rational"
    elif all(c in (HOLDS, VACUOUS) for c in conditions):
        overall = "p-rational"
        tp = 1
    else:
        overall = UNDETERMINED
        tp = "unknown"
    if overall == "not-p-rational" and not isinstance(tp, int):
        tp = "unknown"
    if overall == "not-p-rational" and (mu == FAILS or cls == FAILS):
        tp = "unknown"
    return RationalityVerdict(
        K.label, p, mu, cls, regulator, overall, tp, precision, tuple(notes)
    )


def rationality_scan(K: FieldDescriptor, bound: int, precision: int = DEFAULT_PRECISION, jobs: int = 1) -> tuple[list[int], list[int]]:
    """Primes p <= bound where K is definitely not p-rational.

    Returns (failing, undetermined).  For real quadratic fields the
    regulator sweep runs through the scan kernel; the finitely many primes
    needing other conditions are handled individually.
    """
    if K.is_rationals():
        return [], []
    if not K.is_quadratic():
        raise ValueError("scan covers Q and quadratic fields")
    d = K.quadratic_d()
    failing: set[int] = set()
    undecided: set[int] = set()
    special = {2} | {q for q, _ in numtheory.factor(abs(d))}
    h = quadratic.class_number(d)
    special |= {q for q, _ in numtheory.factor(h)}
    for p in sorted(q for q in special if q <= bound):
        if not numtheory.is_prime(p):
            continue
        v = rationality_verdict(K, p, precision)
        if v.overall == "not-p-rational":
            failing.add(p)
        elif v.overall == UNDETERMINED:
            undecided.add(p)
    if d > 0:
        failing.update(fermat_quotient_scan(d, bound, jobs=jobs))
    else:
        # mu condition is the only sweep-wide condition; it fails at most at 2 and 3
        pass
    return sorted(failing), sorted(undecided)

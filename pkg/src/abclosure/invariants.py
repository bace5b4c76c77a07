"""The (delta, w) classification of prod_v F_v^x and its empirical verification.

For each prime p the intersection of the field with the p-power cyclotomic
tower determines a level nu; the local factors w_p and the flag delta
classify the product of residue-field unit groups as a profinite abelian
group.  residue_scan tallies actual residue orders over a prime range and
checks the forbidden-exponent predictions (a theorem, so any violation is
a bug, not noise).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from . import kernels, numtheory, padic
from .fields import FieldDescriptor

_VAL_CAP = 64  # residue orders are tallied with exponents capped here


@dataclass(frozen=True)
class CyclotomicIntersection:
    """K cap Q(mu_{p^infty}): the level nu and the kind of the intersection."""

    p: int
    nu: int
    kind: str  # trivial | Q_nu | Q'_nu | contains-mu4-level | contains-mu_p-level
    contains_mu_p_level: bool  # mu_p in K (p odd), mu_4 in K (p = 2)
    witness_orders: tuple[int, ...]  # orders of the p-power-conductor characters


def cyclotomic_intersection(K: FieldDescriptor, p: int) -> CyclotomicIntersection:
    """Classify K cap Q(mu_{p^infty}) from the p-power-conductor characters."""
    chars = K.p_power_characters(p)
    orders = tuple(sorted(c.order() for c in chars))
    if p != 2:
        mu_p = K.contains_mu(p)
        nu = 0
        for c in chars:
            o = c.order()
            while o % p == 0:
                o //= p
            if o == 1:
                e = 0
                oo = c.order()
                while oo > 1:
                    oo //= p
                    e += 1
                nu = max(nu, e)
        kind = (
            "contains-mu_p-level"
            if mu_p
            else ("Q_nu" if nu >= 1 else "trivial")
        )
        return CyclotomicIntersection(p, nu, kind, mu_p, orders)

    mu4 = K.contains_mu(4)
    nu_even = 0
    nu_odd = 0
    for c in chars:
        o5 = c.restricted_two_part_order()
        k = 0
        while o5 > 1:
            o5 //= 2
            k += 1
        if c.parity() == 1:
            nu_even = max(nu_even, k)
        else:
            nu_odd = max(nu_odd, k)
    if mu4:
        # both chains must report the same level; a mismatch means corrupt input
        if nu_odd != nu_even:
            raise ArithmeticError(
                f"Q_nu/Q'_nu chains disagree ({nu_even} vs {nu_odd}) though mu_4 in K"
            )
        return CyclotomicIntersection(2, nu_even, "contains-mu4-level", True, orders)
    nu = max(nu_even, nu_odd)
    if nu == 0:
        return CyclotomicIntersection(2, 0, "trivial", False, orders)
    kind = "Q_nu" if nu_even >= nu_odd else "Q'_nu"
    return CyclotomicIntersection(2, nu, kind, False, orders)


@dataclass(frozen=True)
class StructureInvariants:
    """(delta, w) and the formal shape of prod_v F_v^x as a profinite group."""

    field_label: str
    r2: int
    delta: int
    w: int
    w_p: dict[int, int]
    nu_p: dict[int, int]

    def known_layer_type(self) -> str:
        """The product shape prod_{n>=1} ((Z/2Z)^delta x Z/(w n)Z), rendered."""
        if self.w == 1 and self.delta == 0:
            return "prod_{n>=1} Z/nZ"
        inner = f"Z/{self.w}nZ" if self.w > 1 else "Z/nZ"
        if self.delta:
            return f"prod_{{n>=1}} ((Z/2Z) x {inner})"
        return f"prod_{{n>=1}} {inner}"

    def full_group_type(self) -> str:
        """Zhat^(r2+1) x the known layer."""
        return f"Zhat^{self.r2 + 1} x {self.known_layer_type()}"

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "w": self.w,
            "w_p": {str(p): v for p, v in sorted(self.w_p.items())},
            "nu_p": {str(p): v for p, v in sorted(self.nu_p.items())},
            "r2": self.r2,
            "known_layer": self.known_layer_type(),
        }


def structure_invariants(K: FieldDescriptor) -> StructureInvariants:
    """Compute (delta, w_p, w) for an abelian field.

    Only p dividing the conductor (plus p = 2) can give w_p > 1, so the
    product over all p is finite by construction.  The normalization that
    makes w free of simple prime factors is automatic here: any nontrivial
    w_p is p^(nu+1) with nu >= 1, or 4*2^nu.
    """
    w_p: dict[int, int] = {}
    nu_p: dict[int, int] = {}
    delta = 0
    primes = {2} | {p for p, _ in numtheory.factor(K.conductor)}
    for p in sorted(primes):
        inter = cyclotomic_intersection(K, p)
        nu = inter.nu
        if p == 2:
            if inter.contains_mu_p_level:
                wp = 4 * 2**nu
            else:
                wp = 4 * 2**nu if nu >= 1 else 1
                if nu >= 1:
                    delta = 1
        else:
            wp = p ** (nu + 1) if nu >= 1 else 1
        if wp > 1:
            w_p[p] = wp
            nu_p[p] = nu
    w = 1
    for v in w_p.values():
        w *= v
    # Prop-2.6-style consistency: delta = 1 iff mu_4 not in K and 8 | w
    assert (delta == 1) == (not K.contains_mu(4) and w % 8 == 0)
    for q, _ in numtheory.factor(w):
        assert w % (q * q) == 0, "w must have no simple prime factor"
    return StructureInvariants(K.label, K.r2, delta, w, w_p, nu_p)


def forbidden_exponents(K: FieldDescriptor, p: int, inter: CyclotomicIntersection | None = None) -> frozenset[int]:
    """Exponents k >= 1 such that no place contributes a cyclic factor of order p^k."""
    if inter is None:
        inter = cyclotomic_intersection(K, p)
    nu = inter.nu
    if p != 2:
        return frozenset(range(1, nu + 1))
    if inter.contains_mu_p_level:
        return frozenset(range(1, nu + 2))
    if nu >= 1:
        return frozenset(range(2, nu + 2))
    return frozenset()


@dataclass
class ResidueTally:
    """Per-exponent counts of v_p(|F_v^x|) over places above ell <= bound."""

    field_label: str
    p: int
    bound: int
    counts: dict[int, int]
    counts_deg1: dict[int, int]
    total_deg1: int
    forbidden: frozenset[int]
    k_max: int
    real_places_added: int
    violations: list[int] = dataclass_field(default_factory=list)
    missing: list[int] = dataclass_field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "PASS" if not self.violations and not self.missing else "FAIL"

    def density_k1(self) -> Fraction | None:
        """Fraction of degree-one places with exponent exactly 1 (Chebotarev reading)."""
        if not self.total_deg1:
            return None
        return Fraction(self.counts_deg1.get(1, 0), self.total_deg1)

    def to_json(self) -> dict:
        out = {
            "field": self.field_label,
            "p": self.p,
            "B": self.bound,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "forbidden": sorted(self.forbidden),
            "verdict": self.verdict,
            "k_max": self.k_max,
            "counts_degree_one": {str(k): v for k, v in sorted(self.counts_deg1.items())},
            "real_places_with_k1": self.real_places_added,
        }
        dens = self.density_k1()
        if dens is not None:
            out["density_k1_degree_one"] = {
                "num": dens.numerator,
                "den": dens.denominator,
            }
        return out


def residue_scan(
    K: FieldDescriptor, p: int, bound: int, k_max: int | None = None
) -> ResidueTally:
    """Tally v_p(|F_v^x|) for every place v above unramified ell <= bound.

    Places are counted with multiplicity g; for p = 2 the real embeddings
    contribute exponent 1.  The verdict is PASS when every forbidden
    exponent has count zero and every allowed exponent up to k_max is hit.
    """
    if bound < 100:
        raise ValueError("bound must be at least 100")
    inter = cyclotomic_intersection(K, p)
    forb = forbidden_exponents(K, p, inter)
    counts: dict[int, int] = {}
    counts_deg1: dict[int, int] = {}
    total_deg1 = 0
    n = K.degree
    pcap = p**_VAL_CAP
    for ell in kernels.sieve_primes(bound):
        if ell == p or K.is_ramified(ell):
            continue
        f = K.frobenius_order(ell)
        g = n // f
        k = padic._vp(pow(ell, f, pcap) - 1, p, _VAL_CAP)
        counts[k] = counts.get(k, 0) + g
        if f == 1:
            counts_deg1[k] = counts_deg1.get(k, 0) + g
            total_deg1 += g
    real_added = 0
    if p == 2 and K.r1:
        counts[1] = counts.get(1, 0) + K.r1
        real_added = K.r1
    observed_max = max((k for k in counts if k >= 1), default=0)
    if k_max is None:
        k_max = min(6, observed_max)
    violations = sorted(k for k in forb if counts.get(k, 0) > 0)
    missing = sorted(
        k for k in range(1, k_max + 1) if k not in forb and counts.get(k, 0) == 0
    )
    return ResidueTally(
        K.label,
        p,
        bound,
        counts,
        counts_deg1,
        total_deg1,
        forb,
        k_max,
        real_added,
        violations,
        missing,
    )


@dataclass(frozen=True)
class GammaDescriptor:
    """Local p-power torsion above p and the gap it creates below the p-ramified tower.

    quotient_order = |prod_{v|p} mu_p(K_v)| / |mu_p(K)|; the extra local
    cyclic factors never change the (delta, w) classification, so the
    descriptor carries the same (delta, w_p) data plus the irregular places.
    """

    field_label: str
    p: int
    irregular_places: tuple[tuple[str, int], ...]  # (place, |mu_p(K_v)|) where > 1
    local_orders: tuple[tuple[str, int], ...]
    global_mu_order: int
    quotient_order: int
    delta: int
    w_p: int

    def to_json(self) -> dict:
        return {
            "field": self.field_label,
            "p": self.p,
            "local_mu_orders": {v: o for v, o in self.local_orders},
            "irregular_places": {v: o for v, o in self.irregular_places},
            "global_mu_order": self.global_mu_order,
            "quotient_order": self.quotient_order,
            "delta": self.delta,
            "w_p": self.w_p,
        }


def gamma_descriptor(K: FieldDescriptor, p: int) -> GammaDescriptor:
    """Assemble the local-torsion layer for K quadratic or Q."""
    if K.is_rationals():
        d = None
    elif K.is_quadratic():
        d = K.quadratic_d()
    else:
        raise ValueError("gamma descriptor implemented for Q and quadratic fields")
    orders = padic.local_torsion_orders(d, p)
    prod = 1
    for _, o in orders:
        prod *= o
    glob = padic.global_mu_p_order(d, p)
    if prod % glob:
        raise ArithmeticError("global torsion does not embed in the local product")
    quotient = prod // glob
    inv = structure_invariants(K)
    return GammaDescriptor(
        K.label,
        p,
        tuple((v, o) for v, o in orders if o > 1),
        tuple(orders),
        glob,
        quotient,
        inv.delta,
        inv.w_p.get(p, 1),
    )

"""Decomposition data of rational primes q != p in the tower over K.

The Galois group of the level-n layer over Q splits as (tame part) x
(Z/p^{n+1})^x; the Frobenius at q has a Gamma-component with discrete log
x_q = log<q>/log(1+p) of valuation m_q, independent of the tame part.  The
procyclic decomposition group is generated by gamma^{p^{m_q}} sigma_p
sigma_0, and everything a rank computation needs about sigma_p and sigma_0
can be read off character values at q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import NamedTuple, Optional

from .arith import (
    PadicNumber,
    euler_phi,
    is_prime,
    mul_order,
    padic_log,
    teichmuller_residue,
    v_p,
)
from .characters import DirichletCharacter, FieldSpec, RootOfUnity, compose, evaluate, omega
from .errors import InvariantViolationError, PrecisionError


def m_index(q: int, p: int) -> int:
    """m_q = v_p(q^(p-1) - 1) - 1; p^{m_q} counts the primes of the
    rational tower above q."""
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    if q == p:
        raise ValueError("q must differ from p")
    return v_p(pow(q, p - 1) - 1, p) - 1


def inertia_trivial(chi: DirichletCharacter, q: int) -> bool:
    """True iff q does not divide the conductor of chi."""
    if q == chi.p:
        raise ValueError("q must differ from p")
    return chi.conductor % q != 0


def sigma0_ok(chi: DirichletCharacter, q: int) -> bool:
    """Whether chi^{-1} omega is trivial on the non-p part of the Frobenius
    class of q, i.e. whether (chi^{-1} omega)(q) has p-power order."""
    p = chi.p
    psi = compose(chi, omega(p), -1, 1)
    val = evaluate(psi, q)
    if val is None:
        raise InvariantViolationError(
            "sigma0_ok called with q dividing the conductor; check inertia first"
        )
    return val.order_is_p_power(p)


def sigma_p_value(chi: DirichletCharacter, q: int, precision: Optional[int] = None) -> RootOfUnity:
    """chi^{-1}(sigma_p) for the p-Sylow component sigma_p of the generator
    gamma^{p^m} sigma_p of the p-part of the decomposition group.

    The p-power-order part z_p of chi^{-1}(q) equals chi^{-1} of the p-part
    of the Frobenius class; sigma_p is that p-part raised to u^{-1}, where
    u is the unit x_q / p^{m_q}.
    """
    p = chi.p
    if not inertia_trivial(chi, q):
        raise ValueError("chi is ramified at q")
    z = evaluate(chi, q).inverse()
    zp = z.p_power_part(p)
    if zp.is_one:
        return zp
    a = 0
    n = zp.order
    while n % p == 0:
        n //= p
        a += 1
    m = m_index(q, p)
    needed = m + a + 2
    if precision is not None and precision < needed:
        raise PrecisionError(
            f"sigma_p_value needs precision >= {needed}, got {precision}"
        )
    W = max(precision or 0, m + a + 8)
    modW = p ** W
    tw = teichmuller_residue(q, p, W)
    principal = q * pow(tw, -1, modW) % modW
    log_q = padic_log(PadicNumber(p, W, principal))
    log_k0 = padic_log(PadicNumber(p, W, 1 + p))
    x_q = log_q.divide(log_k0)
    if x_q.valuation != m:
        raise InvariantViolationError(
            f"Gamma-component valuation {x_q.valuation} != m_q = {m}"
        )
    u = x_q.unit_part()
    if u.precision < a:
        raise PrecisionError("not enough digits to determine the unit u mod p^a")
    u_inv = pow(u.residue % p ** a, -1, p ** a)
    return zp ** u_inv


class SplittingData(NamedTuple):
    residue_degree: int
    prime_count: int
    p_exponent: int


def _order_in_tame_quotient(a: int, quotient: FieldSpec) -> int:
    """Order of the unit a in (Z/f')^x / H'."""
    fq = quotient.f
    if fq == 1:
        return 1
    hset = quotient.subgroup_elements
    x = a % fq
    if math.gcd(x, fq) != 1:
        raise ValueError(f"{a} is not a unit mod {fq}")
    y = x
    for e in range(1, euler_phi(fq) + 1):
        if y in hset:
            return e
        y = y * x % fq
    raise InvariantViolationError("order search fell through")


def splitting_count(field: FieldSpec, q: int, n: int) -> SplittingData:
    """(f_n, r_n, e_n) for q at level n, computed in the inertia quotient:
    residue degree, number of primes, and the exponent of the p-part of the
    residue field's unit group."""
    p = field.p
    if q == p:
        raise ValueError("q must differ from p")
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    quotient = field.tame_quotient(q)
    pn1 = p ** (n + 1)
    e_tame = _order_in_tame_quotient(q, quotient)
    e_wild = mul_order(q, pn1)
    f_n = math.lcm(e_tame, e_wild)
    group_order = quotient.tame_degree() * euler_phi(pn1)
    if group_order % f_n:
        raise InvariantViolationError("residue degree does not divide group order")
    r_n = group_order // f_n
    # v_p(q^{f_n} - 1) via lifting the exponent: the prime-to-p part of f_n
    # contributes v_p(q^{d} - 1) = m_q + 1, the p-part adds v_p(f_n).
    e_n = m_index(q, p) + 1 + _vp_plain(f_n, p)
    return SplittingData(f_n, r_n, e_n)


def _vp_plain(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def stabilization_level(field: FieldSpec, q: int) -> int:
    """Smallest n at which the residue degree starts growing by a factor of
    p each level; beyond it primes stay inert level-to-level."""
    prev = splitting_count(field, q, 0).residue_degree
    for n in range(0, 16):
        nxt = splitting_count(field, q, n + 1).residue_degree
        if nxt == field.p * prev:
            return n
        prev = nxt
    raise InvariantViolationError("no stabilization level below 16")


def rational_prime_count(p: int, q: int, n: int) -> int:
    """Number of primes above q at level n of the rational tower (the degree
    p^n layer of the cyclotomic Z_p-extension of Q)."""
    if q == p:
        raise ValueError("q must differ from p")
    pn1 = p ** (n + 1)
    tw = teichmuller_residue(q, p, n + 1)
    principal = q * pow(tw, -1, pn1) % pn1
    return p ** n // mul_order(principal, pn1)


@dataclass
class FrobeniusProfile:
    """Per-(field, q) decomposition data, cached for a list of characters."""

    field: FieldSpec
    q: int
    m_q: int
    ramified: bool
    per_chi: dict = dataclass_field(default_factory=dict)

    @classmethod
    def build(cls, field: FieldSpec, q: int, chars: list) -> "FrobeniusProfile":
        prof = cls(field, q, m_index(q, field.p), field.is_ramified(q))
        for chi in chars:
            it = inertia_trivial(chi, q)
            ok = it and sigma0_ok(chi, q)
            entry = {"inertia_trivial": it, "sigma0_ok": ok}
            if ok:
                val = sigma_p_value(chi, q)
                entry["sigma_p_value"] = val
            prof.per_chi[chi] = entry
        return prof

    def to_dict(self) -> dict:
        out = {"q": self.q, "m_q": self.m_q, "ramified": self.ramified, "per_chi": {}}
        for chi, entry in self.per_chi.items():
            rec = {
                "inertia_trivial": entry["inertia_trivial"],
                "sigma0_ok": entry["sigma0_ok"],
            }
            if "sigma_p_value" in entry:
                val = entry["sigma_p_value"]
                rec["sigma_p_exponent"] = [
                    val.exponent.numerator,
                    val.exponent.denominator,
                ]
            out["per_chi"][chi.label()] = rec
        return out

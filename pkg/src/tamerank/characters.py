"""Dirichlet characters of G = Gal(F(mu_p)/Q) with formal root-of-unity values.

A character is stored primitively: its modulus equals its conductor and its
data is the image of each generator of (Z/cond)^x as an exponent in Q/Z.
The identification of exponents with p-adic roots of unity is pinned once:
zeta_{p-1} is the image of the smallest primitive root mod p under the
Teichmueller character, and p-power roots stay formal.  All predicates used
downstream (triviality, parity, p-power order, conjugacy) are independent of
that pinning.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .arith import (
    _check_odd_prime,
    crt,
    euler_phi,
    mul_order,
    smallest_primitive_root,
    unit_group,
)
from .errors import InvariantViolationError


@dataclass(frozen=True)
class RootOfUnity:
    """A root of unity as an exponent in Q/Z; the denominator is its order."""

    exponent: Fraction

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % 1)

    @classmethod
    def from_pair(cls, k: int, order: int) -> "RootOfUnity":
        return cls(Fraction(k, order))

    @property
    def order(self) -> int:
        return self.exponent.denominator

    @property
    def is_one(self) -> bool:
        return self.exponent == 0

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        return RootOfUnity(self.exponent + other.exponent)

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity(self.exponent * k)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity(-self.exponent)

    def exponent_for(self, order: int) -> int:
        """Integer k with self = zeta_order^k; order must be a multiple."""
        val = self.exponent * order
        if val.denominator != 1:
            raise ValueError(f"order {self.order} does not divide {order}")
        return int(val)

    def p_power_part(self, p: int) -> "RootOfUnity":
        n = self.order
        pa = 1
        while n % p == 0:
            n //= p
            pa *= p
        if pa == 1:
            return ONE
        # CRT split of the exponent: kill the prime-to-p component
        return self ** (n * pow(n, -1, pa))

    def prime_to_p_part(self, p: int) -> "RootOfUnity":
        return self * self.p_power_part(p).inverse()

    def order_is_p_power(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    def sign(self) -> int:
        if self.order > 2:
            raise ValueError("not a sign")
        return 1 if self.is_one else -1

    def __repr__(self):
        return f"zeta({self.exponent.numerator}/{self.exponent.denominator})"


ONE = RootOfUnity(Fraction(0))


def _raw_value(units, images, a):
    """Value of the not-necessarily-primitive exponent map at the unit a."""
    if units.modulus == 1:
        return ONE
    out = ONE
    for im, e in zip(images, units.dlog(a)):
        out = out * (im ** e)
    return out


class DirichletCharacter:
    """A primitive Dirichlet character attached to an ambient odd prime p."""

    __slots__ = ("p", "modulus", "units", "images", "order", "parity", "d_chi")

    def __init__(self, p: int, modulus: int, images: tuple):
        self.p = p
        self.modulus = modulus
        self.units = unit_group(modulus)
        self.images = tuple(images)
        if len(self.images) != len(self.units.generators):
            raise ValueError("one image per unit-group generator required")
        for im, n in zip(self.images, self.units.orders):
            if not (im ** n).is_one:
                raise ValueError("image order must divide the generator order")
        self.order = math.lcm(1, *(im.order for im in self.images))
        self.parity = self.value(-1).sign() if modulus > 1 else 1
        self.d_chi = self._local_degree()

    def _local_degree(self) -> int:
        n, p = self.order, self.p
        pa = 1
        while n % p == 0:
            n //= p
            pa *= p
        unram = 1 if n == 1 else mul_order(p, n)
        return euler_phi(pa) * unram

    @property
    def conductor(self) -> int:
        return self.modulus

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def is_odd(self) -> bool:
        return self.parity == -1

    def value(self, a: int):
        """chi(a) as a RootOfUnity, or None when gcd(a, conductor) > 1."""
        m = self.modulus
        if m == 1:
            return ONE
        a %= m
        if math.gcd(a, m) != 1:
            return None
        return _raw_value(self.units, self.images, a)

    __call__ = value

    def power(self, t: int) -> "DirichletCharacter":
        return character_from_images(self.p, self.modulus, tuple(im ** t for im in self.images))

    def inverse(self) -> "DirichletCharacter":
        return self.power(-1)

    def label(self) -> str:
        if self.is_trivial:
            return "eps"
        if self.modulus % self.p == 0 and self.modulus == self.p:
            k = self.images[0].exponent_for(self.p - 1)
            return f"omega^{k}"
        exps = ".".join(
            f"{im.exponent.numerator}of{im.exponent.denominator}" for im in self.images
        )
        return f"chi{self.modulus}[{exps}]"

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "generator_exponents": [
                [im.exponent.numerator, im.exponent.denominator] for im in self.images
            ],
            "order": self.order,
            "conductor": self.conductor,
            "parity": self.parity,
            "d_chi": self.d_chi,
        }

    def _key(self):
        return (self.p, self.modulus, self.images)

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"<character {self.label()} mod {self.modulus} (p={self.p})>"


def _conductor(modulus: int, units, images) -> int:
    """Smallest d | modulus such that the exponent map factors through (Z/d)^x."""
    if modulus == 1:
        return 1
    divisors = sorted(
        d for d in range(1, modulus + 1) if modulus % d == 0
    )
    for d in divisors:
        ok = True
        for u in range(1 + d, modulus, d):
            if math.gcd(u, modulus) != 1:
                continue
            if not _raw_value(units, images, u).is_one:
                ok = False
                break
        if ok:
            return d
    raise InvariantViolationError("conductor search fell through")


def character_from_images(p: int, modulus: int, images: tuple) -> DirichletCharacter:
    """Build the primitive character inducing the given exponent map."""
    units = unit_group(modulus)
    cond = _conductor(modulus, units, images)
    if cond == modulus:
        return DirichletCharacter(p, modulus, images)
    cunits = unit_group(cond)
    cimages = []
    for g in cunits.generators:
        gp = g
        while math.gcd(gp, modulus) != 1:
            gp += cond
        cimages.append(_raw_value(units, images, gp))
    return DirichletCharacter(p, cond, tuple(cimages))


def trivial_character(p: int) -> DirichletCharacter:
    return DirichletCharacter(p, 1, ())


def omega(p: int) -> DirichletCharacter:
    """The Teichmueller character, pinned by omega(g) = zeta_{p-1} for the
    smallest primitive root g mod p."""
    _check_odd_prime(p)
    return DirichletCharacter(p, p, (RootOfUnity.from_pair(1, p - 1),))


def evaluate(chi: DirichletCharacter, a: int):
    """Primitive evaluation; None encodes the value 0."""
    return chi.value(a)


def compose(chi: DirichletCharacter, psi: DirichletCharacter, e1: int, e2: int) -> DirichletCharacter:
    """The primitive character inducing chi^e1 * psi^e2."""
    if chi.p != psi.p:
        raise ValueError("characters live over different primes")
    L = math.lcm(chi.modulus, psi.modulus)
    units = unit_group(L)
    images = tuple(
        (chi.value(g) ** e1) * (psi.value(g) ** e2) for g in units.generators
    )
    return character_from_images(chi.p, L, images)


@dataclass(frozen=True)
class FieldSpec:
    """K = F(mu_p) for F the subfield of Q(mu_f) fixed by H <= (Z/f)^x.

    gcd(f, p) = 1, so K/Q is ramified at p exactly through mu_p.  The level-n
    layer K_n sits inside Q(mu_{f p^{n+1}}).
    """

    p: int
    f: int = 1
    subgroup: tuple = ()

    def __post_init__(self):
        _check_odd_prime(self.p)
        if self.f < 1:
            raise ValueError("f must be a positive integer")
        if math.gcd(self.f, self.p) != 1:
            raise ValueError("f must be prime to p")
        gens = []
        for h in self.subgroup:
            h %= self.f
            if math.gcd(h, self.f) != 1:
                raise ValueError(f"subgroup generator {h} is not a unit mod {self.f}")
            if h != 1 % self.f:
                gens.append(h)
        object.__setattr__(self, "subgroup", tuple(sorted(set(gens))))

    @cached_property
    def subgroup_elements(self) -> frozenset:
        elems = {1 % self.f}
        frontier = list(elems)
        while frontier:
            x = frontier.pop()
            for h in self.subgroup:
                y = x * h % self.f
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
        return frozenset(elems)

    @cached_property
    def group_order(self) -> int:
        phi_f = euler_phi(self.f)
        hsize = len(self.subgroup_elements)
        if phi_f % hsize:
            raise InvariantViolationError("H size does not divide phi(f)")
        return phi_f // hsize * (self.p - 1)

    def level_modulus(self, n: int) -> int:
        return self.f * self.p ** (n + 1)

    def tame_quotient(self, q: int) -> "FieldSpec":
        """The field with the q-part of the tame conductor (inertia) removed."""
        fq = self.f
        while fq % q == 0:
            fq //= q
        return FieldSpec(self.p, fq, tuple(h % fq for h in self.subgroup))

    def tame_degree(self) -> int:
        return euler_phi(self.f) // len(self.subgroup_elements)

    def is_ramified(self, q: int) -> bool:
        """Whether q ramifies in K, i.e. survives the H-quotient of the
        q-part of the conductor."""
        if q == self.p:
            return True
        return self.tame_quotient(q).tame_degree() < self.tame_degree()


def enumerate_characters(field: FieldSpec) -> list:
    """All characters of G = Gal(K/Q), primitive, in lexicographic exponent
    order on the fixed generators of (Z/fp)^x."""
    p, f = field.p, field.f
    M = f * p
    units = unit_group(M)
    lifted_h = [crt(h, f, 1, p) for h in field.subgroup]
    chars = []
    for expo in itertools.product(*(range(n) for n in units.orders)):
        images = tuple(
            RootOfUnity.from_pair(e, n) for e, n in zip(expo, units.orders)
        )
        if all(_raw_value(units, images, h).is_one for h in lifted_h):
            chars.append(character_from_images(p, M, images))
    if len(chars) != field.group_order:
        raise InvariantViolationError(
            f"enumerated {len(chars)} characters, expected {field.group_order}"
        )
    return chars


def _conjugacy_orbit(chi: DirichletCharacter) -> list:
    """Orbit of chi under the local Galois action t: chi -> chi^t with
    t = p^j on the prime-to-p part of the order and arbitrary on the p-part."""
    n, p = chi.order, chi.p
    if n == 1:
        return [chi]
    pa = 1
    n0 = n
    while n0 % p == 0:
        n0 //= p
        pa *= p
    tgens = []
    if n0 > 1:
        tgens.append(crt(p % n0, n0, 1, pa))
    if pa > 1:
        tgens.append(crt(1, n0, smallest_primitive_root(pa), pa))
    orbit = [chi]
    seen = {chi}
    frontier = [chi]
    while frontier:
        c = frontier.pop()
        for t in tgens:
            c2 = c.power(t)
            if c2 not in seen:
                seen.add(c2)
                orbit.append(c2)
                frontier.append(c2)
    return orbit


def conjugacy_classes(chars: list, p: int) -> list:
    """Partition of the full dual into Q_p-conjugacy classes.

    Each class has size d_chi and its members share order, conductor, parity
    and d_chi; the class representative is the earliest member in the
    enumeration order of `chars`.
    """
    index = {c: i for i, c in enumerate(chars)}
    seen = set()
    classes = []
    for c in chars:
        if c in seen:
            continue
        orbit = _conjugacy_orbit(c)
        for m in orbit:
            if m not in index:
                raise InvariantViolationError("conjugate escaped the dual group")
        orbit.sort(key=index.__getitem__)
        if len(orbit) != c.d_chi:
            raise InvariantViolationError("conjugacy class size != d_chi")
        if len({(m.conductor, m.parity, m.d_chi, m.order) for m in orbit}) != 1:
            raise InvariantViolationError("conjugates disagree on cached data")
        seen.update(orbit)
        classes.append(orbit)
    if sum(len(cl) for cl in classes) != len(chars):
        raise InvariantViolationError("class sizes do not sum to |G|")
    return classes


def class_representatives(chars: list, p: int) -> list:
    return [cl[0] for cl in conjugacy_classes(chars, p)]

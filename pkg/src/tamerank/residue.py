"""Brute-force finite-level Galois modules for the tame primes.

At level n the p-part of (O_{K_n}/q)^x is induced from the decomposition
subgroup: primes above q are the cosets of <Frob_q>, each contributing a
cyclic group Z/p^{e_n} on which Frobenius acts as multiplication by q.  All
group data lives in modular arithmetic: an element of Gal(K_n/Q), taken
modulo inertia, is a pair (tame class, unit mod p^{n+1}).  chi-quotients
are computed by Smith reduction of an integer presentation over the
coefficient lattice of O_chi, which makes this an implementation-independent
check on every rank-formula ingredient.

The chi-quotient is taken over the group ring of G = Gal(K/Q), embedded in
the level group as (tame part) x (Teichmueller torsion); the cyclotomic
Z_p-direction is deliberately left free, so module sizes grow with the level
and the growth rate is the Z_p-rank of the limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

from .arith import crt, smallest_primitive_root, teichmuller_residue, unit_group
from .characters import DirichletCharacter, FieldSpec
from .errors import InvariantViolationError, OracleInconsistencyError
from .frobenius import splitting_count
from .localring import local_ring

SNF_GUARD_DIGITS = 4


@dataclass
class ResidueModule:
    """Induced module (Z/p^{e_n})^{r_n} with its Galois action tables.

    `gen_actions` maps each generator of the embedded copy of G to its
    coset permutation with Frobenius-power twists; `chi_points` holds the
    integer at which a character of G must be evaluated for that generator.
    """

    field: FieldSpec
    q: int
    level: int
    residue_degree: int
    e_exp: int
    cosets: list
    gen_actions: list  # [(chi_point, [(j, t)] per coset)]
    j_action: list  # [(j, t)] per coset for complex conjugation

    @property
    def num_cosets(self) -> int:
        return len(self.cosets)

    @property
    def total_exponent(self) -> int:
        return self.e_exp * self.num_cosets


class _LevelGroup:
    """Gal(K_n/Q) modulo the inertia at q, as pairs of modular residues."""

    def __init__(self, field: FieldSpec, q: int, n: int):
        self.p = field.p
        self.quotient = field.tame_quotient(q)
        self.fq = self.quotient.f
        self.hset = self.quotient.subgroup_elements
        self.pmod = field.p ** (n + 1)

    def canon(self, a: int) -> int:
        if self.fq == 1:
            return 0
        return min(a * h % self.fq for h in self.hset)

    def element(self, a: int, b: int) -> tuple:
        return (self.canon(a % self.fq), b % self.pmod)

    def mul(self, x: tuple, y: tuple) -> tuple:
        return (self.canon(x[0] * y[0]) if self.fq > 1 else 0, x[1] * y[1] % self.pmod)

    def elements(self) -> list:
        tame = sorted({self.canon(a) for a in range(self.fq) if math.gcd(a, self.fq) == 1}) or [0]
        wild = [b for b in range(1, self.pmod) if b % self.p != 0]
        return [(a, b) for a in tame for b in wild]


def residue_module(field: FieldSpec, q: int, n: int) -> ResidueModule:
    """Build the level-n module for q with deterministic coset ordering."""
    p = field.p
    data = splitting_count(field, q, n)
    grp = _LevelGroup(field, q, n)
    qbar = grp.element(q, q)

    # enumerate cosets of <qbar>, identity's coset first, then ascending
    loc = {}
    cosets = []
    order = [grp.element(1, 1)] + grp.elements()
    for e in order:
        if e in loc:
            continue
        idx = len(cosets)
        cosets.append(e)
        x = e
        for t in range(data.residue_degree):
            if x in loc:
                raise InvariantViolationError("coset walk collided")
            loc[x] = (idx, t)
            x = grp.mul(x, qbar)
        if x != e:
            raise InvariantViolationError("Frobenius order mismatch in coset walk")
    if len(cosets) != data.prime_count:
        raise InvariantViolationError("coset count != prime count")

    def action_table(g: tuple) -> list:
        return [loc[grp.mul(g, c)] for c in cosets]

    gen_actions = []
    f = field.f
    if f > 1:
        for g in unit_group(f).generators:
            point = crt(g, f, 1, p)
            gen_actions.append((point, action_table(grp.element(g, 1))))
    gstar = smallest_primitive_root(p)
    torsion = teichmuller_residue(gstar, p, n + 1)
    gen_actions.append((crt(1, f, gstar, p), action_table(grp.element(1, torsion))))

    j_action = action_table(grp.element(-1 % max(grp.fq, 1), -1 % grp.pmod))

    return ResidueModule(
        field=field,
        q=q,
        level=n,
        residue_degree=data.residue_degree,
        e_exp=data.p_exponent,
        cosets=cosets,
        gen_actions=gen_actions,
        j_action=j_action,
    )


def _snf_exponent(rows: List[list], ncols: int, p: int, K: int) -> int:
    """Sum of p-valuations of the invariant factors of the lattice quotient
    Z^ncols / (row span), computed mod p^K.  The cokernel must be finite
    p-torsion, which the caller guarantees with explicit p^e rows."""
    mod = p ** K

    def val(x: int) -> int:
        if x == 0:
            return K
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    mat = [row[:] for row in rows if any(row)]
    live = list(range(ncols))
    total = 0
    while live:
        best = None
        for i, row in enumerate(mat):
            for cpos, c in enumerate(live):
                v = val(row[c])
                if best is None or v < best[0]:
                    best = (v, i, cpos)
                    if v == 0:
                        break
            if best and best[0] == 0:
                break
        if best is None or best[0] >= K:
            raise InvariantViolationError(
                "relation matrix left a free direction; presentation is wrong"
            )
        v, i, cpos = best
        col = live[cpos]
        pivot_row = mat[i]
        unit = pivot_row[col] // p ** v
        inv = pow(unit, -1, mod)
        pivot_row = [x * inv % mod for x in pivot_row]
        new_mat = []
        for k, row in enumerate(mat):
            if k == i:
                continue
            e = row[col]
            if e:
                factor = e // p ** v
                row = [(x - factor * y) % mod for x, y in zip(row, pivot_row)]
            if any(row[c] for c in live if c != col):
                new_mat.append(row)
        mat = new_mat
        live.pop(cpos)
        total += v
    return total


def chi_quotient_order(
    module: ResidueModule, chi: DirichletCharacter, part: Optional[str] = None
) -> int:
    """Exponent of p in the order of the chi-quotient of the module (or of
    its plus/minus part when `part` is "plus" or "minus")."""
    p = module.field.p
    e = module.e_exp
    K = e + SNF_GUARD_DIGITS
    mod = p ** K
    ring = local_ring(chi.order, p, K)
    d = ring.dim
    r = module.num_cosets
    ncols = r * d
    q = module.q

    qpow = {}

    def twist(t: int) -> int:
        if t not in qpow:
            qpow[t] = pow(q, t, mod)
        return qpow[t]

    rows = []
    for point, table in module.gen_actions:
        value = chi.value(point)
        if value is None:
            raise InvariantViolationError("character evaluation hit a non-unit")
        Z = ring.root_matrix(value)
        for i in range(r):
            j, t = table[i]
            qt = twist(t)
            for b in range(d):
                row = [0] * ncols
                row[j * d + b] = (row[j * d + b] + qt) % mod
                for c in range(d):
                    row[i * d + c] = (row[i * d + c] - Z[c][b]) % mod
                rows.append(row)
    if part is not None:
        sign = -1 if part == "plus" else 1 if part == "minus" else None
        if sign is None:
            raise ValueError("part must be 'plus', 'minus', or None")
        # kill the image of (1 -+ J): relations m_i -+ q^t m_{jJ}
        for i in range(r):
            j, t = module.j_action[i]
            qt = twist(t)
            for b in range(d):
                row = [0] * ncols
                row[i * d + b] = (row[i * d + b] + 1) % mod
                row[j * d + b] = (row[j * d + b] + sign * qt) % mod
                rows.append(row)
    pe = pow(p, e)
    for c in range(ncols):
        row = [0] * ncols
        row[c] = pe
        rows.append(row)
    total = _snf_exponent(rows, ncols, p, K)
    if total > e * r * d:
        raise InvariantViolationError("chi-quotient larger than the module")
    return total


def rank_estimate(
    field: FieldSpec, q: int, chi: DirichletCharacter, n0: int, n1: int
) -> int:
    """Z_p-rank of the chi-quotient of the residue limit module, read off as
    the growth of chi-quotient orders between two stabilized levels."""
    if not n1 > n0 >= 0:
        raise ValueError("need levels n1 > n0 >= 0")
    lo = splitting_count(field, q, n0)
    hi = splitting_count(field, q, n1)
    x0 = chi_quotient_order(residue_module(field, q, n0), chi)
    x1 = chi_quotient_order(residue_module(field, q, n1), chi)
    de = hi.p_exponent - lo.p_exponent
    if de <= 0:
        raise OracleInconsistencyError("residue exponent did not grow between levels")
    growth = x1 - x0
    if growth < 0 or growth % de:
        raise OracleInconsistencyError(
            f"non-integral growth {growth}/{de} for chi={chi.label()}, q={q}"
        )
    return growth // de


def norm_reduction_surjective(field: FieldSpec, q: int, n: int) -> bool:
    """Whether every level-n coset receives a level-(n+1) coset under the
    reduction map; with surjective finite-field norms this forces the
    induced map on coinvariant quotients to have trivial cokernel."""
    lo = residue_module(field, q, n)
    hi = residue_module(field, q, n + 1)
    glo = _LevelGroup(field, q, n)
    lo_loc = {}
    qbar = glo.element(q, q)
    for idx, c in enumerate(lo.cosets):
        x = c
        for _ in range(lo.residue_degree):
            lo_loc[x] = idx
            x = glo.mul(x, qbar)
    hit = set()
    for c in hi.cosets:
        hit.add(lo_loc[glo.element(c[0], c[1])])
    return len(hit) == lo.num_cosets

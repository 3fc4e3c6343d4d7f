"""Congruence subgroups between Gamma_1(n) and Gamma_0(n).

A subgroup H of (Z/nZ)* determines the group Gamma_H(n) of integral
unimodular matrices with lower-left entry divisible by n and lower-right
entry in H mod n.  Cosets of its image in PSL2(Z) are unimodular bottom
rows (c:d) mod n up to scaling by +-H, which is all that is needed for
elliptic point, cusp and genus counts, and for the index formulas.
"""

from math import gcd

from .dirichlet import induce, place_above, trivial_character
from .exactalg.arith import euler_phi, unit_group


class SubgroupH:
    """A subgroup of (Z/nZ)*, kept as a sorted tuple of residues."""

    __slots__ = ("level", "elements")

    def __init__(self, level, elements):
        elements = sorted({x % level for x in elements} or {1 % level})
        group = unit_group(level)
        for x in elements:
            if not group.is_unit(x):
                raise ValueError("%d is not a unit modulo %d" % (x, level))
        size = len(elements)
        if group.order % size:
            raise ValueError("size %d does not divide phi(%d)" % (size, level))
        elset = set(elements)
        for x in elements:
            for y in elements:
                if x * y % level not in elset:
                    raise ValueError("element set is not closed under products")
        self.level = level
        self.elements = tuple(elements)

    @classmethod
    def from_generators(cls, level, gens):
        elems = {1 % level}
        frontier = [1 % level]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = x * g % level
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
        return cls(level, elems)

    @property
    def contains_minus_one(self):
        return (-1) % self.level in self.elements

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x % self.level in self.elements

    def is_subgroup_of(self, other):
        if self.level != other.level:
            raise ValueError("subgroups live at different levels")
        big = set(other.elements)
        return all(x in big for x in self.elements)

    def project(self, m):
        """Image modulo a divisor m of the level."""
        if self.level % m:
            raise ValueError("%d does not divide %d" % (m, self.level))
        return SubgroupH(m, {x % m for x in self.elements})

    def generators(self):
        """A short generating list (greedy)."""
        gens = []
        span = {1 % self.level}
        for x in self.elements:
            if x not in span:
                gens.append(x)
                span = set(SubgroupH.from_generators(self.level, gens).elements)
                if len(span) == len(self.elements):
                    break
        return gens

    def is_full(self):
        return len(self.elements) == unit_group(self.level).order

    def __eq__(self, other):
        return (isinstance(other, SubgroupH)
                and self.level == other.level
                and self.elements == other.elements)

    def __hash__(self):
        return hash((self.level, self.elements))

    def __repr__(self):
        return "SubgroupH(%d, order %d)" % (self.level, len(self.elements))


def full_subgroup(n):
    return SubgroupH(n, unit_group(n).elements())

def trivial_subgroup(n):
    return SubgroupH(n, [1 % n])


def h_from_eigenform(eps, k, i, ell, place=None):
    """Kernel subgroup attached to an eigenform datum.

    For weight k > 2 this is the set of units x modulo N' = N*ell with
    eps(x) * x^(k-2-2i) = 1 at the place; for k = 2 it is the kernel of
    the reduction of eps, at N' = N.
    """
    n = eps.modulus
    if ell >= 5 and n % ell == 0:
        raise ValueError("ell must not divide the level")
    if not 0 <= i <= ell - 1:
        raise ValueError("twist exponent out of range")
    if k == 2:
        nprime = n
        e = 0
    else:
        nprime = n * ell
        e = k - 2 - 2 * i
    eps_ind = induce(eps, nprime)
    if place is None:
        place = place_above(ell, eps_ind.zeta_order)
    field = place.field
    one = field.one()
    elems = []
    for x in unit_group(nprime).elements():
        val = place.reduce_value(eps_ind.zeta_order, eps_ind.exponent_at(x))
        if e:
            val = val * field.from_int(x) ** (e % (ell - 1))
        if val == one:
            elems.append(x)
    return SubgroupH(nprime, elems)


class CosetTable:
    """Cosets of +-Gamma_H(n) in PSL2(Z) with the S and T actions.

    Cosets are canonical unimodular bottom rows (c:d) mod n up to +-H
    scaling; the canonical form is the lexicographically least pair of
    least non-negative residues in the scaling class.
    """

    __slots__ = ("level", "subgroup", "reps", "index_of", "s_perm", "t_perm")

    def __init__(self, subgroup):
        n = subgroup.level
        scalars = sorted({u % n for u in subgroup.elements}
                         | {(-u) % n for u in subgroup.elements})
        index_of = {}
        reps = []
        for c in range(n):
            for d in range(n):
                if gcd(gcd(c, d), n) != 1:
                    continue
                if (c, d) in index_of:
                    continue
                orbit = {((u * c) % n, (u * d) % n) for u in scalars}
                idx = len(reps)
                reps.append(min(orbit))
                for pair in orbit:
                    index_of[pair] = idx
        self.level = n
        self.subgroup = subgroup
        self.reps = reps
        self.index_of = index_of
        self.s_perm = [index_of[(d % n, (-c) % n)] for c, d in reps]
        self.t_perm = [index_of[(c, (c + d) % n)] for c, d in reps]

    def __len__(self):
        return len(self.reps)

    def index(self, pair):
        c, d = pair
        return self.index_of[(c % self.level, d % self.level)]

    def __repr__(self):
        return "CosetTable(level %d, %d cosets)" % (self.level, len(self.reps))


def coset_table(subgroup):
    return CosetTable(subgroup)


class CurveInvariants:
    """Index, elliptic point counts, cusp count and genus of a modular curve."""

    __slots__ = ("index", "nu2", "nu3", "cusps", "genus")

    def __init__(self, index, nu2, nu3, cusps, genus):
        self.index = index
        self.nu2 = nu2
        self.nu3 = nu3
        self.cusps = cusps
        self.genus = genus

    def to_dict(self):
        return {"index": self.index, "nu2": self.nu2, "nu3": self.nu3,
                "cusps": self.cusps, "genus": self.genus}

    def __repr__(self):
        return ("CurveInvariants(index=%d, nu2=%d, nu3=%d, cusps=%d, genus=%d)"
                % (self.index, self.nu2, self.nu3, self.cusps, self.genus))


def curve_invariants(table):
    """Elliptic/cusp counts and genus from the coset permutations."""
    mu = len(table)
    s, t = table.s_perm, table.t_perm
    nu2 = sum(1 for i, j in enumerate(s) if i == j)
    nu3 = sum(1 for i in range(mu) if t[s[i]] == i)
    seen = [False] * mu
    cusps = 0
    for i in range(mu):
        if not seen[i]:
            cusps += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = t[j]
    twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps
    if twelve_g % 12:
        raise AssertionError("genus formula did not come out integral")
    return CurveInvariants(mu, nu2, nu3, cusps, twelve_g // 12)


def genus_of_subgroup(subgroup):
    return curve_invariants(coset_table(subgroup)).genus


def predicted_kernel_order(m, ell, e):
    """phi(m) * gcd(ell-1, e) / (ell-1), for ell a prime factor of m."""
    if m % ell:
        raise ValueError("ell must divide m")
    return euler_phi(m) * gcd(ell - 1, e) // (ell - 1)


def index_gamma(subgroup):
    """The index of Gamma_1 in Gamma_H at the same level, i.e. #H."""
    return len(subgroup)


def gamma0_criterion(ell, k, i):
    """Whether the kernel subgroup is everything, i.e. (ell-1) | (k-2-2i)."""
    return (k - 2 - 2 * i) % (ell - 1) == 0


def intermediate_subgroups(n, limit=200):
    """All subgroups of (Z/nZ)*, i.e. all groups between Gamma_1 and Gamma_0.

    Breadth-first closure over one-element extensions; deterministic order
    (sorted by size then elements).  Refuses n beyond the given limit.
    """
    if n > limit:
        raise ValueError("level %d too large for exhaustive enumeration" % n)
    units = unit_group(n).elements()
    found = {trivial_subgroup(n).elements: trivial_subgroup(n)}
    frontier = [trivial_subgroup(n)]
    while frontier:
        h = frontier.pop()
        for x in units:
            if x in h:
                continue
            bigger = SubgroupH.from_generators(n, list(h.elements) + [x])
            if bigger.elements not in found:
                found[bigger.elements] = bigger
                frontier.append(bigger)
    return sorted(found.values(), key=lambda h: (len(h), h.elements))

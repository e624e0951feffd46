"""Nonsingular Q/Z-valued linking forms on finite abelian groups.

Metabolisers are subgroups P with P equal to its own orthogonal complement;
they exist only when the group order is a perfect square.  On a cyclic group
of square order the metaboliser is unique and independent of the (nonsingular)
form, which is why a default diagonal form is enough in that case; all other
groups require the caller to supply the form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .algebra import Character, FinAbGroup
from .errors import BoundExceeded, InvalidLinkingForm

GROUP_ORDER_BOUND = 10**4
SUBGROUP_COUNT_BOUND = 10**6


@dataclass(frozen=True)
class LinkingForm:
    """Symmetric nonsingular pairing T x T -> Q/Z, given by a Gram matrix of
    rationals mod 1 on the standard generators."""

    group: FinAbGroup
    gram: tuple  # tuple of tuples of Fraction, values mod 1

    def __post_init__(self):
        T = self.group
        r = T.rank
        gram = tuple(tuple(Fraction(x) % 1 for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        if len(gram) != r or any(len(row) != r for row in gram):
            raise InvalidLinkingForm(f"Gram matrix must be {r} x {r}")
        for i in range(r):
            for j in range(r):
                if gram[i][j] != gram[j][i]:
                    raise InvalidLinkingForm("Gram matrix is not symmetric")
                if (T.orders[i] * gram[i][j]) % 1 != 0:
                    raise InvalidLinkingForm(
                        f"pairing not well defined: d_{i} * gram[{i}][{j}] not integral")
        if T.order > GROUP_ORDER_BOUND:
            raise BoundExceeded(f"group order {T.order} over bound {GROUP_ORDER_BOUND}")
        # Nonsingularity: only 0 pairs trivially with every generator.
        radical = [x for x in T.elements() if all(self.pair_gen(i, x) == 0
                                                  for i in range(r))]
        if len(radical) != 1:
            raise InvalidLinkingForm(f"form is singular (radical of order {len(radical)})")

    def pair_gen(self, i: int, y) -> Fraction:
        return sum((self.gram[i][j] * y[j] for j in range(self.group.rank)),
                   Fraction(0)) % 1

    def pair(self, x, y) -> Fraction:
        total = Fraction(0)
        for i in range(self.group.rank):
            if x[i]:
                total += x[i] * self.pair_gen(i, y)
        return total % 1

    @classmethod
    def default_diagonal(cls, group: FinAbGroup) -> "LinkingForm":
        """lambda(e_i, e_j) = delta_ij / d_i; nonsingular for any orders."""
        r = group.rank
        gram = tuple(tuple(Fraction(1, group.orders[i]) if i == j else Fraction(0)
                           for j in range(r)) for i in range(r))
        return cls(group=group, gram=gram)


def subgroup_elements(group: FinAbGroup, generators) -> frozenset:
    """All elements of the subgroup generated by the given elements."""
    seen = {group.zero()}
    frontier = [group.zero()]
    gens = [group.reduce(g) for g in generators]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = group.add(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


def all_subgroups(group: FinAbGroup) -> list:
    """Every subgroup as a frozenset of elements: cyclic subgroups closed
    under joins, deduplicated, deterministically ordered."""
    if group.order > GROUP_ORDER_BOUND:
        raise BoundExceeded(f"group order {group.order} over bound {GROUP_ORDER_BOUND}")
    elems = group.elements()
    cyclic = {subgroup_elements(group, [x]) for x in elems}
    subgroups = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        fresh = set()
        for s in frontier:
            for c in cyclic:
                if c <= s:
                    continue
                join = subgroup_elements(group, list(s | c))
                if join not in subgroups:
                    fresh.add(join)
                    subgroups.add(join)
                    if len(subgroups) > SUBGROUP_COUNT_BOUND:
                        raise BoundExceeded("subgroup lattice too large")
        frontier = fresh
    return sorted(subgroups, key=lambda s: (len(s), sorted(s)))


def orthogonal_complement(form: LinkingForm, subgroup) -> frozenset:
    """P^perp = {y : lambda(x, y) = 0 for all x in P}, by exhaustive check."""
    T = form.group
    if T.order > GROUP_ORDER_BOUND:
        raise BoundExceeded(f"group order {T.order} over bound {GROUP_ORDER_BOUND}")
    gens = list(subgroup)
    return frozenset(y for y in T.elements()
                     if all(form.pair(x, y) == 0 for x in gens))


@dataclass(frozen=True)
class Metaboliser:
    """Subgroup with P = P^perp (so |P|^2 = |T|)."""

    group: FinAbGroup
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)


def enumerate_metabolisers(form: LinkingForm) -> list:
    """All metabolisers of the form, in a deterministic order.  Empty when
    |T| is not a perfect square."""
    T = form.group
    n = T.order
    root = isqrt(n)
    if root * root != n:
        return []
    out = []
    for s in all_subgroups(T):
        if len(s) != root:
            continue
        if orthogonal_complement(form, s) == s:
            out.append(Metaboliser(group=T, elements=s))
    return out


def characters_vanishing_on(group: FinAbGroup, subgroup, q: int, k: int,
                            bound: int = GROUP_ORDER_BOUND) -> list:
    """All characters T -> Z_{q^k} inside S^1 killing the subgroup, the
    trivial one included; q must be prime.

    Characters are returned in canonical numerator order; each carries its
    exact order (a divisor of q^k).
    """
    if q < 2 or any(q % p == 0 for p in range(2, isqrt(q) + 1)):
        raise ValueError(f"{q} is not prime")
    if k < 0 or q**k > bound:
        raise BoundExceeded(f"character modulus {q}^{k} over bound {bound}")
    m = q**k
    sub = sorted(subgroup)
    out = []
    # Candidate numerators for generator i: multiples of d_i / gcd(d_i, m),
    # i.e. characters whose order divides m.
    ranges = []
    for d in group.orders:
        g = gcd(d, m)
        step = d // g
        ranges.append([step * c for c in range(g)])
    def rec(i, acc):
        if i == len(ranges):
            chi = Character(group, tuple(acc))
            if all(chi.angle(x) == 0 for x in sub):
                out.append(chi)
            return
        for v in ranges[i]:
            rec(i + 1, acc + [v])
    rec(0, [])
    return out

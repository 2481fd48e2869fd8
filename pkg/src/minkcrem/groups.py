"""Explicitly enumerable finite groups and exhaustive structure analysis."""

from __future__ import annotations

import functools
import math
import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from .arith import FactoredNat, factor
from .errors import InvariantViolation, SizeLimit

STRUCTURE_LIMIT = 10**4


class AbstractGroup:
    """A finite group given by generators and a multiplication.

    The element set is the closure of the generators under ``op``, computed
    breadth-first and cached.  Elements must be hashable.
    """

    def __init__(self, generators: Sequence[Hashable], op: Callable, identity: Hashable,
                 name: str = "", max_order: int | None = None):
        self.generators = tuple(generators)
        self.op = op
        self.identity = identity
        self.name = name
        self.max_order = max_order

    def __repr__(self):
        return f"<AbstractGroup {self.name or '?'}>"

    @functools.cached_property
    def elements(self) -> tuple:
        seen = {self.identity}
        order = [self.identity]
        queue = deque(order)
        op, gens = self.op, self.generators
        while queue:
            x = queue.popleft()
            for g in gens:
                y = op(x, g)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
                    if self.max_order is not None and len(order) > self.max_order:
                        raise SizeLimit(f"{self.name}: more than {self.max_order} elements")
        return tuple(order)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a, b):
        return self.op(a, b)

    def power(self, a, k: int):
        result, base = self.identity, a
        while k:
            if k & 1:
                result = self.op(result, base)
            base = self.op(base, base)
            k >>= 1
        return result

    def powers(self, a) -> list:
        out = [self.identity]
        x = a
        while x != self.identity:
            out.append(x)
            x = self.op(x, a)
        return out

    def element_order(self, a) -> int:
        n, x = 1, a
        while x != self.identity:
            x = self.op(x, a)
            n += 1
        return n

    def inverse(self, a):
        return self.power(a, self.element_order(a) - 1)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(self.op(a, b) == self.op(b, a) for a in gens for b in gens)

    def exponent(self) -> int:
        e = 1
        for x in self.elements:
            e = math.lcm(e, self.element_order(x))
        return e

    def check_axioms(self, samples: int = 200, seed: int = 0) -> None:
        """Closure is built in; spot-check associativity, identity and inverses."""
        elems = self.elements
        index = set(elems)
        rng = random.Random(seed)
        for _ in range(samples):
            a, b, c = (rng.choice(elems) for _ in range(3))
            ab = self.op(a, b)
            if ab not in index:
                raise InvariantViolation(f"{self.name}: product leaves the element set")
            if self.op(ab, c) != self.op(a, self.op(b, c)):
                raise InvariantViolation(f"{self.name}: associativity fails at {a}, {b}, {c}")
            if self.op(a, self.identity) != a or self.op(self.identity, a) != a:
                raise InvariantViolation(f"{self.name}: identity law fails at {a}")
            if self.op(a, self.inverse(a)) != self.identity:
                raise InvariantViolation(f"{self.name}: no inverse for {a}")

    def is_normal(self, subset: frozenset, generators: Sequence) -> bool:
        """Whether the subgroup generated by ``generators`` (with elements ``subset``) is normal."""
        for g in self.generators:
            gi = self.inverse(g)
            for s in generators:
                if self.op(self.op(g, s), gi) not in subset:
                    return False
        return True


def abelian_invariants(group: AbstractGroup, elements=None) -> list[int]:
    """Elementary divisors (prime powers, ascending) of an abelian group or subgroup.

    Found by counting, for each prime p, how many elements are killed by p^k.
    """
    elements = group.elements if elements is None else elements
    n = len(elements)
    orders = [group.element_order(x) for x in elements]
    out = []
    for p, e in factor(n).items():
        killed = [sum(1 for o in orders if (p**k) % o == 0) for k in range(e + 1)]
        # number of cyclic factors of order >= p^k is log_p(killed[k] / killed[k-1])
        at_least = []
        for k in range(1, e + 1):
            ratio = killed[k] // killed[k - 1]
            r = 0
            while ratio > 1:
                ratio //= p
                r += 1
            at_least.append(r)
        for k in range(1, e + 1):
            nxt = at_least[k] if k < e else 0
            out += [p**k] * (at_least[k - 1] - nxt)
    return sorted(out)


def abelian_rank(group: AbstractGroup, elements=None) -> int:
    """Minimal number of generators of an abelian group."""
    inv = abelian_invariants(group, elements)
    by_prime: dict[int, int] = {}
    for q in inv:
        p = factor(q).primes[0]
        by_prime[p] = by_prime.get(p, 0) + 1
    return max(by_prime.values(), default=0)


@dataclass(frozen=True)
class StructureReport:
    order: FactoredNat
    is_abelian: bool
    abelian_rank: int | None
    min_index_abelian_normal_rank2: int | None  # None: no such subgroup found
    exponent: int
    abelian_invariants: tuple[int, ...] | None = None


def min_index_abelian_normal_rank2(group: AbstractGroup) -> int | None:
    """Smallest index of a normal abelian subgroup generated by at most two elements.

    Exhaustive over pairs of commuting cyclic-subgroup generators, largest first.
    """
    elems = group.elements
    reps: dict[frozenset, object] = {}
    for x in elems:
        cyc = frozenset(group.powers(x))
        reps.setdefault(cyc, x)
    cands = sorted(((len(c), x, c) for c, x in reps.items()), key=lambda r: -r[0])
    best = 0
    seen = set()
    op = group.op
    for i, (oa, a, ca) in enumerate(cands):
        if oa * oa <= best:
            break
        for ob, b, cb in cands[i:]:
            if oa * ob <= best:
                break
            if op(a, b) != op(b, a):
                continue
            sub = frozenset(op(x, y) for x in ca for y in cb)
            if len(sub) <= best or sub in seen:
                continue
            seen.add(sub)
            if group.is_normal(sub, (a, b)):
                best = len(sub)
    return group.order // best if best else None


def analyze_structure(group: AbstractGroup) -> StructureReport:
    """Exhaustive structure report for a group of order at most 10**4."""
    # guard the enumeration itself
    capped = AbstractGroup(group.generators, group.op, group.identity, group.name,
                           max_order=STRUCTURE_LIMIT)
    n = capped.order
    abelian = capped.is_abelian()
    rank = invs = None
    if abelian:
        invs = tuple(abelian_invariants(capped))
        rank = abelian_rank(capped)
    if abelian and rank <= 2:
        min_index = 1
    else:
        min_index = min_index_abelian_normal_rank2(capped)
    return StructureReport(factor(n), abelian, rank, min_index, capped.exponent(), invs)

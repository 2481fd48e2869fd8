"""Acceptance criteria, runnable from pytest and from ``minkcrem verify``.

Each criterion returns ``(passed, detail)``; :func:`run` also times it
against its limit.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Callable

from .arith import (
    FactoredNat,
    IntPolynomial,
    cyclotomic_poly,
    divisors,
    euler_phi,
    factor,
    is_prime,
    iter_prime_powers,
    mult_order,
    primes_up_to,
    valuation,
)
from .audit import run_grid
from .bounds import bound_exponent, closed_form_finite, closed_form_padic, element_order_exists, global_bound
from .constructions import attainment_row, fermat_cubic_group
from .fields import CyclotomicInvariants, Finite, PAdic, Rationals, is_admissible
from .groups import analyze_structure
from .higher import p_r


def dotted_factored(text: str) -> FactoredNat:
    """Read a factorization written like ``2^7.3^3.5.7``."""
    pairs = []
    for term in text.split("."):
        p, _, e = term.partition("^")
        pairs.append((int(p), int(e or 1)))
    return FactoredNat(pairs)


KNOWN_FINITE = {
    2: "3^3.5.7",
    3: "2^7.5.7.13",
    4: "3^4.5^2.7.13.17",
    5: "2^7.3^3.7.13.31",
    7: "2^9.3^4.5^2.19.43",
}

KNOWN_PADIC = {
    2: "2^7.3^3.5.7",
    3: "2^7.3^3.5.7.13",
    5: "2^7.3^3.5.7.13.31",
    7: "2^9.3^4.5^2.7.19.43",
    11: "2^7.3^3.5^2.7.19.37.61",
}


def _fails(items, limit=5):
    items = list(items)
    return f"{len(items)} failures, first: {items[:limit]}"


def c01_rationals():
    got = global_bound(Rationals()).global_
    ok = got == dotted_factored("2^7.3^3.5.7") and got.value() == 120960
    return ok, f"M(Q) = {got} = {got.value()}"


def c02_finite_fields():
    bad = [(q, str(global_bound(Finite.of_order(q)).global_)) for q, s in KNOWN_FINITE.items()
           if global_bound(Finite.of_order(q)).global_ != dotted_factored(s)]
    return not bad, "all five match" if not bad else _fails(bad)


def c03_padic():
    bad = [(p, str(global_bound(PAdic(p)).global_)) for p, s in KNOWN_PADIC.items()
           if global_bound(PAdic(p)).global_ != dotted_factored(s)]
    return not bad, "all five match" if not bad else _fails(bad)


def c04_closed_form_finite(limit=10**4):
    bad, count = [], 0
    for q in iter_prime_powers(limit):
        count += 1
        if closed_form_finite(q) != global_bound(Finite.of_order(q)).global_:
            bad.append(q)
    return not bad, f"{count} prime powers checked" if not bad else _fails(bad)


def c05_closed_form_padic(limit=10**3):
    primes = primes_up_to(limit)
    bad = [p for p in primes if closed_form_padic(p) != global_bound(PAdic(p)).global_]
    return not bad, f"{len(primes)} primes checked" if not bad else _fails(bad)


def c06_attainment(max_q=200, max_ell=100):
    bad, count, fermat = [], 0, []
    for q in iter_prime_powers(max_q):
        for ell in primes_up_to(max_ell):
            if q % ell == 0:
                continue
            row = attainment_row(q, ell)
            count += 1
            if not row.ok:
                bad.append(str(row))
            if ell == 3 and row.t == 1 and row.m == 1:
                fermat.append(q)
                if row.constructed_max != 4:
                    bad.append(str(row))
    detail = f"{count} pairs, Fermat case at q in {fermat[:6]}..."
    return not bad and 4 in fermat, detail if not bad else _fails(bad)


def c07_fermat():
    g = fermat_cubic_group()
    rep = analyze_structure(g)
    ok = g.order == 81 and rep.exponent == 9 and rep.min_index_abelian_normal_rank2 == 9
    return ok, f"order {g.order}, exponent {rep.exponent}, min index {rep.min_index_abelian_normal_rank2}"


def c08_audit_grid():
    summary = run_grid(100, 30, 8)
    sharp = run_grid(100, 30, 8, sharp=True)
    ok = summary.passed and sharp.passed and summary.points > 0
    return ok, (f"{summary.points} grid points, {len(summary.violations)} violations, "
                f"{len(summary.not_tight)} not tight (sharp: {len(sharp.violations)}, {len(sharp.not_tight)})")


def c09_polynomials():
    X = IntPolynomial.x_pow_minus_one
    checks = {
        "P2": p_r(2).poly == X(4) * X(6),
        "P3": p_r(3).poly == X(2) * X(4) * X(6),
        "P4": p_r(4).poly == X(6) * X(8) * X(10) * X(12),
        "P5": p_r(5).poly == X(2) * p_r(4).poly,
    }
    bad = [k for k, v in checks.items() if not v]
    return not bad, "P2..P5 identities hold" if not bad else f"failed: {bad}"


def c10_corollary():
    bad, count = [], 0
    for ell in primes_up_to(100):
        for t in range(1, 31):
            for m in range(2 if ell == 2 else 1, 9):
                inv = CyclotomicInvariants(ell, t, m)
                if not is_admissible(inv):
                    continue
                count += 1
                a = bound_exponent(inv) > 0
                b = t in (1, 2, 3, 4, 6)
                c = euler_phi(t) <= 2
                if not (a == b == c == element_order_exists(inv)):
                    bad.append(inv)
    return not bad, f"{count} grid points" if not bad else _fails(bad)


def c11_arithmetic(samples=10**4, seed=20260415):
    rng = random.Random(seed)
    problems = []
    for _ in range(samples):
        n = rng.randrange(1, 1 << 64)
        f = factor(n)
        if f.value() != n or not f.certified or not all(is_prime(p) for p in f.primes):
            problems.append(("roundtrip", n))
    for _ in range(2000):
        ell = rng.choice(primes_up_to(200))
        n = rng.randrange(1, 10**12)
        while n % ell == 0:
            n //= ell
        k = rng.randrange(0, 20)
        if valuation(ell, n * ell**k) != valuation(ell, n) + k:
            problems.append(("valuation", ell, n, k))
    for _ in range(2000):
        mod = rng.randrange(2, 10**9)
        a = rng.randrange(1, mod)
        if math.gcd(a, mod) != 1:
            continue
        if euler_phi(mod) % mult_order(a, mod):
            problems.append(("lagrange", a, mod))
    for n in range(1, 61):
        prod = IntPolynomial([1])
        for d in divisors(n):
            prod = prod * cyclotomic_poly(d)
        if prod != IntPolynomial.x_pow_minus_one(n):
            problems.append(("cyclotomic", n))
    return not problems, "all properties hold" if not problems else _fails(problems)


@dataclass(frozen=True)
class Criterion:
    id: int
    name: str
    check: Callable[[], tuple[bool, str]]
    seconds: float | None  # runtime limit, None when only exactness is required


CRITERIA = [
    Criterion(1, "M(Q) = 2^7*3^3*5*7 = 120960", c01_rationals, 1.0),
    Criterion(2, "M(F_q) for q in {2,3,4,5,7} equal the known factorizations", c02_finite_fields, None),
    Criterion(3, "M(Q_p) for p in {2,3,5,7,11} equal the known factorizations", c03_padic, None),
    Criterion(4, "closed form = product over l, prime powers q <= 10^4", c04_closed_form_finite, 120.0),
    Criterion(5, "Q_p closed form = product over l, primes p <= 10^3", c05_closed_form_padic, 60.0),
    Criterion(6, "attainment sweep q <= 200, l <= 100", c06_attainment, 120.0),
    Criterion(7, "Fermat cubic group: order 81, exponent 9, min index 9", c07_fermat, 5.0),
    Criterion(8, "audit soundness and tightness grid", c08_audit_grid, 30.0),
    Criterion(9, "P_r polynomial identities", c09_polynomials, None),
    Criterion(10, "element of order l <=> t in {1,2,3,4,6} <=> phi(t) <= 2", c10_corollary, None),
    Criterion(11, "arithmetic substrate properties", c11_arithmetic, 30.0),
]


@dataclass(frozen=True)
class Outcome:
    criterion: Criterion
    passed: bool
    detail: str
    elapsed: float

    @property
    def ok(self) -> bool:
        limit = self.criterion.seconds
        return self.passed and (limit is None or self.elapsed < limit)

    def line(self, timings: bool = True) -> str:
        status = "PASS" if self.ok else "FAIL"
        head = f"[{status}] {self.criterion.id:2d} {self.criterion.name}"
        if timings:
            limit = self.criterion.seconds
            head += f" ({self.elapsed:.2f}s" + ("" if limit is None else f"/<{limit:g}s") + ")"
        return f"{head}: {self.detail}"


def run(criterion: Criterion) -> Outcome:
    start = time.perf_counter()
    passed, detail = criterion.check()
    return Outcome(criterion, passed, detail, time.perf_counter() - start)

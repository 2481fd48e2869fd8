"""Rank-r polynomials P_r(X) = prod_d Phi_d(X)^[r/phi(d)] and conjectural higher-rank bounds.

Values derived from the open questions about Cremona groups of rank > 2 are
wrapped in :class:`Conjectural` so they cannot be mistaken for theorems.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import FactoredNat, IntPolynomial, cyclotomic_poly, euler_phi, factor
from .bounds import closed_form_finite
from .errors import InvariantViolation, PreconditionError
from .fields import Finite

CONJECTURE = "CONJECTURE"


@dataclass(frozen=True)
class RankPolynomial:
    r: int
    poly: IntPolynomial
    factor_list: tuple[tuple[int, int], ...]  # (d, exponent)

    def product_form(self) -> str:
        parts = []
        for d, e in self.factor_list:
            parts.append(f"Phi_{d}" if e == 1 else f"Phi_{d}^{e}")
        return "*".join(parts)

    def evaluate(self, q: int) -> FactoredNat:
        total = FactoredNat.one()
        for d, e in self.factor_list:
            f = factor(cyclotomic_poly(d)(q))
            for _ in range(e):
                total = total * f
        return total


def _search_bound(r: int) -> int:
    # phi(d) >= sqrt(d/2), so phi(d) <= r forces d <= 2 r^2
    return 2 * r * r + 6


def p_r(r: int) -> RankPolynomial:
    if r < 1:
        raise ValueError("rank must be >= 1")
    bound = _search_bound(r)
    factors = [(d, r // euler_phi(d)) for d in range(1, bound + 1) if euler_phi(d) <= r]
    # nothing admissible just past the search window
    for d in range(bound + 1, 2 * bound + 1):
        if euler_phi(d) <= r:
            raise InvariantViolation(f"phi({d}) <= {r} beyond the search bound {bound}")
    poly = IntPolynomial([1])
    for d, e in factors:
        poly = poly * cyclotomic_poly(d) ** e
    return RankPolynomial(r, poly, tuple(factors))


@dataclass(frozen=True)
class Conjectural:
    """A value that answers an open question only if that question has a positive answer."""

    value: FactoredNat
    question: str
    label: str = CONJECTURE

    def __str__(self):
        return f"{self.value} [{self.label}]"


def conjectural_m3_finite(q: int) -> Conjectural:
    """Candidate for M_3(F_q): 3(q^2-1)(q^4-1)(q^6-1) if q = 4, 7 mod 9, else without the 3."""
    Finite.of_order(q)
    total = FactoredNat.one()
    for k in (2, 4, 6):
        total = total * factor(q**k - 1)
    if q % 9 in (4, 7):
        total = total * FactoredNat({3: 1})
    return Conjectural(total, "M_3(F_q) = M_1(F_q) M_2(F_q)")


@dataclass(frozen=True)
class ProbeResult:
    holds: bool
    conjectural: bool
    value: FactoredNat
    target: FactoredNat

    def __bool__(self):
        return self.holds


def divisibility_probe(r: int, q: int, c: int) -> ProbeResult:
    """Does the rank-r bound for F_q divide c * P_r(q)?

    For r = 2 the proven value M(F_q) is used; for r = 3 the conjectural
    candidate, and the result is flagged conjectural.
    """
    Finite.of_order(q)
    if c < 1:
        raise ValueError("c must be a positive integer")
    if r == 2:
        value, conj = closed_form_finite(q), False
    elif r == 3:
        value, conj = conjectural_m3_finite(q).value, True
    else:
        raise PreconditionError(f"no bound value is available for rank {r}")
    target = factor(c) * p_r(r).evaluate(q)
    return ProbeResult(value.divides(target), conj, value, target)

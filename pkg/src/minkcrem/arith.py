"""Exact integer arithmetic: factorization, valuations, orders, cyclotomic polynomials.

Everything here works on Python ints; there is no floating point anywhere.
"""

from __future__ import annotations

import functools
import math
import os
import random
from typing import Iterable, Iterator, Mapping

from .errors import FactorizationBudgetExceeded

__all__ = [
    "INFINITY", "Infinity", "FactoredNat", "IntPolynomial",
    "is_prime", "factor", "valuation", "mult_order", "euler_phi",
    "divisors", "cyclotomic_poly", "prime_power", "ilog", "iroot",
    "primes_up_to", "get_budget", "set_budget",
]

TRIAL_LIMIT = 10**6
_BLOCK = 256
_RHO_SEED = 0x5EED
_DEFAULT_BUDGET = 2_000_000
_MR_DETERMINISTIC = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_RANDOM_ROUNDS = 40


def _budget_from_env():
    raw = os.environ.get("MINKCREM_BUDGET")
    if not raw:
        return _DEFAULT_BUDGET
    value = int(raw)
    if value < 1:
        raise ValueError("MINKCREM_BUDGET must be a positive integer")
    return value


_budget = _budget_from_env()


def get_budget() -> int:
    """Rho iterations allowed per call to :func:`factor` (default 2_000_000)."""
    return _budget


def set_budget(value: int) -> None:
    global _budget
    if value < 1:
        raise ValueError("budget must be positive")
    _budget = value


# ---------------------------------------------------------------------------
# Extended naturals


class Infinity:
    """The value ``INFINITY`` of the extended naturals {0, 1, 2, ..., inf}.

    Absorbing for ``+``, ``max`` and multiplication by a positive integer;
    greater than every int.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __add__(self, other):
        if isinstance(other, (int, Infinity)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            if other <= 0:
                raise ValueError("INFINITY may only be scaled by a positive integer")
            return self
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("minkcrem.INFINITY")

    def __lt__(self, other):
        if isinstance(other, (int, Infinity)):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, (int, Infinity)):
            return other is self
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, (int, Infinity)):
            return other is not self
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (int, Infinity)):
            return True
        return NotImplemented

    def __reduce__(self):
        return (Infinity, ())


INFINITY = Infinity()


# ---------------------------------------------------------------------------
# Primes and primality


@functools.lru_cache(maxsize=None)
def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes ``p <= limit``, ascending."""
    return _sieve(limit)


@functools.lru_cache(maxsize=None)
def _trial_blocks() -> tuple[tuple[tuple[int, ...], int], ...]:
    # Primes below TRIAL_LIMIT grouped with the product of each group, so a
    # single gcd tells whether any prime of the group divides n.
    primes = _sieve(TRIAL_LIMIT - 1)
    blocks = []
    for i in range(0, len(primes), _BLOCK):
        chunk = primes[i : i + _BLOCK]
        blocks.append((chunk, math.prod(chunk)))
    return tuple(blocks)


def _miller_rabin(n: int, bases: Iterable[int]) -> bool:
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _is_prime_certified(n: int) -> tuple[bool, bool]:
    """Return (probably-prime, certified)."""
    if n < 2:
        return False, True
    for p in _MR_DETERMINISTIC:
        if n == p:
            return True, True
        if n % p == 0:
            return False, True
    if n < 41 * 41:
        return True, True
    if n < 1 << 64:
        return _miller_rabin(n, _MR_DETERMINISTIC), True
    rng = random.Random(n ^ _RHO_SEED)
    bases = [rng.randrange(2, n - 1) for _ in range(_MR_RANDOM_ROUNDS)]
    return _miller_rabin(n, _MR_DETERMINISTIC + tuple(bases)), False


def is_prime(n: int) -> bool:
    """Primality test.

    Deterministic (fixed Miller-Rabin witnesses) below 2**64; above that, 40
    extra seeded random rounds, in which case the answer is not certified.
    """
    return _is_prime_certified(n)[0]


# ---------------------------------------------------------------------------
# Factored naturals


class FactoredNat:
    """A positive integer stored as its prime factorization.

    ``certified`` is False when some prime factor exceeds 2**64 and was only
    checked probabilistically.  It does not take part in equality.
    """

    __slots__ = ("_pairs", "certified")

    def __init__(self, factors: Mapping[int, int] | Iterable[tuple[int, int]] = (), *,
                 certified: bool = True, check: bool = True):
        items = factors.items() if isinstance(factors, Mapping) else factors
        merged: dict[int, int] = {}
        for p, e in items:
            if e < 0:
                raise ValueError(f"negative exponent {e} for {p}")
            if e == 0:
                raise ValueError(f"zero exponent for {p}")
            merged[p] = merged.get(p, 0) + e
        if check:
            for p in merged:
                ok, cert = _is_prime_certified(p)
                if not ok:
                    raise ValueError(f"{p} is not prime")
                certified = certified and cert
        self._pairs = tuple(sorted(merged.items()))
        self.certified = certified

    @classmethod
    def one(cls) -> FactoredNat:
        return cls(())

    @property
    def factors(self) -> dict[int, int]:
        return dict(self._pairs)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self._pairs)

    def items(self):
        return iter(self._pairs)

    def value(self) -> int:
        return math.prod(p**e for p, e in self._pairs)

    def __int__(self):
        return self.value()

    def exponent(self, p: int) -> int:
        for q, e in self._pairs:
            if q == p:
                return e
        return 0

    def _combine(self, other: FactoredNat, fn) -> FactoredNat:
        a, b = dict(self._pairs), dict(other._pairs)
        out = {p: fn(a.get(p, 0), b.get(p, 0)) for p in a.keys() | b.keys()}
        return FactoredNat({p: e for p, e in out.items() if e},
                           certified=self.certified and other.certified, check=False)

    def __mul__(self, other: FactoredNat) -> FactoredNat:
        if not isinstance(other, FactoredNat):
            return NotImplemented
        return self._combine(other, lambda x, y: x + y)

    def lcm(self, other: FactoredNat) -> FactoredNat:
        return self._combine(other, max)

    def gcd(self, other: FactoredNat) -> FactoredNat:
        return self._combine(other, min)

    def divides(self, other: FactoredNat) -> bool:
        b = dict(other._pairs)
        return all(e <= b.get(p, 0) for p, e in self._pairs)

    def __eq__(self, other):
        if isinstance(other, FactoredNat):
            return self._pairs == other._pairs
        return NotImplemented

    def __hash__(self):
        return hash(self._pairs)

    def __str__(self):
        if not self._pairs:
            return "1"
        return "*".join(str(p) if e == 1 else f"{p}^{e}" for p, e in self._pairs)

    def __repr__(self):
        return f"FactoredNat({self})"


def mul(a: FactoredNat, b: FactoredNat) -> FactoredNat:
    return a * b


def lcm(a: FactoredNat, b: FactoredNat) -> FactoredNat:
    return a.lcm(b)


# ---------------------------------------------------------------------------
# Factorization


def _brent(n: int, rng: random.Random, spent: list[int], budget: int) -> int:
    """Return a nontrivial factor of the odd composite ``n`` (Pollard rho, Brent's cycle)."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent[0] += r
            if spent[0] > budget:
                raise FactorizationBudgetExceeded(n, budget)
            r *= 2
        if g == n:
            # Backtrack one step at a time from the saved point.
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _split(n: int, out: dict[int, int], rng, spent, budget) -> bool:
    """Fully factor n (no prime factors below TRIAL_LIMIT). Returns certification."""
    stack = [n]
    certified = True
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        ok, cert = _is_prime_certified(m)
        if ok:
            out[m] = out.get(m, 0) + 1
            certified = certified and cert
            continue
        r = iroot(m, 2)
        if r * r == m:
            stack += [r, r]
            continue
        d = _brent(m, rng, spent, budget)
        stack += [d, m // d]
    return certified


def factor(n: int, budget: int | None = None) -> FactoredNat:
    """Prime factorization of a positive integer.

    Trial division by every prime below 10**6, then Brent's rho with a fixed
    seed on whatever composite cofactor is left.  If rho exceeds ``budget``
    iterations (default :func:`get_budget`) a
    :class:`~minkcrem.errors.FactorizationBudgetExceeded` is raised; a partial
    or wrong factorization is never returned.
    """
    if isinstance(n, bool) or not isinstance(n, int):
        raise TypeError("factor expects an int")
    if n < 1:
        raise ValueError("factor expects n >= 1")
    if n < 1 << 40:
        return _factor_small(n)
    return _factor(n, get_budget() if budget is None else budget)


@functools.lru_cache(maxsize=1 << 16)
def _factor_small(n: int) -> FactoredNat:
    return _factor(n, get_budget())


def _factor(n: int, budget: int) -> FactoredNat:
    out: dict[int, int] = {}
    for chunk, prod in _trial_blocks():
        if chunk[0] * chunk[0] > n:
            break
        g = math.gcd(n, prod)
        if g == 1:
            continue
        for p in chunk:
            if g % p == 0:
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out[p] = e
    else:
        # every prime below TRIAL_LIMIT has been divided out
        if n > 1 and n < TRIAL_LIMIT * TRIAL_LIMIT:
            out[n] = out.get(n, 0) + 1
            n = 1
    certified = True
    if n > 1:
        ok, cert = _is_prime_certified(n)
        if ok:
            out[n] = out.get(n, 0) + 1
            certified = cert
        else:
            rng = random.Random(_RHO_SEED)
            certified = _split(n, out, rng, [0], budget)
    return FactoredNat(out, certified=certified, check=False)


# ---------------------------------------------------------------------------
# Elementary functions


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n >= 0."""
    if n < 0 or k < 1:
        raise ValueError("iroot expects n >= 0, k >= 1")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)  # an upper bound
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def ilog(x: int, b: int) -> int:
    """Largest e with b**e <= x, for x >= 1 and b >= 2."""
    if x < 1 or b < 2:
        raise ValueError("ilog expects x >= 1, b >= 2")
    e = 0
    while x >= b:
        x //= b
        e += 1
    return e


def prime_power(n: int) -> tuple[int, int] | None:
    """Return (p, e) with n == p**e and p prime, or None."""
    if n < 2:
        return None
    for e in range(n.bit_length(), 0, -1):
        r = iroot(n, e)
        if r >= 2 and r**e == n and is_prime(r):
            return r, e
    return None


def valuation(ell: int, n: int) -> int:
    """The ell-adic valuation of the positive integer n."""
    if ell < 2:
        raise ValueError("valuation needs a prime ell")
    if n < 1:
        raise ValueError("valuation needs n >= 1")
    e = 0
    while n % ell == 0:
        n //= ell
        e += 1
    return e


def euler_phi(d: int) -> int:
    if d < 1:
        raise ValueError("euler_phi needs d >= 1")
    result = 1
    for p, e in factor(d).items():
        result *= (p - 1) * p ** (e - 1)
    return result


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n."""
    divs = [1]
    for p, e in factor(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def mult_order(a: int, modulus: int) -> int:
    """Least e >= 1 with a**e == 1 (mod modulus); a must be a unit."""
    if modulus < 2:
        raise ValueError("mult_order needs modulus >= 2")
    if math.gcd(a, modulus) != 1:
        raise ValueError(f"{a} is not a unit modulo {modulus}")
    a %= modulus
    order = euler_phi(modulus)
    for p, _ in factor(order).items():
        while order % p == 0 and pow(a, order // p, modulus) == 1:
            order //= p
    return order


# ---------------------------------------------------------------------------
# Integer polynomials


class IntPolynomial:
    """Polynomial with int coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x_pow_minus_one(cls, n: int) -> IntPolynomial:
        """X**n - 1."""
        return cls([-1] + [0] * (n - 1) + [1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                             for i in range(n))

    def __neg__(self):
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial) -> IntPolynomial:
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return IntPolynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return IntPolynomial(out)

    def __pow__(self, k: int) -> IntPolynomial:
        result = IntPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod_monic(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Long division by a divisor with leading coefficient +-1."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead = divisor.coeffs[-1]
        if lead not in (1, -1):
            raise ValueError("divisor must have leading coefficient +-1")
        rem = list(self.coeffs)
        dd = divisor.degree
        quot = [0] * max(len(rem) - dd, 0)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] * lead
            if c:
                quot[i - dd] = c
                for j, d in enumerate(divisor.coeffs):
                    rem[i - dd + j] -= c * d
        return IntPolynomial(quot), IntPolynomial(rem)

    def exact_div(self, divisor: IntPolynomial) -> IntPolynomial:
        q, r = self.divmod_monic(divisor)
        if not r.is_zero():
            raise ArithmeticError(f"{self} is not divisible by {divisor}")
        return q

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = "X" if i == 1 else f"X^{i}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> IntPolynomial:
    """The d-th cyclotomic polynomial, by exact division of X^d - 1."""
    if d < 1:
        raise ValueError("cyclotomic_poly needs d >= 1")
    poly = IntPolynomial.x_pow_minus_one(d)
    for e in divisors(d)[:-1]:
        poly = poly.exact_div(cyclotomic_poly(e))
    return poly


def iter_prime_powers(limit: int, start: int = 2) -> Iterator[int]:
    """Prime powers q with start <= q <= limit, ascending."""
    for q in range(max(start, 2), limit + 1):
        if prime_power(q) is not None:
            yield q

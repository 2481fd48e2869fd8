"""Field descriptors and the cyclotomic invariants t(k, l), m(k, l).

For a prime l different from char(k), ``t`` is the degree of k(z) over k where
z is a primitive l-th root of unity (a primitive 4-th root if l = 2), and
``m`` measures how deep the l-power roots of unity go.  A handful of field
families have closed formulas; other fields are described by an explicit
table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Mapping, Union

from .arith import INFINITY, Infinity, divisors, ilog, is_prime, mult_order, prime_power
from .errors import (
    CharacteristicExclusion,
    DescriptorParseError,
    InadmissibleInvariants,
    InvalidPrimePower,
    LargeTMiss,
    TableFormatError,
    UnderdeterminedField,
)

ExtNat = Union[int, Infinity]


@dataclass(frozen=True)
class CyclotomicInvariants:
    ell: int
    t: int
    m: ExtNat

    def __str__(self):
        return f"(l={self.ell}, t={self.t}, m={self.m})"


@dataclass(frozen=True)
class InvariantRange:
    """What is known about (t, m) at ``ell`` after a finite extension."""

    ell: int
    t_candidates: frozenset[int]
    m_upper: ExtNat


def is_admissible(inv: CyclotomicInvariants, char: int = 0) -> bool:
    """Whether (l, t, m) satisfies the constraints every field imposes."""
    ell, t, m = inv.ell, inv.t, inv.m
    if ell < 2 or not is_prime(ell) or ell == char or t < 1:
        return False
    if not isinstance(m, (int, Infinity)) or isinstance(m, bool):
        return False
    if ell == 2:
        return t in (1, 2) and m >= 2
    if (ell - 1) % t or m < 1:
        return False
    if ell == 3:
        return t in (1, 2)
    return True


def require_admissible(inv: CyclotomicInvariants, char: int = 0) -> None:
    if not is_admissible(inv, char):
        raise InadmissibleInvariants(f"inadmissible invariants {inv}")


# ---------------------------------------------------------------------------
# Descriptors


class FieldDescriptor:
    """Base class of the field descriptors; each has a ``char`` that is 0 or a prime."""


@dataclass(frozen=True)
class Rationals(FieldDescriptor):
    char: int = dc_field(default=0, init=False)

    def __str__(self):
        return "Q"


@dataclass(frozen=True)
class Finite(FieldDescriptor):
    p: int
    e: int = 1

    def __post_init__(self):
        if not is_prime(self.p) or self.e < 1:
            raise InvalidPrimePower(f"F_{self.p}^{self.e} is not a valid finite field")

    @property
    def char(self):
        return self.p

    @property
    def q(self) -> int:
        return self.p**self.e

    @classmethod
    def of_order(cls, q: int) -> Finite:
        pe = prime_power(q)
        if pe is None:
            raise InvalidPrimePower(f"{q} is not a prime power")
        return cls(*pe)

    def __str__(self):
        return f"F_{self.q}"


@dataclass(frozen=True)
class PAdic(FieldDescriptor):
    p: int
    char: int = dc_field(default=0, init=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"Q_p needs a prime, got {self.p}")

    def __str__(self):
        return f"Qp_{self.p}"


@dataclass(frozen=True)
class Explicit(FieldDescriptor):
    """A field known only through a table l -> (t, m).

    ``large_t`` asserts that every prime missing from the table (other than
    the characteristic) has t > 6, so contributes nothing to the bound.
    """

    char: int
    table: tuple[tuple[int, int, ExtNat], ...]
    large_t: bool
    source: str = dc_field(default="<table>", compare=False)

    def __post_init__(self):
        if self.char != 0 and not is_prime(self.char):
            raise ValueError(f"characteristic must be 0 or prime, got {self.char}")
        seen = set()
        for ell, t, m in self.table:
            if ell in seen:
                raise ValueError(f"duplicate table entry for l={ell}")
            seen.add(ell)
            require_admissible(CyclotomicInvariants(ell, t, m), self.char)

    @classmethod
    def from_mapping(cls, char: int, table: Mapping[int, tuple[int, ExtNat]],
                     large_t: bool, source: str = "<table>") -> Explicit:
        rows = tuple(sorted((ell, t, m) for ell, (t, m) in table.items()))
        return cls(char, rows, large_t, source)

    def lookup(self, ell: int):
        for row in self.table:
            if row[0] == ell:
                return row
        return None

    def __str__(self):
        return f"explicit({self.source})"


@dataclass(frozen=True)
class FormalExtension(FieldDescriptor):
    """A finite extension of ``base`` of the given degree, otherwise unspecified."""

    base: FieldDescriptor
    degree: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("extension degree must be >= 1")

    @property
    def char(self):
        return self.base.char

    def __str__(self):
        return f"ext({self.base},{self.degree})"


def normalize(field: FieldDescriptor) -> FieldDescriptor:
    """Collapse towers and extensions that are determined up to isomorphism.

    A finite field has a unique extension of each degree, and degree 1 changes
    nothing; other extensions stay formal.
    """
    if isinstance(field, FormalExtension):
        base = normalize(field.base)
        if field.degree == 1:
            return base
        if isinstance(base, Finite):
            return Finite(base.p, base.e * field.degree)
        if isinstance(base, FormalExtension):
            return FormalExtension(base.base, base.degree * field.degree)
        return FormalExtension(base, field.degree)
    return field


# ---------------------------------------------------------------------------
# Invariants


def _rationals(ell: int) -> CyclotomicInvariants:
    if ell == 2:
        return CyclotomicInvariants(2, 2, 2)
    return CyclotomicInvariants(ell, ell - 1, 1)


def _lifting_depth(q: int, t: int, ell: int) -> int:
    """v_ell(q**t - 1) without forming q**t; assumes ell | q**t - 1."""
    e, mod = 1, ell * ell
    while pow(q, t, mod) == 1:
        e += 1
        mod *= ell
    return e


def finite_invariants(q: int, ell: int) -> CyclotomicInvariants:
    """(t, m) for the field with q elements; q must be prime to ell."""
    if q % ell == 0:
        raise CharacteristicExclusion(ell, ell)
    if ell == 2:
        t = 1 if q % 4 == 1 else 2
        return CyclotomicInvariants(2, t, _lifting_depth(q, 2, 2) - 1)
    t = mult_order(q % ell, ell)
    return CyclotomicInvariants(ell, t, _lifting_depth(q, t, ell))


def invariants(field: FieldDescriptor, ell: int) -> CyclotomicInvariants:
    """The cyclotomic invariants of ``field`` at the prime ``ell``.

    Raises CharacteristicExclusion when ell = char(k), LargeTMiss for an
    untabulated prime of an explicit table flagged ``large_t``, and
    UnderdeterminedField when the descriptor does not pin (t, m) down.
    """
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    field = normalize(field)
    if ell == field.char:
        raise CharacteristicExclusion(ell, field.char)
    if isinstance(field, Rationals):
        return _rationals(ell)
    if isinstance(field, Finite):
        return finite_invariants(field.q, ell)
    if isinstance(field, PAdic):
        # l = p: same as Q.  l != p: same as the residue field F_p.
        return _rationals(ell) if ell == field.p else finite_invariants(field.p, ell)
    if isinstance(field, Explicit):
        row = field.lookup(ell)
        if row is not None:
            return CyclotomicInvariants(*row)
        if field.large_t:
            raise LargeTMiss(ell)
        raise UnderdeterminedField(f"l={ell} is not covered by {field}")
    if isinstance(field, FormalExtension):
        raise UnderdeterminedField(f"{field} only determines a range at l={ell}")
    raise TypeError(f"unknown field descriptor {field!r}")


def extension_range(base: CyclotomicInvariants, degree: int) -> InvariantRange:
    """Possible (t, m) at ell for an extension of the given degree.

    t' runs over divisors of t with degree * t' >= t, and m' <= m + log_ell(degree).
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    t, ell = base.t, base.ell
    cands = frozenset(d for d in divisors(t) if degree * d >= t)
    return InvariantRange(ell, cands, base.m + ilog(degree, ell))


def invariant_range(field: FieldDescriptor, ell: int) -> InvariantRange:
    """Exact invariants as a one-point range, or the extension range for formal extensions."""
    field = normalize(field)
    if isinstance(field, FormalExtension):
        if ell == field.char:
            raise CharacteristicExclusion(ell, field.char)
        return extension_range(invariants(field.base, ell), field.degree)
    inv = invariants(field, ell)
    return InvariantRange(ell, frozenset([inv.t]), inv.m)


# ---------------------------------------------------------------------------
# Descriptor strings


_INT = re.compile(r"\d+")


def parse_field(text: str) -> FieldDescriptor:
    """Parse ``Q``, ``F_<q>``, ``Qp_<p>``, ``ext(<desc>,<d>)`` or ``explicit(<file>)``."""
    if not text or not text.strip():
        raise DescriptorParseError(text, 0, "empty field descriptor")
    parser = _Parser(text)
    desc = parser.descriptor()
    parser.skip_ws()
    if parser.pos != len(text):
        raise DescriptorParseError(text, parser.pos, "trailing characters")
    return desc


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, s):
        self.skip_ws()
        if not self.text.startswith(s, self.pos):
            raise DescriptorParseError(self.text, self.pos, f"expected {s!r}")
        self.pos += len(s)

    def integer(self):
        self.skip_ws()
        m = _INT.match(self.text, self.pos)
        if not m:
            raise DescriptorParseError(self.text, self.pos, "expected an integer")
        self.pos = m.end()
        return int(m.group())

    def descriptor(self) -> FieldDescriptor:
        self.skip_ws()
        rest = self.text[self.pos:]
        if rest.startswith("ext("):
            self.pos += 4
            base = self.descriptor()
            self.expect(",")
            degree = self.integer()
            self.expect(")")
            if degree < 1:
                raise DescriptorParseError(self.text, self.pos, "extension degree must be >= 1")
            return FormalExtension(base, degree)
        if rest.startswith("explicit("):
            start = self.pos + len("explicit(")
            depth, i = 1, start
            while i < len(self.text) and depth:
                depth += {"(": 1, ")": -1}.get(self.text[i], 0)
                i += 1
            if depth:
                raise DescriptorParseError(self.text, start, "unclosed explicit(")
            path = self.text[start : i - 1].strip()
            self.pos = i
            return load_explicit(path)
        if rest.startswith("Qp_"):
            self.pos += 3
            at = self.pos
            p = self.integer()
            if not is_prime(p):
                raise DescriptorParseError(self.text, at, f"{p} is not prime")
            return PAdic(p)
        if rest.startswith("F_"):
            self.pos += 2
            q = self.integer()
            return Finite.of_order(q)
        if rest.startswith("Q"):
            self.pos += 1
            return Rationals()
        raise DescriptorParseError(self.text, self.pos, "unknown field descriptor")


def _parse_ext_nat(tok: str) -> ExtNat:
    if tok.lower() in ("inf", "infinity"):
        return INFINITY
    return int(tok)


def parse_explicit(text: str, source: str = "<table>") -> Explicit:
    """Parse the line-oriented table format.

    A header line ``char=<c> largeT=<0|1>`` followed by lines ``l t m``;
    ``m`` may be ``inf``.  ``#`` starts a comment.
    """
    try:
        return _parse_explicit(text, source)
    except ValueError as exc:
        raise TableFormatError(str(exc)) from None


def _parse_explicit(text: str, source: str) -> Explicit:
    char = large_t = None
    table: dict[int, tuple[int, ExtNat]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            for tok in line.split():
                key, _, val = tok.partition("=")
                if key == "char":
                    char = int(val)
                elif key == "largeT":
                    if val not in ("0", "1"):
                        raise ValueError(f"{source}:{lineno}: largeT must be 0 or 1")
                    large_t = val == "1"
                else:
                    raise ValueError(f"{source}:{lineno}: unknown header flag {key!r}")
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"{source}:{lineno}: expected 'l t m'")
        ell, t = int(parts[0]), int(parts[1])
        if ell in table:
            raise ValueError(f"{source}:{lineno}: duplicate entry for l={ell}")
        table[ell] = (t, _parse_ext_nat(parts[2]))
    if char is None or large_t is None:
        raise ValueError(f"{source}: header must set both char= and largeT=")
    return Explicit.from_mapping(char, table, large_t, source)


def load_explicit(path: str) -> Explicit:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TableFormatError(f"cannot read {path}: {exc.strerror}") from None
    return parse_explicit(text, source=path)

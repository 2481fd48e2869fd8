"""Explicit l-subgroups of the Cremona group over a finite field.

Every construction here is a semidirect product ``B.C`` where ``B`` is the
l-power torsion of the rational points of a 2-dimensional torus and ``C`` a
finite group of torus automorphisms, plus one exceptional group of order 3^4
acting on the Fermat cubic surface.

The multiplicative group of F_{q^t} is modelled as Z/(q^t - 1) with the
Frobenius acting as multiplication by q, so all torus arithmetic is modular
integer arithmetic on exponent vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .arith import FactoredNat, IntPolynomial, cyclotomic_poly, factor, is_prime, valuation
from .bounds import GOOD_T, bound_exponent
from .errors import InvariantViolation, PreconditionError
from .fields import CyclotomicInvariants, Finite, finite_invariants
from .groups import AbstractGroup

# Automorphisms of the 2-dimensional split torus, as integer matrices acting
# on exponent vectors.  INVERT_FIRST and SWAP generate a dihedral group of
# order 8; ORDER_THREE is the element of GL_2(Z) used when l = 3.
INVERT_FIRST = ((-1, 0), (0, 1))
SWAP = ((0, 1), (1, 0))
ORDER_THREE = ((0, -1), (1, -1))
IDENTITY_2 = ((1, 0), (0, 1))


def _mat_mul(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))


@dataclass(frozen=True)
class TorusSpec:
    """A 2-dimensional torus over F_q split by the degree-t subextension of F_q(z).

    ``kind`` is ``"split"`` (t = 1), ``"norm-one"`` (t = 2) or
    ``"cyclotomic-image"`` (t in {3, 4, 6}, the image of G(s) on the Weil
    restriction of G_m from F_{q^t}, where F = Phi_t and G = (X^t - 1)/F).
    """

    q: int
    t: int
    kind: str
    F: IntPolynomial | None = None
    G: IntPolynomial | None = None

    @classmethod
    def make(cls, q: int, t: int) -> TorusSpec:
        Finite.of_order(q)
        if t == 1:
            return cls(q, 1, "split")
        if t == 2:
            return cls(q, 2, "norm-one")
        if t in (3, 4, 6):
            F = cyclotomic_poly(t)
            G = IntPolynomial.x_pow_minus_one(t).exact_div(F)
            if F * G != IntPolynomial.x_pow_minus_one(t):
                raise InvariantViolation(f"F*G != X^{t}-1")
            return cls(q, t, "cyclotomic-image", F, G)
        raise PreconditionError(f"no 2-dimensional torus for t={t}")


def _closed_form_points(q: int, t: int) -> int:
    if t == 1:
        return (q - 1) ** 2
    if t == 2:
        return (q + 1) ** 2
    return cyclotomic_poly(t)(q)


def _exponent_model_points(spec: TorusSpec) -> int:
    q = spec.q
    if spec.kind == "split":
        return (q - 1) ** 2
    if spec.kind == "norm-one":
        # kernel of the norm x -> (1 + q) x on Z/(q^2 - 1), squared
        n = q * q - 1
        return math.gcd(q + 1, n) ** 2
    n = q**spec.t - 1
    return n // math.gcd(spec.G(q) % n, n)


def torus_point_order(q: int, t: int) -> FactoredNat:
    """|T(F_q)| for the torus attached to t, checked against the exponent model."""
    spec = TorusSpec.make(q, t)
    closed = _closed_form_points(q, t)
    model = _exponent_model_points(spec)
    if closed != model:
        raise InvariantViolation(f"|T(F_{q})| for t={t}: closed form {closed} != model {model}")
    return factor(closed)


def _check_q_ell(q: int, ell: int) -> CyclotomicInvariants:
    Finite.of_order(q)
    if not is_prime(ell):
        raise PreconditionError(f"{ell} is not prime")
    if q % ell == 0:
        raise PreconditionError(f"l={ell} divides q={q}")
    return finite_invariants(q, ell)


def torus_image_oracle(q: int, t: int, ell: int, n: int) -> int:
    """The l-adic valuation of the image of u = G(s) on Z/(q^t - 1).

    Also verifies that the l^n-torsion point z(n) = (q^t - 1)/l^n maps to a
    point of order exactly l^n, so the returned value is at least n.
    """
    if t not in (3, 4, 6):
        raise PreconditionError(f"t={t} is not 3, 4 or 6")
    inv = _check_q_ell(q, ell)
    if inv.t != t:
        raise PreconditionError(f"order of {q} mod {ell} is {inv.t}, not {t}")
    if not 0 <= n <= inv.m:
        raise PreconditionError(f"n={n} outside [0, m={inv.m}]")
    spec = TorusSpec.make(q, t)
    N = q**t - 1
    g = spec.G(q) % N
    image_order = N // math.gcd(g, N)
    z = N // ell**n
    uz = g * z % N
    if N // math.gcd(uz, N) != ell**n:
        raise InvariantViolation(f"u(z({n})) does not have order {ell}^{n}")
    return valuation(ell, image_order)


def _torus_semidirect(N: int, torsion: int, matrices, name: str) -> AbstractGroup:
    """(Z/torsion)^2 inside (Z/N)^2, extended by the matrices acting on exponents."""
    step = N // torsion
    gens = [((step, 0), IDENTITY_2), ((0, step), IDENTITY_2)]
    gens += [((0, 0), M) for M in matrices]

    def op(a, b):
        (x1, y1), M = a
        (x2, y2), P = b
        return (((x1 + M[0][0] * x2 + M[0][1] * y2) % N,
                 (y1 + M[1][0] * x2 + M[1][1] * y2) % N), _mat_mul(M, P))

    return AbstractGroup(gens, op, ((0, 0), IDENTITY_2), name)


def _cyclic_subgroup(N: int, generator: int, name: str) -> AbstractGroup:
    return AbstractGroup([generator % N], lambda a, b: (a + b) % N, 0, name)


def build_group(q: int, ell: int, n: int) -> AbstractGroup:
    """An explicit l-group A = B.C in the Cremona group over F_q.

    Orders: l^(2n+3) for l = 2, l^(2n+1) for l = 3, l^(2n) for l > 3 with
    t in {1, 2}, l^n for t in {3, 4, 6}.  Requires n <= m(F_q, l), and n >= 2
    when l = 2.
    """
    inv = _check_q_ell(q, ell)
    t, m = inv.t, inv.m
    if t not in GOOD_T:
        raise PreconditionError(f"t={t}: no nontrivial construction")
    if n > m:
        raise PreconditionError(f"n={n} exceeds m={m}")
    if ell == 2:
        if n < 2:
            raise PreconditionError("l = 2 needs n >= 2")
        # T_1 is G_m when F_q contains z(n), else the norm-one torus of F_q(z(n))
        N = q - 1 if (q - 1) % 2**n == 0 else q + 1
        return _torus_semidirect(N, 2**n, (INVERT_FIRST, SWAP), f"A(q={q},l=2,n={n})")
    if n < 0:
        raise PreconditionError("n must be >= 0")
    if t in (1, 2):
        N = q - 1 if t == 1 else q + 1
        mats = (ORDER_THREE,) if ell == 3 else ()
        return _torus_semidirect(N, ell**n, mats, f"A(q={q},l={ell},n={n})")
    spec = TorusSpec.make(q, t)
    N = q**t - 1
    h = spec.G(q) % N
    image = N // math.gcd(h, N)  # |T(F_q)|
    torsion = math.gcd(image, ell**n)
    return _cyclic_subgroup(N, h * (image // torsion), f"A(q={q},l={ell},n={n})")


# ---------------------------------------------------------------------------
# The Fermat cubic group


def _fermat_abstract_op(a, b):
    (v, k), (w, j) = a, b
    # w composed with the k-th power of the shift (x,y,z,t) -> (y,z,x,t)
    sw = w
    for _ in range(k):
        sw = (sw[1], sw[2], sw[0])
    return (tuple((x + y) % 3 for x, y in zip(v, sw)), (k + j) % 3)


def _normalize_mod_scalars(e):
    # representative of e modulo the diagonal, with last coordinate 0
    return tuple((x - e[3]) % 3 for x in e)


def _monomial_op(g, h):
    # (e, pi) sends x to (r^e_i x_pi(i))_i; g after h
    (eg, pg), (eh, ph) = g, h
    e = tuple((eg[i] + eh[pg[i]]) % 3 for i in range(4))
    p = tuple(ph[pg[i]] for i in range(4))
    return (_normalize_mod_scalars(e), p)


SHIFT = (1, 2, 0, 3)


def fermat_monomial_group() -> AbstractGroup:
    """The group generated by (x,y,z,t) -> (rx,y,z,t) and (x,y,z,t) -> (y,z,x,t), modulo scalars."""
    ident = ((0, 0, 0, 0), (0, 1, 2, 3))
    gens = [((1, 0, 0, 0), (0, 1, 2, 3)), ((0, 0, 0, 0), SHIFT)]
    return AbstractGroup(gens, _monomial_op, ident, "Fermat monomial")


def _fermat_to_monomial(elem):
    (a, b, c), k = elem
    perm = (0, 1, 2, 3)
    for _ in range(k):
        perm = tuple(perm[SHIFT[i]] for i in range(4))
    return ((a, b, c, 0), perm)


@lru_cache(maxsize=None)
def fermat_cubic_group() -> AbstractGroup:
    """((Z/3)^4 / diagonal) x| C_3, of order 3^4, acting on x^3 + y^3 + z^3 + t^3 = 0.

    Elements are ``((a, b, c), k)``: exponents of r on x, y, z (t normalized
    to exponent 0 by a scalar) and a power of the cyclic shift of x, y, z.
    The isomorphism onto the group generated by the two monomial generators
    is checked on construction.
    """
    gens = [((1, 0, 0), 0), ((0, 0, 0), 1)]
    group = AbstractGroup(gens, _fermat_abstract_op, ((0, 0, 0), 0), "Fermat 3^4")
    concrete = fermat_monomial_group()
    image = {_fermat_to_monomial(x) for x in group.elements}
    if len(image) != group.order or image != set(concrete.elements):
        raise InvariantViolation("Fermat group does not map bijectively onto the monomial group")
    for x in group.elements:
        for y in group.elements:
            lhs = _fermat_to_monomial(_fermat_abstract_op(x, y))
            rhs = _monomial_op(_fermat_to_monomial(x), _fermat_to_monomial(y))
            if lhs != rhs:
                raise InvariantViolation("Fermat group map is not a homomorphism")
    return group


# ---------------------------------------------------------------------------
# Attainment


@dataclass(frozen=True)
class AttainmentRow:
    q: int
    ell: int
    t: int
    m: int
    M: int
    constructed_max: int

    @property
    def ok(self) -> bool:
        return self.M == self.constructed_max

    def __str__(self):
        return (f"{self.q} {self.ell} {self.t} {self.m} {self.M} {self.constructed_max} "
                f"{'ok' if self.ok else 'FAIL'}")


def attainment_row(q: int, ell: int) -> AttainmentRow:
    inv = _check_q_ell(q, ell)
    M = bound_exponent(inv)
    best = 0
    if inv.t in GOOD_T:
        first = 2 if ell == 2 else 1
        for n in range(first, inv.m + 1):
            best = max(best, valuation(ell, build_group(q, ell, n).order))
        if ell == 3 and inv.t == 1 and inv.m == 1:
            best = max(best, valuation(3, fermat_cubic_group().order))
    return AttainmentRow(q, ell, inv.t, inv.m, M, best)


def attainment_sweep(q: int, ell: int) -> int:
    """Largest l-adic valuation among the groups constructed over F_q."""
    return attainment_row(q, ell).constructed_max

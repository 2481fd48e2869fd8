import pytest
from hypothesis import given
from hypothesis import strategies as st

from minkcrem.arith import INFINITY, iter_prime_powers, primes_up_to, valuation
from minkcrem.errors import (
    CharacteristicExclusion,
    DescriptorParseError,
    InadmissibleInvariants,
    InvalidPrimePower,
    LargeTMiss,
    TableFormatError,
    UnderdeterminedField,
)
from minkcrem.fields import (
    CyclotomicInvariants,
    Explicit,
    Finite,
    FormalExtension,
    PAdic,
    Rationals,
    extension_range,
    finite_invariants,
    invariant_range,
    invariants,
    is_admissible,
    normalize,
    parse_explicit,
    parse_field,
)

PRIME_POWERS = list(iter_prime_powers(5000))
PRIMES = primes_up_to(997)


@pytest.mark.parametrize("field, ell, t, m", [
    (Rationals(), 2, 2, 2),
    (Finite.of_order(2), 7, 3, 1),
    (Finite.of_order(4), 3, 1, 1),
    (PAdic(5), 5, 4, 1),
])
def test_invariants_examples(field, ell, t, m):
    assert invariants(field, ell) == CyclotomicInvariants(ell, t, m)


def test_rationals_formula():
    for ell in primes_up_to(500)[1:]:
        assert invariants(Rationals(), ell) == CyclotomicInvariants(ell, ell - 1, 1)


def test_characteristic_is_excluded():
    with pytest.raises(CharacteristicExclusion):
        invariants(Finite.of_order(2), 2)
    with pytest.raises(CharacteristicExclusion):
        invariants(Finite.of_order(9), 3)


@pytest.mark.parametrize("inv, degree, cands, m_upper", [
    (CyclotomicInvariants(7, 6, 1), 1, {6}, 1),
    (CyclotomicInvariants(7, 6, 1), 2, {3, 6}, 1),
    (CyclotomicInvariants(3, 2, 1), 9, {1, 2}, 3),
])
def test_extension_range_examples(inv, degree, cands, m_upper):
    rng = extension_range(inv, degree)
    assert rng.t_candidates == frozenset(cands)
    assert rng.m_upper == m_upper


@pytest.mark.parametrize("ell, t, m, expected", [
    (5, 4, 1, True),
    (5, 3, 1, False),
    (2, 2, 1, False),
    (2, 1, 2, True),
    (3, 2, INFINITY, True),
])
def test_is_admissible_examples(ell, t, m, expected):
    assert is_admissible(CyclotomicInvariants(ell, t, m)) is expected


@given(st.sampled_from(PRIME_POWERS), st.sampled_from(PRIMES))
def test_finite_invariants_admissible(q, ell):
    if q % ell == 0:
        return
    assert is_admissible(finite_invariants(q, ell))


def test_finite_invariants_admissible_exhaustive_small():
    for q in iter_prime_powers(300):
        for ell in primes_up_to(997):
            if q % ell:
                assert is_admissible(finite_invariants(q, ell))


@given(st.sampled_from(PRIME_POWERS), st.sampled_from(PRIMES[1:]))
def test_finite_m_consistency(q, ell):
    if q % ell == 0:
        return
    inv = finite_invariants(q, ell)
    assert inv.m == valuation(ell, q**inv.t - 1) == valuation(ell, pow(q, ell - 1, ell**40) - 1)


@given(st.sampled_from([q for q in PRIME_POWERS if q < 400]), st.sampled_from(PRIMES[:60]),
       st.integers(min_value=1, max_value=6))
def test_extension_soundness(q, ell, d):
    if q % ell == 0:
        return
    rng = extension_range(finite_invariants(q, ell), d)
    ext = finite_invariants(q**d, ell)
    assert ext.t in rng.t_candidates
    assert ext.m <= rng.m_upper


@pytest.mark.parametrize("p", primes_up_to(100))
def test_padic_agrees_with_rationals_at_p(p):
    assert invariants(PAdic(p), p) == invariants(Rationals(), p)


def test_padic_uses_residue_field_away_from_p():
    for p in primes_up_to(60):
        for ell in primes_up_to(60):
            if ell != p:
                assert invariants(PAdic(p), ell) == finite_invariants(p, ell)


@pytest.mark.parametrize("text, expected", [
    ("Q", Rationals()),
    ("F_9", Finite(3, 2)),
    ("Qp_7", PAdic(7)),
    ("ext(F_2,3)", Finite(2, 3)),
    (" ext( ext(F_3, 2) , 2 ) ", Finite(3, 4)),
    ("ext(Q,1)", Rationals()),
])
def test_parse_field(text, expected):
    assert normalize(parse_field(text)) == expected


def test_parse_formal_extension():
    f = normalize(parse_field("ext(ext(Q,2),3)"))
    assert f == FormalExtension(Rationals(), 6)
    with pytest.raises(UnderdeterminedField):
        invariants(f, 7)
    assert invariant_range(f, 7).t_candidates == frozenset({1, 2, 3, 6})


@pytest.mark.parametrize("text", ["F_6", "F_1", "F_100"])
def test_parse_rejects_non_prime_powers(text):
    with pytest.raises(InvalidPrimePower):
        parse_field(text)


@pytest.mark.parametrize("text, pos", [("", 0), ("R", 0), ("F_", 2), ("Qp_4", 3), ("ext(Q,2", 7), ("Q x", 2)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises((DescriptorParseError, InvalidPrimePower)) as info:
        parse_field(text)
    if isinstance(info.value, DescriptorParseError):
        assert info.value.pos == pos


def test_explicit_table(tmp_path):
    path = tmp_path / "k.tbl"
    path.write_text("# a field\nchar=0 largeT=1\n2 1 3\n3 1 2\n7 3 inf\n")
    field = parse_field(f"explicit({path})")
    assert isinstance(field, Explicit)
    assert invariants(field, 3) == CyclotomicInvariants(3, 1, 2)
    assert invariants(field, 7).m is INFINITY
    with pytest.raises(LargeTMiss):
        invariants(field, 5)


def test_explicit_rejects_inadmissible_rows():
    with pytest.raises(InadmissibleInvariants):
        parse_explicit("char=0 largeT=1\n5 3 1\n")


@pytest.mark.parametrize("text", [
    "2 1 3\n",
    "char=0\n2 1 3\n",
    "char=0 largeT=2\n",
    "char=0 largeT=1\n2 1\n",
    "char=0 largeT=1\n2 x 3\n",
    "char=0 largeT=1\n3 1 1\n3 2 1\n",
    "char=4 largeT=1\n",
])
def test_explicit_malformed_tables(text):
    with pytest.raises(TableFormatError):
        parse_explicit(text)


def test_explicit_missing_file(tmp_path):
    with pytest.raises(TableFormatError):
        parse_field(f"explicit({tmp_path / 'absent.tbl'})")


def test_explicit_without_large_t_is_underdetermined():
    field = Explicit.from_mapping(0, {3: (2, 1)}, large_t=False)
    with pytest.raises(UnderdeterminedField):
        invariants(field, 5)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entatlas.poly import Polynomial, x
from entatlas.qstate import (
    LocalOperator,
    QubitPermutation,
    State,
    StateError,
    apply_local,
    decode_form,
    encode_form,
    permute_form,
    permute_qubits,
    random_sl2_tuple,
    random_state,
    to_ground_form,
)
from entatlas.scalars import GaussianRational

from conftest import ket_state


def test_decode_basis_ket():
    assert decode_form(1) == ket_state((0, 0, 0, 0))


def test_decode_all_ones_is_full_superposition():
    s = decode_form(65535)
    assert all(a == 1 for a in s.amps)


def test_decode_59520_bits():
    s = decode_form(59520)
    assert [b for b in range(16) if s.amps[b]] == [7, 11, 13, 14, 15]


def test_decode_out_of_range():
    with pytest.raises(StateError):
        decode_form(65536)
    with pytest.raises(StateError):
        decode_form(-1)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=65535))
def test_encode_decode_roundtrip(n):
    assert encode_form(decode_form(n)) == n


def test_ground_form_monomial():
    p = to_ground_form(ket_state((0, 0, 0, 0)))
    expected = Polynomial.monomial(1, {x(1, 0): 1, x(2, 0): 1, x(3, 0): 1, x(4, 0): 1})
    assert p == expected


def test_ground_form_ghz(ghz):
    p = to_ground_form(ghz)
    assert len(p.terms) == 2
    assert p.multidegree() == (1, 1, 1, 1)


def test_ground_form_full_superposition_factors():
    p = to_ground_form(decode_form(65535))
    prod = Polynomial.constant(1)
    for site in range(1, 5):
        prod = prod * (Polynomial.variable(x(site, 0)) + Polynomial.variable(x(site, 1)))
    assert p == prod


def test_apply_identity():
    s = random_state(5)
    assert apply_local(LocalOperator.identity(), s) == s


def test_apply_bitflip_all():
    flip = ((0, 1), (1, 0))
    g = LocalOperator(flip, flip, flip, flip)
    assert apply_local(g, ket_state((0, 0, 0, 0))) == ket_state((1, 1, 1, 1))


def test_apply_flip_on_59520():
    flip = ((0, 1), (1, 0))
    g = LocalOperator(flip, flip, flip, flip)
    out = apply_local(g, decode_form(59520))
    assert out == ket_state((0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 0), (0, 0, 0, 0))


def test_apply_composition():
    g = random_sl2_tuple(1)
    h = random_sl2_tuple(2)
    s = random_state(3)
    assert apply_local(g.compose(h), s) == apply_local(g, apply_local(h, s))


def test_singular_factor_rejected():
    with pytest.raises(StateError):
        LocalOperator(((1, 0), (0, 1)), ((1, 1), (1, 1)), ((1, 0), (0, 1)), ((1, 0), (0, 1)))


def test_permutation_identity():
    s = random_state(7)
    assert permute_qubits(QubitPermutation.identity(), s) == s


def test_permutation_transposition_34():
    sigma = QubitPermutation((1, 2, 4, 3))
    assert permute_qubits(sigma, ket_state((0, 0, 1, 0))) == ket_state((0, 0, 0, 1))


def test_permutation_group_action():
    a = QubitPermutation((2, 3, 1, 4))
    b = QubitPermutation((1, 4, 2, 3))
    s = random_state(11)
    assert permute_qubits(a, permute_qubits(b, s)) == permute_qubits(a.compose(b), s)


def test_permutation_commutes_with_local_action():
    sigma = QubitPermutation((2, 1, 4, 3))
    g = random_sl2_tuple(9)
    s = random_state(13)
    lhs = permute_qubits(sigma, apply_local(g, s))
    perm_factors = [g.factors[sigma(k) - 1] for k in range(1, 5)]
    rhs = apply_local(LocalOperator(*perm_factors), permute_qubits(sigma, s))
    assert lhs == rhs


def test_random_state_deterministic():
    assert random_state(42) == random_state(42)
    assert random_state(42, "binary") == random_state(42, "binary")
    assert random_state(42, "binary").is_binary()


def test_random_sl2_unit_determinants():
    for seed in range(5):
        assert random_sl2_tuple(seed).determinants() == (1, 1, 1, 1)


def test_json_roundtrip_rational():
    s = State([Fraction(1, 3), -2] + [0] * 14)
    assert State.from_json(s.to_json()) == s


def test_json_roundtrip_complex():
    s = State([GaussianRational(1, 2)] + [0] * 14 + [Fraction(-1, 5)])
    back = State.from_json(s.to_json())
    assert back == s


def test_json_form_shorthand():
    assert State.from_json('{"form": 59520}') == decode_form(59520)


def test_json_malformed():
    with pytest.raises(StateError):
        State.from_json("not json")
    with pytest.raises(StateError):
        State.from_json('{"amplitudes": [[1,1]]}')
    with pytest.raises(StateError):
        State.from_json('{"something": 1}')


def test_permute_form():
    sigma = QubitPermutation((1, 2, 4, 3))
    assert permute_form(sigma, encode_form(ket_state((0, 0, 1, 0)))) == encode_form(
        ket_state((0, 0, 0, 1))
    )

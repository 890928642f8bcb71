from fractions import Fraction

import pytest

from entatlas.invariants import (
    all_invariants,
    b_form,
    delta_via_sextic,
    hyperdet_delta,
    in_third_secant,
    inv_B,
    inv_B_transvectant,
    inv_D,
    inv_I2,
    inv_L,
    inv_M,
    inv_N,
    inv_Z,
    is_nilpotent,
    quartic_coeffs,
    quartic_delta,
    sextic_coeffs,
    verstraete_quartic,
    verstraete_quartic_coeffs,
)
from entatlas.poly import Polynomial
from entatlas.poly import t as t_var
from entatlas.qstate import State, StateError, apply_local, decode_form, random_sl2_tuple, random_state

from conftest import ket_state


def test_ghz_determinants(ghz):
    assert inv_L(ghz) == 0
    assert inv_M(ghz) == 0
    assert inv_B(ghz) == 1


def test_nullcone_representative_kills_generators():
    s = decode_form(59520)
    assert inv_B(s) == 0 and inv_L(s) == 0 and inv_M(s) == 0 and inv_D(s, "xy") == 0


def test_N_definitional_identity():
    for seed in range(20):
        s = random_state(seed)
        assert inv_N(s) == -inv_L(s) - inv_M(s)


def test_B_matches_transvectant(catalog):
    for seed in range(8):
        s = random_state(seed)
        assert inv_B(s) == inv_B_transvectant(s, catalog)


def test_pair_form_degenerates_on_monomial():
    s = ket_state((0, 0, 0, 0))
    assert b_form(s, "xy").is_zero()
    assert inv_D(s, "xy") == 0


def test_Dxy_on_secant_groupings():
    s = decode_form(59777)
    assert inv_B(s) == 0 and inv_D(s, "xy") != 0
    s = decode_form(65259)
    assert inv_B(s) != 0 and inv_D(s, "xy") == 0


def test_bad_pair_name():
    with pytest.raises(ValueError):
        inv_D(decode_form(3), "xq")


def test_delta_zero_on_nullcone():
    for n in (59520, 65511, 65535, 65520):
        assert hyperdet_delta(decode_form(n)) == 0


def test_delta_sl_invariant():
    s = random_state(3)
    g = random_sl2_tuple(99)
    assert hyperdet_delta(apply_local(g, s)) == hyperdet_delta(s)


def test_delta_routes_agree():
    for seed in range(10):
        s = random_state(seed)
        assert hyperdet_delta(s) == delta_via_sextic(s)


def test_delta_routes_vanish_on_nullcone(catalog):
    s = decode_form(59520)
    assert hyperdet_delta(s) == 0
    assert delta_via_sextic(s, catalog) == 0


def test_proportionality_constant_exact():
    s = random_state(6)
    i2 = inv_I2(s)
    assert i2 != 0
    assert hyperdet_delta(s) == Fraction(3, 2 ** 19 * 5 ** 2) * i2


def test_homogeneity_degrees():
    s = random_state(8)
    lam = Fraction(5, 3)
    scaled = s.scaled(lam)
    assert inv_B(scaled) == lam ** 2 * inv_B(s)
    assert inv_L(scaled) == lam ** 4 * inv_L(s)
    assert inv_M(scaled) == lam ** 4 * inv_M(s)
    assert inv_N(scaled) == lam ** 4 * inv_N(s)
    assert inv_D(scaled, "xy") == lam ** 6 * inv_D(s, "xy")
    assert inv_Z(scaled) == lam ** 6 * inv_Z(s)
    assert hyperdet_delta(scaled) == lam ** 24 * hyperdet_delta(s)
    assert inv_I2(scaled) == lam ** 24 * inv_I2(s)


def test_all_pair_invariants_sl_invariant():
    s = random_state(12)
    g = random_sl2_tuple(13)
    gs = apply_local(g, s)
    for pair in ("xy", "xz", "xt", "yz", "yt", "zt"):
        assert inv_D(s, pair) == inv_D(gs, pair)


def test_Z_values_on_extended_branch():
    assert inv_Z(decode_form(65257)) != 0
    assert inv_Z(decode_form(6014)) == 0


def test_secant_factorization_computed_identity():
    # the degree-consistent form of the secant factorization: on L = M = 0,
    # -256 * Delta = 6912 * D_xy^3 * Z, i.e. Delta = -27 * D_xy^3 * Z
    for n in (65257, 59777, 59510, 6014, 61305, 65534, 65529):
        s = decode_form(n)
        assert inv_L(s) == 0 and inv_M(s) == 0
        d = inv_D(s, "xy")
        assert hyperdet_delta(s) == -27 * d ** 3 * inv_Z(s)
        assert -256 * hyperdet_delta(s) == 6912 * d ** 3 * inv_Z(s)


def test_quartic_degenerates_on_nullcone():
    q = verstraete_quartic(decode_form(59520))
    t0 = t_var(0)
    assert q.coefficient({t0: 4}) == 1
    assert len(q.terms) == 1


def test_quartic_discriminant_is_delta():
    for seed in range(12):
        s = random_state(seed)
        assert quartic_delta(verstraete_quartic_coeffs(s)) == hyperdet_delta(s)


def test_quartic_roots_on_diagonal_family():
    a, b, c, d = 1, 2, 3, 5
    h = Fraction(1, 2)
    amps = [0] * 16
    for bits, v in (
        ((0, 0, 0, 0), h * (a + d)), ((1, 1, 1, 1), h * (a + d)),
        ((0, 0, 1, 1), h * (a - d)), ((1, 1, 0, 0), h * (a - d)),
        ((0, 1, 0, 1), h * (b + c)), ((1, 0, 1, 0), h * (b + c)),
        ((0, 1, 1, 0), h * (b - c)), ((1, 0, 0, 1), h * (b - c)),
    ):
        amps[bits[0] + 2 * bits[1] + 4 * bits[2] + 8 * bits[3]] = v
    s = State(amps)
    q = verstraete_quartic(s)
    t0, t1 = t_var(0), t_var(1)
    for r in (a, b, c, d):
        val = q.substitute({t0: Polynomial.constant(r * r), t1: Polynomial.constant(1)})
        assert val.is_zero()


def test_nilpotency_predicates(w_state, ghz):
    assert is_nilpotent(w_state)
    assert in_third_secant(ghz) and not is_nilpotent(ghz)
    s = random_state(33)
    assert inv_L(s) != 0
    assert not is_nilpotent(s) and not in_third_secant(s)


def test_zero_state_rejected():
    with pytest.raises(StateError):
        is_nilpotent(State([0] * 16))
    with pytest.raises(StateError):
        in_third_secant(State([0] * 16))


def test_all_invariants_dict():
    inv = all_invariants(decode_form(65534), pairs=True)
    assert inv["L"] == 0 and inv["M"] == 0 and inv["B"] != 0
    assert set(inv) >= {"B", "L", "M", "N", "Dxy", "S", "T", "Delta", "Z", "I2",
                        "Dxz", "Dxt", "Dyz", "Dyt", "Dzt"}


def test_sextic_and_quartic_coeff_conventions(catalog):
    s = decode_form(65218)
    ds = sextic_coeffs(s, catalog)
    p = catalog.eval_covariant("L_6000", s)
    from math import comb
    from entatlas.poly import x as x_var
    for i in range(7):
        assert p.coefficient({x_var(1, 0): 6 - i, x_var(1, 1): i}) == comb(6, i) * ds[i]
    cs = quartic_coeffs(s)
    assert len(cs) == 5

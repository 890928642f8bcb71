from fractions import Fraction

import pytest

from entatlas.catalog import (
    CATALOG_SHA256,
    CatalogError,
    CovariantId,
    EXTENDED_T_IDS,
    T_IDS,
    _parse_line,
    catalog_file_sha256,
    split_T,
)
from entatlas.qstate import apply_local, decode_form, random_sl2_tuple, random_state
from entatlas.poly import Polynomial, x

from conftest import ket_state


def test_census(catalog):
    assert len(catalog) == 170
    deg2 = [str(c) for c in catalog.ids_of_degree(2)]
    assert deg2 == ["B_0000", "B_2200", "B_2020", "B_2002", "B_0220", "B_0202", "B_0022"]
    deg12 = [str(c) for c in catalog.ids_of_degree(12)]
    assert deg12 == ["L_6000", "L_0600", "L_0060", "L_0006"]


def test_declared_multidegrees(catalog):
    c = CovariantId.parse("C_3111")
    assert c.multidegree == (3, 1, 1, 1)
    assert c in catalog


def test_id_parse_roundtrip():
    for text in ("A", "B_0000", "C1_1111", "F2_2220", "L_6000", "H2_0222"):
        assert str(CovariantId.parse(text)) == text
    with pytest.raises(CatalogError):
        CovariantId.parse("Q_1111")
    with pytest.raises(CatalogError):
        CovariantId.parse("B_12")


def test_hash_pinned():
    assert catalog_file_sha256() == CATALOG_SHA256


def test_parse_rejects_degree_law_violation():
    with pytest.raises(CatalogError):
        from entatlas.catalog import Catalog

        defs = [
            _parse_line("A 1111 GROUND"),
            _parse_line("B_2200 2200 1/2:A:A:0011"),
            _parse_line("C_3111 3111 1:A:B_2200:0010"),
        ]
        Catalog(defs)


def test_parse_rejects_forward_reference():
    with pytest.raises(CatalogError):
        from entatlas.catalog import Catalog

        Catalog([_parse_line("A 1111 GROUND"), _parse_line("B_2200 2200 1/2:A:Z_0000:0011")])


def test_eval_ground_on_basis_ket(catalog):
    p = catalog.eval_covariant("A", ket_state((0, 0, 0, 0)))
    assert p == Polynomial.monomial(1, {x(1, 0): 1, x(2, 0): 1, x(3, 0): 1, x(4, 0): 1})


def test_eval_sextics_on_65511(catalog):
    s = decode_form(65511)
    # the printed evaluation block for 65511 ends 0,0,0,1 in the
    # (L_6000, L_0600, L_0060, L_0006) order
    assert catalog.eval_covariant("L_6000", s).is_zero()
    assert catalog.eval_covariant("L_0600", s).is_zero()
    assert catalog.eval_covariant("L_0060", s).is_zero()
    assert not catalog.eval_covariant("L_0006", s).is_zero()


def test_eval_sextic_multidegree(catalog):
    p = catalog.eval_covariant("L_6000", decode_form(65218))
    assert p.multidegree() == (6, 0, 0, 0)


def test_eval_b2200_on_basis_ket(catalog):
    assert catalog.eval_covariant("B_2200", ket_state((0, 0, 0, 0))).is_zero()


def test_unknown_id(catalog):
    with pytest.raises(CatalogError):
        catalog.eval_covariant("B_1111", decode_form(3))


def test_signature_vectors(catalog):
    t59520 = catalog.vector_T(decode_form(59520))
    assert split_T(t59520) == [[1], [1, 1, 1, 1, 1, 1], [1, 1, 1, 1], [0, 0, 0, 0],
                               [0, 0, 0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert catalog.vector_T(decode_form(0)) == (0,) * 29
    t65535 = catalog.vector_T(decode_form(65535))
    assert t65535[0] == 1 and not any(t65535[1:])


def test_vector_V_stratum_rows(catalog):
    assert catalog.vector_V(decode_form(59520)) == (1, 1, 1, 1, 0, 0, 0, 0)
    assert catalog.vector_V(decode_form(64700)) == (1, 1, 1, 1, 1, 1, 0, 0)
    assert catalog.vector_V(decode_form(65520)) == (1, 1, 0, 0, 0, 0, 0, 0)


def test_vector_Vp(catalog):
    assert catalog.vector_Vp(decode_form(65257)) == (1, 1, 1, 1)
    assert catalog.vector_Vp(decode_form(59510)) == (0, 0, 0, 0)


def test_vector_Vpp(catalog):
    assert catalog.vector_Vpp(decode_form(65529)) == (1, 0, 0, 0, 0, 1, 0, 0, 0, 0)


def test_vector_W(catalog):
    assert catalog.vector_W(decode_form(65534)) == (0, 0, 0)
    assert catalog.vector_W(decode_form(65259)) == (1, 1, 1)
    assert catalog.vector_W(decode_form(65529)) == (1, 0, 0)


def test_memoization(catalog):
    s = decode_form(59520)
    sess = catalog.session(s)
    assert sess.eval("D_4000") is sess.eval("D_4000")


def test_evaluated_multihomogeneity(catalog):
    s = random_state(17)
    sess = catalog.session(s)
    for cid in list(catalog.order)[:60]:
        p = sess.eval(cid)
        assert p.is_zero() or p.multidegree() == cid.multidegree


def test_signature_sl_invariance(catalog):
    s = random_state(19)
    g = random_sl2_tuple(20)
    ids = EXTENDED_T_IDS
    assert catalog.signature(s, ids) == catalog.signature(apply_local(g, s), ids)


def test_signature_scale_invariance(catalog):
    s = random_state(23)
    assert catalog.signature(s, T_IDS) == catalog.signature(s.scaled(Fraction(-7, 3)), T_IDS)


def test_b0000_matches_parity_formula(catalog):
    # redundancy cross-check: the evaluated degree-2 invariant equals the
    # explicit signed pairing sum_I (-1)^|I| a_I a_Ibar / 2
    for seed in range(5):
        s = random_state(seed)
        val = catalog.eval_covariant("B_0000", s).coefficient({})
        explicit = sum(
            (-1 if bin(b).count("1") & 1 else 1) * s.amps[b] * s.amps[15 - b]
            for b in range(16)
        )
        assert 2 * val == explicit

"""The invariant generators and everything derived from them.

Generators: the quadratic form B, the quartic determinants L and M (and
N = -L - M), and the sextic D_xy built from the 3x3 Gram matrix of the
pair form b_xy.  From these: the hyperdeterminant Delta via the quartic
R(t) (apolar S and catalecticant T, Delta = S^3 - 27 T^2), the same
Delta via the degree-2 invariant I_2 of the sextic covariant L_6000,
the secant invariant Z = D_xy - B^3/27, and the degree-4 binary form
whose discriminant is proportional to Delta.

Site naming follows (x, y, z, t) = sites (1, 2, 3, 4); pair forms retain
the two named sites and take the second-derivative determinant over the
other two.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .catalog import Catalog, build_catalog
from .poly import Polynomial, t as t_var, x as x_var
from .qstate import State, StateError, to_ground_form
from .scalars import normalize_scalar

SITE_OF = {"x": 1, "y": 2, "z": 3, "t": 4}
PAIRS = ("xy", "xz", "xt", "yz", "yt", "zt")

# Row/column index orders of the three quartic determinants, transcribed
# verbatim; rows and columns list (bit_a, bit_b) pairs for the site pairs
# named in _DET_SPLITS.
_DET_SPLITS = {
    "L": ((1, 2), (3, 4), ((0, 0), (1, 0), (0, 1), (1, 1)), ((0, 0), (1, 0), (0, 1), (1, 1))),
    "M": ((1, 3), (2, 4), ((0, 0), (1, 0), (0, 1), (1, 1)), ((0, 0), (0, 1), (1, 0), (1, 1))),
    "N": ((2, 3), (1, 4), ((0, 0), (1, 0), (0, 1), (1, 1)), ((0, 0), (1, 0), (0, 1), (1, 1))),
}


def _det4(m):
    """Exact 4x4 determinant by cofactor expansion."""
    total = 0
    rows = (1, 2, 3)
    for j in range(4):
        a = m[0][j]
        if not a:
            continue
        cols = [c for c in range(4) if c != j]
        sub = 0
        for jj in range(3):
            b = m[1][cols[jj]]
            if not b:
                continue
            c2 = [c for c in cols if c != cols[jj]]
            minor = m[2][c2[0]] * m[3][c2[1]] - m[2][c2[1]] * m[3][c2[0]]
            sub = sub + (b * minor if jj % 2 == 0 else -b * minor)
        total = total + (a * sub if j % 2 == 0 else -a * sub)
    return normalize_scalar(total)


def _flattening(s: State, row_sites, col_sites, row_order, col_order):
    def amp(assign):
        bits = [0, 0, 0, 0]
        for site, bit in assign:
            bits[site - 1] = bit
        return s.amplitude(*bits)

    m = []
    for ra, rb in row_order:
        row = []
        for ca, cb in col_order:
            row.append(
                amp(
                    (
                        (row_sites[0], ra),
                        (row_sites[1], rb),
                        (col_sites[0], ca),
                        (col_sites[1], cb),
                    )
                )
            )
        m.append(row)
    return m


def inv_L(s: State):
    return _det4(_flattening(s, *_DET_SPLITS["L"]))


def inv_M(s: State):
    return _det4(_flattening(s, *_DET_SPLITS["M"]))


def inv_N(s: State):
    return _det4(_flattening(s, *_DET_SPLITS["N"]))


def inv_B(s: State):
    """The quadratic invariant as the signed pairing sum_I (-1)^|I| a_I a_Ibar / 2."""
    total = 0
    for b in range(16):
        a = s.amps[b]
        if a:
            sign = -1 if bin(b).count("1") & 1 else 1
            total = total + sign * a * s.amps[15 - b]
    return normalize_scalar(Fraction(total, 2) if isinstance(total, int) else total / 2)


def inv_B_transvectant(s: State, catalog: Catalog | None = None):
    """B via (1/2)(A,A)^{1111}; equals inv_B (pinned by tests)."""
    catalog = catalog or build_catalog()
    p = catalog.eval_covariant("B_0000", s)
    return p.terms.get(0, 0)


def b_form(s: State, pair: str) -> Polynomial:
    """Pair form b_uv: second-derivative determinant over the complement sites,
    a bidegree-(2,2) polynomial in the two retained sites."""
    if pair not in PAIRS:
        raise ValueError(f"pair must be one of {PAIRS}, got {pair!r}")
    keep = [SITE_OF[ch] for ch in pair]
    other = [k for k in (1, 2, 3, 4) if k not in keep]
    f = to_ground_form(s)
    d = [
        [f.diff(x_var(other[0], i)).diff(x_var(other[1], j)) for j in (0, 1)]
        for i in (0, 1)
    ]
    return d[0][0] * d[1][1] - d[0][1] * d[1][0]


def pair_gram_matrix(s: State, pair: str):
    """The 3x3 matrix of b_uv in the bases [u0^2, u0 u1, u1^2] x [v0^2, v0 v1, v1^2]."""
    b = b_form(s, pair)
    u, v = (SITE_OF[ch] for ch in pair)
    m = []
    for p in range(3):
        row = []
        for q in range(3):
            row.append(
                b.coefficient(
                    {
                        x_var(u, 0): 2 - p,
                        x_var(u, 1): p,
                        x_var(v, 0): 2 - q,
                        x_var(v, 1): q,
                    }
                )
            )
        m.append(row)
    return m


def inv_D(s: State, pair: str = "xy"):
    """The degree-6 invariant D_uv = det of the 3x3 Gram matrix of b_uv."""
    m = pair_gram_matrix(s, pair)
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    return normalize_scalar(det)


def quartic_coeffs(s: State):
    """Binomial coefficients (c0..c4) of R(t) = det Hess_x(b_xt), so that
    R = sum comb(4,i) c_i t0^(4-i) t1^i in the site-4 variables."""
    b = b_form(s, "xt")
    d = [
        [b.diff(x_var(1, i)).diff(x_var(1, j)) for j in (0, 1)]
        for i in (0, 1)
    ]
    r = d[0][0] * d[1][1] - d[0][1] * d[1][0]
    cs = []
    for i in range(5):
        raw = r.coefficient({x_var(4, 0): 4 - i, x_var(4, 1): i})
        cs.append(normalize_scalar(Fraction(raw, comb(4, i)) if isinstance(raw, int) else raw / comb(4, i)))
    return tuple(cs)


def quartic_S_T(cs):
    c0, c1, c2, c3, c4 = cs
    S = c0 * c4 - 4 * c1 * c3 + 3 * c2 * c2
    T = c0 * c2 * c4 - c0 * c3 * c3 + 2 * c1 * c2 * c3 - c1 * c1 * c4 - c2 ** 3
    return normalize_scalar(S), normalize_scalar(T)


def quartic_delta(cs):
    """S^3 - 27 T^2 of a binary quartic given by its binomial coefficients."""
    S, T = quartic_S_T(cs)
    return normalize_scalar(S ** 3 - 27 * T * T)


def hyperdet_delta(s: State):
    """The hyperdeterminant Delta = S^3 - 27 T^2 of the quartic R(t)."""
    return quartic_delta(quartic_coeffs(s))


def sextic_coeffs(s: State, catalog: Catalog | None = None):
    """Binomial coefficients (d0..d6) of the evaluated sextic L_6000."""
    catalog = catalog or build_catalog()
    p = catalog.eval_covariant("L_6000", s)
    ds = []
    for i in range(7):
        raw = p.coefficient({x_var(1, 0): 6 - i, x_var(1, 1): i})
        ds.append(normalize_scalar(Fraction(raw, comb(6, i)) if isinstance(raw, int) else raw / comb(6, i)))
    return tuple(ds)


def inv_I2(s: State, catalog: Catalog | None = None):
    """Degree-2 invariant of the sextic: d0 d6 - 6 d1 d5 + 15 d2 d4 - 10 d3^2.

    The source prints the last two terms as "15 d3 d4 - 10 d^2", which is
    dimensionally inconsistent; this corrected form is validated by the
    exact proportionality to the hyperdeterminant.
    """
    d0, d1, d2, d3, d4, d5, d6 = sextic_coeffs(s, catalog)
    return normalize_scalar(d0 * d6 - 6 * d1 * d5 + 15 * d2 * d4 - 10 * d3 * d3)


DELTA_I2_FACTOR = Fraction(3, 2 ** 19 * 5 ** 2)


def delta_via_sextic(s: State, catalog: Catalog | None = None):
    """Delta from the sextic route; equals hyperdet_delta exactly."""
    return normalize_scalar(DELTA_I2_FACTOR * inv_I2(s, catalog))


def inv_Z(s: State):
    """Z = D_xy - B^3/27, the extra invariant of the extended secant atlas."""
    B = inv_B(s)
    return normalize_scalar(inv_D(s, "xy") - Fraction(1, 27) * B ** 3)


def all_invariants(s: State, catalog: Catalog | None = None, pairs: bool = False) -> dict:
    """Every scalar invariant in one dict (CLI surface)."""
    B = inv_B(s)
    L = inv_L(s)
    M = inv_M(s)
    Dxy = inv_D(s, "xy")
    cs = quartic_coeffs(s)
    S, T = quartic_S_T(cs)
    out = {
        "B": B,
        "L": L,
        "M": M,
        "N": inv_N(s),
        "Dxy": Dxy,
        "S": S,
        "T": T,
        "Delta": normalize_scalar(S ** 3 - 27 * T * T),
        "Z": normalize_scalar(Dxy - Fraction(1, 27) * B ** 3),
        "I2": inv_I2(s, catalog),
    }
    if pairs:
        for pair in PAIRS[1:]:
            out["D" + pair] = inv_D(s, pair)
    return out


def verstraete_quartic(s: State) -> Polynomial:
    """The degree-4 binary form in (t0, t1) assembled from B, L, M, D_xy.

    Its discriminant (S^3 - 27 T^2 of its binomial coefficients) equals
    hyperdet_delta exactly, and on the four-parameter diagonal family its
    roots are the squared parameters.  The cubic coefficient carries +D_xy;
    the printed source has -D_xy there, which breaks both properties.
    """
    B = inv_B(s)
    L = inv_L(s)
    M = inv_M(s)
    Dxy = inv_D(s, "xy")
    t0, t1 = Polynomial.variable(t_var(0)), Polynomial.variable(t_var(1))
    return (
        t0 ** 4
        - (2 * B) * t0 ** 3 * t1
        + (B * B + 2 * L + 4 * M) * t0 ** 2 * t1 ** 2
        - (4 * (B * (M + Fraction(1, 2) * L) + Dxy)) * t0 * t1 ** 3
        + (L * L) * t1 ** 4
    )


def verstraete_quartic_coeffs(s: State):
    """Binomial coefficients (c0..c4) of the assembled quartic."""
    q = verstraete_quartic(s)
    cs = []
    for i in range(5):
        raw = q.coefficient({t_var(0): 4 - i, t_var(1): i})
        cs.append(normalize_scalar(Fraction(raw, comb(4, i)) if isinstance(raw, int) else raw / comb(4, i)))
    return tuple(cs)


def is_nilpotent(s: State) -> bool:
    """All four invariant generators vanish (nullcone membership)."""
    if s.is_zero():
        raise StateError("the zero state is rejected by classifiers")
    return not (inv_B(s) or inv_L(s) or inv_M(s) or inv_D(s, "xy"))


def in_third_secant(s: State) -> bool:
    """L = M = 0 (third secant variety membership)."""
    if s.is_zero():
        raise StateError("the zero state is rejected by classifiers")
    return not (inv_L(s) or inv_M(s))

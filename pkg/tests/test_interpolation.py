from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from asai.archimedean import C_kj
from asai.interpolation import HODGE, InterpPoint, cpr_factors, euler_factor_Ep, predicted_rhs, ratio_table
from asai.numfield import DirichletChar, embed_complex, gauss_sum
from asai.padic import PadicScalar

P, M = 5, 12
TRIV = DirichletChar.trivial(1)
CHI5_ODD = DirichletChar(5, 4, {2: 1})
CHI5_EVEN = DirichletChar(5, 2, {2: 1})
CHI25 = DirichletChar(25, 20, {2: 1})


def test_exceptional_zero():
    assert euler_factor_Ep(InterpPoint(P, 0, TRIV, PadicScalar(P, M, 1))) == PadicScalar(P, M, 0)


def test_conductor_p_squared():
    lam = PadicScalar(P, M, 7)
    assert euler_factor_Ep(InterpPoint(P, 1, CHI25, lam)) == (lam.inverse() * P) ** 2


@pytest.mark.parametrize("lam", [2, 3, 7, 1 + 5 ** 3])
def test_unramified_top_weight_nonzero(lam):
    k = 3
    e = euler_factor_Ep(InterpPoint(P, k, TRIV, PadicScalar(P, M, lam)))
    assert e != PadicScalar(P, M, 0)
    assert e.is_unit()


@given(st.integers(1, 10**6).filter(lambda x: x % P), st.integers(0, 3),
       st.sampled_from([CHI5_ODD, CHI5_EVEN, CHI25]))
def test_ramified_factor_has_exact_valuation(lam, j, chi):
    pt = InterpPoint(P, j, chi, PadicScalar(P, M, lam))
    e = euler_factor_Ep(pt)
    assert e.valuation() == j * pt.r
    assert e == (PadicScalar(P, M, lam).inverse() * P ** j) ** pt.r


def test_exact_rational_variant():
    assert euler_factor_Ep(InterpPoint(P, 1, TRIV, Fraction(3))) == Fraction(-2, 3)
    assert euler_factor_Ep(InterpPoint(P, 2, CHI5_ODD, Fraction(3))) == Fraction(25, 3)


def test_point_preconditions():
    with pytest.raises(ValueError):
        InterpPoint(P, 0, DirichletChar(3, 2, {2: 1}), PadicScalar(P, M, 2))
    with pytest.raises(ValueError):
        InterpPoint(P, 0, TRIV, PadicScalar(P, M, 10))


def test_parity_flag():
    assert InterpPoint(P, 0, CHI5_ODD, Fraction(3)).parity == -1
    assert InterpPoint(P, 1, CHI5_ODD, Fraction(3)).parity == 1
    assert InterpPoint(P, 1, TRIV, Fraction(3)).parity == -1


def test_cpr_trivial_j0():
    alpha = Fraction(7, 2)
    out = cpr_factors(InterpPoint(P, 0, TRIV, alpha, alpha))
    with mpmath.workprec(128):
        assert abs(out["L_inf"] - 1 / (mpmath.pi * mpmath.mpc(0, 1))) < mpmath.mpf(10) ** -35
    assert out["L_p"] == (1 - 1 / alpha) / (1 - alpha / P)
    assert out["gauss"] is None
    assert (out["d_plus"], out["d_minus"]) == (1, 3) == (HODGE["d_plus"], HODGE["d_minus"])


def test_cpr_conductor_p():
    alpha = Fraction(3)
    out = cpr_factors(InterpPoint(P, 0, CHI5_ODD, alpha, alpha))
    assert out["L_p"] == Fraction(1, 3)
    assert out["gauss"] == gauss_sum(CHI5_ODD)


def test_cpr_needs_alpha():
    with pytest.raises(ValueError):
        cpr_factors(InterpPoint(P, 0, TRIV, Fraction(3)))


def test_predicted_rhs_odd_parity_is_zero():
    lam = PadicScalar(P, M, 7)
    for j in range(4):
        for chi in (TRIV, CHI5_ODD, CHI5_EVEN, CHI25):
            rec = predicted_rhs(InterpPoint(P, j, chi, lam), 3, 4)
            if chi.parity() * (-1) ** j == -1:
                assert rec["zero"] and rec["value"] == 0
            else:
                assert not rec["zero"] and "value" not in rec


def test_predicted_rhs_base_record():
    lam = PadicScalar(P, M, 7)
    rec = predicted_rhs(InterpPoint(P, 0, TRIV, lam), 0, 4)
    with mpmath.workprec(128):
        expect_C = -mpmath.mpc(0, 2) / (4 * mpmath.pi * mpmath.mpc(0, 1))
        assert abs(rec["C"] - expect_C) < mpmath.mpf(10) ** -35
        assert abs(embed_complex(rec["G"], 64) - 1) < 1e-15
    assert rec["E_p"] == PadicScalar(P, M, 1) - lam.inverse()
    assert rec["Omega"] == "Omega_Psi" and rec["L"].startswith("L^As")


def test_predicted_rhs_uses_closed_form_constant():
    rec = predicted_rhs(InterpPoint(P, 2, TRIV, PadicScalar(P, M, 2)), 4, 7)
    assert rec["C"] == C_kj(4, 2, 7)


def test_ratio_table_runs():
    rows = ratio_table(2, 4, P, 3, [TRIV, CHI5_ODD, CHI5_EVEN], precision=64)
    assert rows and all(r["ratio"] != 0 for r in rows)
    assert {r["chi_conductor"] for r in rows} == {1, 5}

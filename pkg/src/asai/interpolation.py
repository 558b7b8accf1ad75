"""Interpolation factors: E_p, the Coates--Perrin-Riou factors and the predicted right-hand side."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import mpmath

from .archimedean import C_kj
from .numfield import DirichletChar, gauss_sum, embed_complex
from .padic import PadicScalar

__all__ = ["InterpPoint", "euler_factor_Ep", "cpr_factors", "predicted_rhs", "ratio_table", "HODGE"]

# Hodge numbers of the Asai motive
HODGE = {"d_plus": 1, "d_minus": 3}


@dataclass
class InterpPoint:
    p: int
    j: int
    chi: DirichletChar
    lambda_p: object                 # PadicScalar, or an exact rational for the CPR comparison
    alpha: object = None

    def __post_init__(self):
        m, r = self.chi.conductor(), 0
        while m % self.p == 0:
            m //= self.p
            r += 1
        if m != 1:
            raise ValueError("chi must have p-power conductor")
        self.r = r
        if isinstance(self.lambda_p, PadicScalar) and not self.lambda_p.is_unit():
            raise ValueError("lambda_p must be a unit")

    @property
    def parity(self) -> int:
        return self.chi.parity() * (-1) ** self.j


def _as_exact(x):
    if isinstance(x, PadicScalar):
        return x
    return Fraction(x)


def euler_factor_Ep(pt: InterpPoint):
    """1 - p^j/lambda_p if r = 0, else (p^j/lambda_p)^r."""
    lam = _as_exact(pt.lambda_p)
    pj = pt.p ** pt.j
    if isinstance(lam, PadicScalar):
        q = lam.inverse() * pj
        return (PadicScalar(lam.p, lam.M, 1) - q) if pt.r == 0 else q ** pt.r
    q = Fraction(pj) / lam
    return 1 - q if pt.r == 0 else q ** pt.r


def cpr_factors(pt: InterpPoint, precision: int = 128) -> dict:
    """Archimedean and p-adic Coates--Perrin-Riou factors (square root of -1 taken as +i)."""
    if pt.alpha is None:
        raise ValueError("alpha required")
    alpha = Fraction(pt.alpha)
    p, j = pt.p, pt.j
    with mpmath.workprec(precision):
        L_inf = 2 * mpmath.power(2 * mpmath.pi * mpmath.mpc(0, 1), -1 - j) * factorial(j)
    if pt.r == 0:
        L_p = (1 - Fraction(p ** j) / alpha) / (1 - alpha / p ** (1 + j))
        G = None
    else:
        G = gauss_sum(pt.chi.primitive())
        L_p = (Fraction(p ** j) / alpha) ** pt.r
    return {"L_inf": L_inf, "L_p": L_p, "gauss": G, **HODGE}


def predicted_rhs(pt: InterpPoint, k: int, D: int, precision: int = 128) -> dict:
    """Structured record for C(k,j) E_p G(chi)/Omega * L^As(chibar, j+1); exact zero on the odd side."""
    rec = {"k": k, "j": pt.j, "r": pt.r, "parity": pt.parity}
    if pt.parity == -1:
        rec.update(value=0, zero=True)
        return rec
    G = gauss_sum(pt.chi.primitive())
    rec.update(
        zero=False,
        C=C_kj(k, pt.j, D, precision),
        E_p=euler_factor_Ep(pt),
        G=G,
        Omega="Omega_Psi",
        L=f"L^As(Psi, chibar, {pt.j + 1})",
    )
    return rec


def ratio_table(k: int, D: int, p: int, alpha, chis, precision: int = 64) -> list:
    """C(k,j) E_p G(chi) divided by L_inf L_p, with lambda_p = alpha, over j and chi (report only)."""
    rows = []
    for chi in chis:
        for j in range(k + 1):
            pt = InterpPoint(p, j, chi, Fraction(alpha), Fraction(alpha))
            if pt.parity == -1:
                continue
            rec = predicted_rhs(pt, k, D, precision)
            cpr = cpr_factors(pt, precision)
            with mpmath.workprec(precision):
                lhs = rec["C"] * mpmath.mpf(rec["E_p"].numerator) / rec["E_p"].denominator * embed_complex(rec["G"], precision)
                rhs = cpr["L_inf"] * mpmath.mpf(cpr["L_p"].numerator) / cpr["L_p"].denominator
                if cpr["gauss"] is not None:
                    rhs *= embed_complex(cpr["gauss"], precision)
                rows.append({"j": j, "chi_conductor": chi.conductor(), "ratio": lhs / rhs})
    return rows

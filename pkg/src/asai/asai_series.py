"""
Imprimitive and primitive Asai L-functions of Bianchi eigen-data.

The imprimitive L-function is the Dirichlet series

    L^{(mN)}(chi^2 eps, 2s - 2k - 2) * sum_{(n, m) = 1} c(n O_F) chi(n) n^{-s},

where m is the modulus of chi and eps = eps_{Psi,Q}.  Its Euler factors are
recovered exactly by rational reconstruction from the series; primitive
factors at good primes come from tensor induction of the Satake data.

All Euler factors are written as polynomials P(X) with X = ell^{-s} and
P(0) = 1, the local L-factor being 1/P(X).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, log, exp, sqrt, inf

import mpmath

from .numfield import CycNumber, DirichletChar, ImagQuadField, embed_complex, primes_upto, kronecker, split_prime
from .hecke import BianchiEigenData, EllipticEigenData, base_change, value_to_json, InsufficientData
from .padic import PadicScalar
from ._series import trim, pmul, pdivmod, series_inv, series_mul, find_rational_form, is_zero, pdeg

__all__ = [
    "LocalFactor", "AsaiSeries", "AsaiValue", "asai_coefficients", "primitive_local_factor",
    "imprimitive_local_factor", "local_error_term", "asai_value", "asai_euler_value",
    "sym2_local_factor", "twist_local_factor", "factorization_check", "euler_product_coefficients",
    "ReconstructionFailed", "InconsistentLocalData",
]

RECON_TERMS = 15
RECON_MAX_ORDER = 6


class ReconstructionFailed(ValueError):
    pass


class InconsistentLocalData(ValueError):
    pass


@dataclass(frozen=True)
class LocalFactor:
    ell: int
    poly: tuple
    role: str

    def __post_init__(self):
        if not self.poly or self.poly[0] != 1:
            raise ValueError("local factor must have constant term 1")

    @property
    def degree(self):
        return len(self.poly) - 1

    def to_json(self):
        return {"ell": self.ell, "role": self.role, "coeffs": [value_to_json(_as_exact(c)) for c in self.poly]}

    def __eq__(self, other):
        if isinstance(other, LocalFactor):
            other = other.poly
        return _poly_eq(self.poly, other)

    def __hash__(self):
        return hash((self.ell, len(self.poly)))

    def __repr__(self):
        return f"LocalFactor({self.ell}, {self.role}, {list(self.poly)})"


def _as_exact(c):
    if isinstance(c, (int, Fraction)):
        return CycNumber.from_rational(c)
    return c


def _poly_eq(a, b):
    a, b = trim(list(a)), trim(list(b))
    return len(a) == len(b) and all(x == y for x, y in zip(a, b))


def _one():
    return CycNumber.from_rational(1)


# ---------------------------------------------------------------------------
# Dirichlet coefficients

@dataclass(frozen=True)
class AsaiSeries:
    psi: BianchiEigenData
    chi: DirichletChar
    coeffs: tuple          # coeffs[n-1] is the coefficient of n^{-s}

    def __getitem__(self, n):
        return self.coeffs[n - 1]

    def __len__(self):
        return len(self.coeffs)


def _spf_table(n):
    spf = list(range(n + 1))
    for i in range(2, int(n ** 0.5) + 1):
        if spf[i] == i:
            for j in range(i * i, n + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def _twisted_eigen_table(psi, chi, n_max):
    """A(n) = c(n O_F) chi(n) for (n, m) = 1, else 0, for 1 <= n <= n_max."""
    m = chi.modulus
    spf = _spf_table(max(n_max, 1))
    A = [None] * (n_max + 1)
    A[1] = _one()
    cache = {}
    for n in range(2, n_max + 1):
        if gcd(n, m) != 1:
            A[n] = 0
            continue
        ell = spf[n]
        q, r = n, 0
        while q % ell == 0:
            q //= ell
            r += 1
        key = (ell, r)
        if key not in cache:
            cache[key] = psi.rational_power(ell, r) * (chi(ell) ** r)
        A[n] = cache[key] * A[q] if q > 1 else cache[key]
    return A


def asai_coefficients(psi: BianchiEigenData, chi: DirichletChar, n_max: int) -> AsaiSeries:
    """Exact coefficients 1..n_max of the imprimitive Asai series twisted by chi."""
    A = _twisted_eigen_table(psi, chi, n_max)
    m, N, k = chi.modulus, psi.level_norm, psi.k
    coeffs = [A[n] for n in range(1, n_max + 1)]
    d = 2
    while d * d <= n_max:
        if gcd(d, m * N) == 1:
            w = chi(d) ** 2 * psi.neben_Q(d) * (d ** (2 * k + 2))
            for q in range(1, n_max // (d * d) + 1):
                a = A[q]
                if not is_zero(a):
                    coeffs[d * d * q - 1] = coeffs[d * d * q - 1] + w * a
        d += 1
    return AsaiSeries(psi, chi, tuple(coeffs))


# ---------------------------------------------------------------------------
# local factors

def _chi_poly(coeffs, chi_l):
    """Substitute X -> chi(ell) X."""
    out, pw = [], _one()
    for c in coeffs:
        out.append(c * pw)
        pw = pw * chi_l
    return out


def _normalise(poly):
    p = trim(poly)
    return tuple(_as_exact(c) for c in p) if p else (_one(),)


def primitive_local_factor(psi: BianchiEigenData, ell: int, chi: DirichletChar) -> LocalFactor:
    """Euler factor of the primitive Asai L-function at ell, from tensor induction."""
    chi_l = chi(ell)
    if is_zero(chi_l):
        return LocalFactor(ell, (_one(),), "primitive")
    loc = psi.local_data(ell)
    if loc.primitive_factor is not None:
        return LocalFactor(ell, _normalise(_chi_poly(list(loc.primitive_factor), chi_l)), "primitive")
    if loc.kind == "ramified":
        raise ValueError("use imprimitive reconstruction")
    if not psi.is_good(ell):
        raise ValueError(f"no primitive local data at bad prime {ell}")
    k = psi.k
    if loc.kind == "split":
        A, B = loc.ideals
        t1, t2 = A.c, B.c
        e1, e2 = A.eps * ell ** (k + 1), B.eps * ell ** (k + 1)
        poly = [
            _one(),
            -(t1 * t2),
            t1 * t1 * e2 + t2 * t2 * e1 - 2 * e1 * e2,
            -(t1 * t2 * e1 * e2),
            e1 * e1 * e2 * e2,
        ]
    else:
        (I,) = loc.ideals
        e = I.eps * ell ** (2 * k + 2)
        poly = pmul([_one(), -I.c, e], [_one(), 0, -e])
    return LocalFactor(ell, _normalise(_chi_poly(poly, chi_l)), "primitive")


def _local_imprimitive_series(psi, ell, chi, terms=RECON_TERMS):
    """The ell-part of the imprimitive series as a power series in X = ell^{-s}."""
    chi_l = chi(ell)
    if is_zero(chi_l):
        return [_one()] + [0] * (terms - 1)
    eig = [psi.rational_power(ell, r) * chi_l ** r for r in range(terms)]
    if gcd(ell, chi.modulus * psi.level_norm) != 1:
        return eig
    w = chi_l ** 2 * psi.neben_Q(ell) * ell ** (2 * psi.k + 2)
    dser = [0] * terms
    pw = _one()
    for r in range(0, terms, 2):
        dser[r] = pw
        pw = pw * w
    return series_mul(eig, dser, terms)


def imprimitive_local_factor(psi: BianchiEigenData, ell: int, chi: DirichletChar) -> LocalFactor:
    """Recover the imprimitive Euler factor at ell by minimal linear-recurrence detection."""
    seq = _local_imprimitive_series(psi, ell, chi)
    found = find_rational_form(seq, RECON_MAX_ORDER)
    if found is None:
        raise ReconstructionFailed(f"reconstruction failed at {ell}: no recurrence of order <= {RECON_MAX_ORDER}")
    Q, num = found
    if len(num) != 1 or num[0] != 1:
        raise ReconstructionFailed(f"reconstruction failed at {ell}: numerator is not 1")
    return LocalFactor(ell, _normalise(Q), "imprimitive")


def local_error_term(psi: BianchiEigenData, ell: int, chi: DirichletChar) -> LocalFactor:
    """C_ell = P_prim / P_imprim, which must be an exact polynomial of degree <= 4."""
    prim = primitive_local_factor(psi, ell, chi)
    imp = imprimitive_local_factor(psi, ell, chi)
    q, r = pdivmod(list(prim.poly), list(imp.poly))
    if r or pdeg(q) > 4:
        raise InconsistentLocalData(f"inconsistent local data at {ell}")
    return LocalFactor(ell, _normalise(q), "error")


def euler_product_coefficients(psi, chi, n_max, factors=None):
    """Dirichlet coefficients 1..n_max of prod_ell 1/P_ell(ell^{-s}) over ell <= n_max."""
    coeffs = [0] * (n_max + 1)
    coeffs[1] = _one()
    for ell in primes_upto(n_max):
        P = factors[ell] if factors is not None else imprimitive_local_factor(psi, ell, chi)
        P = list(P.poly) if isinstance(P, LocalFactor) else list(P)
        r_max = 0
        while ell ** (r_max + 1) <= n_max:
            r_max += 1
        inv = series_inv(P, r_max + 1)
        new = list(coeffs)
        for n in range(1, n_max + 1):
            if is_zero(coeffs[n]) or n % ell == 0:
                continue
            pw = ell
            for r in range(1, r_max + 1):
                if n * pw > n_max:
                    break
                if not is_zero(inv[r]):
                    new[n * pw] = new[n * pw] + coeffs[n] * inv[r]
                pw *= ell
        coeffs = new
    return coeffs[1:]


# ---------------------------------------------------------------------------
# base-change factorisation

def sym2_local_factor(f: EllipticEigenData, ell: int, chi: DirichletChar) -> LocalFactor:
    """(1 - alpha^2 Y)(1 - alpha beta Y)(1 - beta^2 Y) with Y = chi(ell) X."""
    a = f.a(ell)
    p = f.neben(ell) * ell ** (f.k + 1)
    e1 = a * a - p
    e2 = p * (a * a - 2 * p) + p * p
    e3 = p * p * p
    poly = [_one(), -e1, e2, -e3]
    return LocalFactor(ell, _normalise(_chi_poly(poly, chi(ell))), "sym2")


def twist_local_factor(f: EllipticEigenData, F: ImagQuadField, ell: int, chi: DirichletChar) -> LocalFactor:
    """1 - chi(ell) eps_f(ell) eps_F(ell) ell^{k+1} X."""
    c = chi(ell) * f.neben(ell) * kronecker(-F.D, ell) * ell ** (f.k + 1)
    return LocalFactor(ell, _normalise([_one(), -c]), "dirichlet")


def factorization_check(f: EllipticEigenData, F: ImagQuadField, ell_range, chi: DirichletChar) -> dict:
    """Compare the primitive Asai factor of BC(f) with Sym^2 times the twist factor at good primes."""
    ells = [l for l in ell_range if l >= 2 and all(l % d for d in range(2, int(l ** 0.5) + 1))]
    good = [l for l in ells if f.level % l and F.D % l and chi.modulus % l]
    psi = base_change(f, F, primes=good)
    rows, ok_all = [], True
    for ell in good:
        lhs = primitive_local_factor(psi, ell, chi)
        rhs_poly = pmul(list(sym2_local_factor(f, ell, chi).poly), list(twist_local_factor(f, F, ell, chi).poly))
        ok = _poly_eq(lhs.poly, rhs_poly)
        ok_all &= ok
        row = {"ell": ell, "kind": split_prime(F, ell).kind, "ok": ok}
        if not ok:
            row["lhs"] = [value_to_json(_as_exact(c)) for c in lhs.poly]
            row["rhs"] = [value_to_json(_as_exact(c)) for c in trim(rhs_poly)]
        rows.append(row)
    return {"passed": ok_all, "checked": len(rows), "rows": rows}


# ---------------------------------------------------------------------------
# numerical values

@dataclass(frozen=True)
class AsaiValue:
    s: object
    value: object
    tail_bound: float
    terms: int

    def to_json(self):
        return {"s": [str(mpmath.re(self.s)), str(mpmath.im(self.s))],
                "value_re": mpmath.nstr(self.value.real, 30), "value_im": mpmath.nstr(self.value.imag, 30),
                "tail_bound": repr(self.tail_bound), "terms": self.terms}


def _root_modulus(c, e, prec=64):
    """Upper bound for the largest root modulus of X^2 - cX + e."""
    with mpmath.workprec(prec):
        cc = embed_complex(_as_exact(c), max(prec, 64))
        ee = embed_complex(_as_exact(e), max(prec, 64))
        d = mpmath.sqrt(cc * cc - 4 * ee)
        r = max(abs((cc + d) / 2), abs((cc - d) / 2))
        return float(r) * (1 + 1e-12) + 1e-300


def _local_majorant_log(psi, ell, chi, sigma):
    """log of a coefficientwise majorant of the ell-Euler factor at real sigma, or inf."""
    if is_zero(chi(ell)):
        return 0.0
    k = psi.k
    X = ell ** (-sigma)
    try:
        loc = psi.local_data(ell)
    except InsufficientData:
        loc = None
    if loc is None:
        gam = 1 + sqrt(1 + 1 / ell)
        a = gam * gam * ell ** (k + 2) * X
        if a >= 1:
            return inf
        val = -4 * log1p_neg(a)
    else:
        if not psi.recursion_consistent(ell) or any(isinstance(i.c, PadicScalar) for i in loc.ideals):
            return inf
        Rs = [_root_modulus(i.c, i.eps * i.ideal.norm ** (k + 1)) for i in loc.ideals]
        if loc.kind == "split":
            a, mult = Rs[0] * Rs[1] * X, 4
        elif loc.kind == "inert":
            a, mult = Rs[0] * X, 2
        else:
            a, mult = Rs[0] ** 2 * X, 3
        if a >= 1:
            return inf
        val = -mult * log1p_neg(a)
    if gcd(ell, chi.modulus * psi.level_norm) == 1:
        b = ell ** (2 * k + 2) * X * X
        if b >= 1:
            return inf
        val += -log1p_neg(b)
    return val


def log1p_neg(a):
    from math import log1p
    return log1p(-a)


def _beyond_log_bound(k, sigma, L):
    """Bound for sum over primes ell > L of the log-majorant, using the generic coefficient bound."""
    gam = 1 + sqrt(1 + 1 / L)
    if sigma <= k + 3:
        return inf
    if gam * gam * L ** (k + 2 - sigma) > 0.5 or L ** (2 * k + 2 - 2 * sigma) > 0.5:
        return inf
    return (8 * gam * gam * L ** (k + 3 - sigma) / (sigma - k - 3)
            + 2 * L ** (2 * k + 3 - 2 * sigma) / (2 * sigma - 2 * k - 3))


def _data_bound(psi):
    return max(psi.local) if psi.local else 2


def _majorant_log(psi, chi, sigma, L):
    tot = 0.0
    for ell in primes_upto(L):
        tot += _local_majorant_log(psi, ell, chi, sigma)
        if tot == inf:
            return inf
    return tot + _beyond_log_bound(psi.k, sigma, L)


def _to_mpc(x, prec):
    if isinstance(x, (int, Fraction)):
        return mpmath.mpc(mpmath.mpf(Fraction(x).numerator) / Fraction(x).denominator)
    return embed_complex(x, prec)


def asai_value(psi: BianchiEigenData, chi: DirichletChar, s, n_max: int = 1000, precision: int = 128) -> AsaiValue:
    """Partial sum of the imprimitive Asai series with a certified tail bound (Rankin's trick)."""
    s = mpmath.mpc(s)
    sigma = float(s.real)
    if sigma <= psi.k + 3:
        raise ValueError("outside convergence region")
    series = asai_coefficients(psi, chi, n_max)
    with mpmath.workprec(precision + 20):
        acc = mpmath.mpc(0)
        for n, c in enumerate(series.coeffs, start=1):
            if not is_zero(c):
                acc += _to_mpc(c, precision) * mpmath.power(n, -s)
    L = max(min(_data_bound(psi), 20000), 3)
    best = inf
    lo = psi.k + 3
    for t in (0.15, 0.3, 0.45, 0.6, 0.75, 0.9):
        sp = lo + t * (sigma - lo)
        lg = _majorant_log(psi, chi, sp, L)
        if lg < inf:
            cand = exp(lg + (sp - sigma) * log(n_max))
            best = min(best, cand)
    with mpmath.workprec(precision + 20):
        return AsaiValue(s, +acc, best, n_max)


def asai_euler_value(psi: BianchiEigenData, chi: DirichletChar, s, ell_max: int = 1000,
                     precision: int = 128, factors=None) -> AsaiValue:
    """Euler product over ell <= ell_max of imprimitive factors, with a certified tail bound."""
    s = mpmath.mpc(s)
    sigma = float(s.real)
    if sigma <= psi.k + 3:
        raise ValueError("outside convergence region")
    with mpmath.workprec(precision + 20):
        prod = mpmath.mpc(1)
        for ell in primes_upto(ell_max):
            P = factors[ell] if factors is not None and ell in factors else imprimitive_local_factor(psi, ell, chi)
            X = mpmath.power(ell, -s)
            val = mpmath.mpc(0)
            for c in reversed(P.poly):
                val = val * X + _to_mpc(c, precision)
            prod /= val
    B = _beyond_log_bound(psi.k, sigma, ell_max)
    bound = float(abs(prod)) * (exp(B) - 1) if B < inf else inf
    with mpmath.workprec(precision + 20):
        return AsaiValue(s, +prod, bound, ell_max)

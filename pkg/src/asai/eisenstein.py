"""
Real-analytic Eisenstein series with certified truncation.

For k >= 1, beta in Q/Z, tau = x + iy in the upper half-plane,

    E^(k)_beta(tau, s) = Gamma(s+k) / ((-2 pi i)^k pi^s)
                         * sum'_{m,n} y^s / ((m tau + n + beta)^k |m tau + n + beta|^{2s}),

the sum omitting (0,0) only when beta = 0.  It converges for Re(2s + k) > 2.

Analytic continuation uses the theta-splitting of the Mellin integral at
t0 = pi / y.  With w = m tau + n + beta and xi = a + i(b - a x)/y,

    E = y^s / ((-2 pi i)^k pi^s) * [ S_up + S_dual ],
    S_up   = sum'_w  conj(w)^k |w|^{-2(s+k)} Gamma(s+k, t0 |w|^2),
    S_dual = (-i)^k pi^{1+k} / y * sum_{(a,b) != 0} conj(xi)^k e^{2 pi i a beta}
             (pi^2 |xi|^2)^{s-1} Gamma(1-s, pi^2 |xi|^2 / t0).

Both halves decay like Gaussians in the shell index, so they are summed to
a shell radius where a proved bound on the remainder falls below
2^-precision.

The holomorphic series F^(k)_beta has the q-expansion

    F = (k-1)! (1 + (-1)^k) zeta(k) / (-2 pi i)^k
        + sum_{n>=1} q^n sum_{d|n} d^{k-1} (z^{n/d} + (-1)^k z^{-n/d}),   z = e^{2 pi i beta},

obtained from (k-1)!/(-2 pi i)^k sum' e^{2 pi i beta m} (m tau + n)^{-k} by
Lipschitz summation over n.  It coincides with E^(k)_beta(tau, 1-k).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath

__all__ = [
    "EisParams", "EisensteinEvaluation", "lattice_sum_E", "lattice_sum_E_shells", "continue_E",
    "holomorphic_F", "holomorphic_F_qexp", "c_smoothed_eis", "smoothing_combination",
    "apply_smoothing", "evaluate_combination", "continue_E_derivative", "lattice_constant",
]

DEFAULT_PRECISION = 192


@dataclass(frozen=True)
class EisParams:
    k: int
    beta: Fraction
    tau: complex
    s: complex = 0

    def __post_init__(self):
        object.__setattr__(self, "beta", Fraction(self.beta) % 1)
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if mpmath.im(mpmath.mpc(self.tau)) <= 0:
            raise ValueError("tau must lie in the upper half-plane")


@dataclass(frozen=True)
class EisensteinEvaluation:
    value: object
    truncation_bound: object
    method: str
    flags: tuple = ()

    def to_json(self):
        return {
            "value_re": mpmath.nstr(self.value.real, 40),
            "value_im": mpmath.nstr(self.value.imag, 40),
            "bound": mpmath.nstr(self.truncation_bound, 6),
            "method": self.method,
            "flags": list(self.flags),
        }


def _centered(beta: Fraction) -> Fraction:
    b = Fraction(beta) % 1
    return b - 1 if b > Fraction(1, 2) else b


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def lattice_constant(tau):
    """kappa = min |u tau + v| over the boundary of the square max(|u|,|v|) = 1."""
    x, y = mpmath.re(tau), mpmath.im(tau)
    # edges u = +-1
    e1 = y if abs(x) <= 1 else mpmath.sqrt((abs(x) - 1) ** 2 + y * y)
    # edges v = +-1: |u tau +- 1|^2 = |tau|^2 u^2 +- 2 x u + 1
    t2 = x * x + y * y
    ustar = abs(x) / t2
    if ustar <= 1:
        e2 = mpmath.sqrt(1 - x * x / t2)
    else:
        e2 = mpmath.sqrt(t2 - 2 * abs(x) + 1)
    return min(e1, e2) * (1 - mpmath.mpf(2) ** -60)


def _prefactor(k, s):
    return mpmath.gamma(s + k) / ((-2j * mpmath.pi) ** k * mpmath.power(mpmath.pi, s))


def _lattice_terms(k, beta, tau, s, cutoff, order):
    bq = _mpf(_centered(beta))
    y = mpmath.im(tau)
    ys = mpmath.power(y, s)
    acc = mpmath.mpc(0)
    absacc = mpmath.mpf(0)
    for m, n in order(cutoff):
        w = m * tau + n + bq
        if w == 0:
            continue
        a2 = abs(w) ** 2
        term = ys / (w ** k * mpmath.exp(s * mpmath.log(a2)))
        acc += term
        absacc += abs(term)
    return acc, absacc


def _box_order(R):
    for m in range(-R, R + 1):
        for n in range(-R, R + 1):
            yield m, n


def _shell_order(R):
    # diagonal shells |m| + |n| = t, then clip to the box
    for t in range(0, 2 * R + 1):
        for m in range(-min(t, R), min(t, R) + 1):
            r = t - abs(m)
            if r > R:
                continue
            if r == 0:
                yield m, 0
            else:
                yield m, r
                yield m, -r


def _lattice_tail(k, beta, tau, s, R):
    sigma = mpmath.re(s)
    p = k + 2 * sigma
    kappa = lattice_constant(tau)
    b = abs(_mpf(_centered(beta)))
    u0 = kappa * R - b
    if u0 <= 0:
        return mpmath.inf
    y = mpmath.im(tau)
    pref = abs(_prefactor(k, s))
    inner = u0 ** (2 - p) / (p - 2) + b * u0 ** (1 - p) / (p - 1)
    return pref * y ** sigma * 8 * inner / kappa ** 2


def _rounding(absacc, nterms, prec):
    return absacc * (nterms + 10) * mpmath.mpf(2) ** (-prec + 4)


def lattice_sum_E(params: EisParams, cutoff: int = 40, precision: int = DEFAULT_PRECISION) -> EisensteinEvaluation:
    """Direct summation over max(|m|,|n|) <= cutoff with a proved tail bound."""
    k, s = params.k, mpmath.mpc(params.s)
    with mpmath.workprec(precision + 30):
        tau = mpmath.mpc(params.tau)
        if mpmath.re(2 * s + k) <= 2:
            raise ValueError("outside the half-plane of absolute convergence")
        acc, absacc = _lattice_terms(k, params.beta, tau, s, cutoff, _box_order)
        pref = _prefactor(k, s)
        tail = _lattice_tail(k, params.beta, tau, s, cutoff)
        bound = tail + abs(pref) * _rounding(absacc, (2 * cutoff + 1) ** 2, precision)
        return EisensteinEvaluation(+(pref * acc), bound, "lattice_sum")


def lattice_sum_E_shells(params: EisParams, cutoff: int = 40, precision: int = DEFAULT_PRECISION) -> EisensteinEvaluation:
    """Same box as :func:`lattice_sum_E`, summed along diagonal shells."""
    k, s = params.k, mpmath.mpc(params.s)
    with mpmath.workprec(precision + 30):
        tau = mpmath.mpc(params.tau)
        if mpmath.re(2 * s + k) <= 2:
            raise ValueError("outside the half-plane of absolute convergence")
        acc, absacc = _lattice_terms(k, params.beta, tau, s, cutoff, _shell_order)
        pref = _prefactor(k, s)
        tail = _lattice_tail(k, params.beta, tau, s, cutoff)
        bound = tail + abs(pref) * _rounding(absacc, (2 * cutoff + 1) ** 2, precision)
        return EisensteinEvaluation(+(pref * acc), bound, "lattice_sum_shells")


# ---------------------------------------------------------------------------
# continuation

def _gamma_upper_bound(a, x):
    """Bound for |Gamma(a, x)| with real x > 0 and Re a = a (real), or None if no bound applies."""
    if a <= 1:
        return x ** (a - 1) * mpmath.exp(-x)
    if x >= 2 * (a - 1):
        return 2 * x ** (a - 1) * mpmath.exp(-x)
    return None


def _shell_remainder(bound_at, R, limit=4000):
    """Sum of bound_at(rho) for rho > R; terms are Gaussian-decaying so a geometric cap closes it."""
    tot = mpmath.mpf(0)
    prev = None
    for rho in range(R + 1, R + limit):
        b = bound_at(rho)
        if b is None:
            return mpmath.inf
        tot += b
        if prev is not None and prev > 0:
            ratio = b / prev
            if ratio < mpmath.mpf(1) / 2 and b < tot * mpmath.mpf(2) ** -80:
                return tot + b * ratio / (1 - ratio) * 2
        prev = b
    return mpmath.inf


def _choose_radius(scale, prec):
    # smallest R with exp(-scale R^2) below 2^-prec, plus margin
    import math
    return int(math.sqrt(prec * math.log(2) / float(scale))) + 3


def continue_E(params: EisParams, precision: int = DEFAULT_PRECISION, radius=None) -> EisensteinEvaluation:
    """E^(k)_beta(tau, s) at any complex s via incomplete-gamma theta splitting."""
    k = params.k
    flags = []
    with mpmath.workprec(precision + 40):
        s = mpmath.mpc(params.s)
        tau = mpmath.mpc(params.tau)
        x, y = mpmath.re(tau), mpmath.im(tau)
        bq = _mpf(_centered(params.beta))
        t0 = mpmath.pi / y
        kappa = lattice_constant(tau)
        sigma = mpmath.re(s)
        R1 = radius or max(_choose_radius(t0 * kappa ** 2, precision + 20), int(2 * abs(bq) / kappa) + 2)
        R2 = radius or _choose_radius(mpmath.pi * kappa ** 2 / y, precision + 20)

        up = mpmath.mpc(0)
        up_abs = mpmath.mpf(0)
        for m in range(-R1, R1 + 1):
            for n in range(-R1, R1 + 1):
                w = m * tau + n + bq
                if w == 0:
                    continue
                a2 = abs(w) ** 2
                term = mpmath.conj(w) ** k * mpmath.exp(-(s + k) * mpmath.log(a2)) * mpmath.gammainc(s + k, t0 * a2)
                up += term
                up_abs += abs(term)

        dual = mpmath.mpc(0)
        dual_abs = mpmath.mpf(0)
        tb = 2 * mpmath.pi * bq
        for a in range(-R2, R2 + 1):
            for b in range(-R2, R2 + 1):
                if a == 0 and b == 0:
                    continue
                xi = mpmath.mpc(a, (b - a * x) / y)
                a2 = abs(xi) ** 2
                X = mpmath.pi ** 2 * a2
                term = (mpmath.conj(xi) ** k * mpmath.expj(tb * a)
                        * mpmath.exp((s - 1) * mpmath.log(X)) * mpmath.gammainc(1 - s, X / t0))
                dual += term
                dual_abs += abs(term)
        dscale = (-1j) ** k * mpmath.pi ** (1 + k) / y
        pref = mpmath.power(y, s) / ((-2j * mpmath.pi) ** k * mpmath.power(mpmath.pi, s))
        value = pref * (up + dscale * dual)

        # certified remainders
        wmax_c = abs(tau) + 1

        def up_bound(rho):
            lo = kappa * rho - abs(bq)
            hi = wmax_c * rho + abs(bq)
            g = _gamma_upper_bound(sigma + k, t0 * lo * lo)
            if g is None:
                return None
            # |conj(w)^k| |w|^{-2 sigma - 2k} Gamma(sigma+k, t0 |w|^2), maximised over lo <= |w| <= hi
            e = k - 2 * sigma - 2 * k
            mag = (hi ** e if e > 0 else lo ** e)
            return 8 * rho * mag * g

        def dual_bound(rho):
            lo = kappa * rho / y
            hi = wmax_c * rho / y
            X = mpmath.pi ** 2 * lo * lo
            g = _gamma_upper_bound(1 - sigma, X / t0)
            if g is None:
                return None
            e = k + 2 * (sigma - 1)
            mag = (hi ** e if e > 0 else lo ** e) * mpmath.pi ** (2 * (sigma - 1))
            return 8 * rho * mag * g

        tail = abs(pref) * (_shell_remainder(up_bound, R1) + abs(dscale) * _shell_remainder(dual_bound, R2))
        rnd = abs(pref) * (_rounding(up_abs, (2 * R1 + 1) ** 2, precision)
                           + abs(dscale) * _rounding(dual_abs, (2 * R2 + 1) ** 2, precision))
        if params.beta == 0 and abs(s + k - 1) < mpmath.mpf(10) ** -6:
            flags.append("near_pole")
        return EisensteinEvaluation(+value, tail + rnd, "incomplete_gamma", tuple(flags))


def continue_E_derivative(params: EisParams, precision: int = DEFAULT_PRECISION, radius=0.1, nodes=32):
    """d/ds E by the Cauchy integral over a circle around s (trapezoid rule on the circle)."""
    with mpmath.workprec(precision + 20):
        s0 = mpmath.mpc(params.s)
        acc = mpmath.mpc(0)
        for j in range(nodes):
            z = mpmath.expjpi(mpmath.mpf(2 * j) / nodes)
            val = continue_E(EisParams(params.k, params.beta, params.tau, s0 + radius * z), precision).value
            acc += val / z
        return acc / (nodes * radius)


# ---------------------------------------------------------------------------
# holomorphic series

@lru_cache(maxsize=64)
def _f_coefficients(k: int, b: int, N: int, terms: int, prec: int):
    """Fourier coefficients a_0..a_terms of F^(k)_{b/N} at working precision ``prec``."""
    with mpmath.workprec(prec):
        z = mpmath.expjpi(mpmath.mpf(2 * b) / N)
        zi = 1 / z
        sign = 1 if k % 2 == 0 else -1
        if k % 2 == 0:
            a0 = mpmath.factorial(k - 1) * 2 * mpmath.zeta(k) / (-2j * mpmath.pi) ** k
        else:
            a0 = mpmath.mpc(0)
        zp = [mpmath.mpc(1)]
        zm = [mpmath.mpc(1)]
        for _ in range(terms):
            zp.append(zp[-1] * z)
            zm.append(zm[-1] * zi)
        coeffs = [mpmath.mpc(a0)] + [mpmath.mpc(0)] * terms
        for d in range(1, terms + 1):
            dk = mpmath.mpf(d) ** (k - 1)
            for m in range(1, terms // d + 1):
                coeffs[d * m] += dk * (zp[m] + sign * zm[m])
        return tuple(coeffs)


def holomorphic_F(k: int, beta, tau, terms=None, precision: int = DEFAULT_PRECISION) -> EisensteinEvaluation:
    """F^(k)_beta(tau) from its q-expansion, with a bound on the discarded terms."""
    if k < 2:
        raise ValueError("holomorphic Eisenstein series need k >= 2")
    beta = Fraction(beta) % 1
    if k == 2 and beta == 0:
        raise ValueError("beta must be nonzero when k = 2")
    with mpmath.workprec(precision + 30):
        tau = mpmath.mpc(tau)
        q = mpmath.expjpi(2 * tau)
        aq = abs(q)
        if terms is None:
            # 2 n^k |q|^n < 2^-precision
            import math
            lq = -float(mpmath.log(aq))
            terms = 10
            while math.log(2) + k * math.log(terms) - lq * terms > -(precision + 10) * math.log(2):
                terms = int(terms * 1.3) + 1
        coeffs = _f_coefficients(k, beta.numerator, beta.denominator, terms, precision + 30)
        val = mpmath.mpc(0)
        for c in reversed(coeffs):
            val = val * q + c
        T = terms
        ratio = ((mpmath.mpf(T + 2) / (T + 1)) ** k) * aq
        if ratio >= 1:
            bound = mpmath.inf
        else:
            bound = 2 * mpmath.mpf(T + 1) ** k * aq ** (T + 1) / (1 - ratio)
        bound += abs(val) * mpmath.mpf(2) ** (-precision + 4)
        return EisensteinEvaluation(+val, bound, "q_expansion")


def holomorphic_F_qexp(k: int, beta, tau, terms=None, precision: int = DEFAULT_PRECISION):
    return holomorphic_F(k, beta, tau, terms, precision).value


# ---------------------------------------------------------------------------
# c-smoothing and diamond operators

def smoothing_combination(k: int, N: int, c: int) -> dict:
    """Coefficients {b: x} of c^2 F_{1/N} - c^{-k} <c> F_{1/N}, with <c> F_{b/N} = F_{cb/N}."""
    return _apply_factor({1 % N: Fraction(1)}, k, N, c)


def _apply_factor(comb: dict, k: int, N: int, c: int) -> dict:
    out: dict = {}
    for b, x in comb.items():
        out[b] = out.get(b, 0) + Fraction(c * c) * x
        cb = (c * b) % N
        out[cb] = out.get(cb, 0) - Fraction(1, c ** k) * x
    return {b: x for b, x in out.items() if x != 0}


def apply_smoothing(comb: dict, k: int, N: int, d: int) -> dict:
    """Apply (d^2 - d^{-k} <d>) to a formal combination of F_{b/N}."""
    _check_smoothing(N, d)
    return _apply_factor(comb, k, N, d)


def _check_smoothing(N, c):
    if c <= 1 or gcd(c, 6 * N) != 1:
        raise ValueError("smoothing parameter must satisfy c > 1 and gcd(c, 6N) = 1")


def evaluate_combination(comb: dict, weight: int, N: int, tau, s=None, precision: int = DEFAULT_PRECISION):
    """Sum of x * F^(weight)_{b/N}(tau) (holomorphic) or x * E^(weight)_{b/N}(tau, s)."""
    total = mpmath.mpc(0)
    bound = mpmath.mpf(0)
    with mpmath.workprec(precision + 20):
        for b, x in sorted(comb.items()):
            if s is None:
                ev = holomorphic_F(weight, Fraction(b, N), tau, precision=precision)
            else:
                ev = continue_E(EisParams(weight, Fraction(b, N), tau, s), precision)
            total += _mpf(Fraction(x)) * ev.value
            bound += abs(_mpf(Fraction(x))) * ev.truncation_bound
        return EisensteinEvaluation(+total, bound, "q_expansion" if s is None else "incomplete_gamma")


def c_smoothed_eis(k: int, N: int, c: int, tau, s=None, precision: int = DEFAULT_PRECISION) -> EisensteinEvaluation:
    """c^2 F^(k+2)_{1/N}(tau) - c^{-k} F^(k+2)_{c/N}(tau), or the same E-combination at s."""
    _check_smoothing(N, c)
    return evaluate_combination(smoothing_combination(k, N, c), k + 2, N, tau, s, precision)

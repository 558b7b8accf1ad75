"""
Archimedean kernels of the Asai integral formula.

The combinatorial coefficients a, b, c', c are exact Gaussian rationals.  The
Gamma kernels, the modified Bessel function and the constants C(k, j, s),
C'(k, j), C(k, j) are evaluated with mpmath at a caller-chosen precision.

Conventions: ``k_j = 2k - 2j + 2``; ``sqrt(-D)`` means ``i sqrt(D)``; binomial
coefficients with a negative or non-integral lower entry are zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath

from .numfield import embed_complex, CycNumber

__all__ = [
    "GaussianRational", "coeff_ab", "coeff_c", "kernel_G", "bessel_k", "g_infty", "whittaker_sum_J",
    "constants_CHC", "JValue", "GammaPole", "mellin_bessel_quadrature",
]


class GammaPole(ValueError):
    pass


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction = Fraction(0)

    def __add__(self, o):
        o = _g(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = _g(o)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = _g(o)
        if not isinstance(o, GaussianRational):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __mul__(self, o):
        o = _g(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def times_i_power(self, e: int):
        e %= 4
        x = self
        for _ in range(e):
            x = GaussianRational(-x.im, x.re)
        return x

    def is_real(self):
        return self.im == 0

    def to_mpc(self):
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.mpf(self.im.numerator) / self.im.denominator)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}+{self.im}*I" if self.im > 0 else f"{self.re}-{-self.im}*I"


def _g(x):
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(Fraction(x))


ZERO = GaussianRational(Fraction(0))


def _binom(c: int, d: Fraction) -> int:
    if d.denominator != 1 or d < 0:
        return 0
    d = int(d)
    return comb(c, d) if d <= c else 0


def _half(x: int) -> Fraction:
    return Fraction(x, 2)


def _sign_half(x: int):
    """(-1)^{x/2}, or None when x is odd."""
    if x % 2:
        return None
    return -1 if (x // 2) % 2 else 1


def coeff_ab(k: int, j: int, ell: int, n: int) -> tuple[Fraction, Fraction]:
    """The pair (a(j, ell, n), b(j, ell, n)) for weight k."""
    if not (0 <= j <= k):
        raise ValueError("need 0 <= j <= k")
    if ell < 0:
        return Fraction(0), Fraction(0)
    kj = k - j
    pref = comb(k, j) ** 2
    a = Fraction(0)
    sa = _sign_half(k + n - ell - j)
    if sa is not None:
        tot = 0
        for t in range(j + 1):
            term = (_binom(kj, _half(kj - ell + n) - t) * _binom(kj, _half(3 * kj - ell - n) + t)
                    + _binom(kj, _half(kj - ell + n - 2) - t) * _binom(kj, _half(3 * kj - ell - n + 2) + t))
            tot += (-1) ** t * comb(j, t) * term
        a = Fraction(pref * sa * tot)
    b = Fraction(0)
    sb = _sign_half(k + n - 1 - ell - j)
    if sb is not None:
        tot = 0
        for t in range(j + 1):
            tot += (-1) ** t * comb(j, t) * _binom(kj, _half(kj - ell + n - 1) - t) * _binom(kj, _half(3 * kj - ell - n + 1) + t)
        b = Fraction(pref * sb * tot)
    return a, b


def coeff_c(k: int, j: int, n: int) -> tuple[GaussianRational, GaussianRational]:
    """The pair (c'(j, n), c(j, n)) as exact Gaussian rationals."""
    cprime = ZERO
    for ell in range(0, 2 * k - 2 * j + 1):
        a, b = coeff_ab(k, j, ell, n)
        inner = GaussianRational(-2 * b, a)          # i a - 2 b
        cprime = cprime + inner.times_i_power(ell)
    c = ZERO
    for ell in range(0, 2 * k - 2 * j + 1, 2):
        a_prev = coeff_ab(k, j, ell - 1, n)[0] if ell >= 1 else Fraction(0)
        b = coeff_ab(k, j, ell, n)[1]
        c = c + GaussianRational(a_prev - 2 * b).times_i_power(ell)
    c = c * GaussianRational(Fraction((-1) ** (k + 1), 2))
    return cprime, c


# ---------------------------------------------------------------------------
# Gamma kernels

def _is_pole(z) -> bool:
    z = mpmath.mpmathify(z)
    return mpmath.im(z) == 0 and mpmath.re(z) <= 0 and mpmath.re(z) == mpmath.floor(mpmath.re(z))


def _gamma(z):
    if _is_pole(z):
        raise GammaPole(f"Gamma pole at {z}")
    return mpmath.gamma(z)


def kernel_G(n: int, r: int, s, k: int, D: int, precision: int = 128):
    """Gamma((s-k+n+r+1)/2) Gamma((s+k-n+r+3)/2) 2^{s+r} (sqrt(D)/4pi)^{s+r+2}."""
    with mpmath.workprec(precision):
        s = mpmath.mpmathify(s)
        g = _gamma((s - k + n + r + 1) / 2) * _gamma((s + k - n + r + 3) / 2)
        return g * mpmath.power(2, s + r) * mpmath.power(mpmath.sqrt(D) / (4 * mpmath.pi), s + r + 2)


def bessel_k(nu: int, x, precision: int = 64):
    """K_nu(x) for real x > 0 from the integral of exp(-x cosh t) cosh(nu t) over t >= 0.

    Trapezoidal rule on the whole line: the integrand is entire and decays
    doubly exponentially, so with step h the discretisation error is bounded
    by 2 M / (exp(2 pi a / h) - 1) with a <= pi/4 and M the integral of the
    modulus along Im t = a, itself at most 2 K_nu(x cos a).  The step is
    halved until that bound and the truncation tail fall below 2^-precision.
    """
    nu = abs(int(nu))
    with mpmath.workprec(precision + 30):
        x = mpmath.mpf(x)
        if x <= 0:
            raise ValueError("x must be positive")
        eps = mpmath.power(2, -precision - 8)
        # truncation point: x cosh T - nu T beyond log(1/eps) plus margin
        def tail_ok(T):
            slope = x * mpmath.sinh(T) - nu
            return slope > 1 and mpmath.exp(-x * mpmath.cosh(T) + nu * T) / slope < eps * mpmath.exp(-x - 1) / (1 + nu)

        T = mpmath.mpf(1)
        while not tail_ok(T):
            T *= 1.25
        while tail_ok(T / 1.25):
            T /= 1.25
        # strip half-width: keep x (1 - cos a) <= 1 so the strip bound stays comparable to K_nu(x)
        a = min(mpmath.pi / 4, mpmath.acos(1 - 1 / x)) if x > 1 else mpmath.pi / 4

        def trap(xx, h):
            m = int(mpmath.ceil(T / h))
            tot = mpmath.exp(-xx) / 2
            for i in range(1, m + 1):
                t = i * h
                tot += mpmath.exp(-xx * mpmath.cosh(t)) * mpmath.cosh(nu * t)
            return tot * h

        # crude bound for M using a coarse trapezoid sum (accurate to a few digits)
        h = min(mpmath.mpf(1) / 8, T / 16)
        M_bound = 4 * trap(x * mpmath.cos(a), h)
        h = T / 4
        while 2 * M_bound / (mpmath.exp(2 * mpmath.pi * a / h) - 1) > eps * mpmath.exp(-x - 1) / (1 + nu):
            h /= 2
        val = trap(x, h)
    with mpmath.workprec(precision):
        return +val


def mellin_bessel_quadrature(n: int, r: int, s, k: int, D: int, dps: int = 20):
    """Integral over y > 0 of y^{s+r+1} K_{n-k-1}(4 pi y / sqrt D) by tanh-sinh quadrature.

    Returns (value, omitted) where ``omitted`` bounds the discarded piece near
    y = 0, using K_nu(x) <= 2^{nu'-1} Gamma(nu') x^{-nu'} for 0 < nu' >= |nu|.
    """
    nu = abs(n - k - 1)
    with mpmath.workdps(dps + 5):
        c = 4 * mpmath.pi / mpmath.sqrt(D)
        w = mpmath.mpf(s) + r + 1
        nup = mpmath.mpf(nu) if nu > 0 else min(mpmath.mpf(1) / 4, (w + 1) / 2)
        if w - nup + 1 <= 0:
            raise ValueError("integral diverges at 0")
        const = mpmath.power(2, nup - 1) * mpmath.gamma(nup) * mpmath.power(c, -nup) / (w - nup + 1)
        target = mpmath.power(10, -dps)
        y0 = mpmath.power(target / const, 1 / (w - nup + 1))
        y0 = min(y0, 1 / c)
        omitted = const * mpmath.power(y0, w - nup + 1)
        prec = int((dps + 10) * 3.33)
        f = lambda y: mpmath.power(y, w) * bessel_k(nu, c * y, prec)
        val = mpmath.quad(f, [y0, 1 / c, 10 / c, 60 / c]) + mpmath.quad(f, [60 / c, mpmath.inf])
        return val, omitted


# ---------------------------------------------------------------------------
# G'_infinity

def _gamma_ratio(z1, z2, d1=1, d2=1):
    """Gamma(z1)/Gamma(z2) where z_i(s) has derivative d_i in s; limits taken at simultaneous poles."""
    p1, p2 = _is_pole(z1), _is_pole(z2)
    if not p1 and not p2:
        return mpmath.gamma(z1) * mpmath.rgamma(z2)
    if p2 and not p1:
        return mpmath.mpf(0)
    if p1 and not p2:
        raise GammaPole(f"Gamma pole at {z1}")
    m1, m2 = int(-mpmath.re(z1)), int(-mpmath.re(z2))
    # Gamma(-m + x) ~ (-1)^m / (m! x)
    return mpmath.mpf((-1) ** (m1 - m2) * factorial(m2)) / factorial(m1) * mpmath.mpf(d2) / d1


def g_infty_closed(k: int, j: int, s, precision: int = 128):
    with mpmath.workprec(precision):
        s = mpmath.mpmathify(s)
        pre = (-1) ** j * mpmath.sqrt(mpmath.pi) * comb(k, j) ** 2 * mpmath.power(2, -s)
        # Gamma(s/2+k-j+1) Gamma(s+2k-j+2) / Gamma(s+2k-2j+2) * Gamma(s+k-j+1)/Gamma((s+1)/2)
        r1 = _gamma_ratio(s + k - j + 1, (s + 1) / 2, 1, mpmath.mpf(1) / 2)
        r2 = _gamma_ratio(s + 2 * k - j + 2, s + 2 * k - 2 * j + 2)
        return pre * _gamma(s / 2 + k - j + 1) * r1 * r2


def g_infty_sum(k: int, j: int, s, precision: int = 128):
    with mpmath.workprec(precision):
        s = mpmath.mpmathify(s)
        tot = mpmath.mpc(0)
        for n in range(0, 2 * k + 3):
            if (k + j + n + 1) % 2:
                continue
            c = coeff_c(k, j, n)[1]
            if c == ZERO:
                continue
            tot += c.to_mpc() * _gamma((s + k + n - j + 1) / 2) * _gamma((s + 3 * k - n - j + 3) / 2)
        return tot


def g_infty(k: int, j: int, s, precision: int = 128):
    """(parity-restricted Gamma sum, closed-form product) for G'_infinity(s)."""
    return g_infty_sum(k, j, s, precision), g_infty_closed(k, j, s, precision)


# ---------------------------------------------------------------------------
# unfolded Whittaker sum

@dataclass
class JValue:
    value: object
    tail_bound: object
    terms: int
    reason: str | None = None


def whittaker_sum_J(psi, n: int, r: int, s, m_max: int = 200, involution_sign: int = 1,
                    precision: int = 128, W=None) -> JValue:
    """J^{n,r}(s) = G(n,r,s) sum_{m != 0} (-sgn m)^{k+1-n} W(m) |m|^{-(s+r+2)}.

    W(m) = c(m O_F) for m > 0 (or the callable ``W``) and W(-m) = involution_sign * W(m).
    The tail bound assumes |c(m O_F)| <= d(m)^2 m^{k+1} <= 4 m^{k+2}.
    """
    k = psi.k if psi is not None else 0
    factor = (-1) ** ((k + 1 - n) % 2) + involution_sign
    if factor == 0:
        return JValue(mpmath.mpf(0), mpmath.mpf(0), 0, "parity")
    if W is None:
        W = lambda m: psi.eigenvalue_at(m)
    with mpmath.workprec(precision):
        s = mpmath.mpmathify(s)
        w = s + r + 2
        sigma = mpmath.re(w)
        tot = mpmath.mpc(0)
        for m in range(1, m_max + 1):
            c = W(m)
            cv = embed_complex(c, precision) if isinstance(c, CycNumber) else mpmath.mpmathify(c)
            if cv != 0:
                tot += cv * mpmath.power(m, -w)
        G = kernel_G(n, r, s, k, psi.field.D if psi is not None else 4, precision)
        val = factor * G * tot
        if sigma > k + 3:
            tail = 4 * mpmath.power(m_max, k + 3 - sigma) / (sigma - k - 3) * abs(factor * G)
        else:
            tail = mpmath.inf
        return JValue(val, tail, m_max)


# ---------------------------------------------------------------------------
# constants

def _sqrt_minus_D(D):
    return mpmath.mpc(0, 1) * mpmath.sqrt(D)


def H_factor(s, k: int, j: int, N: int, precision: int = 128):
    """(-1)^j j! Gamma(s+k_j) N^{2s+k_j} / ((-2 pi i)^{k_j} pi^s)."""
    with mpmath.workprec(precision):
        s = mpmath.mpmathify(s)
        kj = 2 * k - 2 * j + 2
        num = (-1) ** j * factorial(j) * _gamma(s + kj) * mpmath.power(N, 2 * s + kj)
        return num / (mpmath.power(-2 * mpmath.pi * mpmath.mpc(0, 1), kj) * mpmath.power(mpmath.pi, s))


def C_ks(k: int, j: int, s, N: int, D: int, precision: int = 128):
    """(-1)^j (sqrt(D)/2pi)^{s+2k-j+2} H(s,k,j) G'_inf(s), using the closed form of G'_inf."""
    with mpmath.workprec(precision):
        s = mpmath.mpmathify(s)
        return ((-1) ** j * mpmath.power(mpmath.sqrt(D) / (2 * mpmath.pi), s + 2 * k - j + 2)
                * H_factor(s, k, j, N, precision) * g_infty_closed(k, j, s, precision))


def C_prime(k: int, j: int, D: int, precision: int = 128):
    """(-1)^{k+1} sqrt(-D)^{j+1} (j!)^2 binom(k,j)^2 / (2 (2 pi i)^{j+1})."""
    with mpmath.workprec(precision):
        num = (-1) ** (k + 1) * mpmath.power(_sqrt_minus_D(D), j + 1) * factorial(j) ** 2 * comb(k, j) ** 2
        return num / (2 * mpmath.power(2 * mpmath.pi * mpmath.mpc(0, 1), j + 1))


def C_kj(k: int, j: int, D: int, precision: int = 128):
    """(-1)^{k+1} j! sqrt(-D) / (2 (2 pi i)^{j+1})."""
    with mpmath.workprec(precision):
        num = (-1) ** (k + 1) * factorial(j) * _sqrt_minus_D(D)
        return num / (2 * mpmath.power(2 * mpmath.pi * mpmath.mpc(0, 1), j + 1))


def constants_CHC(k: int, j: int, s=None, N: int = 1, D: int = 4, precision: int = 128) -> dict:
    """H(s,k,j), C(k,j,s), C'(k,j), C(k,j) and the comparison value -C'/((sqrt -D)^j j! binom(k,j)^2).

    ``s`` defaults to the critical point -1-2k+2j.
    """
    if not (0 <= j <= k):
        raise ValueError("need 0 <= j <= k")
    if s is None:
        s = -1 - 2 * k + 2 * j
    with mpmath.workprec(precision):
        cp = C_prime(k, j, D, precision)
        comparison = -cp / (mpmath.power(_sqrt_minus_D(D), j) * factorial(j) * comb(k, j) ** 2)
        return {
            "s": mpmath.mpmathify(s),
            "H": H_factor(s, k, j, N, precision),
            "C_s": C_ks(k, j, s, N, D, precision),
            "C_prime": cp,
            "C": C_kj(k, j, D, precision),
            "comparison": comparison,
        }

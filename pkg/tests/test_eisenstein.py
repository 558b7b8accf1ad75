import random
from fractions import Fraction
from math import gcd

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from asai.eisenstein import (
    EisParams, apply_smoothing, c_smoothed_eis, continue_E, continue_E_derivative, evaluate_combination,
    holomorphic_F, holomorphic_F_qexp, lattice_sum_E, lattice_sum_E_shells, smoothing_combination,
)

PREC = 128
I = mpmath.mpc(0, 1)


def close(a, b, tol):
    with mpmath.workprec(PREC):
        return abs(a - b) <= tol


# -- lattice sums ------------------------------------------------------------

def test_translation_invariance_full_level():
    with mpmath.workprec(PREC):
        tau = mpmath.mpc(0.2, 1.1)
        a = lattice_sum_E(EisParams(4, 0, tau, 1.5), cutoff=25, precision=PREC)
        b = lattice_sum_E(EisParams(4, 0, tau + 1, 1.5), cutoff=25, precision=PREC)
        # the boxes differ, so compare within both tails
        assert abs(a.value - b.value) <= 2 * (a.truncation_bound + b.truncation_bound)


@pytest.mark.parametrize("k", [3, 4])
def test_reflection_symmetry_modulus(k):
    # (m, n) -> (-m, n) maps the box to itself, so only rounding separates the two sums
    with mpmath.workprec(PREC):
        tau = mpmath.mpc(0.3, 0.9)
        a = lattice_sum_E(EisParams(k, 0, tau, 1.2), cutoff=25, precision=PREC)
        b = lattice_sum_E(EisParams(k, 0, -mpmath.conj(tau), 1.2), cutoff=25, precision=PREC)
        if k % 2:
            # odd weight at full level vanishes identically
            assert abs(a.value) < 1e-40 and abs(b.value) < 1e-40
        else:
            assert abs(abs(a.value) - abs(b.value)) <= 1e-25 * abs(a.value)


def test_shell_order_oracle():
    P = EisParams(4, Fraction(1, 5), I, 2)
    a = lattice_sum_E(P, cutoff=30, precision=PREC)
    b = lattice_sum_E_shells(P, cutoff=30, precision=PREC)
    assert close(a.value, b.value, 1e-25)


def test_lattice_outside_convergence():
    with pytest.raises(ValueError):
        lattice_sum_E(EisParams(2, Fraction(1, 5), I, 0))


def test_params_validation():
    with pytest.raises(ValueError):
        EisParams(0, 0, I, 1)
    with pytest.raises(ValueError):
        EisParams(2, 0, mpmath.mpc(0, -1), 1)


# -- continuation ------------------------------------------------------------

def test_continuation_agrees_with_lattice_sum():
    P = EisParams(4, Fraction(1, 5), I, 2)
    a = lattice_sum_E(P, cutoff=30, precision=PREC)
    b = continue_E(P, precision=PREC)
    assert close(a.value, b.value, a.truncation_bound + b.truncation_bound)


def test_holomorphic_point_weight_2():
    tau = mpmath.mpc(0.1, 1.1)
    e = continue_E(EisParams(2, Fraction(1, 5), tau, -1), precision=PREC)
    f = holomorphic_F(2, Fraction(1, 5), tau, precision=PREC)
    assert close(e.value, f.value, 1e-20)


def test_holomorphic_point_full_level_weight_4():
    # s = 1 - k lies far outside the lattice-sum half-plane
    tau = mpmath.mpc(-0.3, 0.8)
    e = continue_E(EisParams(4, 0, tau, -3), precision=PREC)
    f = holomorphic_F(4, 0, tau, precision=PREC)
    assert close(e.value, f.value, 1e-20)


def test_cauchy_mean_value():
    P0 = EisParams(2, Fraction(1, 5), I, mpmath.mpc(0.3, 0.2))
    centre = continue_E(P0, precision=64).value
    nodes = 16
    with mpmath.workprec(80):
        acc = mpmath.mpc(0)
        for j in range(nodes):
            z = P0.s + mpmath.mpf("0.1") * mpmath.expjpi(mpmath.mpf(2 * j) / nodes)
            acc += continue_E(EisParams(2, Fraction(1, 5), I, z), precision=64).value
        assert abs(acc / nodes - centre) < 1e-8


def test_derivative_across_s_equals_1():
    P = EisParams(3, Fraction(2, 7), mpmath.mpc(0.1, 1.2), 1)
    d = continue_E_derivative(P, precision=64, nodes=24)
    h = mpmath.mpf("1e-6")
    with mpmath.workprec(96):
        fd = (continue_E(EisParams(3, Fraction(2, 7), P.tau, 1 + h), precision=96).value
              - continue_E(EisParams(3, Fraction(2, 7), P.tau, 1 - h), precision=96).value) / (2 * h)
        assert abs(fd - d) < 1e-10


# -- holomorphic series ------------------------------------------------------

def test_q_expansion_period_one():
    with mpmath.workprec(PREC):
        tau = mpmath.mpc("0.37", "0.6")
        assert close(holomorphic_F_qexp(5, Fraction(1, 7), tau, precision=PREC),
                     holomorphic_F_qexp(5, Fraction(1, 7), tau + 1, precision=PREC), 1e-35)


def test_e4_ratio_against_classical_series():
    with mpmath.workprec(PREC):
        def E4(tau):
            q = mpmath.expjpi(2 * tau)
            return 1 + 240 * mpmath.nsum(lambda n: n ** 3 * q ** n / (1 - q ** n), [1, mpmath.inf])
        ratio = holomorphic_F_qexp(4, 0, I, precision=PREC) / holomorphic_F_qexp(4, 0, 2 * I, precision=PREC)
        assert abs(ratio - E4(I) / E4(2 * I)) < 1e-20


def _hurwitz_F(k, beta, tau, m_max=40):
    """(k-1)!/(-2 pi i)^k sum' e^{2 pi i beta m} (m tau + n)^{-k}, inner sums by polygamma."""
    with mpmath.workprec(PREC + 30):
        beta = mpmath.mpf(beta.numerator) / beta.denominator
        total = (1 + (-1) ** k) * mpmath.zeta(k)
        for m in range(-m_max, m_max + 1):
            if m == 0:
                continue
            z = m * tau
            inner = ((-1) ** k * mpmath.psi(k - 1, z) + mpmath.psi(k - 1, 1 - z)) / mpmath.factorial(k - 1)
            total += mpmath.expjpi(2 * beta * m) * inner
        return mpmath.factorial(k - 1) / (-2j * mpmath.pi) ** k * total


@pytest.mark.parametrize("k", [3, 4, 5])
def test_q_expansion_against_polygamma_double_sum(k):
    beta = Fraction(1, 5)
    f = holomorphic_F_qexp(k, beta, I, precision=PREC)
    assert close(f, _hurwitz_F(k, beta, I), 1e-20)


def test_holomorphic_preconditions():
    with pytest.raises(ValueError):
        holomorphic_F(1, Fraction(1, 3), I)
    with pytest.raises(ValueError):
        holomorphic_F(2, 0, I)


def _random_gamma1(rng, N, bound=50):
    while True:
        c = N * rng.randint(-(bound - 1) // N, (bound - 1) // N)
        d = 1 + N * rng.randint(-(bound - 2) // N, (bound - 2) // N)
        if gcd(c, d) != 1 or c == 0:
            continue
        # solve a d - b c = 1 with a = 1 mod N, |a|, |b| < bound
        for a in range(1 - N * (bound // N), bound, N):
            if (a * d - 1) % c == 0:
                b = (a * d - 1) // c
                if abs(b) < bound:
                    return a, b, c, d


def test_modularity_gamma1():
    rng = random.Random(11)
    N, k = 5, 3
    done = 0
    while done < 20:
        a, b, c, d = _random_gamma1(rng, N)
        with mpmath.workprec(PREC):
            tau = mpmath.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.5))
            g = (a * tau + b) / (c * tau + d)
            if mpmath.im(g) < 0.05:
                continue
            lhs = holomorphic_F(k, Fraction(1, N), g, precision=PREC)
            rhs = holomorphic_F(k, Fraction(1, N), tau, precision=PREC)
            j = (c * tau + d) ** (-k)
            assert abs(j * lhs.value - rhs.value) <= abs(j) * lhs.truncation_bound + rhs.truncation_bound + 1e-30
        done += 1


# -- smoothing ---------------------------------------------------------------

def test_trivial_diamond_when_c_is_one_mod_N():
    tau = mpmath.mpc(0.1, 0.9)
    v = c_smoothed_eis(2, 5, 11, tau, precision=PREC)
    f = holomorphic_F(4, Fraction(1, 5), tau, precision=PREC)
    with mpmath.workprec(PREC):
        assert abs(v.value - (121 - mpmath.mpf(1) / 121) * f.value) < 1e-30


def test_smoothed_weight_two_matches_continuation():
    v = c_smoothed_eis(0, 5, 7, I, precision=PREC)
    w = c_smoothed_eis(0, 5, 7, I, s=-1, precision=PREC)
    assert close(v.value, w.value, 1e-20)


def test_smoothing_gcd_condition():
    with pytest.raises(ValueError):
        c_smoothed_eis(0, 5, 15, I)
    with pytest.raises(ValueError):
        c_smoothed_eis(0, 5, 9, I)


@given(st.integers(0, 4), st.sampled_from([5, 7, 11]), st.sampled_from([7, 13, 17, 19, 23, 29, 31, 37]),
       st.sampled_from([7, 13, 17, 19, 23, 29, 31, 37]))
def test_formal_cd_symmetry(k, N, c, d):
    if gcd(c, 6 * N) != 1 or gcd(d, 6 * N) != 1:
        return
    lhs = apply_smoothing(smoothing_combination(k, N, c), k, N, d)
    rhs = apply_smoothing(smoothing_combination(k, N, d), k, N, c)
    assert lhs == rhs


def test_combination_evaluation_is_linear():
    tau = mpmath.mpc(-0.2, 1.05)
    comb = {1: Fraction(3), 2: Fraction(-1, 2)}
    v = evaluate_combination(comb, 3, 5, tau, precision=PREC)
    with mpmath.workprec(PREC):
        ref = 3 * holomorphic_F_qexp(3, Fraction(1, 5), tau, precision=PREC) - holomorphic_F_qexp(
            3, Fraction(2, 5), tau, precision=PREC) / 2
        assert abs(v.value - ref) < 1e-30

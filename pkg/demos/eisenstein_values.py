"""Real-analytic Eisenstein series by lattice sums and by analytic continuation.

Inside the region of absolute convergence both routes agree; at s = -1 the
continued weight-2 series with beta = 1/5 reproduces the holomorphic
q-expansion.
"""

from fractions import Fraction

import mpmath

from asai.eisenstein import EisParams, continue_E, holomorphic_F, lattice_sum_E

PREC = 128
with mpmath.workprec(PREC):
    tau = mpmath.mpc("0.1", "1.1")
    p = EisParams(2, Fraction(1, 5), tau, 2)
    lat = lattice_sum_E(p, cutoff=60, precision=PREC)
    cont = continue_E(p, precision=PREC)
    print("E(tau, 2) lattice   :", mpmath.nstr(lat.value, 25), " tail <=", mpmath.nstr(lat.truncation_bound, 3))
    print("E(tau, 2) continued :", mpmath.nstr(cont.value, 25))

    at_minus_one = continue_E(EisParams(2, Fraction(1, 5), tau, -1), precision=PREC).value
    qexp = holomorphic_F(2, Fraction(1, 5), tau, precision=PREC).value
    print("E(tau, -1)          :", mpmath.nstr(at_minus_one, 25))
    print("F(tau) q-expansion  :", mpmath.nstr(qexp, 25))
    print("difference          :", mpmath.nstr(abs(at_minus_one - qexp), 3))

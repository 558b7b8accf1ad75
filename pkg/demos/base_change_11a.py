"""Asai data for the base change of the elliptic curve 11a to Q(i).

Prints a few Hecke eigenvalues, the local Asai factors at the first primes,
the factorisation check against Sym^2 and the twisted L-factor, and the
L-value at s = 6 computed both as a Dirichlet series and as an Euler product.
"""

import mpmath

from asai import DirichletChar, ImagQuadField, base_change
from asai.asai_series import asai_euler_value, asai_value, factorization_check, primitive_local_factor
from asai.datasets import load_bc11
from asai.numfield import primes_upto

F = ImagQuadField(4)
f = load_bc11()
psi = base_change(f, F, primes=primes_upto(600))
chi = DirichletChar.trivial(1)

print("c(n O_F), n = 1..12:", [str(psi.eigenvalue_at(n)) for n in range(1, 13)])
for ell in (3, 5, 7, 13):
    lf = primitive_local_factor(psi, ell, chi)
    print(f"ell = {ell:2d}  {lf.role:>10s}  {[str(c) for c in lf.poly]}")

rep = factorization_check(f, F, range(2, 100), chi)
print(f"factorisation Asai = Sym^2 x twist at {rep['checked']} good primes:", "PASS" if rep["passed"] else "FAIL")

series = asai_value(psi, chi, 6, n_max=400)
euler = asai_euler_value(psi, chi, 6, ell_max=400)
print("L(6) series:", mpmath.nstr(series.value.real, 20), "+/-", mpmath.nstr(series.tail_bound, 3))
print("L(6) Euler: ", mpmath.nstr(euler.value.real, 20), "+/-", mpmath.nstr(euler.tail_bound, 3))

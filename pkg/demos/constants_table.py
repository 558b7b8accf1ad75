"""The archimedean constants for 0 <= j <= k <= 4 over Q(i).

Columns: C(k, j), the value -C'(k, j)/((sqrt -D)^j j! binom(k, j)^2) obtained by
chaining the integral formula, their ratio, and C(k, j, s0)/C'(k, j) at the
critical point s0 = -1 - 2k + 2j.
"""

import mpmath

from asai.archimedean import constants_CHC

with mpmath.workprec(128):
    print(" k  j   C(k,j)                        chained value                 ratio   C(s0)/C'")
    for k in range(5):
        for j in range(k + 1):
            rec = constants_CHC(k, j, N=1, D=4)
            ratio = rec["C"] / rec["comparison"]
            half = rec["C_s"] / rec["C_prime"]
            print(f"{k:2d} {j:2d}   {mpmath.nstr(rec['C'], 10):28s}  {mpmath.nstr(rec['comparison'], 10):28s}"
                  f"  {mpmath.nstr(ratio.real, 3):6s}  {mpmath.nstr(half.real, 6)}")

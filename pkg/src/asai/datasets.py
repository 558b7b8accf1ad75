"""Bundled datasets and their generators.

``bc11.json`` holds the weight-2 newform of level 11 attached to the curve
y^2 + y = x^3 - x^2 - 10x - 20, with a_ell = ell + 1 - #E(F_ell) from point
counting.  ``synthetic.json`` is a small Bianchi dataset over Q(i) used by
the CLI examples; :func:`synthetic_bianchi` produces more of the same kind.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from importlib import resources

from .numfield import ImagQuadField, NumberField, DirichletChar, CycNumber, split_prime, primes_upto
from .hecke import BianchiEigenData, EllipticEigenData, IdealData, LocalData, load_eigen_file

__all__ = ["curve_ap", "build_bc11", "data_path", "load_bc11", "load_synthetic", "synthetic_bianchi"]

# a1, a2, a3, a4, a6 of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
CURVE_11A = (0, -1, 1, -10, -20)


def curve_ap(ainv, ell: int) -> int:
    """ell + 1 - #E(F_ell) for a Weierstrass curve given by its a-invariants."""
    a1, a2, a3, a4, a6 = ainv
    if ell == 2:
        count = 0
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)) % 2 == 0:
                    count += 1
        return ell - count
    # complete the square: (2y + a1 x + a3)^2 = 4 x^3 + b2 x^2 + 2 b4 x + b6
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    is_sq = bytearray(ell)
    for t in range(ell):
        is_sq[t * t % ell] = 1
    total = 0
    for x in range(ell):
        r = (4 * x ** 3 + b2 * x * x + 2 * b4 * x + b6) % ell
        if r == 0:
            total += 1
        elif is_sq[r]:
            total += 2
    return ell - total


def build_bc11(ell_max: int = 10000) -> EllipticEigenData:
    table = {ell: CycNumber.from_rational(curve_ap(CURVE_11A, ell)) for ell in primes_upto(ell_max)}
    return EllipticEigenData(2, 11, DirichletChar.trivial(11), table, NumberField([0, 1]), "11a")


def data_path(name: str):
    return resources.files("asai") / "data" / name


def load_bc11() -> EllipticEigenData:
    with data_path("bc11.json").open() as fh:
        return EllipticEigenData.from_json(json.load(fh))


def load_synthetic() -> BianchiEigenData:
    with data_path("synthetic.json").open() as fh:
        return BianchiEigenData.from_json(json.load(fh))


def synthetic_bianchi(seed: int, D: int = 4, k: int = 0, ell_max: int = 500,
                      level_primes=(), zero_primes=()) -> BianchiEigenData:
    """Random recursion-consistent Hecke data.

    Good primes get random integer eigenvalues and trivial nebentypus.  Primes
    in ``level_primes`` divide the level (eps = 0); primes in ``zero_primes``
    also have every c(lambda^r), r >= 1, equal to 0.
    """
    rng = random.Random(seed)
    F = ImagQuadField(D)
    one, zero = CycNumber.from_rational(1), CycNumber.from_rational(0)
    N = 1
    for q in level_primes:
        N *= q
    local = {}
    for ell in primes_upto(ell_max):
        sp = split_prime(F, ell)
        ideals = []
        for P in sp.primes_above:
            bound = int(2 * P.norm ** (k / 2 + 1))
            c = CycNumber.from_rational(rng.randint(-bound, bound))
            if ell in zero_primes:
                ideals.append(IdealData(P, zero, zero, (one,) + (zero,) * 15))
            elif ell in level_primes:
                ideals.append(IdealData(P, c, zero))
            else:
                ideals.append(IdealData(P, c, one))
        local[ell] = LocalData(ell, sp.kind, tuple(ideals), unverified=sp.kind == "ramified")
    bad = frozenset(set(level_primes) | {q for q in primes_upto(D) if D % q == 0})
    return BianchiEigenData(F, k, N, NumberField([0, 1]), local, DirichletChar.trivial(N), bad, {},
                            f"synthetic(seed={seed}, D={D})")

"""Asai L-functions of Bianchi eigenforms: exact local data, Eisenstein kernels,
Clebsch-Gordan maps, Iwasawa measures and archimedean constants."""

from .numfield import (
    ImagQuadField, QuadNumber, CycNumber, DirichletChar, NumberField, AlgNum,
    split_prime, gauss_sum, embed_complex, zeta,
)
from .hecke import BianchiEigenData, EllipticEigenData, base_change, p_stabilize, eigenvalue_at

__version__ = "0.1.0"

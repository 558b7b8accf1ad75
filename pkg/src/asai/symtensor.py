"""
Symmetric tensors, their duals and the Clebsch-Gordan injection.

V_k is the space of homogeneous polynomials of degree k in X, Y, written in
the basis X^s Y^{k-s}; gamma = (a, b; c, d) acts on the right by
f(X, Y) -> f(aX + bY, cX + dY) and on the left by f(aX + cY, bX + dY).
V_kk = V_k (x) V_k has the conjugate action on the second factor, and T_k,
T_kk are the duals with basis w^{[s, k-s]} and the contragredient action.

The Clebsch-Gordan map CG^{[k,k,j]}: T_{2k-2j} -> T_kk is pinned down by its
value on w^{[0, 2k-2j]},

    sum_{i=0}^{j} (-1)^i (k-i)! (k+i-j)! / ((k-j)!)^2  w^{[i, k-i]} (x) w^{[j-i, k-j+i]},

and extended to the other basis vectors by equivariance under the
unipotent (1, 1; 0, 1), whose logarithm raises the index of w^{[s]} by one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from ._series import nullspace

__all__ = [
    "SymPoly", "SymTensorKK", "DualTensor", "act", "right_matrix", "left_matrix", "dual_matrix",
    "cg_map", "cg_matrix", "cg_transpose", "nabla_contract", "pair", "equivariant_maps",
    "lie_matrix", "basis_kk",
]


def _conj(x):
    c = getattr(x, "conjugate", None)
    if c is None or isinstance(x, (int, Fraction)):
        return x
    return c()


def _as_matrix(gamma):
    (a, b), (c, d) = gamma
    return a, b, c, d


def _inverse2(gamma):
    a, b, c, d = _as_matrix(gamma)
    det = a * d - b * c
    if det == 0:
        raise ZeroDivisionError("singular matrix")
    inv = 1 / det if isinstance(det, (int, Fraction)) else det.inverse()
    if isinstance(det, int):
        inv = Fraction(1, det)
    return ((d * inv, -b * inv), (-c * inv, a * inv))


def _binomial_expand(p, q, k):
    """Coefficients of (p0 X + p1 Y)^s (q0 X + q1 Y)^{k-s} for every s, as columns."""
    (p0, p1), (q0, q1) = p, q
    # powers in the X-coefficient basis
    def power(lin, e):
        a, b = lin
        return [comb(e, i) * a ** i * b ** (e - i) for i in range(e + 1)]   # coeff of X^i Y^{e-i}
    cols = []
    for s in range(k + 1):
        A = power((p0, p1), s)
        B = power((q0, q1), k - s)
        col = [0] * (k + 1)
        for i, x in enumerate(A):
            if x == 0:
                continue
            for j, y in enumerate(B):
                if y != 0:
                    col[i + j] = col[i + j] + x * y
        cols.append(col)
    # matrix M[t][s] = coefficient of X^t Y^{k-t} in image of X^s Y^{k-s}
    return [[cols[s][t] for s in range(k + 1)] for t in range(k + 1)]


def right_matrix(gamma, k):
    a, b, c, d = _as_matrix(gamma)
    return _binomial_expand((a, b), (c, d), k)


def left_matrix(gamma, k):
    a, b, c, d = _as_matrix(gamma)
    return _binomial_expand((a, c), (b, d), k)


def dual_matrix(gamma, k):
    """Contragredient of the right action: A(gamma^{-1})^T."""
    M = right_matrix(_inverse2(gamma), k)
    return [list(r) for r in zip(*M)]


def _conj_matrix(gamma):
    a, b, c, d = _as_matrix(gamma)
    return ((_conj(a), _conj(b)), (_conj(c), _conj(d)))


def _matvec(M, v):
    return [sum((M[i][j] * v[j] for j in range(len(v)) if v[j] != 0), 0) for i in range(len(M))]


def _kron_apply(M1, M2, C):
    """(M1 (x) M2) applied to a coefficient matrix C[s][t]:  M1 C M2^T."""
    n1, n2 = len(M1), len(M2)
    tmp = [[sum((M1[i][a] * C[a][t] for a in range(len(C)) if C[a][t] != 0), 0) for t in range(len(C[0]))]
           for i in range(n1)]
    return [[sum((tmp[i][b] * M2[jj][b] for b in range(len(C[0])) if tmp[i][b] != 0), 0) for jj in range(n2)]
            for i in range(n1)]


@dataclass(frozen=True)
class SymPoly:
    k: int
    coeffs: tuple
    side: str = "right"

    def __post_init__(self):
        if len(self.coeffs) != self.k + 1:
            raise ValueError("need k+1 coefficients")

    @classmethod
    def monomial(cls, k, s, side="right"):
        return cls(k, tuple(Fraction(int(i == s)) for i in range(k + 1)), side)

    def __add__(self, other):
        return SymPoly(self.k, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.side)

    def __eq__(self, other):
        return isinstance(other, SymPoly) and self.k == other.k and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.k, self.coeffs))


@dataclass(frozen=True)
class SymTensorKK:
    k: int
    coeffs: tuple      # coeffs[s][t] on X^s Y^{k-s} (x) Xbar^t Ybar^{k-t}

    def __eq__(self, other):
        return isinstance(other, SymTensorKK) and self.k == other.k and _mat_eq(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.k)


@dataclass(frozen=True)
class DualTensor:
    """Element of T_k (``kk=False``, coeffs a vector) or of T_kk (coeffs a square matrix)."""
    k: int
    coeffs: tuple
    kk: bool = False

    @classmethod
    def basis(cls, k, s):
        return cls(k, tuple(Fraction(int(i == s)) for i in range(k + 1)))

    def __add__(self, other):
        if self.kk:
            return DualTensor(self.k, tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.coeffs, other.coeffs)), True)
        return DualTensor(self.k, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c):
        if self.kk:
            return DualTensor(self.k, tuple(tuple(c * a for a in r) for r in self.coeffs), True)
        return DualTensor(self.k, tuple(c * a for a in self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, DualTensor) or other.k != self.k or other.kk != self.kk:
            return False
        if self.kk:
            return _mat_eq(self.coeffs, other.coeffs)
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.k, self.kk))


def _mat_eq(A, B):
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def act(gamma, v):
    """Action of gamma on V_k, V_kk, T_k or T_kk (right action; contragredient on duals)."""
    if isinstance(v, SymPoly):
        M = right_matrix(gamma, v.k) if v.side == "right" else left_matrix(gamma, v.k)
        return SymPoly(v.k, tuple(_matvec(M, list(v.coeffs))), v.side)
    if isinstance(v, SymTensorKK):
        M1 = right_matrix(gamma, v.k)
        M2 = right_matrix(_conj_matrix(gamma), v.k)
        return SymTensorKK(v.k, tuple(tuple(r) for r in _kron_apply(M1, M2, [list(r) for r in v.coeffs])))
    if isinstance(v, DualTensor):
        if v.kk:
            M1 = dual_matrix(gamma, v.k)
            M2 = dual_matrix(_conj_matrix(gamma), v.k)
            return DualTensor(v.k, tuple(tuple(r) for r in _kron_apply(M1, M2, [list(r) for r in v.coeffs])), True)
        return DualTensor(v.k, tuple(_matvec(dual_matrix(gamma, v.k), list(v.coeffs))))
    raise TypeError(type(v).__name__)


def pair(t, v):
    """<t, v> between T_k and V_k or between T_kk and V_kk."""
    if isinstance(v, SymPoly):
        return sum((a * b for a, b in zip(t.coeffs, v.coeffs)), Fraction(0))
    return sum((a * b for ra, rb in zip(t.coeffs, v.coeffs) for a, b in zip(ra, rb)), Fraction(0))


# ---------------------------------------------------------------------------
# Lie algebra and the CG map

def _mat_mul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][l] * B[l][j] for l in range(m) if A[i][l] != 0), Fraction(0)) for j in range(p)] for i in range(n)]


def _log_unipotent(M):
    n = len(M)
    N = [[Fraction(M[i][j]) - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    out = [[Fraction(0)] * n for _ in range(n)]
    P = [row[:] for row in N]
    i = 1
    while any(x != 0 for r in P for x in r):
        sgn = Fraction((-1) ** (i + 1), i)
        out = [[out[a][b] + sgn * P[a][b] for b in range(n)] for a in range(n)]
        P = _mat_mul(P, N)
        i += 1
    return out


def lie_matrix(gamma, k, space="dual"):
    """log of the (unipotent) action matrix of gamma on T_k (``dual``) or V_k (``right``)."""
    M = dual_matrix(gamma, k) if space == "dual" else right_matrix(gamma, k)
    return _log_unipotent(M)


UPPER = ((1, 1), (0, 1))
LOWER = ((1, 0), (1, 1))


def _kk_lie(L):
    """Lie action on T_kk from the one on T_k (real matrices: conjugation is trivial)."""
    return L


def _apply_kk_lie(L, C):
    # (L (x) 1 + 1 (x) L) C = L C + C L^T
    n = len(C)
    LC = _mat_mul(L, C)
    CLt = _mat_mul(C, [list(r) for r in zip(*L)])
    return [[LC[i][j] + CLt[i][j] for j in range(n)] for i in range(n)]


def _top_image(k, j):
    C = [[Fraction(0)] * (k + 1) for _ in range(k + 1)]
    den = factorial(k - j) ** 2
    for i in range(j + 1):
        C[i][j - i] = Fraction((-1) ** i * factorial(k - i) * factorial(k + i - j), den)
    return C


def cg_matrix(k: int, j: int):
    """Images CG(w^{[r, 2k-2j-r]}) for r = 0..2k-2j, as (k+1)x(k+1) coefficient matrices."""
    return [[list(row) for row in img] for img in _cg_images(k, j)]


@lru_cache(maxsize=None)
def _cg_images(k: int, j: int):
    if not 0 <= j <= k:
        raise ValueError("need 0 <= j <= k")
    m = 2 * k - 2 * j
    Lsmall = lie_matrix(UPPER, m)
    Lbig = lie_matrix(UPPER, k)
    images = [_top_image(k, j)]
    for r in range(m):
        # L w^{[r]} = lam * w^{[r+1]} on T_m
        col = [Lsmall[i][r] for i in range(m + 1)]
        nz = [i for i, x in enumerate(col) if x != 0]
        if nz != [r + 1]:
            raise AssertionError("unexpected Lie action on the dual basis")
        lam = col[r + 1]
        nxt = _apply_kk_lie(Lbig, images[-1])
        images.append([[x / lam for x in row] for row in nxt])
    return tuple(tuple(tuple(row) for row in img) for img in images)


def cg_map(k: int, j: int, t: DualTensor) -> DualTensor:
    """CG^{[k,k,j]} applied to t in T_{2k-2j}."""
    if t.k != 2 * k - 2 * j or t.kk:
        raise ValueError("argument must lie in T_{2k-2j}")
    imgs = _cg_images(k, j)
    C = [[Fraction(0)] * (k + 1) for _ in range(k + 1)]
    for r, x in enumerate(t.coeffs):
        if x != 0:
            for a in range(k + 1):
                for b in range(k + 1):
                    if imgs[r][a][b] != 0:
                        C[a][b] = C[a][b] + x * imgs[r][a][b]
    return DualTensor(k, tuple(tuple(r) for r in C), True)


def cg_transpose(k: int, j: int, delta: SymTensorKK) -> SymPoly:
    """The transpose map V_kk -> V_{2k-2j}: coefficient r is <CG(w^{[r]}), delta>."""
    imgs = _cg_images(k, j)
    out = []
    for img in imgs:
        out.append(sum((img[a][b] * delta.coeffs[a][b] for a in range(k + 1) for b in range(k + 1)), Fraction(0)))
    return SymPoly(2 * k - 2 * j, tuple(out))


def basis_kk(k, a, b):
    """The basis tensor X^a Y^{k-a} (x) Xbar^b Ybar^{k-b}."""
    return SymTensorKK(k, tuple(tuple(Fraction(int(i == a and jj == b)) for jj in range(k + 1)) for i in range(k + 1)))


# ---------------------------------------------------------------------------
# the nabla operator

def nabla_contract(k: int, j: int, delta: SymTensorKK) -> SymPoly:
    """(1/(j!)^2) nabla^j delta, then Xbar = X, Ybar = Y;  nabla = d2/dX dYbar - d2/dY dXbar."""
    if not 0 <= j <= k:
        raise ValueError("need 0 <= j <= k")
    # polynomial as dict (eX, eY, eXb, eYb) -> coeff
    poly = {}
    for a in range(k + 1):
        for b in range(k + 1):
            c = delta.coeffs[a][b]
            if c != 0:
                poly[(a, k - a, b, k - b)] = c
    for _ in range(j):
        new = {}
        for (ex, ey, exb, eyb), c in poly.items():
            if ex and eyb:
                key = (ex - 1, ey, exb, eyb - 1)
                new[key] = new.get(key, 0) + c * ex * eyb
            if ey and exb:
                key = (ex, ey - 1, exb - 1, eyb)
                new[key] = new.get(key, 0) - c * ey * exb
        poly = {key: v for key, v in new.items() if v != 0}
    m = 2 * k - 2 * j
    out = [Fraction(0)] * (m + 1)
    scale = Fraction(1, factorial(j) ** 2)
    for (ex, ey, exb, eyb), c in poly.items():
        out[ex + exb] += c * scale
    return SymPoly(m, tuple(out))


# ---------------------------------------------------------------------------
# multiplicity one

def equivariant_maps(k: int, j: int):
    """Basis of the space of linear maps T_{2k-2j} -> T_kk intertwining (1,1;0,1) and (1,0;1,1).

    Unknowns are the entries Phi[(a, b), r]; the intertwining equations are
    imposed through the logarithms of the two unipotent generators, which
    is equivalent for unipotent matrices.  Returned maps are lists of
    (k+1)x(k+1) image matrices, indexed by r.
    """
    m = 2 * k - 2 * j
    n1 = k + 1
    nvars = n1 * n1 * (m + 1)

    def var(a, b, r):
        return (a * n1 + b) * (m + 1) + r

    rows = []
    for gamma in (UPPER, LOWER):
        Ls = lie_matrix(gamma, m)
        Lb = lie_matrix(gamma, k)
        # Phi Ls - (Lb (x) 1 + 1 (x) Lb) Phi = 0, entry (a, b, r)
        for a in range(n1):
            for b in range(n1):
                for r in range(m + 1):
                    row = {}
                    for r2 in range(m + 1):
                        if Ls[r2][r] != 0:
                            v = var(a, b, r2)
                            row[v] = row.get(v, 0) + Ls[r2][r]
                    for a2 in range(n1):
                        if Lb[a][a2] != 0:
                            v = var(a2, b, r)
                            row[v] = row.get(v, 0) - Lb[a][a2]
                    for b2 in range(n1):
                        if Lb[b][b2] != 0:
                            v = var(a, b2, r)
                            row[v] = row.get(v, 0) - Lb[b][b2]
                    row = {v: c for v, c in row.items() if c != 0}
                    if row:
                        rows.append(row)
    basis = _sparse_nullspace(rows, nvars)
    out = []
    for vec in basis:
        imgs = [[[vec[var(a, b, r)] for b in range(n1)] for a in range(n1)] for r in range(m + 1)]
        out.append(imgs)
    return out


def _sparse_nullspace(rows, nvars):
    """Exact nullspace of a sparse system given as dicts {column: coefficient}."""
    pivots = {}        # pivot column -> reduced row (dict), pivot coefficient 1
    for row in rows:
        row = {c: Fraction(v) for c, v in row.items()}
        # eliminate existing pivots
        changed = True
        while changed:
            changed = False
            for c in list(row):
                if c in pivots and row.get(c, 0) != 0:
                    f = row[c]
                    for c2, v2 in pivots[c].items():
                        row[c2] = row.get(c2, 0) - f * v2
                        if row[c2] == 0:
                            del row[c2]
                    changed = True
        if not row:
            continue
        pc = min(row)
        inv = 1 / row[pc]
        row = {c: v * inv for c, v in row.items()}
        # back-substitute into existing pivots
        for c, prow in pivots.items():
            if pc in prow:
                f = prow[pc]
                for c2, v2 in row.items():
                    prow[c2] = prow.get(c2, 0) - f * v2
                    if prow[c2] == 0:
                        del prow[c2]
        pivots[pc] = row
    free = [c for c in range(nvars) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * nvars
        v[f] = Fraction(1)
        for pc, prow in pivots.items():
            if f in prow:
                v[pc] = -prow[f]
        basis.append(v)
    return basis

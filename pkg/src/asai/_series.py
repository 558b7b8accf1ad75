"""Generic exact polynomial, power-series and linear-algebra helpers.

Coefficients may be any exact field elements supporting + - * / and
comparison with 0 (Fraction, CycNumber, AlgNum, QuadNumber, PadicScalar).
Polynomials are lists, constant term first.
"""

from __future__ import annotations

from fractions import Fraction

__all__ = [
    "trim", "pmul", "padd", "psub", "pscale", "pdivmod", "series_inv", "series_mul",
    "solve_linear", "nullspace", "find_rational_form", "is_zero", "pdeg",
]


def is_zero(x) -> bool:
    return x == 0


def _inv(x):
    if isinstance(x, (int, Fraction)):
        return 1 / Fraction(x)
    return x.inverse()


def trim(a):
    a = list(a)
    while a and is_zero(a[-1]):
        a.pop()
    return a


def pdeg(a) -> int:
    return len(trim(a)) - 1


def padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def psub(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


def pscale(a, c):
    return [x * c for x in a]


def pmul(a, b, cap=None):
    """Product, optionally truncated to degree < cap."""
    if not a or not b:
        return []
    n = len(a) + len(b) - 1
    if cap is not None:
        n = min(n, cap)
    out = [0] * n
    for i, x in enumerate(a):
        if i >= n:
            break
        if is_zero(x):
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            if not is_zero(y):
                out[i + j] = out[i + j] + x * y
    return out


def series_mul(a, b, n):
    return (pmul(a, b, cap=n) + [0] * n)[:n]


def series_inv(a, n):
    """Power-series inverse of a (a[0] invertible) to n terms."""
    inv0 = _inv(a[0])
    out = [inv0]
    for m in range(1, n):
        acc = 0
        for i in range(1, min(m, len(a) - 1) + 1):
            if not is_zero(a[i]):
                acc = acc + a[i] * out[m - i]
        out.append(-acc * inv0)
    return out


def pdivmod(a, b):
    a = trim(a)
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    inv = _inv(b[-1])
    q = [0] * (len(a) - len(b) + 1)
    a = list(a)
    for i in range(len(q) - 1, -1, -1):
        coef = a[i + len(b) - 1] * inv
        q[i] = coef
        if not is_zero(coef):
            for j, bj in enumerate(b):
                a[i + j] = a[i + j] - coef * bj
    return q, trim(a[:len(b) - 1])


def _row_reduce(rows, ncols):
    """In-place reduced row echelon form; returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(rows)):
            if not is_zero(rows[i][c]):
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = _inv(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def solve_linear(A, b):
    """One solution of A x = b (free variables zero), or None if inconsistent."""
    ncols = len(A[0]) if A else 0
    rows = [list(row) + [bi] for row, bi in zip(A, b)]
    pivots = _row_reduce(rows, ncols + 1)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for i, c in enumerate(pivots):
        x[c] = rows[i][ncols]
    return x


def nullspace(A, ncols):
    """Basis of the right kernel of A."""
    rows = [list(r) for r in A]
    pivots = _row_reduce(rows, ncols) if rows else []
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        basis.append(v)
    return basis


def find_rational_form(seq, max_order):
    """Minimal Q with constant term 1 and deg Q <= max_order such that seq * Q is a polynomial
    of degree < deg Q (checked against every available term).

    Returns (Q, numerator) or None.
    """
    n = len(seq)
    for d in range(0, max_order + 1):
        if n - d < d + 1:
            break
        # equations: seq[m] + sum_i q_i seq[m-i] = 0 for d <= m < n
        A, rhs = [], []
        for m in range(d, n):
            A.append([seq[m - i] for i in range(1, d + 1)])
            rhs.append(-seq[m])
        if d == 0:
            if all(is_zero(x) for x in rhs):
                return [1], []
            continue
        sol = solve_linear(A, rhs)
        if sol is None:
            continue
        Q = [1] + sol
        num = series_mul(seq, Q, d)
        return trim(Q), trim(num)
    return None

"""
Exact arithmetic substrate.

Imaginary quadratic fields, prime splitting, cyclotomic numbers in the
power basis, Dirichlet characters with cyclotomic values, Gauss sums, and
a small relative number-field type used for Hecke eigenvalues.

Everything here is exact (``fractions.Fraction`` coefficients); complex
numbers only appear in :func:`embed_complex`.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
import itertools

import mpmath

__all__ = [
    "ImagQuadField", "QuadNumber", "PrimeIdeal", "PrimeSplitting", "split_prime",
    "CycNumber", "zeta", "cyclotomic_poly", "DirichletChar", "gauss_sum",
    "embed_complex", "NumberField", "AlgNum", "kronecker", "factorint",
    "is_prime", "primes_upto", "to_fraction", "fraction_str",
]


# ---------------------------------------------------------------------------
# elementary integer helpers

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i in range(n + 1) if sieve[i]]


def factorint(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(n).values())


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n) for n > 0."""
    if n == 1:
        return 1
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    # Jacobi symbol for odd n
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def to_fraction(x) -> Fraction:
    """Parse ints, Fractions and strings of the form "p/q"."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# imaginary quadratic fields

class ImagQuadField:
    """The field Q(sqrt(-D)) of discriminant -D.

    ``a_gen`` is stored as the pair (u, v) meaning (u + v sqrt(-D))/2; it is
    the Z-module generator with O_F = Z + Z a_gen and a_gen - conj(a_gen) = sqrt(-D).
    """

    def __init__(self, D: int):
        D = int(D)
        if D <= 0:
            raise ValueError("D must be positive")
        if D % 4 == 3 and _squarefree(D):
            self.a_gen = (1, 1)
        elif D % 4 == 0 and (D // 4) % 4 in (1, 2) and _squarefree(D // 4):
            self.a_gen = (0, 1)
        else:
            raise ValueError(f"-{D} is not a fundamental discriminant")
        self.D = D

    def __repr__(self):
        return f"ImagQuadField(D={self.D})"

    def __eq__(self, other):
        return isinstance(other, ImagQuadField) and other.D == self.D

    def __hash__(self):
        return hash(("IQF", self.D))

    def gen(self) -> "QuadNumber":
        u, v = self.a_gen
        return QuadNumber(self.D, Fraction(u, 2), Fraction(v, 2))

    def sqrt_minus_D(self) -> "QuadNumber":
        return QuadNumber(self.D, 0, 1)

    def min_poly_gen(self) -> tuple[int, int]:
        """(b, c) with a_gen a root of x^2 + b x + c."""
        if self.D % 4 == 3:
            return (-1, (1 + self.D) // 4)
        return (0, self.D // 4)

    def quadratic_character(self) -> "DirichletChar":
        """epsilon_F, the Kronecker character of conductor D."""
        return DirichletChar.from_function(self.D, 2, lambda t: 0 if kronecker(-self.D, t) == 1 else 1)


class QuadNumber:
    """a + b sqrt(-D) with rational a, b."""

    __slots__ = ("D", "a", "b")

    def __init__(self, D: int, a=0, b=0):
        self.D = D
        self.a = Fraction(a)
        self.b = Fraction(b)

    def _coerce(self, other):
        if isinstance(other, QuadNumber):
            if other.D != self.D:
                raise ValueError("mixed quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNumber(self.D, other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadNumber(self.D, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(self.D, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadNumber(self.D, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadNumber(self.D, self.a * o.a - self.D * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a + self.D * self.b * self.b

    def conjugate(self) -> "QuadNumber":
        return QuadNumber(self.D, self.a, -self.b)

    def inverse(self) -> "QuadNumber":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return QuadNumber(self.D, self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = QuadNumber(self.D, 1, 0), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.D, self.a, self.b))

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __repr__(self):
        return f"({self.a} + {self.b}*sqrt(-{self.D}))"

    def to_complex(self, prec: int = 53):
        with mpmath.workprec(prec + 10):
            return mpmath.mpc(self.a, self.b * mpmath.sqrt(self.D))


class PrimeIdeal:
    """A prime of O_F above ell; ``root`` is a residue r with a_gen = r mod the prime."""

    __slots__ = ("ell", "root", "norm")

    def __init__(self, ell: int, root, norm: int):
        self.ell, self.root, self.norm = ell, root, norm

    @property
    def label(self) -> str:
        return f"{self.ell}" if self.root is None else f"{self.ell}:{self.root}"

    def __repr__(self):
        return f"PrimeIdeal({self.label}, norm={self.norm})"

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and (self.ell, self.root) == (other.ell, other.root)

    def __hash__(self):
        return hash((self.ell, self.root))


class PrimeSplitting:
    __slots__ = ("ell", "kind", "residue_degree", "primes_above")

    def __init__(self, ell, kind, residue_degree, primes_above):
        self.ell = ell
        self.kind = kind
        self.residue_degree = residue_degree
        self.primes_above = primes_above

    def __repr__(self):
        return f"PrimeSplitting({self.ell}, {self.kind}, {self.primes_above})"


def split_prime(F: ImagQuadField, ell: int) -> PrimeSplitting:
    """Decomposition of ell in O_F, read off from the Kronecker symbol (-D | ell)."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    b, c = F.min_poly_gen()
    roots = [r for r in range(ell) if (r * r + b * r + c) % ell == 0]
    sym = kronecker(-F.D, ell)
    if sym == 0:
        return PrimeSplitting(ell, "ramified", 1, (PrimeIdeal(ell, roots[0], ell),))
    if sym == 1:
        return PrimeSplitting(ell, "split", 1, tuple(PrimeIdeal(ell, r, ell) for r in roots))
    return PrimeSplitting(ell, "inert", 2, (PrimeIdeal(ell, None, ell * ell),))


# ---------------------------------------------------------------------------
# cyclotomic numbers

@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]          # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _int_exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _int_exact_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        coef = a[i + len(b) - 1] // b[-1]
        q[i] = coef
        for j, bj in enumerate(b):
            a[i + j] -= coef * bj
    assert not any(a), "non-exact cyclotomic division"
    return q


@lru_cache(maxsize=None)
def _power_reductions(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """x^e mod Phi_n for 0 <= e < 2*phi(n), as coefficient tuples."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [Fraction(0)] * deg
    if deg:
        cur[0] = Fraction(1)
    for e in range(2 * max(deg, 1) + n):
        rows.append(tuple(cur))
        # multiply by x
        top = cur[-1] if deg else Fraction(0)
        nxt = [Fraction(0)] + cur[:-1]
        if top:
            for i in range(deg):
                nxt[i] -= top * phi[i]
        cur = nxt
    return tuple(rows)


class CycNumber:
    """Element of Q(zeta_n) in the power basis modulo Phi_n.

    ``coeffs[i]`` is the coefficient of zeta_n^i, 0 <= i < phi(n).
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        self.n = int(n)
        deg = len(cyclotomic_poly(self.n)) - 1
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > deg:
            cs = _reduce_cyc(self.n, cs)
        cs += [Fraction(0)] * (deg - len(cs))
        self.coeffs = tuple(cs)

    @classmethod
    def from_rational(cls, x, n: int = 1):
        deg = len(cyclotomic_poly(n)) - 1
        return cls(n, [Fraction(x)] + [0] * (deg - 1))

    @property
    def degree(self):
        return len(self.coeffs)

    def lift(self, m: int) -> "CycNumber":
        """The same number inside Q(zeta_m), n | m."""
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError("level must divide target level")
        step = m // self.n
        raw = [Fraction(0)] * (step * (self.degree - 1) + 1)
        for i, c in enumerate(self.coeffs):
            raw[i * step] += c
        return CycNumber(m, raw)

    def _pair(self, other):
        if isinstance(other, CycNumber):
            if other.n == self.n:
                return self, other
            m = self.n * other.n // gcd(self.n, other.n)
            return self.lift(m), other.lift(m)
        if isinstance(other, (int, Fraction)):
            return self, CycNumber.from_rational(other, self.n)
        return None, None

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycNumber(a.n, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.n, [-c for c in self.coeffs])

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return CycNumber(a.n, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNumber(self.n, [c * other for c in self.coeffs])
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        prod = [Fraction(0)] * (2 * a.degree - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycNumber(a.n, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = CycNumber.from_rational(1, self.n), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __eq__(self, other):
        if isinstance(other, AlgNum):
            return other == self
        a, b = self._pair(other)
        if a is None:
            return False
        return a.coeffs == b.coeffs

    def __hash__(self):
        # normalise to the smallest level that can hold the value is costly; hash rational part only
        return hash(self.coeffs[0]) if self.is_rational() else hash((self.n, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def conjugate(self) -> "CycNumber":
        """Complex conjugation zeta -> zeta^{-1}."""
        raw = [Fraction(0)] * self.n
        for i, c in enumerate(self.coeffs):
            raw[(-i) % self.n] += c
        return CycNumber(self.n, raw)

    def galois(self, a: int) -> "CycNumber":
        """zeta -> zeta^a for a coprime to n."""
        raw = [Fraction(0)] * self.n
        for i, c in enumerate(self.coeffs):
            raw[(a * i) % self.n] += c
        return CycNumber(self.n, raw)

    def inverse(self) -> "CycNumber":
        # extended Euclid in Q[x] against Phi_n
        phi = [Fraction(c) for c in cyclotomic_poly(self.n)]
        g, s = _poly_inverse_mod(list(self.coeffs), phi)
        if g is None:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        return CycNumber(self.n, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNumber(self.n, [c / other for c in self.coeffs])
        if isinstance(other, CycNumber):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z{self.n}^{i}")
        return " + ".join(terms) if terms else "0"

    def to_json(self):
        return [fraction_str(c) for c in self.coeffs]


def _reduce_cyc(n: int, cs: list[Fraction]) -> list[Fraction]:
    table = _power_reductions(n)
    deg = len(table[0])
    out = [Fraction(0)] * deg
    for e, c in enumerate(cs):
        if c:
            if e < len(table):
                row = table[e]
            else:
                row = table[e % n]      # zeta^n = 1
            for i, v in enumerate(row):
                if v:
                    out[i] += c * v
    return out


def zeta(n: int, e: int = 1) -> CycNumber:
    """zeta_n^e."""
    raw = [Fraction(0)] * n
    raw[e % n] = Fraction(1)
    return CycNumber(n, raw)


def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_inverse_mod(a, m):
    """Return (gcd, s) with s*a = 1 mod m, or (None, None) if not invertible.

    Works for coefficient types supporting field operations."""
    a = _poly_trim(a)
    m = _poly_trim(m)
    if not a:
        return None, None
    r0, r1 = m, a
    s0, s1 = [], [_one_like(a[0])]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if len(r0) != 1:
        return None, None
    inv = _one_like(r0[0]) / r0[0] if not isinstance(r0[0], Fraction) else 1 / r0[0]
    s = [c * inv for c in s0]
    _, s = _poly_divmod(s, m)
    deg = len(m) - 1
    s = list(s) + [_zero_like(a[0])] * (deg - len(s))
    return r0, s


def _one_like(x):
    if isinstance(x, CycNumber):
        return CycNumber.from_rational(1, x.n)
    return Fraction(1)


def _zero_like(x):
    if isinstance(x, CycNumber):
        return CycNumber.from_rational(0, x.n)
    return Fraction(0)


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [_zero_like(a[0])] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return _poly_trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    z = _zero_like(a[0] if a else b[0])
    return _poly_trim([(a[i] if i < len(a) else z) - (b[i] if i < len(b) else z) for i in range(n)])


def _poly_divmod(a, b):
    a = list(_poly_trim(a))
    b = _poly_trim(b)
    if len(a) < len(b):
        return [], a
    lead = b[-1]
    inv = 1 / lead if isinstance(lead, Fraction) else lead.inverse()
    q = [_zero_like(b[0])] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        coef = a[i + len(b) - 1] * inv
        q[i] = coef
        if coef:
            for j, bj in enumerate(b):
                a[i + j] = a[i + j] - coef * bj
    return _poly_trim(q), _poly_trim(a[:len(b) - 1])


# ---------------------------------------------------------------------------
# relative number fields K = Q(zeta_n)[x]/(f)

class NumberField:
    """Coefficient field Q[x]/(f) for a monic irreducible integer polynomial f.

    Elements may be extended by a cyclotomic field: AlgNum values live in
    Q(zeta_n)[x]/(f) with n tracked per element.  ``root_index`` picks the
    complex embedding x -> (root_index-th root of f sorted by (re, im)).
    """

    def __init__(self, poly, name: str = "x", root_index: int = 0):
        poly = [int(c) for c in poly]
        while poly and poly[-1] == 0:
            poly.pop()
        if len(poly) < 2:
            raise ValueError("field polynomial must have degree >= 1")
        if poly[-1] != 1:
            raise ValueError("field polynomial must be monic")
        self.poly = tuple(poly)
        self.name = name
        self.root_index = root_index

    @property
    def degree(self):
        return len(self.poly) - 1

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly

    def __hash__(self):
        return hash(("NF", self.poly))

    def __repr__(self):
        return f"NumberField({list(self.poly)})"

    def is_rational(self):
        return self.degree == 1

    def element(self, coeffs):
        """Build an element from power-basis coefficients (rationals or "p/q")."""
        if isinstance(coeffs, (int, Fraction, str)):
            coeffs = [coeffs]
        cs = [to_fraction(c) for c in coeffs]
        if self.is_rational():
            # x is the rational number -f0; reduce to a plain cyclotomic scalar
            x0 = Fraction(-self.poly[0])
            val = sum((c * x0 ** i for i, c in enumerate(cs)), Fraction(0))
            return CycNumber.from_rational(val)
        cs += [Fraction(0)] * (self.degree - len(cs))
        return AlgNum(self, [CycNumber.from_rational(c) for c in cs])

    def gen(self):
        return self.element([0, 1])

    def complex_root(self, prec: int = 53):
        with mpmath.workprec(prec + 20):
            roots = mpmath.polyroots(list(reversed(self.poly)), maxsteps=200, extraprec=prec + 40)
            roots = sorted((mpmath.mpc(r) for r in roots), key=lambda z: (float(z.real), float(z.imag)))
            return roots[self.root_index]

    def to_json(self):
        return list(self.poly)


class AlgNum:
    """Element of Q(zeta_n)[x]/(f): a vector of CycNumber coefficients."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        n = 1
        for c in coeffs:
            if isinstance(c, CycNumber):
                n = n * c.n // gcd(n, c.n)
        cs = [c.lift(n) if isinstance(c, CycNumber) else CycNumber.from_rational(c, n) for c in coeffs]
        d = field.degree
        if len(cs) > d:
            cs = _reduce_rel(field, cs, n)
        cs += [CycNumber.from_rational(0, n)] * (d - len(cs))
        self.coeffs = tuple(cs)

    @property
    def n(self):
        return self.coeffs[0].n

    def _pair(self, other):
        if isinstance(other, AlgNum):
            if other.field != self.field:
                raise ValueError("elements of different coefficient fields")
            return self, other
        if isinstance(other, (int, Fraction, CycNumber)):
            c = other if isinstance(other, CycNumber) else CycNumber.from_rational(other)
            return self, AlgNum(self.field, [c] + [CycNumber.from_rational(0)] * (self.field.degree - 1))
        return None, None

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return AlgNum(self.field, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return AlgNum(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return AlgNum(self.field, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgNum(self.field, [c * other for c in self.coeffs])
        if isinstance(other, CycNumber):
            return AlgNum(self.field, [c * other for c in self.coeffs])
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        d = self.field.degree
        prod = [CycNumber.from_rational(0)] * (2 * d - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] = prod[i + j] + x * y
        return AlgNum(self.field, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = AlgNum(self.field, [CycNumber.from_rational(1)])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return False
        return all(x == y for x, y in zip(a.coeffs, b.coeffs))

    def __hash__(self):
        return hash(tuple(hash(c) for c in self.coeffs))

    def inverse(self):
        n = self.n
        f = [CycNumber.from_rational(c, n) for c in self.field.poly]
        g, s = _poly_inverse_mod([c.lift(n) for c in self.coeffs], f)
        if g is None:
            raise ZeroDivisionError("element is not invertible (zero, or f splits over the cyclotomic field)")
        return AlgNum(self.field, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, CycNumber):
            return self * other.inverse()
        if isinstance(other, AlgNum):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def conjugate_coeffs(self):
        return AlgNum(self.field, [c.conjugate() for c in self.coeffs])

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                parts.append(f"({c})" + ("" if i == 0 else f"*{self.field.name}^{i}"))
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return [c.to_json() if not c.is_rational() else fraction_str(c.coeffs[0]) for c in self.coeffs]


def _reduce_rel(field: NumberField, cs, n):
    f = [Fraction(c) for c in field.poly]
    d = field.degree
    cs = list(cs)
    for i in range(len(cs) - 1, d - 1, -1):
        top = cs[i]
        if top:
            for j in range(d):
                cs[i - d + j] = cs[i - d + j] - top * f[j]
        cs[i] = CycNumber.from_rational(0, n)
    return cs[:d]


# ---------------------------------------------------------------------------
# complex embedding

def embed_complex(x, precision: int = 128):
    """Image of an exact number under zeta_n -> exp(2 pi i/n) (and the chosen root of f).

    Returns an ``mpmath.mpc`` accurate to about 2^(-precision) relative error;
    the computation runs with 20 guard bits.
    """
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    with mpmath.workprec(precision + 20):
        if isinstance(x, (int, Fraction)):
            return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else x)
        if isinstance(x, QuadNumber):
            return x.to_complex(precision)
        if isinstance(x, CycNumber):
            z = mpmath.expjpi(mpmath.mpf(2) / x.n)
            acc = mpmath.mpc(0)
            zp = mpmath.mpc(1)
            for c in x.coeffs:
                if c:
                    acc += zp * (mpmath.mpf(c.numerator) / c.denominator)
                zp *= z
            return +acc
        if isinstance(x, AlgNum):
            r = x.field.complex_root(precision)
            acc = mpmath.mpc(0)
            rp = mpmath.mpc(1)
            for c in x.coeffs:
                acc += rp * embed_complex(c, precision)
                rp *= r
            return +acc
    raise TypeError(f"cannot embed {type(x).__name__}")


# ---------------------------------------------------------------------------
# Dirichlet characters

def _unit_group_generators(m: int) -> list[tuple[int, int]]:
    """Generators of (Z/m)^x with their orders, one cyclic factor at a time (CRT lifted)."""
    gens = []
    fac = factorint(m)
    for p, e in sorted(fac.items()):
        q = p ** e
        rest = m // q
        local = []
        if p == 2:
            if e >= 2:
                local.append((q - 1, 2))
            if e >= 3:
                local.append((5, q // 4))
        else:
            g = _primitive_root_prime_power(p, e)
            local.append((g, q - q // p))
        for g, order in local:
            if rest == 1:
                lifted = g % m
            else:
                # g mod q, 1 mod rest
                inv = pow(rest, -1, q)
                lifted = (1 + rest * ((g - 1) * inv % q)) % m
            gens.append((lifted, order))
    return gens


def _primitive_root_prime_power(p: int, e: int) -> int:
    phi_p = p - 1
    fac = factorint(phi_p)
    for g in range(2, p + 1):
        if all(pow(g, phi_p // r, p) != 1 for r in fac):
            break
    else:
        g = 1
    if e > 1 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


class DirichletChar:
    """Dirichlet character modulo ``modulus`` with values ord-th roots of unity.

    Internally a table t -> exponent e with chi(t) = zeta_order^e (None for non-units).
    Built from generator images of (Z/m)^x.
    """

    def __init__(self, modulus: int, order: int, generator_images: dict):
        self.modulus = m = int(modulus)
        self.order = int(order)
        gens = _unit_group_generators(m)
        imgs = {}
        for g, _ in gens:
            if g in generator_images:
                imgs[g] = int(generator_images[g]) % self.order
            elif str(g) in generator_images:
                imgs[g] = int(generator_images[str(g)]) % self.order
            else:
                imgs[g] = 0
        self.generator_images = imgs
        table: dict[int, int] = {}
        ranges = [range(order_g) for _, order_g in gens]
        for exps in itertools.product(*ranges):
            t = 1 % m
            e = 0
            for (g, _), k in zip(gens, exps):
                t = t * pow(g, k, m) % m
                e += k * imgs[g]
            table[t] = e % self.order
        if m == 1:
            table = {0: 0}
        for (g, og) in gens:
            if (og * imgs[g]) % self.order:
                raise ValueError("generator image incompatible with generator order")
        self._table = table

    # -- constructors
    @classmethod
    def trivial(cls, modulus: int = 1):
        return cls(modulus, 1, {})

    @classmethod
    def from_function(cls, modulus: int, order: int, exponent_of):
        gens = _unit_group_generators(modulus)
        return cls(modulus, order, {g: exponent_of(g) for g, _ in gens})

    @classmethod
    def from_json(cls, obj):
        imgs = {}
        order = int(obj["order"])
        for g, v in obj.get("generator_images", {}).items():
            if isinstance(v, int):
                imgs[int(g)] = v
            else:
                # cyclotomic coefficient vector: recover the exponent
                val = CycNumber(order, [to_fraction(c) for c in v])
                for e in range(order):
                    if zeta(order, e) == val:
                        imgs[int(g)] = e
                        break
                else:
                    raise ValueError(f"generator image {v} is not an {order}-th root of unity")
        return cls(int(obj["modulus"]), order, imgs)

    def to_json(self):
        return {
            "modulus": self.modulus,
            "order": self.order,
            "generator_images": {str(g): zeta(self.order, e).to_json() for g, e in self.generator_images.items()},
        }

    # -- evaluation
    def exponent(self, t: int):
        return self._table.get(t % self.modulus)

    def __call__(self, t: int) -> CycNumber:
        e = self.exponent(t)
        if e is None:
            return CycNumber.from_rational(0)
        if self.order <= 2:
            return CycNumber.from_rational(1 if e == 0 else -1)
        return zeta(self.order, e)

    def value_table(self):
        return {t: self(t) for t in sorted(self._table)}

    def __repr__(self):
        return f"DirichletChar(mod {self.modulus}, order {self.order}, {self.generator_images})"

    def __eq__(self, other):
        if not isinstance(other, DirichletChar) or other.modulus != self.modulus:
            return False
        L = self.order * other.order // gcd(self.order, other.order)
        return all((self._table[t] * (L // self.order) - other._table[t] * (L // other.order)) % L == 0
                   for t in self._table)

    def __hash__(self):
        return hash((self.modulus, tuple(sorted(self._table.items()))))

    # -- structure
    def is_trivial(self):
        return all(e == 0 for e in self._table.values())

    def parity(self) -> int:
        """chi(-1) as +1 or -1."""
        return 1 if self.exponent(-1) == 0 else -1

    def is_even(self):
        return self.parity() == 1

    def conductor(self) -> int:
        m = self.modulus
        for d in sorted(d for d in range(1, m + 1) if m % d == 0):
            if all(e == 0 for t, e in self._table.items() if (t - 1) % d == 0):
                return d
        return m

    def is_primitive(self):
        return self.conductor() == self.modulus

    def exact_order(self) -> int:
        o = 1
        for e in self._table.values():
            k = self.order // gcd(self.order, e)
            o = o * k // gcd(o, k)
        return o

    def primitive(self) -> "DirichletChar":
        f = self.conductor()
        if f == self.modulus:
            return self
        out = {}
        for t, e in self._table.items():
            out.setdefault(t % f, e)
        return DirichletChar.from_function(f, self.order, lambda g: out[g % f])

    def extend(self, modulus: int) -> "DirichletChar":
        """Induced character modulo a multiple of the modulus."""
        if modulus % self.modulus:
            raise ValueError("new modulus must be a multiple")
        return DirichletChar.from_function(modulus, self.order, lambda g: self._table[g % self.modulus])

    def __mul__(self, other: "DirichletChar") -> "DirichletChar":
        m = self.modulus * other.modulus // gcd(self.modulus, other.modulus)
        L = self.order * other.order // gcd(self.order, other.order)
        a, b = L // self.order, L // other.order
        return DirichletChar.from_function(
            m, L, lambda g: self._table[g % self.modulus] * a + other._table[g % other.modulus] * b)

    def __pow__(self, e: int) -> "DirichletChar":
        return DirichletChar.from_function(self.modulus, self.order, lambda g: self._table[g % self.modulus] * e)

    def conjugate(self):
        return self ** -1


def gauss_sum(chi: DirichletChar) -> CycNumber:
    """G(chi) = sum_t chi(t) exp(2 pi i t/m), exactly, in Q(zeta_{lcm(m, ord)})."""
    if not chi.is_primitive():
        raise ValueError("gauss sum requires primitive character")
    m, o = chi.modulus, chi.order
    L = m * o // gcd(m, o)
    raw = [Fraction(0)] * L
    for t, e in chi._table.items():
        raw[(e * (L // o) + t * (L // m)) % L] += 1
    return CycNumber(L, raw)

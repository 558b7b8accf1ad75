"""Fixed-precision p-adic integers Z/p^M, with rational coercion."""

from __future__ import annotations

from fractions import Fraction

__all__ = ["PadicScalar", "hensel_root", "teichmuller"]


class PadicScalar:
    """Residue class mod p^M standing in for an element of Z_p."""

    __slots__ = ("p", "M", "residue")

    def __init__(self, p: int, M: int, residue):
        self.p = int(p)
        self.M = int(M)
        mod = self.p ** self.M
        if isinstance(residue, Fraction):
            if residue.denominator % self.p == 0:
                raise ValueError(f"{residue} is not p-integral")
            residue = residue.numerator * pow(residue.denominator, -1, mod)
        self.residue = int(residue) % mod

    @property
    def modulus(self):
        return self.p ** self.M

    def _coerce(self, other):
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise ValueError("mixed primes")
            if other.M != self.M:
                M = min(self.M, other.M)
                return PadicScalar(self.p, M, self.residue), PadicScalar(self.p, M, other.residue)
            return self, other
        if isinstance(other, (int, Fraction)):
            return self, PadicScalar(self.p, self.M, other)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return PadicScalar(a.p, a.M, a.residue + b.residue)

    __radd__ = __add__

    def __neg__(self):
        return PadicScalar(self.p, self.M, -self.residue)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return PadicScalar(a.p, a.M, a.residue - b.residue)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return PadicScalar(a.p, a.M, a.residue * b.residue)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.residue % self.p != 0

    def valuation(self) -> int:
        if self.residue == 0:
            return self.M
        v, r = 0, self.residue
        while r % self.p == 0:
            r //= self.p
            v += 1
        return v

    def inverse(self) -> "PadicScalar":
        if not self.is_unit():
            raise ZeroDivisionError("not a p-adic unit")
        return PadicScalar(self.p, self.M, pow(self.residue, -1, self.modulus))

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PadicScalar(self.p, self.M, pow(self.residue, e, self.modulus))

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return False
        return a.residue == b.residue

    def __hash__(self):
        return hash((self.p, self.M, self.residue))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} + O({self.p}^{self.M})"


def hensel_root(coeffs, p: int, M: int, start: int):
    """Lift a simple root ``start`` mod p of the integer polynomial ``coeffs`` (low to high) to p^M."""
    mod = p ** M

    def ev(cs, x, m):
        acc = 0
        for c in reversed(cs):
            acc = (acc * x + c) % m
        return acc

    deriv = [i * c for i, c in enumerate(coeffs)][1:]
    if ev(deriv, start, p) == 0:
        raise ValueError("root is not simple mod p")
    x, prec = start % p, 1
    while prec < M:
        prec = min(2 * prec, M)
        m = p ** prec
        x = (x - ev(coeffs, x, m) * pow(ev(deriv, x, m), -1, m)) % m
    return PadicScalar(p, M, x % mod)


def teichmuller(p: int, u: int, M: int) -> PadicScalar:
    """The (p-1)-st root of unity congruent to u mod p, by iterating x -> x^p."""
    if u % p == 0:
        raise ValueError("teichmuller lift needs a unit")
    mod = p ** M
    x = u % mod
    while True:
        y = pow(x, p, mod)
        if y == x:
            return PadicScalar(p, M, x)
        x = y

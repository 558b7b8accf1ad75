from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from asai.padic import PadicScalar, hensel_root, teichmuller

primes = st.sampled_from([3, 5, 7, 11])


@given(primes, st.integers(1, 30), st.integers(), st.integers(), st.integers())
def test_ring_axioms(p, M, a, b, c):
    x, y, z = (PadicScalar(p, M, v) for v in (a, b, c))
    assert x * (y + z) == x * y + x * z
    assert (x - y) + y == x
    assert (x * y).residue == (a * b) % p ** M


@given(primes, st.integers(1, 30), st.integers())
def test_inverse_of_units(p, M, a):
    x = PadicScalar(p, M, a)
    if x.is_unit():
        assert x * x.inverse() == 1
    else:
        with pytest.raises(ZeroDivisionError):
            x.inverse()


def test_rational_coercion_and_valuation():
    x = PadicScalar(5, 10, Fraction(3, 7))
    assert x * 7 == 3
    assert PadicScalar(5, 10, 250).valuation() == 3
    assert PadicScalar(5, 10, 0).valuation() == 10
    with pytest.raises(ValueError):
        PadicScalar(5, 10, Fraction(1, 5))


def test_mixed_precision_truncates():
    a, b = PadicScalar(3, 5, 100), PadicScalar(3, 8, 100)
    assert (a + b).M == 5


def test_teichmuller_examples():
    assert teichmuller(5, 1, 10) == 1
    x = teichmuller(5, 2, 5)
    assert x.residue % 5 == 2 and x ** 4 == 1
    assert teichmuller(7, 6, 12) == -1
    with pytest.raises(ValueError):
        teichmuller(5, 10, 4)


@given(primes, st.integers(1, 40), st.integers(1, 10 ** 6))
def test_teichmuller_property(p, M, u):
    if u % p == 0:
        return
    w = teichmuller(p, u, M)
    assert w ** (p - 1) == 1 and (w.residue - u) % p == 0


def test_hensel_lift_unit_root_of_x2_minus_x_plus_5():
    alpha = hensel_root([5, -1, 1], 5, 20, 1)
    assert alpha * alpha - alpha + 5 == 0
    assert alpha.is_unit()
    with pytest.raises(ValueError):
        hensel_root([1, -2, 1], 5, 10, 1)

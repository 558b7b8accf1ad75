import random

import numpy as np
import pytest

from asai.iwasawa import (
    GroupRingElt, HeckeModule, IwasawaMeasure, PseudoMeasure, TowerError, integrate, load_tower,
    measure_from_tower, ordinary_projector, remove_smoothing, smoothing_factor, unit_group,
)
from asai.iwasawa import _matinv, _matpow
from asai.numfield import DirichletChar
from asai.padic import teichmuller

P, M = 5, 6
MOD = P ** M
TRIV = DirichletChar.trivial(1)
OMEGA = DirichletChar(5, 4, {2: 1})     # 2 -> i, realised as the Teichmuller character


def teich_oracle(t, p=P, M=M):
    return pow(t, p ** (M - 1), p ** M)


def centred(t, m):
    return t if 2 * t < m else t - m


def test_projector_diagonal():
    e = ordinary_projector(HeckeModule(P, M, [[1 + P, 0], [0, P]]))
    assert np.array_equal(e, np.array([[1, 0], [0, 0]], dtype=object))


def test_projector_of_non_ordinary_is_zero():
    e = ordinary_projector(HeckeModule(7, 10, [[7, 0], [0, 7]]))
    assert not np.any(e)


def test_projector_conjugated():
    rng = random.Random(1)
    p, Mx = 3, 12
    mod = p ** Mx
    while True:
        Q = np.array([[rng.randrange(mod) for _ in range(4)] for _ in range(4)], dtype=object)
        try:
            Qi = _matinv(Q, p, Mx)
            break
        except ZeroDivisionError:
            pass
    B = np.array([[2, 5, 0, 0], [0, 4, 0, 0], [0, 0, 3, 1], [0, 0, 0, 9]], dtype=object)
    H = HeckeModule(p, Mx, Q.dot(B).dot(Qi) % mod)
    e = ordinary_projector(H)
    expect = Q.dot(np.diag([1, 1, 0, 0]).astype(object)).dot(Qi) % mod
    assert np.array_equal(e, expect)
    assert np.array_equal(e.dot(H.U) % mod, H.U.dot(e) % mod)


def test_even_prime_rejected():
    with pytest.raises(ValueError):
        HeckeModule(2, 4, [[1]])


def test_unit_group_orders():
    for r in range(1, 4):
        G = unit_group(P, r)
        assert G.order == (P - 1) * P ** (r - 1)
        assert sorted(G.elements) == [t for t in range(P ** r) if t % P]


def _tower(H, top, levels):
    mod = H.modulus
    I = np.identity(H.rank, dtype=object)
    total = np.dot(_matinv((I - _matinv(H.U, H.p, H.M)) % mod, H.p, H.M), top.project(0).values[0]) % mod
    towers = {0: GroupRingElt(H.p, 0, H.M, total.reshape(1, H.rank))}
    for r in range(1, levels + 1):
        towers[r] = top.project(r).apply_matrix(_matpow(H.U, r, mod))
    return towers


def test_dirac_tower():
    H = HeckeModule(P, M, [[2]])
    top = GroupRingElt.from_dict(P, 4, M, {1: 1})
    mu = measure_from_tower(H, _tower(H, top, 3))
    assert mu.certified
    for r in range(1, 4):
        assert mu.levels[r] == GroupRingElt.from_dict(P, r, M, {1: 1})


def test_tower_round_trip_projects_ordinary_part():
    rng = random.Random(4)
    H = HeckeModule(P, M, [[2, 1], [0, 3]])
    top = GroupRingElt.zeros(P, 4, M, 2)
    top.values[:] = np.array([[rng.randrange(MOD) for _ in range(2)] for _ in range(top.group.order)], dtype=object)
    mu = measure_from_tower(H, _tower(H, top, 3))
    e = ordinary_projector(H)
    assert mu.certified and mu.is_compatible()
    for r in (1, 2, 3):
        assert mu.levels[r] == top.project(r).apply_matrix(e)


def test_violated_tower():
    H = HeckeModule(P, M, [[2]])
    towers = _tower(H, GroupRingElt.from_dict(P, 4, M, {1: 1, 7: 3}), 3)
    towers[2].values[0, 0] += 1
    with pytest.raises(TowerError):
        measure_from_tower(H, towers)


def test_tower_needs_consecutive_levels():
    H = HeckeModule(P, M, [[2]])
    towers = _tower(H, GroupRingElt.from_dict(P, 4, M, {1: 1}), 3)
    del towers[1]
    with pytest.raises(ValueError):
        measure_from_tower(H, towers)


def test_bundled_tower_loads():
    from importlib.resources import files
    mod, towers = load_tower(files("asai") / "data" / "tower_example.json")
    assert measure_from_tower(mod, towers).certified


@pytest.mark.parametrize("t", [1, 2, 7, 13, 24, 101])
@pytest.mark.parametrize("j", [0, 1, 3])
def test_integrate_point_mass(t, j):
    r = 3
    mu = IwasawaMeasure.from_top(GroupRingElt.from_dict(P, r, M, {t % P ** r: 1}))
    got = integrate(mu, TRIV, j)
    assert int(got[0, 0]) == pow(centred(t % P ** r, P ** r), j, MOD)
    got = integrate(mu, OMEGA, j)
    assert int(got[0, 0]) == teich_oracle(t) * pow(centred(t % P ** r, P ** r), j, MOD) % MOD


def test_teichmuller_character_values():
    for t in range(1, 25):
        if t % P:
            assert teichmuller(P, t, M).residue == teich_oracle(t)


def test_odd_character_vanishes_on_even_measure():
    rng = random.Random(9)
    r = 3
    G = unit_group(P, r)
    vals = {}
    for t in G.elements:
        if t not in vals:
            vals[t] = vals[G.modulus - t] = rng.randrange(MOD)
    mu = IwasawaMeasure.from_top(GroupRingElt.from_dict(P, r, M, vals))
    for chi in (OMEGA, DirichletChar(25, 20, {2: 1})):
        for j in (0, 2, 4):
            assert not np.any(integrate(mu, chi, j))
    # the even moments of an even measure need not vanish
    assert np.any(integrate(mu, OMEGA, 1))


def test_wild_character_lands_in_cyclotomic_ring():
    mu = IwasawaMeasure.from_top(GroupRingElt.from_dict(P, 2, M, {6: 1}))
    chi = DirichletChar(25, 5, {2: 1})      # order 5, so values are 5th roots of unity
    val = integrate(mu, chi, 0)
    assert val.shape == (1, 4)
    assert not np.array_equal(val[0], np.array([1, 0, 0, 0], dtype=object))


def test_insufficient_depth():
    mu = IwasawaMeasure.from_top(GroupRingElt.from_dict(P, 2, M, {1: 1}))
    with pytest.raises(TowerError):
        integrate(mu, DirichletChar(125, 100, {2: 1}), 0)
    with pytest.raises(TowerError):
        mu.level(3)


def test_smoothing_factor_evaluation():
    c, k = 7, 2
    eps = DirichletChar(3, 2, {2: 1})
    f = smoothing_factor(c, k, eps, P, M)
    for j in range(4):
        val = int(f.evaluate(None, j)[0])
        eps_c = 1 if c % 3 == 1 else -1
        expect = (c * c - pow(c, -2 * k, MOD) * eps_c * pow(c * c, j, MOD)) % MOD
        assert val == expect


def test_smoothing_factor_rejects_bad_c():
    with pytest.raises(ValueError):
        smoothing_factor(10, 0, None, P, M)
    with pytest.raises(ValueError):
        smoothing_factor(1, 0, None, P, M)


def test_smoothing_factors_commute():
    rng = random.Random(2)
    mu = IwasawaMeasure.from_top(GroupRingElt.from_dict(P, 3, M, {t: rng.randrange(MOD) for t in unit_group(P, 3).elements}))
    fc, fd = smoothing_factor(11, 1, None, P, M), smoothing_factor(13, 1, None, P, M)
    assert fc.act(fd.act(mu)) == fd.act(fc.act(mu))


@pytest.mark.parametrize("c", [11, 29, 41])
def test_remove_smoothing_recovers_measure(c):
    rng = random.Random(c)
    eps = DirichletChar(3, 2, {2: 1})
    base = IwasawaMeasure.from_top(GroupRingElt.from_dict(P, 3, M, {t: rng.randrange(MOD) for t in unit_group(P, 3).elements}))
    out = remove_smoothing(smoothing_factor(c, 2, eps, P, M).act(base), c, 2, eps)
    assert isinstance(out, IwasawaMeasure) and out == base


def test_remove_smoothing_independent_of_c():
    rng = random.Random(8)
    eps = DirichletChar(3, 2, {2: 1})
    base = IwasawaMeasure.from_top(GroupRingElt.from_dict(P, 2, M, {t: rng.randrange(MOD) for t in unit_group(P, 2).elements}))
    a = remove_smoothing(smoothing_factor(11, 2, eps, P, M).act(base), 11, 2, eps)
    b = remove_smoothing(smoothing_factor(29, 2, eps, P, M).act(base), 29, 2, eps)
    assert a == b


def test_trivial_nebentypus_gives_pseudo_measure():
    Mx = 3
    mod = P ** Mx
    rng = random.Random(3)
    base = IwasawaMeasure.from_top(GroupRingElt.from_dict(P, Mx, Mx, {t: rng.randrange(mod) for t in unit_group(P, Mx).elements}))
    c = 2
    fac = smoothing_factor(c, 0, None, P, Mx)
    assert not fac.is_invertible()
    pm = remove_smoothing(fac.act(base), c, 0)
    assert isinstance(pm, PseudoMeasure)
    assert pm.poles[0]["power"] == 1
    # away from the poles the quotient reproduces the unsmoothed moment
    for j in (0, 2, 4):
        got = int(pm.evaluate(None, j)[0, 0])
        assert got == int(integrate(base, TRIV, j)[0, 0]) % mod
    for j in (1, 3):          # c^2 = c^{2j} mod p
        with pytest.raises(ZeroDivisionError):
            pm.evaluate(None, j)

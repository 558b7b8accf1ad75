"""
Finite-level Iwasawa algebras and p-adic measures.

Everything is exact modulo p^M.  The group (Z/p^r)^x is cyclic for odd p, so
group-ring elements are stored as coefficient arrays indexed by discrete
logarithms with respect to a fixed primitive root; module-valued measures
carry a vector in (Z/p^M)^n per group element.

Character values of p-power order live in

    Lambda = (Z/p^M)[T] / Phi_{p^a}(T),

where T plays the role of a primitive p^a-th root of unity and prime-to-p
roots of unity are realised through Teichmuller lifts.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .numfield import DirichletChar, factorint, cyclotomic_poly, _unit_group_generators
from .padic import PadicScalar, teichmuller

__all__ = [
    "PadicScalar", "teichmuller", "HeckeModule", "GroupRingElt", "IwasawaMeasure", "PseudoMeasure",
    "GroupAlgebraElt", "CharRing", "ordinary_projector", "measure_from_tower", "integrate",
    "smoothing_factor", "remove_smoothing", "TowerError", "load_tower", "unit_group",
    "ordinary_inverse_power",
]


class TowerError(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrices mod p^M

def _mat(A, mod):
    return np.array([[int(x) % mod for x in row] for row in A], dtype=object)


def _matmul(A, B, mod):
    return np.dot(A, B) % mod


def _matpow(A, e, mod):
    n = A.shape[0]
    out = np.identity(n, dtype=object)
    base = A.copy()
    while e:
        if e & 1:
            out = _matmul(out, base, mod)
        base = _matmul(base, base, mod)
        e >>= 1
    return out


def _matinv(A, p, M):
    """Inverse of a matrix over Z/p^M (det must be a unit)."""
    mod = p ** M
    n = A.shape[0]
    aug = np.concatenate([A % mod, np.identity(n, dtype=object)], axis=1)
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r, c] % p), None)
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible mod p")
        aug[[c, piv]] = aug[[piv, c]]
        inv = pow(int(aug[c, c]), -1, mod)
        aug[c] = (aug[c] * inv) % mod
        for r in range(n):
            if r != c and aug[r, c] % mod:
                aug[r] = (aug[r] - aug[r, c] * aug[c]) % mod
    return aug[:, n:]


@dataclass
class HeckeModule:
    """A free (Z/p^M)-module of rank n with a Hecke operator U and an optional pairing."""

    p: int
    M: int
    U: np.ndarray
    pairing: np.ndarray | None = None
    perfect: bool = False

    def __post_init__(self):
        if self.p == 2 or any(self.p % q == 0 for q in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError("p must be an odd prime")
        self.U = _mat(self.U, self.modulus)
        if self.pairing is not None:
            self.pairing = _mat(self.pairing, self.modulus)

    @property
    def modulus(self):
        return self.p ** self.M

    @property
    def rank(self):
        return self.U.shape[0]

    def apply(self, A, v):
        return np.dot(A, np.asarray(v, dtype=object)) % self.modulus


def ordinary_projector(mod: HeckeModule, max_iter: int = 400):
    """e = lim U^{n!}, computed by A <- A^n until A is a stable idempotent."""
    m = mod.modulus
    A = mod.U.copy()
    for n in range(2, max_iter):
        B = _matpow(A, n, m)
        if np.array_equal(B, A) and np.array_equal(_matmul(A, A, m), A):
            return A
        A = B
    raise ArithmeticError("ordinary projector did not stabilise; increase iterations or precision")


def ordinary_inverse_power(mod: HeckeModule, e, r: int):
    """U^{-r} e, computed as (U e + 1 - e)^{-r} e."""
    m = mod.modulus
    n = mod.rank
    I = np.identity(n, dtype=object)
    V = (_matmul(mod.U, e, m) + I - e) % m
    Vi = _matinv(V, mod.p, mod.M)
    return _matmul(_matpow(Vi, r, m), e, m)


# ---------------------------------------------------------------------------
# the groups (Z/p^r)^x

class unit_group:
    """(Z/p^r)^x with a discrete-log indexing through a primitive root."""

    _cache: dict = {}

    def __new__(cls, p, r):
        key = (p, r)
        if key not in cls._cache:
            obj = super().__new__(cls)
            obj._init(p, r)
            cls._cache[key] = obj
        return cls._cache[key]

    def _init(self, p, r):
        self.p, self.r = p, r
        self.modulus = p ** r
        self.order = (p - 1) * p ** (r - 1) if r >= 1 else 1
        if r == 0:
            self.gen = 0
            self.elements = [0]
            self.log = {0: 0}
            return
        g = _primitive_root(p)
        if r > 1 and pow(g, p - 1, p * p) == 1:
            g += p
        self.gen = g
        self.elements = []
        x = 1
        for _ in range(self.order):
            self.elements.append(x)
            x = x * g % self.modulus
        self.log = {t: i for i, t in enumerate(self.elements)}

    def index(self, t: int) -> int:
        return self.log[t % self.modulus] if self.r else 0


def _primitive_root(p):
    fac = factorint(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in fac):
            return g
    return 1


# ---------------------------------------------------------------------------
# group-ring elements and measures

@dataclass
class GroupRingElt:
    """Element of (Z/p^M)[(Z/p^r)^x] (scalars) or of module (x) group ring.

    ``values`` has shape (order, rank); row i belongs to the group element G.elements[i].
    """

    p: int
    r: int
    M: int
    values: np.ndarray

    @property
    def group(self):
        return unit_group(self.p, self.r)

    @property
    def rank(self):
        return self.values.shape[1]

    @classmethod
    def zeros(cls, p, r, M, rank=1):
        G = unit_group(p, r)
        return cls(p, r, M, np.zeros((G.order, rank), dtype=object))

    @classmethod
    def from_dict(cls, p, r, M, coeffs: dict, rank=1):
        out = cls.zeros(p, r, M, rank)
        G = out.group
        for t, v in coeffs.items():
            vec = np.array([int(x) for x in (v if isinstance(v, (list, tuple, np.ndarray)) else [v])], dtype=object)
            out.values[G.index(int(t))] = (out.values[G.index(int(t))] + vec) % p ** M
        return out

    def coeff(self, t):
        return self.values[self.group.index(t)]

    def project(self, r_new: int) -> "GroupRingElt":
        """The natural map to level r_new <= r (summing fibres)."""
        if r_new > self.r:
            raise ValueError("cannot project upwards")
        out = GroupRingElt.zeros(self.p, r_new, self.M, self.rank)
        G, H = self.group, out.group
        mod = self.p ** self.M
        for i, t in enumerate(G.elements):
            j = H.index(t % H.modulus) if r_new else 0
            out.values[j] = (out.values[j] + self.values[i]) % mod
        return out

    def apply_matrix(self, A) -> "GroupRingElt":
        mod = self.p ** self.M
        return GroupRingElt(self.p, self.r, self.M, np.dot(self.values, A.T) % mod)

    def __add__(self, other):
        return GroupRingElt(self.p, self.r, self.M, (self.values + other.values) % self.p ** self.M)

    def __sub__(self, other):
        return GroupRingElt(self.p, self.r, self.M, (self.values - other.values) % self.p ** self.M)

    def __eq__(self, other):
        return (isinstance(other, GroupRingElt) and (self.p, self.r, self.M) == (other.p, other.r, other.M)
                and np.array_equal(self.values % self.p ** self.M, other.values % other.p ** other.M))

    def translate(self, g: int) -> "GroupRingElt":
        """Push forward along x -> g x."""
        G = self.group
        out = GroupRingElt.zeros(self.p, self.r, self.M, self.rank)
        for i, t in enumerate(G.elements):
            out.values[G.index(t * g)] = self.values[i]
        return out

    def convolve(self, other: "GroupRingElt") -> "GroupRingElt":
        """Product in the group ring; ``other`` must be scalar-valued."""
        G = self.group
        n = G.order
        mod = self.p ** self.M
        out = np.zeros_like(self.values)
        b = other.values[:, 0]
        for j in range(n):
            if b[j] % mod:
                out = (out + np.roll(self.values, j, axis=0) * int(b[j])) % mod
        return GroupRingElt(self.p, self.r, self.M, out)


@dataclass
class IwasawaMeasure:
    """A compatible family of group-ring elements, levels r = 1..r_max."""

    p: int
    M: int
    levels: dict
    certified: bool = False
    module: HeckeModule | None = None

    @property
    def r_max(self):
        return max(self.levels)

    def level(self, r):
        if r in self.levels:
            return self.levels[r]
        if r < self.r_max:
            return self.levels[self.r_max].project(r)
        raise TowerError("insufficient tower depth")

    def is_compatible(self) -> bool:
        rs = sorted(self.levels)
        return all(self.levels[b].project(a) == self.levels[a] for a, b in zip(rs, rs[1:]))

    @classmethod
    def from_top(cls, top: GroupRingElt, module=None):
        levels = {r: top.project(r) for r in range(1, top.r)}
        levels[top.r] = top
        return cls(top.p, top.M, levels, True, module)

    def translate(self, g):
        return IwasawaMeasure(self.p, self.M, {r: v.translate(g) for r, v in self.levels.items()}, self.certified, self.module)

    def apply_matrix(self, A):
        return IwasawaMeasure(self.p, self.M, {r: v.apply_matrix(A) for r, v in self.levels.items()}, self.certified, self.module)

    def __eq__(self, other):
        return isinstance(other, IwasawaMeasure) and sorted(self.levels) == sorted(other.levels) and all(
            self.levels[r] == other.levels[r] for r in self.levels)


def measure_from_tower(mod: HeckeModule, towers: dict) -> IwasawaMeasure:
    """Normalise a U-compatible tower Phi^r (r = 0..r_max) into the measure U^{-r} e Phi^r.

    The tower must satisfy pi_{r+1}(Phi^{r+1}) = U Phi^r for r >= 1 and
    pi_1(Phi^1) = (U - 1) Phi^0, exactly mod p^M.
    """
    m = mod.modulus
    rs = sorted(towers)
    if rs[0] != 0 or rs != list(range(0, rs[-1] + 1)) or len(rs) < 2:
        raise ValueError("tower must contain consecutive levels 0..r_max with r_max >= 1")
    I = np.identity(mod.rank, dtype=object)
    for r in rs[:-1]:
        lower = towers[r]
        proj = towers[r + 1].project(r)
        A = mod.U if r >= 1 else (mod.U - I) % m
        if not proj == lower.apply_matrix(A):
            raise TowerError(f"norm relation failed at level {r}")
    e = ordinary_projector(mod)
    levels = {}
    for r in rs[1:]:
        levels[r] = towers[r].apply_matrix(ordinary_inverse_power(mod, e, r))
    mu = IwasawaMeasure(mod.p, mod.M, levels, False, mod)
    mu.certified = mu.is_compatible()
    return mu


def load_tower(path):
    """Read {p, M, module_rank, U, levels: [{r, coeffs: {t: vector}}]}."""
    with open(path) as fh:
        obj = json.load(fh)
    p, M = int(obj["p"]), int(obj["M"])
    mod = HeckeModule(p, M, np.array(obj["U"], dtype=object))
    towers = {}
    for lev in obj["levels"]:
        r = int(lev["r"])
        towers[r] = GroupRingElt.from_dict(p, r, M, {int(t): v for t, v in lev["coeffs"].items()}, mod.rank)
    return mod, towers


# ---------------------------------------------------------------------------
# character values

class CharRing:
    """Lambda = (Z/p^M)[T]/Phi_{p^a}(T); elements are coefficient arrays of length phi(p^a)."""

    def __init__(self, p, M, a):
        self.p, self.M, self.a = p, M, a
        self.mod = p ** M
        self.poly = [int(c) for c in cyclotomic_poly(p ** a)] if a else [-1, 1]
        self.dim = len(self.poly) - 1

    def zero(self):
        return np.zeros(self.dim, dtype=object)

    def scalar(self, x):
        v = self.zero()
        v[0] = int(x) % self.mod
        return v

    def T_power(self, e):
        """T^e reduced; T is a primitive p^a-th root of unity in Lambda."""
        if self.a == 0:
            return self.scalar(1)
        n = self.p ** self.a
        raw = [0] * n
        raw[e % n] = 1
        return self.reduce(raw)

    def reduce(self, raw):
        raw = [int(x) for x in raw]
        d = self.dim
        for i in range(len(raw) - 1, d - 1, -1):
            top = raw[i]
            if top:
                for j in range(d):
                    raw[i - d + j] -= top * self.poly[j]
                raw[i] = 0
        out = self.zero()
        for i in range(min(d, len(raw))):
            out[i] = raw[i] % self.mod
        return out

    def mul(self, x, y):
        raw = [0] * (2 * self.dim - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        raw[i + j] += int(a) * int(b)
        return self.reduce(raw)


def _char_embedding(chi: DirichletChar, p: int, M: int):
    """Return (ring, value) where value(t) is chi(t) inside Lambda."""
    order = chi.exact_order()
    pa = 1
    while order % (pa * p) == 0:
        pa *= p
    d = order // pa
    if (p - 1) % d:
        raise ValueError("prime-to-p part of the character order must divide p - 1")
    a = 0
    while p ** a < pa:
        a += 1
    R = CharRing(p, M, a)
    g = _primitive_root(p)
    omega = teichmuller(p, g, M).residue
    zeta_d = pow(omega, (p - 1) // d, R.mod)
    # zeta_order = zeta_d^A zeta_pa^B with A pa + B d = 1 mod order
    A = pow(pa, -1, d) if d > 1 else 0
    B = pow(d, -1, pa) if pa > 1 else 0
    L = chi.order

    def value(t):
        e = chi.exponent(t)
        if e is None:
            return R.zero()
        # chi(t) = zeta_L^e = zeta_order^{e * order / L}
        f = e * order // L
        v = R.scalar(pow(zeta_d, (A * f) % d, R.mod) if d > 1 else 1)
        return R.mul(v, R.T_power(B * f))

    return R, value


def integrate(mu: IwasawaMeasure, chi: DirichletChar, j: int, level=None):
    """Riemann sum of chi(x) x^j against mu at ``level`` (default: the top level).

    Sample points are the centred representatives of (Z/p^level)^x.  Returns
    an array of shape (rank, dim Lambda).  Exact mod p^M for j = 0; for j > 0
    the Riemann sum is accurate modulo p^min(M, level).
    """
    p, M = mu.p, mu.M
    mod = p ** M
    m = chi.modulus
    r_chi = 0
    while m % p == 0:
        m //= p
        r_chi += 1
    if m != 1:
        raise ValueError("character must have p-power modulus")
    if r_chi > mu.r_max or (level is not None and level > mu.r_max):
        raise TowerError("insufficient tower depth")
    lev = level if level is not None else mu.r_max
    lev = max(lev, r_chi, 1)
    elt = mu.level(lev)
    R, val = _char_embedding(chi, p, M)
    out = np.zeros((elt.rank, R.dim), dtype=object)
    G = elt.group
    for i, t in enumerate(G.elements):
        row = elt.values[i]
        if not any(int(x) % mod for x in row):
            continue
        cv = val(t)
        if not any(cv):
            continue
        # centred representative, so that x -> -x permutes the sample points exactly
        w = pow(t if 2 * t < G.modulus else t - G.modulus, j, mod)
        for a in range(elt.rank):
            if row[a]:
                out[a] = (out[a] + cv * (int(row[a]) * w)) % mod
    return out


# ---------------------------------------------------------------------------
# smoothing factors

@dataclass
class GroupAlgebraElt:
    """Finite combination sum coeff_g [g] with g a p-adic unit (an integer prime to p)."""

    p: int
    M: int
    terms: dict          # g -> coefficient mod p^M

    def evaluate(self, chi: DirichletChar | None, j: int):
        """Value at the character x -> chi(x) x^j, in Lambda."""
        mod = self.p ** self.M
        if chi is None:
            chi = DirichletChar.trivial(1)
        R, val = _char_embedding(chi, self.p, self.M)
        out = R.zero()
        for g, c in self.terms.items():
            out = (out + val(g) * (int(c) * pow(g, j, mod))) % mod
        return out

    def at_level(self, r: int) -> GroupRingElt:
        out = GroupRingElt.zeros(self.p, r, self.M, 1)
        for g, c in self.terms.items():
            i = out.group.index(g)
            out.values[i, 0] = (out.values[i, 0] + c) % self.p ** self.M
        return out

    def act(self, mu: IwasawaMeasure) -> IwasawaMeasure:
        levels = {}
        mod = self.p ** self.M
        for r, v in mu.levels.items():
            acc = GroupRingElt.zeros(self.p, r, self.M, v.rank)
            for g, c in self.terms.items():
                acc = acc + GroupRingElt(self.p, r, self.M, (v.translate(g).values * int(c)) % mod)
            levels[r] = acc
        return IwasawaMeasure(self.p, self.M, levels, mu.certified, mu.module)

    def component_values(self):
        """Values mod p at the characters omega^i, i = 0..p-2 (omega = Teichmuller)."""
        p = self.p
        return [sum(int(c) * pow(g, i, p) for g, c in self.terms.items()) % p for i in range(p - 1)]

    def is_invertible(self) -> bool:
        return all(v % self.p for v in self.component_values())


def _eps_value(eps, d, p, M):
    if eps is None:
        return 1
    if callable(eps) and not isinstance(eps, DirichletChar):
        return int(eps(d)) % p ** M
    if isinstance(eps, DirichletChar):
        e = eps.exponent(d)
        if e is None:
            return 0
        if e == 0:
            return 1
        order = eps.order
        if (p - 1) % (order // gcd(order, e)):
            raise ValueError("nebentypus values must lie in mu_{p-1}")
        omega = teichmuller(p, _primitive_root(p), M).residue
        # fix zeta_order -> omega^{(p-1)/order'} compatibly
        o = eps.exact_order()
        z = pow(omega, (p - 1) // o, p ** M)
        return pow(z, e * o // order, p ** M)
    return int(eps) % p ** M


def smoothing_factor(c: int, k: int, eps_c, p: int, M: int) -> GroupAlgebraElt:
    """c^2 [1] - c^{-2k} eps(c) [c^2]."""
    if c <= 1 or c % p == 0:
        raise ValueError("need c > 1 prime to p")
    mod = p ** M
    e = _eps_value(eps_c, c, p, M) if not isinstance(eps_c, int) else eps_c % mod
    cinv = pow(c, -1, mod)
    terms = {1: c * c % mod}
    g = c * c
    terms[g] = (terms.get(g, 0) - pow(cinv, 2 * k, mod) * e) % mod
    return GroupAlgebraElt(p, M, terms)


def _group_ring_inverse(f: GroupRingElt) -> GroupRingElt:
    """Inverse in (Z/p^M)[(Z/p^r)^x]: f^{|G|-1} mod p, then Newton iteration."""
    p, r, M = f.p, f.r, f.M
    G = f.group
    n = G.order

    def mul(a, b, mod):
        out = np.zeros(n, dtype=object)
        for j in range(n):
            if b[j] % mod:
                out = (out + np.roll(a, j) * int(b[j])) % mod
        return out

    # work in coordinates: index i <-> gen^i, so the group ring is cyclic
    a = np.array([int(x) for x in f.values[:, 0]], dtype=object)
    one = np.zeros(n, dtype=object)
    one[0] = 1
    # inverse mod p by exponentiation
    e = n - 1
    inv = one.copy()
    base = a % p
    while e:
        if e & 1:
            inv = mul(inv, base, p)
        base = mul(base, base, p)
        e >>= 1
    if not np.array_equal(mul(inv, a, p), one):
        raise ZeroDivisionError("group-ring element is not a unit")
    prec = 1
    while prec < M:
        prec = min(2 * prec, M)
        mod = p ** prec
        inv = mul(inv, (2 * one - mul(a, inv, mod)) % mod, mod)
    out = GroupRingElt.zeros(p, r, M, 1)
    out.values[:, 0] = inv % p ** M
    return out


@dataclass
class PseudoMeasure:
    numerator: IwasawaMeasure
    denominator: GroupAlgebraElt
    poles: list = field(default_factory=list)

    def evaluate(self, chi, j, level=None):
        num = integrate(self.numerator, chi if chi is not None else DirichletChar.trivial(1), j, level)
        den = self.denominator.evaluate(chi, j)
        R, _ = _char_embedding(chi if chi is not None else DirichletChar.trivial(1), self.numerator.p, self.numerator.M)
        if R.dim != 1:
            raise NotImplementedError("pseudo-measure evaluation implemented for characters of order prime to p")
        d = int(den[0])
        if d % self.numerator.p == 0:
            raise ZeroDivisionError("character lies at a possible pole")
        inv = pow(d, -1, R.mod)
        return (num * inv) % R.mod


def remove_smoothing(mu_c: IwasawaMeasure, c: int, k: int, eps=None):
    """Divide a c-smoothed measure by its smoothing factor.

    ``mu_c`` may also be a dict {c: measure} of several smoothings of the same
    measure; the first c whose factor is a unit of the Iwasawa algebra is used.
    Otherwise a :class:`PseudoMeasure` is returned whose possible poles are the
    characters z -> z^{k+1} nu(z) with nu^2 = eps^{-1}.
    """
    candidates = mu_c if isinstance(mu_c, dict) else {c: mu_c}
    first = None
    for cc, mu in candidates.items():
        fac = smoothing_factor(cc, k, eps, mu.p, mu.M)
        first = first or (cc, mu, fac)
        if fac.is_invertible():
            levels = {}
            for r, v in mu.levels.items():
                inv = _group_ring_inverse(fac.at_level(r))
                levels[r] = v.convolve(inv)
            return IwasawaMeasure(mu.p, mu.M, levels, mu.certified, mu.module)
    cc, mu, fac = first
    poles = [{"power": k + 1, "nu": "nu^2 = eps^{-1}", "nu_chars": _square_roots_of_inverse(eps)}]
    return PseudoMeasure(mu, fac, poles)


def _square_roots_of_inverse(eps):
    """Characters nu of the same modulus with nu^2 = eps^{-1} (as JSON)."""
    if eps is None:
        return [DirichletChar.trivial(1).to_json()]
    if not isinstance(eps, DirichletChar):
        return []
    inv = eps ** -1
    L = 2 * eps.order
    gens = _unit_group_generators(eps.modulus)
    out = []
    for imgs in itertools.product(*[range(L) for _ in gens]):
        try:
            nu = DirichletChar(eps.modulus, L, {g: e for (g, _), e in zip(gens, imgs)})
        except ValueError:
            continue
        if nu * nu == inv:
            out.append(nu.to_json())
    return out

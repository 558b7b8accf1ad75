"""
Hecke eigenvalue data for Bianchi eigenforms.

A :class:`BianchiEigenData` records, for each rational prime ell that has
data, the primes of O_F above ell with their eigenvalue c(lambda) and
nebentypus value eps(lambda).  Values at prime powers come from the Hecke
recursion

    c(lambda^{r+1}) = c(lambda) c(lambda^r) - eps(lambda) Nm(lambda)^{k+1} c(lambda^{r-1}),

optionally overridden by an explicit list of leading powers (useful at bad
primes).  Eigenvalues at rational integers n are assembled multiplicatively.

Two constructors matter in practice: :func:`base_change` from elliptic
eigenform data and :func:`p_stabilize`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .numfield import (
    CycNumber, AlgNum, NumberField, ImagQuadField, PrimeIdeal, DirichletChar,
    split_prime, factorint, is_prime, to_fraction, fraction_str, embed_complex, kronecker,
)
from .padic import PadicScalar, hensel_root

__all__ = [
    "IdealData", "LocalData", "BianchiEigenData", "EllipticEigenData",
    "base_change", "p_stabilize", "eigenvalue_at", "parse_value", "value_to_json",
    "InsufficientData", "NotOrdinary", "load_eigen_file",
]


class InsufficientData(ValueError):
    pass


class NotOrdinary(ValueError):
    pass


# ---------------------------------------------------------------------------
# (de)serialisation of exact values

def parse_value(obj, coeff_field: Optional[NumberField] = None):
    """Read an exact number from JSON.

    Accepted shapes: ``"p/q"`` or an int (rational); a list of such (power
    basis of the coefficient field); ``{"cyc": n, "coeffs": [...]}``.
    """
    if isinstance(obj, dict):
        return CycNumber(int(obj["cyc"]), [to_fraction(c) for c in obj["coeffs"]])
    if isinstance(obj, (str, int, Fraction)):
        return CycNumber.from_rational(to_fraction(obj))
    if isinstance(obj, list):
        if coeff_field is None:
            if len(obj) != 1:
                raise ValueError("vector value without a coefficient field")
            return CycNumber.from_rational(to_fraction(obj[0]))
        return coeff_field.element(obj)
    raise TypeError(f"cannot parse value {obj!r}")


def value_to_json(x):
    if isinstance(x, (int, Fraction)):
        return fraction_str(Fraction(x))
    if isinstance(x, CycNumber):
        if x.is_rational():
            return fraction_str(x.coeffs[0])
        return {"cyc": x.n, "coeffs": x.to_json()}
    if isinstance(x, AlgNum):
        if all(c.is_rational() for c in x.coeffs):
            return [fraction_str(c.coeffs[0]) for c in x.coeffs]
        raise ValueError("cannot serialise eigenvalues with cyclotomic coefficients")
    if isinstance(x, PadicScalar):
        return {"padic": [x.p, x.M, x.residue]}
    raise TypeError(type(x).__name__)


def _is_zero(x) -> bool:
    return x == 0


# ---------------------------------------------------------------------------
# data containers

@dataclass(frozen=True)
class IdealData:
    ideal: PrimeIdeal
    c: object
    eps: object
    powers: Optional[tuple] = None      # explicit c(lambda^r), r = 0, 1, ...

    def power(self, r: int, k: int):
        if self.powers is not None and r < len(self.powers):
            return self.powers[r]
        # run the recursion from the last two known values
        if self.powers is not None and len(self.powers) >= 2:
            start = len(self.powers) - 2
            prev, cur = self.powers[-2], self.powers[-1]
        else:
            start = 0
            prev, cur = _one_like(self.c), self.c
        shift = self.eps * (self.ideal.norm ** (k + 1))
        for _ in range(start + 1, r):
            prev, cur = cur, self.c * cur - shift * prev
        return cur if r > 0 else prev

    def recursion_consistent(self, k: int) -> bool:
        if self.powers is None:
            return True
        if len(self.powers) >= 1 and self.powers[0] != 1:
            return False
        if len(self.powers) >= 2 and self.powers[1] != self.c:
            return False
        shift = self.eps * (self.ideal.norm ** (k + 1))
        for r in range(2, len(self.powers)):
            if self.powers[r] != self.c * self.powers[r - 1] - shift * self.powers[r - 2]:
                return False
        return True


def _one_like(x):
    if isinstance(x, PadicScalar):
        return PadicScalar(x.p, x.M, 1)
    if isinstance(x, AlgNum):
        return AlgNum(x.field, [CycNumber.from_rational(1)])
    return CycNumber.from_rational(1)


@dataclass(frozen=True)
class LocalData:
    ell: int
    kind: str
    ideals: tuple
    unverified: bool = False
    primitive_factor: Optional[tuple] = None   # prescribed coefficients of P_ell(X), bad primes only


@dataclass(frozen=True)
class BianchiEigenData:
    """Hecke eigen-data of a weight (k,k) Bianchi eigenform."""

    field: ImagQuadField
    k: int
    level_norm: int
    coeff_field: NumberField
    local: dict
    neben_Q: DirichletChar
    bad_primes: frozenset = frozenset()
    stabilized: dict = field(default_factory=dict)     # p -> {"M":..., "lambda_p": PadicScalar}
    name: str = ""

    # -- prime powers
    def local_data(self, ell: int) -> LocalData:
        try:
            return self.local[ell]
        except KeyError:
            raise InsufficientData(f"insufficient eigenvalue data at {ell}") from None

    def prime_power(self, ell: int, index: int, r: int):
        """c(lambda^r) for the ``index``-th prime above ell."""
        loc = self.local_data(ell)
        return loc.ideals[index].power(r, self.k)

    def eigen_table(self, r_max: int = 4) -> dict:
        out = {}
        for ell in sorted(self.local):
            for idd in self.local[ell].ideals:
                for r in range(r_max + 1):
                    out[(idd.ideal.label, r)] = idd.power(r, self.k)
        return out

    def rational_power(self, ell: int, r: int):
        """c(ell^r O_F)."""
        loc = self.local_data(ell)
        if loc.kind == "split":
            a, b = loc.ideals
            return a.power(r, self.k) * b.power(r, self.k)
        if loc.kind == "ramified":
            return loc.ideals[0].power(2 * r, self.k)
        return loc.ideals[0].power(r, self.k)

    def local_series(self, ell: int, terms: int) -> list:
        return [self.rational_power(ell, r) for r in range(terms)]

    def eigenvalue_at(self, n: int):
        return eigenvalue_at(self, n)

    def recursion_consistent(self, ell: int) -> bool:
        return all(i.recursion_consistent(self.k) for i in self.local_data(ell).ideals)

    def eps_ideal(self, ell: int):
        """eps_Psi(ell O_F) read from the prime data."""
        loc = self.local_data(ell)
        if loc.kind == "split":
            return loc.ideals[0].eps * loc.ideals[1].eps
        if loc.kind == "ramified":
            return loc.ideals[0].eps * loc.ideals[0].eps
        return loc.ideals[0].eps

    def is_good(self, ell: int) -> bool:
        return ell not in self.bad_primes and self.level_norm % ell != 0 and self.field.D % ell != 0

    # -- serialisation
    def to_json(self) -> dict:
        primes = []
        for ell in sorted(self.local):
            loc = self.local[ell]
            ideals = []
            for idd in loc.ideals:
                rec = {"label": idd.ideal.label, "c": value_to_json(idd.c), "eps": value_to_json(idd.eps)}
                if idd.powers is not None:
                    rec["powers"] = [value_to_json(v) for v in idd.powers]
                ideals.append(rec)
            entry = {"ell": ell, "kind": loc.kind, "ideals": ideals}
            if loc.unverified:
                entry["unverified"] = True
            if loc.primitive_factor is not None:
                entry["primitive_factor"] = [value_to_json(v) for v in loc.primitive_factor]
            primes.append(entry)
        return {
            "type": "bianchi",
            "name": self.name,
            "field_D": self.field.D,
            "weight_k": self.k,
            "level_norm": self.level_norm,
            "coeff_field_poly": self.coeff_field.to_json(),
            "neben": self.neben_Q.to_json(),
            "bad_primes": sorted(self.bad_primes),
            "primes": primes,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BianchiEigenData":
        F = ImagQuadField(int(obj["field_D"]))
        k = int(obj["weight_k"])
        K = NumberField(obj.get("coeff_field_poly", [0, 1]))
        local = {}
        for entry in obj["primes"]:
            ell = int(entry["ell"])
            sp = split_prime(F, ell)
            kind = entry.get("kind", sp.kind)
            if kind != sp.kind:
                raise ValueError(f"prime {ell} is {sp.kind} in Q(sqrt(-{F.D})), not {kind}")
            ideals = []
            recs = entry["ideals"]
            if len(recs) != len(sp.primes_above):
                raise ValueError(f"prime {ell}: expected {len(sp.primes_above)} ideals")
            for pid, rec in zip(sp.primes_above, _order_records(recs, sp.primes_above)):
                powers = rec.get("powers")
                ideals.append(IdealData(
                    pid,
                    parse_value(rec["c"], K),
                    parse_value(rec.get("eps", "1"), K),
                    None if powers is None else tuple(parse_value(v, K) for v in powers),
                ))
            pf = entry.get("primitive_factor")
            local[ell] = LocalData(ell, kind, tuple(ideals), bool(entry.get("unverified", False)),
                                   None if pf is None else tuple(parse_value(v, K) for v in pf))
        neben = DirichletChar.from_json(obj["neben"]) if "neben" in obj else DirichletChar.trivial(int(obj["level_norm"]))
        return cls(F, k, int(obj["level_norm"]), K, local, neben,
                   frozenset(int(b) for b in obj.get("bad_primes", [])), {}, obj.get("name", ""))


def _order_records(recs, primes_above):
    """Match ideal records to the canonical prime list by label when labels are given."""
    labels = [r.get("label") for r in recs]
    if all(l is not None for l in labels):
        by_label = {str(l): r for l, r in zip(labels, recs)}
        try:
            return [by_label[p.label] for p in primes_above]
        except KeyError:
            pass
    return recs


def eigenvalue_at(psi: BianchiEigenData, n: int):
    """c(n O_F), multiplicative over the prime powers of n."""
    if n < 1:
        raise ValueError("n must be positive")
    out = CycNumber.from_rational(1)
    padic = None
    for ell, r in factorint(n).items():
        v = psi.rational_power(ell, r)
        if isinstance(v, PadicScalar):
            padic = v if padic is None else padic * v
        else:
            out = out * v
    if padic is not None:
        if not (isinstance(out, CycNumber) and out.is_rational()):
            raise ValueError("p-adic eigenvalues mix only with rational data")
        return padic * out.coeffs[0]
    return out


# ---------------------------------------------------------------------------
# elliptic input data

@dataclass(frozen=True)
class EllipticEigenData:
    weight: int                  # k + 2
    level: int
    neben: DirichletChar
    a_table: dict                # prime -> exact a_ell
    coeff_field: NumberField = field(default_factory=lambda: NumberField([0, 1]))
    name: str = ""

    @property
    def k(self):
        return self.weight - 2

    def a(self, ell: int):
        try:
            return self.a_table[ell]
        except KeyError:
            raise InsufficientData(f"insufficient eigenvalue data at {ell}") from None

    def ramanujan_ok(self, ell: int, precision: int = 64) -> bool:
        if self.level % ell == 0:
            return True
        v = abs(embed_complex(self.a(ell), precision))
        return v <= 2 * ell ** ((self.k + 1) / 2) * (1 + 1e-12)

    @classmethod
    def from_json(cls, obj: dict) -> "EllipticEigenData":
        K = NumberField(obj.get("coeff_field_poly", [0, 1]))
        N = int(obj["level"])
        neben = DirichletChar.from_json(obj["neben"]) if "neben" in obj else DirichletChar.trivial(N)
        table = {int(l): parse_value(v, K) for l, v in obj["a"].items()}
        return cls(int(obj["weight"]), N, neben, table, K, obj.get("name", ""))

    def to_json(self):
        return {
            "type": "elliptic",
            "name": self.name,
            "weight": self.weight,
            "level": self.level,
            "coeff_field_poly": self.coeff_field.to_json(),
            "neben": self.neben.to_json(),
            "a": {str(l): value_to_json(v) for l, v in sorted(self.a_table.items())},
        }


def load_eigen_file(path):
    with open(path) as fh:
        obj = json.load(fh)
    if obj.get("type") == "elliptic" or "a" in obj:
        return EllipticEigenData.from_json(obj)
    return BianchiEigenData.from_json(obj)


# ---------------------------------------------------------------------------
# constructions

def base_change(f: EllipticEigenData, F: ImagQuadField, primes=None) -> BianchiEigenData:
    """Hecke data of the base change of f to F.

    Good split ell = lambda lambda-bar: c(lambda) = a_ell and eps = eps_f(ell).
    Good inert ell: c(ell O_F) = a_ell^2 - 2 eps_f(ell) ell^{k+1} and eps = eps_f(ell)^2.
    Ramified ell not dividing N_f gets c(lambda) = a_ell and is marked unverified.
    At ell | N_f eps vanishes; c(lambda) = a_ell, and the inert value is a_ell^2.
    """
    k = f.k
    wanted = sorted(f.a_table) if primes is None else sorted(primes)
    local = {}
    bad = set(factorint(f.level)) | set(factorint(F.D))
    for ell in wanted:
        a = f.a(ell)
        sp = split_prime(F, ell)
        e = f.neben(ell)
        if f.level % ell == 0:
            if sp.kind == "inert":
                ideals = (IdealData(sp.primes_above[0], a * a, CycNumber.from_rational(0)),)
            else:
                ideals = tuple(IdealData(P, a, CycNumber.from_rational(0)) for P in sp.primes_above)
            local[ell] = LocalData(ell, sp.kind, ideals)
        elif sp.kind == "split":
            local[ell] = LocalData(ell, "split", tuple(IdealData(P, a, e) for P in sp.primes_above))
        elif sp.kind == "inert":
            c = a * a - e * (2 * ell ** (k + 1))
            local[ell] = LocalData(ell, "inert", (IdealData(sp.primes_above[0], c, e * e),))
        else:
            local[ell] = LocalData(ell, "ramified", (IdealData(sp.primes_above[0], a, e),), unverified=True)
    name = f"BC({f.name or 'f'}) to Q(sqrt(-{F.D}))"
    return BianchiEigenData(F, k, f.level, f.coeff_field, local, f.neben * f.neben,
                            frozenset(bad), {}, name)


def p_stabilize(psi: BianchiEigenData, p: int, root_choice: str = "unit", M: int = 20) -> BianchiEigenData:
    """Ordinary p-stabilisation: at each prime above p pick the unit root of the Hecke polynomial.

    Only rational Hecke data at p is supported; the chosen roots are p-adic
    integers known mod p^M.
    """
    if root_choice != "unit":
        raise ValueError("only the unit-root stabilisation is implemented")
    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    if not psi.is_good(p):
        raise ValueError(f"{p} is not a good prime for this form")
    loc = psi.local_data(p)
    new_ideals = []
    lam = PadicScalar(p, M, 1)
    for idd in loc.ideals:
        c, eps = idd.c, idd.eps
        if not (isinstance(c, CycNumber) and c.is_rational() and isinstance(eps, CycNumber) and eps.is_rational()):
            raise ValueError("p_stabilize needs rational eigenvalues at p")
        c_q = c.coeffs[0]
        e_q = eps.coeffs[0] * idd.ideal.norm ** (psi.k + 1)
        if c_q.denominator % p == 0 or e_q.denominator % p == 0:
            raise ValueError("eigenvalue is not p-integral")
        # X^2 - cX + e: unit root is congruent to c mod p when e = 0 mod p
        c_mod = c_q.numerator * pow(c_q.denominator, -1, p) % p
        if c_mod == 0:
            raise NotOrdinary("form not ordinary at p")
        mod = p ** M
        ci = c_q.numerator * pow(c_q.denominator, -1, mod) % mod
        ei = e_q.numerator * pow(e_q.denominator, -1, mod) % mod
        alpha = hensel_root([ei, -ci, 1], p, M, c_mod)
        new_ideals.append(IdealData(idd.ideal, alpha, PadicScalar(p, M, 0)))
        lam = lam * (alpha * alpha if loc.kind == "ramified" else alpha)
    local = dict(psi.local)
    local[p] = LocalData(p, loc.kind, tuple(new_ideals))
    stab = dict(psi.stabilized)
    stab[p] = {"M": M, "lambda_p": lam, "alphas": tuple(i.c for i in new_ideals)}
    return replace(psi, level_norm=psi.level_norm * p, local=local,
                   neben_Q=psi.neben_Q.extend(psi.neben_Q.modulus * p // _gcd(psi.neben_Q.modulus, p)),
                   stabilized=stab, name=(psi.name + f" [{p}-stabilised]").strip())


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)

"""Command-line front end: ``asai <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__

EXIT_OK, EXIT_ASSERT, EXIT_PRECONDITION = 0, 1, 2


@dataclass
class RunConfig:
    precision: int = 128
    p: int = 5
    padic_prec: int = 20
    seed: int = 0
    out: str | None = None
    format: str = "json"
    threads: int = 1

    def __post_init__(self):
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")
        if self.p == 2 or self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p ** 0.5) + 1)):
            raise ValueError("p must be an odd prime")


class AssertionFailure(Exception):
    def __init__(self, report):
        super().__init__("assertion failed")
        self.report = report


# ---------------------------------------------------------------------------
# argument helpers

def _complex(text: str):
    parts = [t for t in text.replace(" ", "").split(",") if t]
    if len(parts) == 1:
        return mpmath.mpc(mpmath.mpf(parts[0]))
    if len(parts) == 2:
        return mpmath.mpc(mpmath.mpf(parts[0]), mpmath.mpf(parts[1]))
    raise ValueError(f"cannot parse complex number {text!r}")


def parse_chi(text: str | None):
    """'trivial', 'm' (principal mod m), 'm:order:e1,e2,...' (generator exponents) or a JSON file."""
    from .numfield import DirichletChar, _unit_group_generators
    if text is None or text in ("trivial", "1"):
        return DirichletChar.trivial(1)
    if os.path.exists(text):
        with open(text) as fh:
            return DirichletChar.from_json(json.load(fh))
    parts = text.split(":")
    m = int(parts[0])
    if len(parts) == 1:
        return DirichletChar.trivial(m)
    order = int(parts[1])
    exps = [int(e) for e in parts[2].split(",")] if len(parts) > 2 and parts[2] else []
    gens = _unit_group_generators(m)
    if len(exps) != len(gens):
        raise ValueError(f"modulus {m} needs {len(gens)} generator exponents (generators {[g for g, _ in gens]})")
    return DirichletChar(m, order, {g: e for (g, _), e in zip(gens, exps)})


def _resolve_path(path: str) -> str:
    if os.path.exists(path):
        return path
    from .datasets import data_path
    cand = data_path(Path(path).name)
    if cand.is_file():
        return str(cand)
    raise ValueError(f"no such file: {path}")


def _load_form(args, primes_needed: int):
    from .hecke import load_eigen_file, base_change, EllipticEigenData
    from .numfield import ImagQuadField, primes_upto
    form = load_eigen_file(_resolve_path(args.form))
    if isinstance(form, EllipticEigenData):
        if not args.field:
            raise ValueError("--field is required for an elliptic form")
        return form, base_change(form, ImagQuadField(args.field), primes=primes_upto(primes_needed))
    return None, form


def _jsonable(x):
    from .numfield import CycNumber
    from .padic import PadicScalar
    from .hecke import value_to_json
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (mpmath.mpc,)):
        return {"re": mpmath.nstr(x.real, 30), "im": mpmath.nstr(x.imag, 30)}
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 30)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (CycNumber, PadicScalar)):
        return value_to_json(x)
    if hasattr(x, "tolist"):
        return _jsonable(x.tolist())
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


# ---------------------------------------------------------------------------
# commands

def cmd_eigen(args, cfg):
    from .hecke import p_stabilize
    f, psi = _load_form(args, args.lmax)
    if args.stabilize:
        psi = p_stabilize(psi, cfg.p, "unit", cfg.padic_prec)
    rows = []
    for ell in sorted(psi.local):
        if ell > args.lmax:
            continue
        loc = psi.local_data(ell)
        for idd in loc.ideals:
            rows.append({"ell": ell, "kind": loc.kind, "ideal": idd.ideal.label, "c": _jsonable(idd.c), "eps": _jsonable(idd.eps)})
    out = {"form": psi.name, "D": psi.field.D, "k": psi.k, "level_norm": psi.level_norm, "rows": rows}
    if args.stabilize:
        out["stabilized"] = _jsonable(psi.stabilized)
    return out


def cmd_local(args, cfg):
    from .asai_series import primitive_local_factor, imprimitive_local_factor, local_error_term
    f, psi = _load_form(args, max(args.ell, 100))
    chi = parse_chi(args.chi)
    out = {"ell": args.ell}
    for name, fn in (("primitive", primitive_local_factor), ("imprimitive", imprimitive_local_factor),
                     ("error", local_error_term)):
        try:
            out[name] = fn(psi, args.ell, chi).to_json()
        except ValueError as exc:
            out[name] = {"error": str(exc)}
    return out


def cmd_value(args, cfg):
    from .asai_series import asai_value, asai_euler_value
    f, psi = _load_form(args, args.n)
    chi = parse_chi(args.chi)
    s = _complex(args.s)
    fn = asai_euler_value if args.euler else asai_value
    return fn(psi, chi, s, args.n, cfg.precision).to_json()


def cmd_factorize(args, cfg):
    from .asai_series import factorization_check
    from .hecke import load_eigen_file, EllipticEigenData
    from .numfield import ImagQuadField
    form = load_eigen_file(_resolve_path(args.form))
    if not isinstance(form, EllipticEigenData):
        raise ValueError("factorize needs an elliptic newform")
    res = factorization_check(form, ImagQuadField(args.field), range(2, args.lmax), parse_chi(args.chi))
    report = {"status": "PASS" if res["passed"] else "FAIL", **res}
    if not res["passed"]:
        raise AssertionFailure(report)
    return report


def cmd_eis(args, cfg):
    from .eisenstein import EisParams, lattice_sum_E, continue_E, holomorphic_F
    beta = Fraction(args.beta)
    tau = _complex(args.tau)
    if args.method == "qexp":
        return holomorphic_F(args.k, beta, tau, precision=cfg.precision).to_json()
    P = EisParams(args.k, beta, tau, _complex(args.s))
    if args.method == "lattice":
        return lattice_sum_E(P, cutoff=args.cutoff, precision=cfg.precision).to_json()
    return continue_E(P, precision=cfg.precision).to_json()


def cmd_kernel(args, cfg):
    from . import archimedean as A
    k, j = args.k, args.j
    if args.what == "ab":
        a, b = A.coeff_ab(k, j, args.ell, args.n)
        return {"a": str(a), "b": str(b)}
    if args.what == "c":
        cp, c = A.coeff_c(k, j, args.n)
        return {"c_prime": str(cp), "c": str(c)}
    with mpmath.workprec(cfg.precision):
        if args.what == "G":
            return {"G": _jsonable(A.kernel_G(args.n, args.r, _complex(args.s), k, args.D, cfg.precision))}
        if args.what == "ginf":
            a, b = A.g_infty(k, j, _complex(args.s), cfg.precision)
            return {"sum_form": _jsonable(a), "closed_form": _jsonable(b)}
        s = _complex(args.s) if args.s is not None else None
        return _jsonable(A.constants_CHC(k, j, s, args.N, args.D, cfg.precision))


def cmd_measure(args, cfg):
    from .iwasawa import load_tower, measure_from_tower, integrate
    mod, towers = load_tower(_resolve_path(args.tower))
    mu = measure_from_tower(mod, towers)
    chi = parse_chi(args.chi)
    val = integrate(mu, chi, args.j)
    return {"p": mod.p, "M": mod.M, "certified": mu.certified, "j": args.j, "value": _jsonable(val)}


def cmd_predict(args, cfg):
    from .interpolation import InterpPoint, predicted_rhs
    from .padic import PadicScalar
    lam = PadicScalar(cfg.p, cfg.padic_prec, Fraction(args.lam))
    rec = predicted_rhs(InterpPoint(cfg.p, args.j, parse_chi(args.chi), lam), args.k, args.D, cfg.precision)
    return _jsonable(rec)


def cmd_selftest(args, cfg):
    from .acceptance import run_all
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(quick=args.quick, seed=cfg.seed, only=only)
    for r in results:
        print(r.line(), file=sys.stderr)
    report = {"quick": args.quick, "seed": cfg.seed,
              "results": [{"number": r.number, "name": r.name, "passed": r.passed} for r in results]}
    report["passed"] = all(r.passed for r in results)
    if not report["passed"]:
        raise AssertionFailure(report)
    return report


# ---------------------------------------------------------------------------
# dispatch

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=128, help="working precision in bits")
    common.add_argument("--p", type=int, default=5, help="odd prime for p-adic commands")
    common.add_argument("--padic-prec", type=int, default=20, help="p-adic precision M")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    ap = argparse.ArgumentParser(prog="asai", description="Asai L-function toolkit")
    ap.add_argument("--version", action="version", version=f"asai {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def form_args(p, lmax=100):
        p.add_argument("--form", required=True, help="eigenform JSON (elliptic or Bianchi)")
        p.add_argument("--field", type=int, help="|disc| of the imaginary quadratic field for base change")

    p = sub.add_parser("eigen", parents=[common], help="Hecke eigenvalue table")
    form_args(p)
    p.add_argument("--lmax", type=int, default=100)
    p.add_argument("--stabilize", action="store_true", help="p-stabilise (unit root)")
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("local", parents=[common], help="local Asai factors at one prime")
    form_args(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--chi")
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("value", parents=[common], help="Asai L-value in the convergence region")
    form_args(p)
    p.add_argument("--s", required=True, help="re[,im]")
    p.add_argument("--n", type=int, default=1000, help="number of terms / primes")
    p.add_argument("--chi")
    p.add_argument("--euler", action="store_true", help="use the Euler product")
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("factorize", parents=[common], help="check the base-change factorisation")
    p.add_argument("--form", required=True)
    p.add_argument("--field", type=int, required=True)
    p.add_argument("--lmax", type=int, default=100)
    p.add_argument("--chi")
    p.set_defaults(func=cmd_factorize)

    p = sub.add_parser("eis", parents=[common], help="Eisenstein series values")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--beta", required=True, help="b/N")
    p.add_argument("--tau", required=True, help="x,y")
    p.add_argument("--s", default="0")
    p.add_argument("--method", choices=("continue", "lattice", "qexp"), default="continue")
    p.add_argument("--cutoff", type=int, default=40)
    p.set_defaults(func=cmd_eis)

    p = sub.add_parser("kernel", parents=[common], help="archimedean coefficients and constants")
    p.add_argument("--what", choices=("ab", "c", "G", "ginf", "consts"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--s")
    p.add_argument("--D", type=int, default=4)
    p.add_argument("--N", type=int, default=1)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("measure", parents=[common], help="moments of a measure built from a tower file")
    p.add_argument("--tower", required=True)
    p.add_argument("--chi")
    p.add_argument("--j", type=int, default=0)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("predict", parents=[common], help="predicted interpolation value record")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--chi")
    p.add_argument("--lambda", dest="lam", required=True, help="U_p eigenvalue (rational, p-adic unit)")
    p.add_argument("--D", type=int, default=4)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_selftest)
    return ap


def _emit(report, cfg):
    if cfg.format == "csv":
        buf = io.StringIO()
        rows = report.get("rows") if isinstance(report, dict) else None
        if rows and isinstance(rows, list) and all(isinstance(r, dict) for r in rows):
            keys = sorted({k for r in rows for k in r})
            w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: json.dumps(_jsonable(v)) if isinstance(v, (dict, list)) else v for k, v in r.items()})
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["key", "value"])
            for k, v in sorted(_jsonable(report).items()):
                w.writerow([k, json.dumps(v) if isinstance(v, (dict, list)) else v])
        text = buf.getvalue()
    else:
        text = json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)      # exits with status 2 on usage errors
    try:
        cfg = RunConfig(args.precision, args.p, args.padic_prec, args.seed, args.out, args.format,
                        int(os.environ.get("ASAI_THREADS", "1")))
        report = args.func(args, cfg)
    except AssertionFailure as exc:
        _emit(exc.report, cfg)
        return EXIT_ASSERT
    except (ValueError, ArithmeticError, KeyError, OSError) as exc:
        sys.stdout.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True) + "\n")
        return EXIT_PRECONDITION
    _emit(report, cfg)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""``koszulate`` command line.

Exit codes: 0 success, 1 invalid input, 2 resource budget exceeded,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import engine, families, formulas, verify
from .families import SamplingFailed
from .fields import DEFAULT_PRIME, FieldConfig
from .kfile import KFileError, load_json, read_kfile, vector_space_from_json, write_kfile
from .linalg import DimensionMismatch

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad arguments; 2 is reserved for budget errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _prime(text: str) -> int:
    if text == "auto":
        return DEFAULT_PRIME
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--prime expects an integer or 'auto', got {text!r}")


def _triple(text: str) -> tuple[Fraction, Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated values r,c,s")
    try:
        return tuple(Fraction(x) for x in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad Mukai vector {text!r}")


def _exact(value):
    """Render results with exact strings for every rational number."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, dict):
        return {k: _exact(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_exact(v) for v in value]
    if isinstance(value, formulas.FormalClass):
        return value.to_json()
    if isinstance(value, formulas.MukaiVector):
        return value.to_json()
    raise TypeError(f"cannot serialize {type(value).__name__}")


# -- commands ---------------------------------------------------------------
# Each returns (field label, inputs, results, exit code).

def _load(args):
    K = read_kfile(args.input)
    return K, {"input": args.input, "n": K.n, "m": K.m}


def cmd_wq(args):
    K, inputs = _load(args)
    inputs["q"] = args.q
    if args.route == "presentation":
        rep = engine.wq_presentation_report(K, args.q, modular=args.modular)
    else:
        rep = engine.wq_report(K, args.q, paranoid=args.paranoid, modular=args.modular)
    return K.field.label, inputs, {"q": rep.q, "dim": rep.dim, "route": rep.route,
                                   "ranks": rep.ranks}, EXIT_OK


def cmd_hilbert(args):
    K, inputs = _load(args)
    inputs["qmax"] = args.qmax
    dims = engine.hilbert_prefix(K, args.qmax, paranoid=args.paranoid, modular=args.modular)
    return K.field.label, inputs, {"dims": dims}, EXIT_OK


def cmd_resonance(args):
    K, inputs = _load(args)
    q = engine.resonance_threshold(K.n)
    d = engine.wq_dimension(K, q, paranoid=args.paranoid, modular=args.modular)
    return K.field.label, inputs, {"trivial": d == 0, "dim": d, "q": q}, EXIT_OK


def cmd_points(args):
    K, inputs = _load(args)
    if args.prime is not None:
        target = FieldConfig.prime(args.prime)
        if K.field.is_prime and K.field != target:
            raise UsageError(f"K is over {K.field.label}, not GF({args.prime})")
        if not K.field.is_prime:
            try:
                K = K.reduce(target)
            except (ZeroDivisionError, ValueError) as exc:
                raise UsageError(f"K does not reduce to GF({args.prime}): {exc}") from None
    elif not K.field.is_prime:
        raise UsageError("K is rational; pass --prime to enumerate points")
    inputs["p"] = K.field.p
    count = engine.resonance_points_count(K, budget=args.budget)
    return K.field.label, inputs, {
        "count": count,
        "projective_points": engine.projective_point_count(K.n, K.field.p),
    }, EXIT_OK


def cmd_isotropy(args):
    K, inputs = _load(args)
    n, fld, Vbar = vector_space_from_json(load_json(args.subspace))
    if n != K.n or fld != K.field:
        raise UsageError("subspace file must match K's n and field")
    inputs["subspace"] = args.subspace
    inputs["dim_subspace"] = Vbar.nrows
    iso = engine.is_isotropic(K, Vbar)
    sep = engine.is_separable(K, Vbar)
    return K.field.label, inputs, {"isotropic": iso, "separable": sep,
                                   "strongly_isotropic": iso and sep}, EXIT_OK


def cmd_family(args):
    field = FieldConfig.prime(args.prime) if args.prime is not None else FieldConfig.rational()
    K = families.build(args.name, n=args.n, m=args.m, seed=args.seed, a=args.a, b=args.b,
                       field=field)
    inputs = {"name": args.name, "n": args.n, "m": args.m, "seed": args.seed,
              "a": args.a, "b": args.b, "out": args.out}
    if args.out:
        write_kfile(args.out, K)
    return field.label, {k: v for k, v in inputs.items() if v is not None}, \
        {"n": K.n, "m": K.m}, EXIT_OK


def cmd_degrees(args):
    n = args.n
    return "ZZ", {"n": n}, {
        "koszul": formulas.koszul_divisor_degree(n),
        "chow": formulas.chow_degree(n),
        "identity": formulas.degree_identity(n),
    }, EXIT_OK


def cmd_classes(args):
    if args.kind == "resonance-divisor":
        e = _need(args.e, "--e")
        cls = formulas.resonance_class(e, formulas.FormalClass.symbol(formulas.C1E),
                                       formulas.FormalClass.symbol(formulas.C1F))
        inputs = {"kind": args.kind, "e": e}
    elif args.kind == "canonical-pencil":
        g = _need(args.g, "--g")
        cls = formulas.canonical_pencil_class(g)
        inputs = {"kind": args.kind, "g": g}
    else:
        r = _need(args.r, "--r")
        cls = formulas.voisin_class(r)
        derived = formulas.voisin_class_derived(r)
        inputs = {"kind": args.kind, "r": r}
        return "QQ", inputs, {"class": cls, "derived_matches": derived == cls}, EXIT_OK
    return "QQ", inputs, {"class": cls}, EXIT_OK


def cmd_mukai(args):
    if args.sub == "pair":
        g = _need(args.g, "--g")
        v = formulas.MukaiVector(*_need(args.v, "--v"), g)
        w = formulas.MukaiVector(*_need(args.w, "--w"), g)
        return "ZZ", {"v": v, "w": w}, {"pairing": formulas.mukai_pairing(v, w)}, EXIT_OK
    if args.sub == "sym":
        r, s, g, b = (_need(args.r, "--r"), _need(args.s, "--s"),
                      _need(args.g, "--g"), _need(args.b, "--b"))
        vec = formulas.sym_mukai(r, s, g, b, spherical=args.spherical)
        return "ZZ", {"r": r, "s": s, "g": g, "b": b, "spherical": args.spherical}, \
            {"vector": vec}, EXIT_OK
    r, b = _need(args.r, "--r"), _need(args.b, "--b")
    return "ZZ", {"r": r, "b": b}, {"h1": formulas.h1_sym_dim(r, b)}, EXIT_OK


def cmd_verify(args):
    results = verify.run(args.level)
    criteria = [{"id": r.id, "name": r.name, "passed": r.passed, "checks": r.checked,
                 "failures": r.failures} for r in results]
    ok = all(r.passed for r in results)
    res = {"passed": ok, "criteria": criteria,
           "failed": [r.id for r in results if not r.passed]}
    return "mixed", {"level": args.level}, res, EXIT_OK if ok else EXIT_VERIFY


def _need(value, flag):
    if value is None:
        raise UsageError(f"missing required option {flag}")
    return value


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")

    kin = _Parser(add_help=False)
    kin.add_argument("--input", required=True, help="KFile path")
    kin.add_argument("--paranoid", action="store_true",
                     help="recompute rank of delta_{1,q+1} instead of assuming surjectivity")
    kin.add_argument("--modular", type=int, default=0, metavar="K",
                     help="rational ranks from K random 61-bit primes (lower bound)")

    ap = _Parser(prog="koszulate", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wq", parents=[common, kin], help="dim W_q(V, K)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--route", choices=("complex", "presentation"), default="complex")
    p.set_defaults(func=cmd_wq)

    p = sub.add_parser("hilbert", parents=[common, kin], help="dim W_0 .. W_qmax")
    p.add_argument("--qmax", type=int, required=True)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("resonance", parents=[common, kin], help="decide R(V, K) = {0}")
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("points", parents=[common], help="count F_p resonance points")
    p.add_argument("--input", required=True)
    p.add_argument("--prime", type=_prime)
    p.add_argument("--budget", type=int, default=engine.POINT_BUDGET)
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("isotropy", parents=[common], help="isotropy/separability of a subspace")
    p.add_argument("--input", required=True)
    p.add_argument("--subspace", required=True, help="JSON file with rows spanning the subspace of V^*")
    p.set_defaults(func=cmd_isotropy)

    p = sub.add_parser("family", parents=[common], help="write a named K to a KFile")
    p.add_argument("name", choices=families.FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime", type=_prime, help="prime modulus or 'auto' (2^61-1); default QQ")
    p.add_argument("--out")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("degrees", parents=[common], help="Koszul and Chow divisor degrees")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_degrees)

    p = sub.add_parser("classes", parents=[common], help="divisor class formulas")
    p.add_argument("kind", choices=("resonance-divisor", "canonical-pencil", "voisin"))
    p.add_argument("--e", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--r", type=int)
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("mukai", parents=[common], help="Mukai vector arithmetic")
    p.add_argument("sub", choices=("pair", "sym", "h1"))
    p.add_argument("--v", type=_triple)
    p.add_argument("--w", type=_triple)
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--spherical", action="store_true")
    p.set_defaults(func=cmd_mukai)

    p = sub.add_parser("verify", parents=[common], help="run the self-verification suite")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    p.set_defaults(func=cmd_verify)
    return ap


def _plain(value):
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_plain(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_plain(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (formulas.FormalClass, formulas.MukaiVector)):
        return _plain(value.to_json())
    return str(value)


def _print_human(command: str, label: str, res: dict, out):
    if command == "verify":
        for c in res["criteria"]:
            status = "PASS" if c["passed"] else "FAIL"
            print(f"[{status}] {c['id']:2d} {c['name']}", file=out)
            for msg in c["failures"][:5]:
                print(f"       {msg}", file=out)
        print("all criteria passed" if res["passed"] else f"failed: {res['failed']}", file=out)
        return
    print(f"{command} over {label}", file=out)
    for k, v in res.items():
        print(f"  {k}: {_plain(v)}", file=out)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    t0 = time.perf_counter()
    try:
        label, inputs, results, code = args.func(args)
    except (KFileError, UsageError, DimensionMismatch, engine.FieldMismatch,
            formulas.GenusMismatch, ValueError) as exc:
        print(f"koszulate: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (engine.BudgetExceeded, SamplingFailed) as exc:
        print(f"koszulate: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    report = {
        "command": args.command,
        "inputs": _exact(inputs),
        "field": label,
        "results": _exact(results),
        "timing": {"wall_ms": str(round((time.perf_counter() - t0) * 1000))},
    }
    if args.json:
        json.dump(report, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        _print_human(args.command, label, results, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())

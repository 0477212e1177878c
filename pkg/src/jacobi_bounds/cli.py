"""Command-line entry point: jacobi-bounds {eval,bound,sweep,wigner,verify}.

Exit codes: 0 all checks pass, 1 a bound or lemma is violated, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from .envelope import CONSTANTS, Mode, refined_pointwise_bound, theorem1_bound
from .gamma_core import DomainError, JacobiParams
from .jacobi_eval import Method, eval_g, evaluate
from .sweep import ConfigError, load_config, render, sweep_verify
from .verify import SUITES, DEFAULT_SAMPLES, verify_report
from .wigner_su2 import WignerIndex, wigner_d_element, wigner_d_magnitude

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


def _finite_or_none(v: float):
    return v if math.isfinite(v) else None


def _signed(v) -> dict:
    return {"sign": v.sign, "log_abs": _finite_or_none(v.log_mag), "value": _finite_or_none(float(v))}


def _emit(doc: dict, out=None):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args) -> int:
    p = JacobiParams(args.n, args.alpha, args.beta)
    res = evaluate(p, args.x, args.method)
    g = eval_g(p, args.x)
    _emit({"n": p.n, "alpha": p.alpha, "beta": p.beta, "x": args.x, "method": res.method.value,
           "P": _signed(res.value), "est_error": _finite_or_none(res.est_error), "g": _signed(g)})
    return EXIT_OK


def cmd_bound(args) -> int:
    p = JacobiParams(args.n, args.alpha, args.beta)
    g = abs(float(eval_g(p, args.x)))
    bound = refined_pointwise_bound(p, args.x, args.mode)
    theorem = theorem1_bound(p, args.x)
    holds = g <= bound + 1e-10 and g <= theorem + 1e-10
    _emit({"n": p.n, "alpha": p.alpha, "beta": p.beta, "x": args.x, "mode": Mode(args.mode).value,
           "abs_g": g, "refined_bound": bound, "theorem1_bound": theorem, "holds": holds})
    return EXIT_OK if holds else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    records = sweep_verify(cfg)
    text = render(records, cfg, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in records) else EXIT_VIOLATION


def cmd_wigner(args) -> int:
    idx = WignerIndex(args.two_l, args.two_p, args.two_q)
    n, al, be = idx.jacobi_indices()
    mag = wigner_d_magnitude(idx, args.theta)
    ratio = math.sqrt(abs(math.sin(2.0 * args.theta))) * mag * idx.dimension**0.25
    doc = {"two_l": idx.two_l, "two_p": idx.two_p, "two_q": idx.two_q, "theta": args.theta,
           "n": n, "alpha": al, "beta": be, "magnitude": mag, "theorem2_ratio": ratio,
           "holds": ratio <= CONSTANTS.C_general}
    if abs(idx.two_q) <= idx.two_p:
        z = wigner_d_element(idx, args.phi, args.theta, args.psi)
        doc["element"] = {"re": z.real, "im": z.imag, "phi": args.phi, "psi": args.psi}
    _emit(doc)
    return EXIT_OK if doc["holds"] else EXIT_VIOLATION


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise ConfigError("--samples must be positive")
    report = verify_report(args.suite, args.seed, args.samples)
    _emit(report, args.out)
    return EXIT_OK if report["violations"] == 0 else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jacobi-bounds", description="Uniform bounds for Jacobi polynomials.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate P_n and g_n at x")
    p.add_argument("n", type=int)
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    p.add_argument("x", type=float)
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.RECURRENCE.value)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bound", help="pointwise bound for |g_n(x)|")
    p.add_argument("n", type=int)
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    p.add_argument("x", type=float)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.GENERAL.value)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="run a configured parameter sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"])
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("wigner", help="Wigner d-matrix entry through g_n")
    p.add_argument("two_l", type=int)
    p.add_argument("two_p", type=int)
    p.add_argument("two_q", type=int)
    p.add_argument("theta", type=float)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--psi", type=float, default=0.0)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("verify", help="seeded self-verification suites")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``ellipgamma {eval,verify,formal,limits}``.

Results go to stdout (JSON by default); errors go to stderr as JSON.
Exit codes: 0 ok, 1 identity failed, 2 bad arguments / domain error,
3 pole proximity, 4 term cap exceeded.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import re
import sys
import warnings

from . import formal, identities
from .errors import (
    BranchWarning,
    DomainError,
    EllipGammaError,
    ParameterError,
    PoleProximity,
    TermCapExceeded,
    TooManySkips,
)
from .numerics import (
    DEFAULT_CONFIG,
    EvalConfig,
    as_point,
    elliptic_gamma,
    elliptic_number,
    euler_gamma,
    gamma_bar,
    nome,
    q_gamma,
    q_number,
    qpochhammer,
    theta0,
)

EXIT_OK, EXIT_FAIL, EXIT_ARGS, EXIT_POLE, EXIT_TERMS = 0, 1, 2, 3, 4

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"(?P<re>[+-]?{_NUM})")
_IMAG = re.compile(rf"(?P<sign>[+-]?)(?P<im>{_NUM})?i")
_BOTH = re.compile(rf"(?P<re>[+-]?{_NUM})(?P<sign>[+-])(?P<im>{_NUM})?i")


def parse_complex(text: str) -> complex:
    """Parse ``0.5``, ``0.7i``, ``i``, ``0.5+0.7i`` or ``-0.5-0.7i`` (no spaces)."""
    m = _IMAG.fullmatch(text)
    if m:
        return complex(0, _signed(m["sign"], m["im"]))
    m = _BOTH.fullmatch(text)
    if m:
        return complex(float(m["re"]), _signed(m["sign"], m["im"]))
    m = _REAL.fullmatch(text)
    if m:
        return complex(float(m["re"]), 0)
    raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}")


def _signed(sign: str, digits: str | None) -> float:
    v = float(digits) if digits else 1.0
    return -v if sign == "-" else v


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")


def _cval(w: complex) -> dict:
    return {"re": w.real, "im": w.imag}


def _config(args) -> EvalConfig:
    eps = args.eps
    if eps is None:
        env = os.environ.get("ELLIPGAMMA_EPS")
        eps = float(env) if env else DEFAULT_CONFIG.eps_rel
    return EvalConfig(eps_rel=eps, pole_guard=min(DEFAULT_CONFIG.pole_guard, eps / 10))


# -- eval ----------------------------------------------------------------------

def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ParameterError(f"{args.function} requires {', '.join(missing)}")


def _evaluate(args, cfg: EvalConfig, info: dict) -> tuple[complex, dict]:
    fn = args.function
    z, tau, sigma = args.z, args.tau, args.sigma
    if fn == "qpoch":
        if args.x is None:
            _need(args, "z")
        if args.q is None:
            _need(args, "tau")
        x = args.x if args.x is not None else cmath.exp(2j * math.pi * z)
        q = args.q if args.q is not None else nome(tau, cfg)
        return qpochhammer(x, q, cfg, info), {"x": x, "q": q}
    if fn == "eulergamma":
        _need(args, "z")
        return euler_gamma(z, cfg), {"z": z}
    if fn == "qnum":
        _need(args, "z", "tau")
        as_point(tau)
        return q_number(z, tau), {"z": z, "tau": tau}
    if fn in ("theta0", "qgamma"):
        _need(args, "z", "tau")
        f = theta0 if fn == "theta0" else q_gamma
        return f(z, tau, cfg, info=info), {"z": z, "tau": tau}
    _need(args, "z", "tau", "sigma")
    f = {"egamma": elliptic_gamma, "egamma-bar": gamma_bar, "ellnum": elliptic_number}[fn]
    return f(z, tau, sigma, cfg, info=info), {"z": z, "tau": tau, "sigma": sigma}


def cmd_eval(args) -> tuple[int, dict]:
    cfg = _config(args)
    info: dict = {}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", BranchWarning)
        value, inputs = _evaluate(args, cfg, info)
    notes = [str(w.message) for w in caught if issubclass(w.category, BranchWarning)]
    if abs(value) < cfg.pole_guard:
        notes.append("value is zero to working precision")
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError("result is not finite")
    record = {
        "function": args.function,
        "inputs": {k: _cval(complex(v)) for k, v in inputs.items()},
        "value": _cval(value),
        "truncation": {"J": info.get("J"), "K": info.get("K")},
        "warnings": notes,
    }
    return EXIT_OK, record


# -- verify --------------------------------------------------------------------

def cmd_verify(args) -> tuple[int, dict]:
    cfg = _config(args)
    if args.all:
        jobs = identities.default_suite()
    elif args.identity:
        kw = {k: getattr(args, k) for k in ("n", "m") if getattr(args, k) is not None}
        jobs = [(args.identity, kw)]
    else:
        raise ParameterError("give --identity NAME or --all")
    reports = []
    for name, kw in jobs:
        spec = identities.get_identity(name, **kw)
        report = identities.verify(spec, args.samples, args.seed, args.tol, cfg, workers=args.workers)
        reports.append(report.to_record())
    ok = all(r["pass"] for r in reports)
    record = reports[0] if not args.all else {"seed": args.seed, "pass": ok, "reports": reports}
    return (EXIT_OK if ok else EXIT_FAIL), record


# -- formal --------------------------------------------------------------------

def cmd_formal(args) -> tuple[int, dict]:
    n = 2 if args.n is None else args.n
    m = 2 if args.m is None else args.m
    if args.identity == "mult1":
        res = formal.verify_mult1_formal(n, args.cutoff)
    elif args.identity == "lemma1":
        res = formal.verify_lemma1_formal(m, n, args.cutoff)
    else:
        res = formal.verify_lemma2_formal(n, args.degree)
    return (EXIT_OK if res.passed else EXIT_FAIL), res.to_record()


# -- limits --------------------------------------------------------------------

def cmd_limits(args) -> tuple[int, dict]:
    cfg = _config(args)
    z = args.z
    if args.which == "trig":
        tau = args.tau if args.tau is not None else 0.6j
        grid = args.sigma_im or [2.0, 3.0, 4.0, 5.0]
        res = identities.limit_trig_check(z, tau, grid, cfg)
        threshold = 1e-8 if args.threshold is None else args.threshold
        extra = {"tau": _cval(tau), "parameter": "im_sigma"}
    else:
        grid = args.t or [0.2, 0.1, 0.05]
        res = identities.limit_rational_check(z, grid, cfg)
        # by default only monotone convergence is required here
        threshold = args.threshold
        extra = {"parameter": "t"}
    verdict = identities.limit_verdict(res, math.inf if threshold is None else threshold)
    record = {
        "which": args.which,
        "z": _cval(z),
        **extra,
        "residuals": [{"parameter": p, "residual": r} for p, r in zip(grid, res)],
        "threshold": threshold,
        "decreasing": verdict.decreasing,
        "converged": verdict.converged,
        "final_below_threshold": verdict.final_ok,
        "pass": verdict.passed,
    }
    return (EXIT_OK if verdict.passed else EXIT_FAIL), record


# -- output --------------------------------------------------------------------

def _rows(command: str, record: dict) -> tuple[list[str], list[list]]:
    if command == "verify":
        reports = record.get("reports", [record])
        head = ["identity", "n", "m", "samples", "seed", "max_residual", "pass"]
        rows = [
            [r["name"], ";".join(map(str, r["n"])), ";".join(map(str, r["m"])), r["n_samples"], r["seed"], r["max_rel_residual"], r["pass"]]
            for r in reports
        ]
        return head, rows
    if command == "limits":
        return ["parameter", "residual"], [[e["parameter"], e["residual"]] for e in record["residuals"]]
    if command == "eval":
        v = record["value"]
        return ["function", "re", "im", "J", "K"], [[record["function"], v["re"], v["im"], record["truncation"]["J"], record["truncation"]["K"]]]
    return ["identity", "params", "pass"], [[record["identity"], json.dumps(record["params"], sort_keys=True), record["pass"]]]


def render(command: str, record: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record, indent=2) + "\n"
    head, rows = _rows(command, record)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(head)
        w.writerows(rows)
        return buf.getvalue()
    return "".join("  ".join(f"{h}={v}" for h, v in zip(head, row)) + "\n" for row in rows)


# -- parser --------------------------------------------------------------------

FUNCTIONS = ("theta0", "egamma", "egamma-bar", "qgamma", "qpoch", "eulergamma", "ellnum", "qnum")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps", type=float, default=None, help="relative truncation error (env ELLIPGAMMA_EPS)")
    common.add_argument("--format", choices=("json", "csv", "human"), default="json")

    p = argparse.ArgumentParser(prog="ellipgamma", description="Elliptic gamma function evaluation and identity checks.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate one function")
    e.add_argument("--function", required=True, choices=FUNCTIONS)
    for name in ("z", "tau", "sigma", "x", "q"):
        e.add_argument(f"--{name}", type=parse_complex, default=None)
    e.set_defaults(run=cmd_eval)

    v = sub.add_parser("verify", parents=[common], help="sample an identity and report residuals")
    g = v.add_mutually_exclusive_group()
    g.add_argument("--identity", choices=identities.REGISTRY_NAMES)
    g.add_argument("--all", action="store_true", help="run the full registry grid")
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--m", type=int, default=None)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=float, default=identities.DEFAULT_TOL)
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(run=cmd_verify)

    f = sub.add_parser("formal", parents=[common], help="exact factor/series check")
    f.add_argument("--identity", required=True, choices=("mult1", "lemma1", "lemma2"))
    f.add_argument("--n", type=int, default=None)
    f.add_argument("--m", type=int, default=None)
    f.add_argument("--cutoff", type=int, default=8)
    f.add_argument("--degree", type=int, default=12)
    f.set_defaults(run=cmd_formal)

    lim = sub.add_parser("limits", parents=[common], help="trigonometric / rational degeneration study")
    lim.add_argument("--which", required=True, choices=("trig", "rational"))
    lim.add_argument("--z", type=parse_complex, required=True)
    lim.add_argument("--tau", type=parse_complex, default=None)
    lim.add_argument("--sigma-im", type=_float_list, default=None, help="e.g. 2,3,4,5")
    lim.add_argument("--t", type=_float_list, default=None, help="e.g. 0.2,0.1,0.05")
    lim.add_argument("--threshold", type=float, default=None)
    lim.set_defaults(run=cmd_limits)
    return p


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, PoleProximity):
        return EXIT_POLE
    if isinstance(exc, TermCapExceeded):
        return EXIT_TERMS
    if isinstance(exc, TooManySkips):
        return EXIT_FAIL
    return EXIT_ARGS


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, record = args.run(args)
    except (EllipGammaError, ValueError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(err) + "\n")
        return _exit_code(exc)
    sys.stdout.write(render(args.command, record, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())

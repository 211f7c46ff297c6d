"""Command-line front end.

Exit codes: 0 success, 1 usage error or unreadable input, 2 invalid
instance, 3 solver failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from importlib import metadata
from pathlib import Path

import numpy as np

from . import discriminatory, equilibrium, figures, generators, two_price, uniform, value_of_info
from .errors import InvalidInstance, NotPositiveDefinite, PricingError
from .model import MarketInstance, load_instance, validate

log = logging.getLogger("netpricing")

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_SOLVER = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (tuple, set, frozenset)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_jsonable(v) for v in obj]
    return obj


def _emit(payload: dict, out, args):
    text = json.dumps(_jsonable(payload), indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
        return
    out = Path(out)
    out.write_text(text)
    _write_manifest(out, args)


def _write_manifest(out: Path, args):
    params = {k: v for k, v in vars(args).items() if k != "func" and not k.startswith("_")}
    manifest = {
        "command": args._command,
        "parameters": _jsonable(params),
        "seed": getattr(args, "seed", None),
        "tolerances": {
            "equilibrium_tol": getattr(args, "tol", equilibrium.DEFAULT_TOL),
            "sdp_tol": two_price.SDP_TOL,
            "sdp_max_iter": two_price.SDP_MAX_ITER,
            "gain_tie_tol": uniform.GAIN_TIE_TOL,
        },
        "versions": {"netpricing": _version(), "numpy": np.__version__},
    }
    Path(str(out) + ".manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _load(path, strict=True) -> MarketInstance:
    if path is None:
        raise UsageError("--instance is required")
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"instance file not found: {path}")
    try:
        return load_instance(p, strict=strict)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse {path}: {exc}") from None


def _load_prices(path, n):
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"price file not found: {path}")
    data = json.loads(p.read_text())
    if isinstance(data, dict):
        data = data.get("p", data.get("prices"))
    prices = np.asarray(data, dtype=float)
    if prices.ndim == 0:
        prices = np.full(n, float(prices))
    if prices.shape != (n,) or not np.all(np.isfinite(prices)):
        raise UsageError(f"price vector must hold {n} finite numbers")
    return prices


def cmd_validate(args):
    inst = _load(args.instance, strict=False)
    report = validate(inst)
    _emit({"valid": report.ok, "violations": report.to_list()}, args.out, args)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_equilibrium(args):
    inst = _load(args.instance)
    if args.prices is None:
        raise UsageError("--prices is required")
    p = _load_prices(args.prices, inst.n)
    eq = equilibrium.solve_equilibrium(inst, p, tol=args.tol)
    _emit({"x": eq.x, "support": list(eq.support), "residual": eq.residual,
           "iterations": eq.iterations}, args.out, args)
    return EXIT_OK


def cmd_price(args):
    inst = _load(args.instance)
    if args.mode == "discriminate":
        res = discriminatory.optimal_prices(inst)
        payload = {"mode": "discriminate", "prices": res.p, "consumption": res.x,
                   "profit": res.profit, "nominal": res.nominal, "markup": res.markup,
                   "discount": res.discount}
    elif args.mode == "uniform":
        res = uniform.optimal_uniform_price(inst)
        eq = equilibrium.solve_equilibrium(inst, res.p_opt, tol=args.tol)
        payload = {"mode": "uniform", "price": res.p_opt,
                   "prices": np.full(inst.n, res.p_opt), "consumption": eq.x,
                   "profit": res.profit, "breakpoints": list(res.breakpoints),
                   "dropout_sets": [list(d) for d in res.dropout_sets],
                   "active_set": list(res.active_profile)}
    else:
        if args.p_low is None or args.p_high is None:
            raise UsageError("two-price mode needs --p-low and --p-high")
        tp = two_price.TwoPriceInstance(inst, args.p_low, args.p_high)
        res = two_price.approximate(tp, trials=args.trials, seed=args.seed,
                                    force_sdp=args.force_sdp)
        x = np.linalg.solve(inst.M, inst.a - res.prices)
        payload = {"mode": "two", "method": res.method, "y": res.y, "prices": res.prices,
                   "consumption": x, "profit": res.profit,
                   "sdp_upper_bound": res.sdp_upper_bound, "m_offset": res.m_offset,
                   "guarantee_holds": res.guarantee_holds,
                   "trials": None if res.trials is None else vars(res.trials)}
    _emit(payload, args.out, args)
    return EXIT_OK


def cmd_value_of_info(args):
    # diagonal dominance is not needed for the profit comparison; positive
    # definiteness of Lambda - G is, and is checked by the solver.
    inst = _load(args.instance, strict=False)
    bad = [v for v in validate(inst) if v.code == "margin"]
    if bad:
        raise InvalidInstance(str(bad[0]), bad)
    cmp = value_of_info.compare(inst)
    _emit({"pi0": cmp.pi0, "piN": cmp.piN, "ratio": cmp.ratio,
           "lower_bound": cmp.lower_bound, "upper_bound": cmp.upper_bound}, args.out, args)
    return EXIT_OK


def cmd_generate(args):
    n = args.n
    if args.family == "star":
        g1, g2 = generators.star_pair(n)
    elif args.family == "triangular":
        g1, g2 = generators.triangular_pair(n, args.seed)
    else:
        g1, g2 = generators.preferential_attachment_pair(n, args.seed)
    G = generators.blend(generators.BlendSpec(g1, g2, args.alpha))
    b = generators.parse_b_rule(args.b_rule, n)
    inst = generators.homogeneous_instance(G, b, b_is_diagonal=args.b_as_diagonal)
    _emit(inst.to_dict(), args.out, args)
    return EXIT_OK


def cmd_figure(args):
    if args.out is None:
        raise UsageError("figure needs --out for the CSV")
    rows = figures.sweep(args.family, n=args.n, b_rule=args.b_rule,
                         alpha_points=args.alpha_points, instances=args.instances,
                         seed=args.seed, b_is_diagonal=args.b_as_diagonal)
    out = Path(args.out)
    with out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(figures.COLUMNS)
        for r in rows:
            w.writerow([f"{getattr(r, col):.12g}" for col in figures.COLUMNS])
    _write_manifest(out, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="netpricing", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="_command", required=True, parser_class=_Parser)

    def common(p, instance=True):
        if instance:
            p.add_argument("--instance", help="JSON instance file")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--tol", type=float, default=equilibrium.DEFAULT_TOL)

    p = sub.add_parser("validate", help="check an instance against the model assumptions")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("equilibrium", help="consumption equilibrium at given prices")
    common(p)
    p.add_argument("--prices", help="JSON price vector (list, scalar, or {'p': [...]})")
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("price", help="optimal pricing")
    p.add_argument("mode", choices=("discriminate", "uniform", "two"))
    common(p)
    p.add_argument("--p-low", type=float)
    p.add_argument("--p-high", type=float)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force-sdp", action="store_true",
                   help="skip the exact enumeration used for n <= 20")
    p.set_defaults(func=cmd_price)

    p = sub.add_parser("value-of-info", help="network-blind vs full-information profit")
    common(p)
    p.set_defaults(func=cmd_value_of_info)

    def family_opts(p, default_b):
        p.add_argument("family", choices=figures.FAMILIES)
        p.add_argument("--n", type=int, default=100)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--b-rule", default=default_b, help="e.g. n/10, n/3, 2, 1.5")
        p.add_argument("--b-as-diagonal", action="store_true",
                       help="use the b value as Lambda_ii instead of b_i (= Lambda_ii / 2)")

    p = sub.add_parser("generate", help="emit a blended network instance as JSON")
    family_opts(p, "n/10")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("figure", help="profit-ratio sweep over alpha, written as CSV")
    family_opts(p, "n/10")
    p.add_argument("--alpha-points", type=int, default=101)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=cmd_figure)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"netpricing: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidInstance as exc:
        print(json.dumps({"error": "invalid instance", "message": str(exc),
                          "violations": [str(v) for v in exc.violations]}), file=sys.stderr)
        return EXIT_INVALID
    except NotPositiveDefinite as exc:
        print(f"netpricing: invalid instance: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PricingError as exc:
        log.error("solver failure: %s", exc)
        return EXIT_SOLVER
    except (ValueError, OSError) as exc:
        print(f"netpricing: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

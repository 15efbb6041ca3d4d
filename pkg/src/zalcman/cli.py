"""Command-line driver.

Exit codes: 0 pass, 1 assertion failure, 2 usage/configuration error.

Lambda grids are given as ``"r1,r2,... x K"`` (radii times K equally spaced
angles).  The theorem-critical values are always added on top: 0, 1 and 16
points on, just inside (x0.99) and just outside (x1.01) the circle separating
the two extremal regimes, which is

  hurwitz            |lam| = n^2/(2n-1)  (m = n),  4mn/(m+n-1)  (m != n)
  nw                 |1 - 2 lam (m+n-1)/(mn)| = 1
  hull_convex        |1 - lam| = 1
  hull_convex_alpha  |lam A_m A_n - A_{m+n-1}| = A_{m+n-1}
  hull_starlike      |1 - lam mn/(m+n-1)| = 1
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from . import asymptotics as asy
from .classes import ClassSpec, extremal, membership_residuals, sample, sample_many, sample_rng
from .errors import HypothesisViolated, InvalidArgument, Unsupported, ZalcmanError
from .functional import (
    FunctionalSpec,
    extremal_branches,
    lambda_grid,
    parse_lambda_grid,
    sharp_bounds,
    sum_form_slacks,
    zalcman_values,
)
from .reports import open_output, rows_to_dicts, write_csv, write_json
from .search import SearchConfig, maximize_functional

COMMANDS = ("verify", "extremal", "search", "scan", "hayman", "ratio", "audit")
DEFAULT_GRID = "0,0.5,1,1.3333333333333333,2,10 x 16"
EXTREMAL_TOL = 1e-12
ATTAIN_TOL = 1e-6

DEFAULTS: dict[str, Any] = {
    "command": None,
    "class": "hull_convex",
    "alpha": None,
    "m": "2",
    "n": "2",
    "lambda_grid": DEFAULT_GRID,
    "lambda": "1",
    "samples": 1000,
    "seed": 0,
    "order": None,
    "tol": 1e-9,
    "out": None,
    "format": "csv",
    "deterministic": False,
    "restarts": 20,
    "inject": None,
    "predicate": "B",
    "param": 0.0,
    "n_range": "2-8",
    "function": "koebe",
    "radii": 20,
    "path_range": "50-80",
    "a_n": None,
    "a_2n1": None,
}


class UsageError(ZalcmanError):
    pass


def parse_complex(text) -> complex:
    if isinstance(text, (int, float, complex)):
        return complex(text)
    s = str(text).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(s)
    except ValueError:
        pass
    try:
        return complex(float(Fraction(s)))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"cannot parse complex number {text!r}") from None


def parse_int_list(text) -> list[int]:
    if isinstance(text, int):
        return [text]
    if isinstance(text, list):
        return [int(v) for v in text]
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty integer list {text!r}")
    return out


def parse_inject(text: Optional[str]) -> Optional[dict[int, complex]]:
    if not text:
        return None
    terms = {}
    for part in str(text).split(","):
        k, _, v = part.partition("=")
        terms[int(k)] = parse_complex(v)
    return terms


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zalcman",
        description="Verify, attain and explore sharp bounds for lam*a_m*a_n - a_{m+n-1}.",
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("positional_command", nargs="?", choices=COMMANDS, metavar="COMMAND",
                   help="same as --command")
    p.add_argument("--command", choices=COMMANDS)
    p.add_argument("--class", dest="class_", metavar="CLASS",
                   help="hurwitz | nw | hull_convex | hull_convex_alpha | hull_starlike | koebe")
    p.add_argument("--alpha", type=float, help="order parameter for hull_convex_alpha (alpha < 1)")
    p.add_argument("--m", help="index m, or a list such as 2,3 or 2-5")
    p.add_argument("--n", help="index n, or a list")
    p.add_argument("--lambda-grid", help=f"radii x angles (default {DEFAULT_GRID!r})")
    p.add_argument("--lambda", dest="lambda_", help="single lambda for search/ratio, e.g. 3, 2/3, 1+1j")
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--order", type=int, help="truncation order (default 2*max(m, n))")
    p.add_argument("--tol", type=float)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--deterministic", action="store_true", default=None,
                   help="omit the timestamp header so identical runs give identical bytes")
    p.add_argument("--config", help="JSON file whose keys mirror these flags; flags win")
    p.add_argument("--restarts", type=int, help="search restarts")
    p.add_argument("--inject", help="verify: add the extra function z + sum c_k z^k given as 'k=c,...'")
    p.add_argument("--predicate", choices=asy.PREDICATES, help="scan: B (t), C (r) or D (r)")
    p.add_argument("--param", type=float, help="scan: value of t or r")
    p.add_argument("--n-range", help="scan: n values, e.g. 2-8")
    p.add_argument("--function", choices=sorted(asy.HANDLES), help="hayman/ratio: closed-form function")
    p.add_argument("--radii", type=int, help="hayman: number of radii r_j = 1 - 2^-j")
    p.add_argument("--path-range", help="ratio: n range along each scan path, e.g. 50-80")
    p.add_argument("--a-n", help="audit: a_n")
    p.add_argument("--a-2n1", help="audit: a_(2n-1)")
    return p


def resolve(args: argparse.Namespace) -> dict[str, Any]:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc}") from None
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key not in cfg:
                raise UsageError(f"unknown config key {key!r}")
            cfg[key] = value
    flag_values = {
        "command": args.command or args.positional_command,
        "class": args.class_,
        "alpha": args.alpha,
        "m": args.m,
        "n": args.n,
        "lambda_grid": args.lambda_grid,
        "lambda": args.lambda_,
        "samples": args.samples,
        "seed": args.seed,
        "order": args.order,
        "tol": args.tol,
        "out": args.out,
        "format": args.format,
        "deterministic": args.deterministic,
        "restarts": args.restarts,
        "inject": args.inject,
        "predicate": args.predicate,
        "param": args.param,
        "n_range": args.n_range,
        "function": args.function,
        "radii": args.radii,
        "path_range": args.path_range,
        "a_n": args.a_n,
        "a_2n1": args.a_2n1,
    }
    for key, value in flag_values.items():
        if value is not None:
            cfg[key] = value
    if cfg["command"] not in COMMANDS:
        raise UsageError("a command is required (--command verify|extremal|search|scan|hayman|ratio|audit)")
    if int(cfg["samples"]) < 1:
        raise UsageError("sample count must be >= 1")
    if float(cfg["tol"]) <= 0:
        raise UsageError("tolerance must be positive")
    if cfg["format"] not in ("csv", "json"):
        raise UsageError("format must be csv or json")
    return cfg


def class_spec(cfg) -> ClassSpec:
    return ClassSpec(cfg["class"], cfg["alpha"])


def emit(cfg, columns, rows, summary: dict) -> None:
    with open_output(cfg["out"]) as fh:
        if cfg["format"] == "csv":
            write_csv(fh, columns, rows, cfg["command"], bool(cfg["deterministic"]))
        else:
            write_json(fh, {"summary": summary, "rows": rows_to_dicts(columns, rows)},
                       cfg["command"], bool(cfg["deterministic"]))


def _pairs(cfg) -> list[tuple[int, int]]:
    pairs = [(m, n) for m in parse_int_list(cfg["m"]) for n in parse_int_list(cfg["n"])]
    for m, n in pairs:
        FunctionalSpec(0, m, n)
    return pairs


def _order(cfg, pairs) -> int:
    need = max(max(m, n) for m, n in pairs)
    order = int(cfg["order"]) if cfg["order"] is not None else 2 * need
    if order < max(m + n - 1 for m, n in pairs):
        raise UsageError(f"order {order} too small for the requested (m, n)")
    return order


# --- commands ------------------------------------------------------------------

VERIFY_COLUMNS = ("class", "m", "n", "re_lambda", "im_lambda", "value", "bound", "slack",
                  "residual", "seed", "sample_index", "flag")


def run_verify(cfg) -> int:
    spec = class_spec(cfg)
    pairs = _pairs(cfg)
    order = _order(cfg, pairs)
    tol, seed, count = float(cfg["tol"]), int(cfg["seed"]), int(cfg["samples"])
    radii, angles = parse_lambda_grid(cfg["lambda_grid"])

    coeffs = sample_many(spec, order, count, seed)
    indices = list(range(count))
    inject = parse_inject(cfg["inject"])
    if inject:
        extra = np.zeros(order, dtype=complex)
        extra[0] = 1.0
        for k, v in inject.items():
            if not 2 <= k <= order:
                raise UsageError(f"injected index {k} outside 2..{order}")
            extra[k - 1] = v
        coeffs = np.vstack([extra, coeffs])
        indices = [-1] + indices
    residuals = membership_residuals(spec, coeffs)
    member = residuals <= tol

    per_pair = []
    min_max_slack, min_sum_slack = np.inf, np.inf
    tested = 0
    for m, n in pairs:
        lams = lambda_grid(spec, m, n, radii, angles)
        values = zalcman_values(coeffs, lams, m, n)
        bounds = sharp_bounds(spec, lams, m, n)
        slack = bounds[None, :] - values
        sum_slack = sum_form_slacks(spec, coeffs, m, n)
        if member.any():
            min_max_slack = min(min_max_slack, float(slack[member].min()))
            min_sum_slack = min(min_sum_slack, float(sum_slack[member].min()))
        tested += int(member.sum()) * lams.size
        per_pair.append((m, n, lams, values, bounds, slack, sum_slack))

    rows = []
    spec_name = spec.tag.value
    for i, idx in enumerate(indices):
        for m, n, lams, values, bounds, slack, sum_slack in per_pair:
            for j, lam in enumerate(lams):
                if not member[i]:
                    flag = "nonmember"
                elif slack[i, j] < -tol:
                    flag = "violation"
                elif sum_slack[i] < -tol:
                    flag = "sum_violation"
                else:
                    flag = ""
                rows.append((spec_name, m, n, float(lam.real), float(lam.imag), float(values[i, j]),
                             float(bounds[j]), float(slack[i, j]), float(residuals[i]), seed, idx, flag))
    ok = min(min_max_slack, min_sum_slack) >= -tol
    summary = {
        "class": spec.name,
        "pairs_tested": tested,
        "min_slack": min_max_slack,
        "min_sum_form_slack": min_sum_slack,
        "nonmembers": int((~member).sum()),
        "passed": bool(ok),
    }
    emit(cfg, VERIFY_COLUMNS, rows, summary)
    print(f"{spec.name}, {tested} pairs tested, min slack {min_max_slack:.3e} "
          f"(sum form {min_sum_slack:.3e})", file=sys.stderr)
    return 0 if ok else 1


EXTREMAL_COLUMNS = ("class", "m", "n", "re_lambda", "im_lambda", "branch", "value", "bound", "diff", "pass")


def run_extremal(cfg) -> int:
    spec = class_spec(cfg)
    pairs = _pairs(cfg)
    radii, angles = parse_lambda_grid(cfg["lambda_grid"])
    rows = []
    failures = 0
    for m, n in pairs:
        order = _order(cfg, [(m, n)])
        lams = lambda_grid(spec, m, n, radii, angles)
        bounds = sharp_bounds(spec, lams, m, n)
        for lam, bound in zip(lams, bounds):
            fspec = FunctionalSpec(lam, m, n)
            for branch in extremal_branches(spec, fspec):
                f = extremal(spec, m, n, branch, order=order)
                value = float(zalcman_values(f.coeffs, [lam], m, n)[0, 0])
                diff = value - float(bound)
                ok = abs(diff) <= EXTREMAL_TOL
                failures += not ok
                rows.append((spec.tag.value, m, n, float(lam.real), float(lam.imag), branch,
                             value, float(bound), diff, ok))
    emit(cfg, EXTREMAL_COLUMNS, rows, {"class": spec.name, "checks": len(rows), "failures": failures})
    print(f"{spec.name}, {len(rows)} extremal checks, {failures} failures", file=sys.stderr)
    return 0 if failures == 0 else 1


def run_search(cfg) -> int:
    spec = class_spec(cfg)
    pairs = _pairs(cfg)
    lam = parse_complex(cfg["lambda"])
    results = []
    failures = 0
    for m, n in pairs:
        res = maximize_functional(spec, FunctionalSpec(lam, m, n),
                                  SearchConfig(restarts=int(cfg["restarts"]), seed=int(cfg["seed"])))
        exceeded = res.best_value > res.bound + float(cfg["tol"])
        ok = not exceeded and res.gap <= ATTAIN_TOL
        failures += not ok
        results.append((m, n, res, ok))
    deterministic = bool(cfg["deterministic"])
    with open_output(cfg["out"]) as fh:
        if cfg["format"] == "json":
            if len(results) == 1:
                payload = results[0][2].to_json()
            else:
                payload = {"results": [dict(m=m, n=n, **r.to_json()) for m, n, r, _ in results]}
            write_json(fh, payload, "search", deterministic)
        else:
            cols = ("class", "m", "n", "re_lambda", "im_lambda", "best_value", "bound", "gap",
                    "restarts_used", "seed", "params")
            write_csv(fh, cols, [(spec.tag.value, m, n, lam.real, lam.imag, r.best_value, r.bound, r.gap,
                                  r.restarts_used, r.seed, json.dumps(r.params.to_json()))
                                 for m, n, r, _ in results], "search", deterministic)
    for m, n, r, ok in results:
        print(f"{spec.name} m={m} n={n} lambda={lam}: best {r.best_value:.15g}, bound {r.bound:.15g}, "
              f"gap {r.gap:.3e}{'' if ok else '  FAIL'}", file=sys.stderr)
    return 0 if failures == 0 else 1


SCAN_COLUMNS = ("predicate", "param", "n", "sample_index", "slack", "violated")


def run_scan(cfg) -> int:
    spec = class_spec(cfg)
    ns = parse_int_list(cfg["n_range"])
    order = int(cfg["order"]) if cfg["order"] is not None else 2 * max(ns)
    if order < 2 * max(ns) - 1:
        raise UsageError(f"order {order} too small for n up to {max(ns)}")
    seed, count = int(cfg["seed"]), int(cfg["samples"])
    samples = (sample(spec, order, sample_rng(seed, i)) for i in range(count))
    report = asy.conjecture_scan(samples, cfg["predicate"], float(cfg["param"]), ns, float(cfg["tol"]))
    rows = [(r.predicate, r.param, r.n, r.sample_index, r.slack, r.violated) for r in report.rows]
    summary = {"class": spec.name, "predicate": cfg["predicate"], "param": float(cfg["param"]),
               "min_slack": report.min_slack, "violations": report.violations, "seed": seed}
    emit(cfg, SCAN_COLUMNS, rows, summary)
    print(f"{spec.name} ({cfg['predicate']}_{cfg['param']:g}): min slack {report.min_slack:.3e}, "
          f"{report.violations} violations", file=sys.stderr)
    return 0 if report.violations == 0 else 1


def run_hayman(cfg) -> int:
    est = asy.hayman_index(asy.HANDLES[cfg["function"]], int(cfg["radii"]))
    rows = [(j, r, v) for j, (r, v) in enumerate(zip(est.radii, est.values), start=1)]
    emit(cfg, ("j", "r_j", "value"), rows, {"function": cfg["function"], "alpha_hat": est.alpha_hat})
    print(f"{cfg['function']}: alpha_hat {est.alpha_hat:.9f}", file=sys.stderr)
    return 0


def run_ratio(cfg) -> int:
    lam = parse_complex(cfg["lambda"])
    span = parse_int_list(cfg["path_range"])
    coef = asy.COEFFICIENTS[cfg["function"]]
    rows = []
    for path, pairs in asy.scan_paths(min(span), max(span)).items():
        for (m, n), ratio in zip(pairs, asy.ratio_convergence(coef, lam, pairs)):
            rows.append((path, m, n, lam.real, lam.imag, ratio))
    emit(cfg, ("path", "m", "n", "re_lambda", "im_lambda", "ratio"), rows,
         {"function": cfg["function"], "max_ratio": max(r[-1] for r in rows)})
    return 0


AUDIT_COLUMNS = ("n", "seed", "sample_index", "re_a_n", "im_a_n", "re_a_2n1", "im_a_2n1", "a", "b", "c", "d", "agree")


def run_audit(cfg) -> int:
    n = parse_int_list(cfg["n"])[0]
    if cfg["a_n"] is not None or cfg["a_2n1"] is not None:
        pairs = [(parse_complex(cfg["a_n"] or 0), parse_complex(cfg["a_2n1"] or 0))]
    else:
        pairs = []
        for i in range(int(cfg["samples"])):
            rng = sample_rng(int(cfg["seed"]), i)
            pairs.append(asy.random_admissible_pair(n, rng))
    rows = []
    disagreements = 0
    for i, (an, a2) in enumerate(pairs):
        res = asy.zalcman_equivalence_audit(an, a2, n, tol=float(cfg["tol"]))
        disagreements += not res.agree
        rows.append((n, int(cfg["seed"]), i, an.real, an.imag, a2.real, a2.imag, res.a, res.b, res.c, res.d, res.agree))
    emit(cfg, AUDIT_COLUMNS, rows, {"n": n, "cases": len(rows), "disagreements": disagreements})
    return 0 if disagreements == 0 else 1


RUNNERS = {
    "verify": run_verify,
    "extremal": run_extremal,
    "search": run_search,
    "scan": run_scan,
    "hayman": run_hayman,
    "ratio": run_ratio,
    "audit": run_audit,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
        return RUNNERS[cfg["command"]](cfg)
    except HypothesisViolated as exc:
        print(f"hypothesis-violated: {exc}", file=sys.stderr)
        return 2
    except (UsageError, InvalidArgument, Unsupported, KeyError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

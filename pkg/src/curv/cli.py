"""``curv`` command line: compute, verify, bench, models.

Exit codes: 0 ok, 1 verification failure, 2 usage or parse error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import __version__
from . import combinatorics as cb
from . import doubleform as df
from .curvature import core as cc
from .curvature import pq as lv
from .geometry import models as gm
from .geometry.chart import ConfigurationError, GeometryError
from .geometry.frame import riemann_at
from .scalars import to_float

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


# ---------------------------------------------------------------- JSON helpers


def _scalar(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    v = to_float(x) + 0.0  # no negative zeros in reports
    return v if math.isfinite(v) else repr(v)


def _grid(w: df.DoubleForm):
    return [[_scalar(v) for v in row] for row in w.coeffs]


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------- compute


def _read_model_config(source: str) -> dict:
    text = source
    if not source.lstrip().startswith("{"):
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read model config {source!r}: {exc.strerror}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"model config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("model config must be a JSON object")
    return doc


def _point(model: gm.Model, config: dict) -> np.ndarray:
    if "point" in config:
        x = np.asarray(config["point"], dtype=float)
        if x.shape != (model.n,):
            raise UsageError(f"point must have {model.n} coordinates")
        return x
    return np.zeros(model.n) if model.center is None else np.asarray(model.center, dtype=float)


def curvature_report(model: gm.Model, mode: str, x: np.ndarray) -> dict:
    """Full hierarchy at one point, as a JSON-ready document."""
    n = model.n
    if mode == "rational":
        if model.exact_curvature is None:
            raise UsageError(f"model {model.name} has no exact curvature; use --mode float")
        R = model.exact_curvature
    else:
        R = riemann_at(model.chart, x).R
        R = cc.AlgebraicCurvature(cc.to_float_form(R.form), check=False)
    h = cc.hierarchy(R)
    doc = {
        "version": __version__,
        "model": model.name,
        "params": model.params,
        "n": n,
        "mode": mode,
        "point": [float(v) for v in x],
        "frame": "Gram-Schmidt of the coordinate basis" if mode == "float" else "orthonormal model frame",
        "basis": {str(p): [list(I) for I in cb.basis(n, p)] for p in range(n + 1)},
        "Scal": _scalar(h.scal),
        "Ric": _grid(h.ric),
        "Einstein": _grid(h.einstein),
        "dd_star": {str(p): _grid(h.ddstar[p]) for p in range(n - 1)},
        "s_p": {str(p): [_scalar(2 * h.ddstar[p].coeffs[r, r]) for r in range(math.comb(n, p))]
                for p in range(n - 1)},
        "lovelock": {str(q): _grid(lv.lovelock(R, q)) for q in range(1, n) if 2 * q < n},
        "h": {str(2 * q): _scalar(lv.gauss_bonnet(R, q)) for q in range(1, n // 2 + 1)},
    }
    if n >= 4:
        doc["h4"] = doc["h"]["4"]
    if n >= 3:
        w0, w1, w2 = cc.decompose(R)
        doc["decomposition_norms"] = {
            "weyl": df.norm(w2),
            "ricci_part": df.norm(df.metric(n) * w1),
            "scalar_part": abs(to_float(w0)) * df.norm(df.metric_power(n, 2)),
        }
    if n % 2 == 0 and n >= 4:
        mid = h.ddstar[n // 2] if n // 2 <= n - 2 else None
        if mid is not None:
            doc["self_dual_defect"] = cc.duality_defect(mid, 1)
            doc["anti_self_dual_defect"] = cc.duality_defect(mid, -1)
    if n >= 4:
        doc["d_of_n"] = lv.d_of_n(n)
    if mode == "float":
        doc["expectations"] = {k: _expectation(v) for k, v in model.expectations.items()}
    return doc


def _expectation(v):
    if isinstance(v, dict):
        return {str(k): _expectation(u) for k, u in v.items()}
    if isinstance(v, (list, tuple)):
        return [_expectation(u) for u in v]
    if isinstance(v, bool):
        return v
    return _scalar(v)


def cmd_compute(args) -> int:
    config = _read_model_config(args.model)
    model = gm.load_model(config)
    if model.n > gm.MAX_MODEL_DIM:
        raise UsageError(f"dimension {model.n} exceeds {gm.MAX_MODEL_DIM}")
    doc = curvature_report(model, args.mode, _point(model, config))
    _write(_dump(doc), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    from .verify.registry import RunConfig
    from .verify.suite import run_suite

    config = RunConfig(mode=args.mode, seed=args.seed, samples=args.samples, points=args.points,
                       chart_seeds=args.chart_seeds, filter=args.filter, corrupt=args.self_test_corrupt)
    report = run_suite(config)
    _write(report.to_json(), args.out)
    s = report.summary()
    print(f"{s['pass']} passed, {s['fail']} failed, {s['reported']} reported of {s['total']}", file=sys.stderr)
    return EXIT_FAIL if report.failed else EXIT_OK


# ---------------------------------------------------------------- bench


def _dims(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = (int(v) for v in text.split("..", 1))
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError as exc:
        raise UsageError(f"--n expects an integer or a range like 4..6, got {text!r}") from exc


def cmd_bench(args) -> int:
    from .verify.bench import bench

    rows = bench(_dims(args.n), seed=args.seed)
    _write(_dump({"rows": [r.to_dict() for r in rows]}), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- models


def cmd_models(args) -> int:
    doc = {"models": list(gm.MODEL_NAMES), "max_dimension": gm.MAX_MODEL_DIM}
    _write(_dump(doc), None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="curv", description="Curvature hierarchies of double forms.")
    p.add_argument("--version", action="version", version=f"curv {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="curvature report for a model config")
    c.add_argument("--model", required=True, help="JSON model config, inline or a file path")
    c.add_argument("--out", help="output path (default stdout)")
    c.add_argument("--mode", choices=("float", "rational"), default="float")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="run the identity checks")
    v.add_argument("--filter", help="regex on check ids")
    v.add_argument("--mode", choices=("float", "rational"), default="rational")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int, default=3, help="random tensors per dimension")
    v.add_argument("--points", type=int, default=2, help="sample points per chart")
    v.add_argument("--chart-seeds", type=int, default=1, help="perturbed-flat charts per dimension")
    v.add_argument("--out", help="output path (default stdout)")
    v.add_argument("--self-test-corrupt", action="store_true", help="inject a fault to exercise the harness")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="oracle versus optimized timings")
    b.add_argument("--n", default="4..6", help="dimension or range, e.g. 5 or 4..6")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", help="output path (default stdout)")
    b.set_defaults(func=cmd_bench)

    m = sub.add_parser("models", help="model catalog")
    m.add_argument("action", choices=("list",))
    m.set_defaults(func=cmd_models)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    from .verify.oracles import CostGuardError
    from .verify.suite import FilterError

    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (GeometryError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"curv: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ConfigurationError, FilterError, CostGuardError, ValueError, KeyError, TypeError) as exc:
        print(f"curv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

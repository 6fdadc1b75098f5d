"""Command-line front end: verifications, scans and tables as CSV or JSON.

Exit codes are 0 on success, 1 when a check or ``--assert`` threshold fails and
2 on usage errors. Output depends only on the command and its flags, so equal
invocations write byte-identical files. Wall-clock time goes to stderr unless
``--timing`` asks for it inside the JSON envelope.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .chsh import (
    TSIRELSON,
    ScanConfig,
    closed_form_correlation,
    maximize_chsh,
    pair_correlation,
    scan_inequality,
)
from .clifford import FANO_TRIPLES, associativity_defect
from .division import (
    alternativity_defect,
    corrupted_octonion_table,
    fano_subalgebra_associator,
    fano_subalgebra_closure_defect,
    max_unit_associator,
    norm_composition_defect,
    octonion_table,
    quaternion_norm_composition_defect,
)
from .models import (
    EnsembleSpec,
    chunk_rng,
    ghz_closed_form,
    ghz_correlation,
    linear_closed_form,
    linear_model_correlation,
)
from .parallel import curvature_check
from .quantum import GhzAngles, ghz4_expectation, hardy_amplitudes, hardy_closed_form, hardy_find_directions

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

MODE_ALIASES = {
    "s0": "S0",
    "s1": "S1",
    "s3": "S3-equatorial",
    "s3-nonequatorial": "S3-nonequatorial",
    "s7": "S7-equatorial",
    "s7-nonequatorial": "S7-nonequatorial",
    "linear": "linear",
}

COLUMNS = {
    "algebra-verify": ["check", "value", "threshold", "passed"],
    "parallelize-check": ["sphere", "sample_points", "step", "max_abs_curvature", "torsion_max_deviation",
                          "threshold", "passed"],
    "correlate": ["angle_rad", "correlation", "stderr", "model"],
    "chsh-scan": ["mode", "trials", "violations", "worst_margin", "max_abs_string", "max_bound"],
    "chsh-optimize": ["mode", "value", "bound", "torsion_dot", "stderr", "starts",
                      "a", "a2", "b", "b2", "alpha_a", "alpha_a2", "beta_b", "beta_b2"],
    "ghz": ["trial", "theta", "phi", "closed_form", "oracle", "octonion_model", "residual"],
    "hardy": ["theta", "a", "a2", "b", "b2", "residual", "amplitude4_abs", "closed_form", "amplitude4_error"],
}


class UsageError(Exception):
    pass


# formatting -----------------------------------------------------------------------


def _cell(v: Any) -> Any:
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_cell(x) for x in v]
    return v


def _csv_text(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, list):
        return " ".join(_csv_text(x) for x in v)
    return str(v)


def render(command: str, table: str, config: dict, rows: list[dict], fmt: str,
           duration: float | None = None) -> str:
    cols = COLUMNS[table]
    rows = [{c: _cell(r[c]) for c in cols} for r in rows]
    if fmt == "json":
        env: dict[str, Any] = {"command": command, "config": config, "version": __version__}
        if duration is not None:
            env["duration_s"] = duration
        env["columns"] = cols
        env["rows"] = rows
        return json.dumps(env, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_csv_text(r[c]) for c in cols])
    return buf.getvalue()


# commands -------------------------------------------------------------------------

Result = tuple[str, list[dict], bool]  # (table name, rows, passed)


def cmd_algebra_verify(args: argparse.Namespace) -> Result:
    table = corrupted_octonion_table() if args.corrupt_table else octonion_table()
    n, seed = args.samples, args.seed
    rows = []

    def add(check: str, value: float, threshold: float, ok: bool) -> None:
        rows.append({"check": check, "value": value, "threshold": threshold, "passed": bool(ok)})

    for dim, m in ((3, n), (7, max(n // 10, 1))):
        v = associativity_defect(dim, m, seed)
        add(f"cl{dim}_associativity", v, 1e-12, v < 1e-12)
    v = quaternion_norm_composition_defect(n, seed)
    add("quaternion_norm_composition", v, 1e-12, v < 1e-12)
    v = norm_composition_defect(table, n, seed)
    add("octonion_norm_composition", v, 1e-12, v < 1e-12)
    for t in FANO_TRIPLES:
        v = max(fano_subalgebra_closure_defect(t), fano_subalgebra_associator(t))
        add("fano_subalgebra_" + "".join(map(str, t)), v, 1e-12, v < 1e-12)
    v = alternativity_defect(table, n, seed)
    add("octonion_alternativity", v, 1e-12, v < 1e-12)
    v = max_unit_associator(table)
    add("octonion_nonzero_associator", v, 0.5, v > 0.5)
    return "algebra-verify", rows, all(r["passed"] for r in rows)


def cmd_parallelize_check(args: argparse.Namespace) -> Result:
    threshold = args.threshold
    if threshold is None:
        threshold = 1e-12 if args.sphere == "flat" else 1e-6
    rep = curvature_check(args.sphere, samples=args.samples, step=args.step, seed=args.seed)
    ok = rep.max_abs_component < threshold and rep.torsion.matches_expected
    row = {"sphere": rep.sphere, "sample_points": rep.sample_points, "step": rep.step,
           "max_abs_curvature": rep.max_abs_component, "torsion_max_deviation": rep.torsion.max_deviation,
           "threshold": threshold, "passed": ok}
    return "parallelize-check", [row], ok


def _correlate_point(model: str, b: np.ndarray, args) -> tuple[float, float, float]:
    """(value, stderr, reference) for a = e_x and a probe direction b."""
    a = np.array([1.0, 0.0, 0.0])
    if model == "linear":
        est = linear_model_correlation(a, b, EnsembleSpec("uniform-sphere-lambda", args.seed, args.samples))
        return est.scalar_part, est.stderr, float(linear_closed_form(a @ b))
    alpha = args.alpha if model.endswith("nonequatorial") else np.pi / 2
    beta = args.beta if model.endswith("nonequatorial") else np.pi / 2
    val = pair_correlation(model, a, b, alpha, beta)
    ref = closed_form_correlation(model, a[None], b[None], np.array([alpha]), np.array([beta]))[0]
    return val, 0.0, float(ref)


def cmd_correlate(args: argparse.Namespace) -> Result:
    model = MODE_ALIASES[args.model]
    if args.grid < 2:
        raise UsageError("--grid needs at least 2 points")
    if model == "linear" and args.samples < 100:
        raise UsageError("--samples must be >= 100 for the linear model")
    rows, ok = [], True
    for t in np.linspace(0.0, np.pi, args.grid):
        b = np.array([np.cos(t), np.sin(t), 0.0])
        val, err, ref = _correlate_point(model, b, args)
        tol = 3 * err if model == "linear" else 1e-12
        ok &= abs(val - ref) <= tol
        rows.append({"angle_rad": float(t), "correlation": val, "stderr": err, "model": args.model})
    return "correlate", rows, bool(ok)


def cmd_chsh(args: argparse.Namespace) -> Result:
    mode = MODE_ALIASES[args.mode]
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    cfg = ScanConfig(mode, args.seed, args.trials, grid_deg=args.grid_deg, random_starts=args.random_starts,
                     samples=args.samples)
    if args.optimize:
        if args.trials < 100:
            raise UsageError("--optimize needs --trials >= 100")
        r = maximize_chsh(cfg)
        q = r.quadruple
        target, tol = (2.0, 0.01) if mode == "linear" else ((2.0, 1e-6) if mode in ("S0", "S1")
                                                            else (TSIRELSON, 1e-6))
        row = {"mode": args.mode, "value": r.value, "bound": r.bound, "torsion_dot": r.torsion_dot,
               "stderr": r.stderr, "starts": r.starts, "a": q.a, "a2": q.a2, "b": q.b, "b2": q.b2,
               "alpha_a": q.alpha_a, "alpha_a2": q.alpha_a2, "beta_b": q.beta_b, "beta_b2": q.beta_b2}
        return "chsh-optimize", [row], abs(r.value - target) <= tol
    if mode == "linear":
        raise UsageError("scan the linear model with --mode s0 (its exact expectation)")
    s = scan_inequality(cfg)
    row = {"mode": args.mode, "trials": s.trials, "violations": s.violations, "worst_margin": s.worst_margin,
           "max_abs_string": s.max_abs_string, "max_bound": s.max_bound}
    return "chsh-scan", [row], s.violations == 0


def cmd_ghz(args: argparse.Namespace) -> Result:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    rng = chunk_rng(args.seed, 0, stream=4)
    theta = rng.uniform(0.0, np.pi, (args.trials, 4))
    phi = rng.uniform(0.0, 2 * np.pi, (args.trials, 4))
    closed = ghz_closed_form(theta, phi)
    rows, worst = [], 0.0
    for i in range(args.trials):
        oracle = ghz4_expectation(theta[i], phi[i])
        model = ghz_correlation(GhzAngles(tuple(theta[i]), tuple(phi[i])))
        res = max(abs(closed[i] - oracle), abs(model - oracle))
        worst = max(worst, res)
        rows.append({"trial": i, "theta": theta[i], "phi": phi[i], "closed_form": closed[i], "oracle": oracle,
                     "octonion_model": model, "residual": res})
    return "ghz", rows, worst < 1e-10


def cmd_hardy(args: argparse.Namespace) -> Result:
    rows, ok = [], True
    for t in args.theta:
        if not 0 < t < np.pi / 2:
            raise UsageError("--theta values must lie in (0, pi/2)")
        sol = hardy_find_directions(t)
        amp4 = abs(hardy_amplitudes(t, sol.a, sol.a2, sol.b, sol.b2)[3])
        ref = hardy_closed_form(t)
        err = abs(amp4 - ref)
        ok &= sol.residual < 1e-8 and err < 1e-6
        rows.append({"theta": t, "a": sol.a, "a2": sol.a2, "b": sol.b, "b2": sol.b2, "residual": sol.residual,
                     "amplitude4_abs": amp4, "closed_form": ref, "amplitude4_error": err})
    return "hardy", rows, bool(ok)


# parser ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 already; keep the message on stderr
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, samples: int, trials: int) -> None:
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None, help="file to write; stdout when omitted")
    p.add_argument("--assert", dest="assert_", action="store_true",
                   help="exit 1 when the command's acceptance threshold is not met")
    p.add_argument("--timing", action="store_true", help="put wall-clock time in the JSON envelope")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parasphere", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("algebra-verify", help="Clifford, quaternion and octonion identity checks")
    _common(p, 10_000, 1)
    p.add_argument("--corrupt-table", action="store_true", help="negative control: flip one octonion product")
    p.set_defaults(func=cmd_algebra_verify)

    p = sub.add_parser("parallelize-check", help="Weitzenboeck curvature and torsion of the global frame")
    _common(p, 50, 1)
    p.add_argument("--sphere", choices=("S3", "S7", "flat"), default="S3")
    p.add_argument("--step", type=float, default=1e-4)
    p.add_argument("--threshold", type=float, default=None, help="max |R| allowed (1e-6, or 1e-12 for flat)")
    p.set_defaults(func=cmd_parallelize_check)

    p = sub.add_parser("correlate", help="correlation table over an angle grid")
    _common(p, 10**6, 1)
    p.add_argument("--model", choices=sorted(MODE_ALIASES), default="s3")
    p.add_argument("--grid", type=int, default=17)
    p.add_argument("--alpha", type=float, default=np.pi / 2, help="polar offset of a (non-equatorial models)")
    p.add_argument("--beta", type=float, default=np.pi / 2, help="polar offset of b (non-equatorial models)")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("chsh", help="CHSH bound scan or optimizer")
    _common(p, 10**6, 10**5)
    p.add_argument("--mode", choices=sorted(MODE_ALIASES), default="s3")
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--grid-deg", type=float, default=1.0)
    p.add_argument("--random-starts", type=int, default=64)
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("ghz", help="four-particle closed form against the 16-dimensional oracle")
    _common(p, 1, 1000)
    p.set_defaults(func=cmd_ghz)

    p = sub.add_parser("hardy", help="solved Hardy directions and amplitudes")
    _common(p, 1, 1)
    p.add_argument("--theta", type=float, nargs="+", default=[0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4])
    p.set_defaults(func=cmd_hardy)
    return parser


def _config(args: argparse.Namespace) -> dict:
    skip = {"func", "output", "format", "timing", "command"}
    cfg = {k.rstrip("_"): _cell(v) for k, v in vars(args).items() if k not in skip}
    return dict(sorted(cfg.items()))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func: Callable[[argparse.Namespace], Result] = args.func
    start = time.perf_counter()
    try:
        table, rows, passed = func(args)
    except (UsageError, ValueError) as exc:
        print(f"parasphere {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    duration = time.perf_counter() - start
    text = render(args.command, table, _config(args), rows, args.format,
                  duration if args.timing and args.format == "json" else None)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"parasphere {args.command}: {duration:.3f} s", file=sys.stderr)
    # algebra and curvature checks fail hard; the others only under --assert
    must_pass = args.assert_ or args.command in ("algebra-verify", "parallelize-check")
    if must_pass and not passed:
        failed = [r.get("check", r.get("sphere", "")) for r in rows if r.get("passed") is False]
        detail = f" ({', '.join(map(str, failed))})" if failed else ""
        print(f"parasphere {args.command}: threshold not met{detail}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line interface.

Subcommands: profile (generate variance profiles), density (deterministic
density curves), outliers (determinant-based outlier location), sample
(Monte Carlo draws), validate (resolvent identity / concentration checks).

Configuration comes from an optional JSON file (--config) merged with
command-line flags; flags win.  Identical resolved configurations produce
byte-identical output files: floats are formatted with 17 significant
digits and every JSON artifact embeds the hash of the resolved
configuration.  Exit status is 1 for configuration errors and 2 when the
fixed-point solver fails to converge (diagnostics are then written next to
the requested output).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

import numpy as np

from .density import (density_curve, sv_density_correction, write_density_csv)
from .dilation import RectangularModel, RectangularSpikes, dilate_model
from .dyson import DysonDivergenceError, SolverConfig, SpectralParameter
from .outliers import (HermitianModel, SpikeSet, det_beta_curve, locate_outliers)
from .profiles import (VarianceProfile, bernoulli_profile, constant_profile,
                       doubly_stochastic_profile, normalize_profile,
                       piecewise_profile, read_profile_csv, write_profile_csv)
from .sampling import (SampleBatch, check_master_equality, sample_gue_profile,
                       sample_rect_gaussian, validate_concentration)

__all__ = ["main", "ConfigError"]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit status 1 instead of argparse's 2
        raise ConfigError(message)


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _config_hash(resolved: dict) -> str:
    canon = json.dumps(resolved, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


def _write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _merge_config(args: argparse.Namespace, fields: tuple) -> dict:
    """File values fill in unset flags; explicit flags win."""
    file_cfg = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {args.config}: {exc}")
        for key in file_cfg:
            if key.replace("-", "_") not in fields:
                raise ConfigError(f"config: unknown field '{key}'")
    resolved = {}
    for name in fields:
        flag = getattr(args, name)
        if flag is None:
            flag = file_cfg.get(name, file_cfg.get(name.replace("_", "-")))
        resolved[name] = flag
    return resolved


def _require(cfg: dict, field: str):
    if cfg.get(field) is None:
        raise ConfigError(f"{field}: required field is missing")
    return cfg[field]


def _parse_profile_spec(spec: str) -> VarianceProfile:
    """Either a profile CSV path or 'kind:key=value,...'."""
    if os.path.exists(spec) or spec.endswith(".csv"):
        try:
            return read_profile_csv(spec)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"profile: {exc}")
    if ":" in spec:
        kind, _, rest = spec.partition(":")
        pairs = [p for p in rest.split(",") if p]
    else:
        kind, pairs = spec, []
    opts = {}
    for pair in pairs:
        key, eq, value = pair.partition("=")
        if not eq:
            raise ConfigError(f"profile: malformed option '{pair}'")
        opts[key.strip()] = value.strip()
    try:
        return _build_profile(kind.strip(), opts)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"profile: {exc}")


def _build_profile(kind: str, opts: dict) -> VarianceProfile:
    kind = kind.replace("_", "-")
    hermitian = opts.pop("hermitian", "false").lower() in ("1", "true", "yes")
    if kind == "constant":
        n, m = int(opts.pop("n")), int(opts.pop("m"))
        value = float(opts.pop("value", "1.0"))
        prof = constant_profile(n, m, value, hermitian=hermitian)
    elif kind == "piecewise":
        n, m = int(opts.pop("n")), int(opts.pop("m"))
        ratio = float(opts.pop("ratio", "200.0"))
        prof = normalize_profile(
            piecewise_profile(n, m, 1.0, ratio, hermitian=hermitian))
    elif kind == "bernoulli":
        n, m = int(opts.pop("n")), int(opts.pop("m"))
        prof = bernoulli_profile(n, m, float(opts.pop("p")), int(opts.pop("seed")))
    elif kind == "doubly-stochastic":
        n = int(opts.pop("n"))
        prof = doubly_stochastic_profile(n, int(opts.pop("k", "1")),
                                         int(opts.pop("seed")))
    else:
        raise ConfigError(f"profile: unknown kind '{kind}'")
    if opts:
        raise ConfigError(f"profile: unknown option '{next(iter(opts))}'")
    return prof


def _parse_y_spec(spec: str | None, rows: int, cols: int | None = None):
    """'zero', 'diag:v1,v2,...' (a single value broadcasts) or 'csv:path'."""
    if spec is None or spec == "zero":
        return None
    if spec.startswith("diag:"):
        values = [float(v) for v in spec[5:].split(",") if v]
        if len(values) == 1:
            return np.full(rows, values[0])
        if len(values) != rows:
            raise ConfigError(f"y: diagonal needs 1 or {rows} values, got {len(values)}")
        return np.asarray(values)
    if spec.startswith("csv:"):
        path = spec[4:]
        try:
            y = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"y: cannot read {path}: {exc}")
        expect = (rows, rows if cols is None else cols)
        if y.shape != expect:
            raise ConfigError(f"y: matrix has shape {y.shape}, expected {expect}")
        return y
    raise ConfigError(f"y: unknown specification '{spec}'")


def _parse_grid(spec: str, eta: float) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise ConfigError("grid: expected 'min:max' or 'min:max:step'")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else eta / 2.0
    except ValueError:
        raise ConfigError(f"grid: malformed specification '{spec}'")
    if not hi > lo or step <= 0.0:
        raise ConfigError("grid: needs max > min and step > 0")
    count = int(round((hi - lo) / step)) + 1
    return lo + step * np.arange(count)


def _parse_window(spec: str | None):
    if spec is None:
        return None
    parts = spec.split(":")
    if len(parts) != 2:
        raise ConfigError("window: expected 'lo:hi'")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError:
        raise ConfigError(f"window: malformed specification '{spec}'")


def _solver_config(cfg: dict) -> SolverConfig:
    try:
        return SolverConfig(tolerance=float(cfg.get("tolerance") or 1e-12),
                            max_iterations=int(cfg.get("max_iterations") or 10000))
    except ValueError as exc:
        raise ConfigError(f"solver: {exc}")


def _spike_vector(kind: str, n: int) -> np.ndarray:
    if kind == "constant":
        return np.full((n, 1), 1.0 / np.sqrt(n))
    if kind == "e1":
        vec = np.zeros((n, 1))
        vec[0, 0] = 1.0
        return vec
    raise ConfigError(f"vectors: unknown kind '{kind}'")


def _load_vector_csv(path: str, n: int, m: int | None):
    try:
        data = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=1)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"vectors: cannot read {path}: {exc}")
    expect = n if m is None else n + m
    if data.shape != (expect,):
        raise ConfigError(f"vectors: expected {expect} values, got {data.shape}")
    if m is None:
        return data.reshape(-1, 1), None
    return data[:n].reshape(-1, 1), data[n:].reshape(-1, 1)


# ---------------------------------------------------------------- commands

_PROFILE_FIELDS = ("kind", "n", "m", "p", "k", "seed", "value", "gamma_ratio",
                   "hermitian", "normalize", "out")


def _cmd_profile(args) -> int:
    cfg = _merge_config(args, _PROFILE_FIELDS)
    kind = str(_require(cfg, "kind")).replace("_", "-")
    out = _require(cfg, "out")
    n = int(_require(cfg, "n"))
    hermitian = bool(cfg["hermitian"])
    if kind == "constant":
        m = int(_require(cfg, "m"))
        profile = constant_profile(n, m, float(cfg["value"] or 1.0),
                                   hermitian=hermitian)
    elif kind == "piecewise":
        m = int(_require(cfg, "m"))
        ratio = float(cfg["gamma_ratio"] or 200.0)
        profile = normalize_profile(
            piecewise_profile(n, m, 1.0, ratio, hermitian=hermitian))
    elif kind == "bernoulli":
        m = int(_require(cfg, "m"))
        profile = bernoulli_profile(n, m, float(_require(cfg, "p")),
                                    int(_require(cfg, "seed")))
    elif kind == "doubly-stochastic":
        profile = doubly_stochastic_profile(n, int(cfg["k"] or 1),
                                            int(_require(cfg, "seed")))
    else:
        raise ConfigError(f"kind: unknown profile kind '{kind}'")
    if cfg["normalize"] is not None:
        profile = normalize_profile(profile, float(cfg["normalize"]))

    write_profile_csv(profile, out)
    _write_json(out + ".meta.json", {
        "command": "profile",
        "config": cfg,
        "config_hash": _config_hash(cfg),
        "rows": profile.rows,
        "cols": profile.cols,
        "mode": profile.mode,
        "gamma_max_sq": profile.gamma_max_sq,
        "mean_variance": profile.mean_variance(),
    })
    print(f"wrote {out} ({profile.rows}x{profile.cols}, {profile.mode})")
    return 0


_DENSITY_FIELDS = ("profile", "y", "grid", "eta", "tolerance", "max_iterations",
                   "workers", "out")


def _cmd_density(args) -> int:
    cfg = _merge_config(args, _DENSITY_FIELDS)
    profile = _parse_profile_spec(str(_require(cfg, "profile")))
    out = _require(cfg, "out")
    eta = float(cfg["eta"] or 0.01)
    if eta <= 0.0:
        raise ConfigError("eta: must be > 0")
    grid = _parse_grid(str(_require(cfg, "grid")), eta)
    solver = _solver_config(cfg)
    workers = int(cfg["workers"] or os.environ.get("DETEQ_THREADS", "1"))

    dilated = profile.mode == "rectangular"
    if dilated:
        if np.any(grid < 0.0):
            raise ConfigError("grid: singular-value grids need min >= 0")
        y_rect = _parse_y_spec(cfg["y"], profile.rows, profile.cols)
        if y_rect is not None and y_rect.ndim == 1:
            raise ConfigError("y: rectangular models need 'zero' or a csv matrix")
        model = dilate_model(RectangularModel(profile=profile, y=y_rect))
        curve = density_curve(model.profile, model.y, grid, eta=eta,
                              config=solver, workers=workers)
        curve = sv_density_correction(curve, profile.rows, profile.cols)
    else:
        y = _parse_y_spec(cfg["y"], profile.rows)
        curve = density_curve(profile, y, grid, eta=eta, config=solver,
                              workers=workers)

    write_density_csv(curve, out)
    meta = {
        "command": "density",
        "config": cfg,
        "config_hash": _config_hash(cfg),
        "eta": curve.eta,
        "tolerance": curve.tolerance,
        "dilated": dilated,
        "rows": profile.rows,
        "cols": profile.cols,
        "converged": [bool(f) for f in curve.converged],
    }
    _write_json(out + ".meta.json", meta)
    failed = int(np.sum(~curve.converged))
    if failed:
        diag_path = out + ".diagnostics.json"
        _write_json(diag_path, {
            "command": "density",
            "config_hash": _config_hash(cfg),
            "failed_points": [float(t) for t in curve.grid[~curve.converged]],
            "failed_count": failed,
            "tolerance": curve.tolerance,
            "hint": "raise max_iterations, loosen tolerance or increase eta",
        })
        print(f"solver failed to converge at {failed} grid points; "
              f"diagnostics in {diag_path}", file=sys.stderr)
        return 2
    print(f"wrote {out} ({grid.size} points, eta={_fmt(eta)})")
    return 0


_OUTLIER_FIELDS = ("model", "y", "theta_list", "vectors", "use_tilde", "threshold",
                   "window", "scan_points", "eta_eval", "tolerance",
                   "max_iterations", "out")


def _cmd_outliers(args) -> int:
    cfg = _merge_config(args, _OUTLIER_FIELDS)
    profile = _parse_profile_spec(str(_require(cfg, "model")))
    out = _require(cfg, "out")
    thetas = [float(v) for v in str(_require(cfg, "theta_list")).split(",") if v]
    if not thetas:
        raise ConfigError("theta_list: needs at least one spike strength")
    vectors = str(cfg["vectors"] or "constant")
    use_tilde = bool(cfg["use_tilde"])
    threshold = float(cfg["threshold"] or 1e-3)
    window = _parse_window(cfg["window"])
    scan_points = int(cfg["scan_points"] or 50)
    eta_eval = float(cfg["eta_eval"] or 1e-3)
    solver = _solver_config(cfg)

    rectangular = profile.mode == "rectangular"
    n, m = profile.rows, profile.cols
    if vectors.startswith("csv:"):
        u, v = _load_vector_csv(vectors[4:], n, m if rectangular else None)
    else:
        u = _spike_vector(vectors, n)
        v = _spike_vector(vectors, m) if rectangular else None

    cache: dict = {}
    reports = []
    try:
        for theta in thetas:
            if rectangular:
                if theta <= 0.0:
                    raise ConfigError("theta_list: rectangular spikes need theta > 0")
                y_rect = _parse_y_spec(cfg["y"], n, m)
                if y_rect is not None and y_rect.ndim == 1:
                    raise ConfigError("y: rectangular models need 'zero' or a csv matrix")
                spikes = RectangularSpikes(u=u, theta=[theta], v=v)
                model = HermitianModel.from_dilated(dilate_model(
                    RectangularModel(profile=profile, y=y_rect, spikes=spikes)))
            else:
                y = _parse_y_spec(cfg["y"], n)
                model = HermitianModel(profile=profile, y=y,
                                       spikes=SpikeSet(u=u, theta=[theta]))
            reports.append(locate_outliers(
                model, window=window, config=solver, use_tilde=use_tilde,
                threshold=threshold, scan_points=scan_points,
                eta_eval=eta_eval, cache=cache))
    except (RuntimeError, DysonDivergenceError) as exc:
        diag_path = out + ".diagnostics.json"
        _write_json(diag_path, {
            "command": "outliers",
            "config_hash": _config_hash(cfg),
            "error": str(exc),
            "completed_thetas": thetas[: len(reports)],
        })
        print(f"outlier search failed: {exc}; diagnostics in {diag_path}",
              file=sys.stderr)
        return 2

    payload = {
        "command": "outliers",
        "config": cfg,
        "config_hash": _config_hash(cfg),
        "use_tilde": use_tilde,
        "dilated": rectangular,
        "theta": thetas,
        "reports": [r.to_json_dict() for r in reports],
    }
    _write_json(out, payload)

    curve_path = out + ".curve.csv"
    if len(thetas) == 1:
        lo, hi = reports[0].window
        lams = np.linspace(lo, hi, max(scan_points, 200))
        dets, _ = det_beta_curve(_last_model(profile, cfg, u, v, thetas[0],
                                             rectangular),
                                 lams, use_tilde=use_tilde, config=solver,
                                 eta_eval=eta_eval, cache=cache)
        lines = ["lambda,det_abs"]
        lines += [f"{t:.17g},{abs(d):.17g}" for t, d in zip(lams, dets)]
    else:
        lines = ["theta,lambda,det_abs,accepted"]
        for theta, report in zip(thetas, reports):
            if report.candidates:
                best = min(report.candidates, key=lambda c: c.det_abs)
                lines.append(f"{theta:.17g},{best.lam:.17g},"
                             f"{best.det_abs:.17g},{int(best.accepted)}")
            else:
                lines.append(f"{theta:.17g},nan,nan,0")
    with open(curve_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")

    n_accept = sum(len(r.accepted()) for r in reports)
    print(f"wrote {out} ({len(thetas)} spike strengths, "
          f"{n_accept} accepted outliers)")
    return 0


def _last_model(profile, cfg, u, v, theta, rectangular):
    if rectangular:
        y_rect = _parse_y_spec(cfg["y"], profile.rows, profile.cols)
        spikes = RectangularSpikes(u=u, theta=[theta], v=v)
        return HermitianModel.from_dilated(dilate_model(
            RectangularModel(profile=profile, y=y_rect, spikes=spikes)))
    y = _parse_y_spec(cfg["y"], profile.rows)
    return HermitianModel(profile=profile, y=y, spikes=SpikeSet(u=u, theta=[theta]))


_SAMPLE_FIELDS = ("profile", "y", "count", "seed", "out")


def _cmd_sample(args) -> int:
    cfg = _merge_config(args, _SAMPLE_FIELDS)
    profile = _parse_profile_spec(str(_require(cfg, "profile")))
    out = _require(cfg, "out")
    count = int(cfg["count"] or 1)
    if count < 1:
        raise ConfigError("count: must be >= 1")
    seed = int(_require(cfg, "seed"))

    batch = SampleBatch(seed=seed, count=count, n=profile.rows)
    values = []
    if profile.mode == "hermitian":
        y = _parse_y_spec(cfg["y"], profile.rows)
        y_add = 0.0 if y is None else (np.diag(y) if y.ndim == 1 else y)
        for child in batch.child_seeds():
            h = sample_gue_profile(profile, child) + y_add
            values.append(np.linalg.eigvalsh(h))
    else:
        y = _parse_y_spec(cfg["y"], profile.rows, profile.cols)
        if y is not None and y.ndim == 1:
            raise ConfigError("y: rectangular models need 'zero' or a csv matrix")
        for child in batch.child_seeds():
            x = sample_rect_gaussian(profile, child)
            if y is not None:
                x = x + y
            values.append(np.linalg.svd(x, compute_uv=False))
    flat = np.concatenate(values)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(_fmt(v) for v in flat) + "\n")
    _write_json(out + ".meta.json", {
        "command": "sample",
        "config": cfg,
        "config_hash": _config_hash(cfg),
        "count": count,
        "values_per_draw": values[0].size,
        "mode": profile.mode,
        "kind": "eigenvalues" if profile.mode == "hermitian" else "singular_values",
    })
    print(f"wrote {out} ({count} draws, {flat.size} values)")
    return 0


_VALIDATE_FIELDS = ("what", "n", "samples", "d", "delta", "seed", "lambda_re",
                    "lambda_im", "profile", "bound_factor", "min_pass_rate", "out")


def _cmd_validate(args) -> int:
    cfg = _merge_config(args, _VALIDATE_FIELDS)
    what = str(_require(cfg, "what"))
    out = _require(cfg, "out")
    n = int(cfg["n"] or 50)
    samples = int(cfg["samples"] or 100)
    seed = int(cfg["seed"] or 0)
    if cfg["profile"] is not None:
        profile = _parse_profile_spec(str(cfg["profile"]))
        if profile.mode != "hermitian":
            raise ConfigError("profile: validation runs on hermitian profiles")
        n = profile.rows
    else:
        profile = constant_profile(n, n, 1.0, hermitian=True)

    if what == "master":
        lam_c = complex(float(cfg["lambda_re"] or 0.0),
                        float(cfg["lambda_im"] or 1.0))
        if lam_c.imag <= 0.0:
            raise ConfigError("lambda_im: must be > 0")
        lam = SpectralParameter.scalar(lam_c, n)
        deviation = check_master_equality(
            profile, None, lam, SampleBatch(seed=seed, count=samples, n=n))
        bound = float(cfg["bound_factor"] or 5.0) / np.sqrt(samples)
        result = {
            "deviation": deviation,
            "bound": bound,
            "passed": bool(deviation <= bound),
        }
    elif what == "concentration":
        lam_c = complex(float(cfg["lambda_re"] or 0.0),
                        float(cfg["lambda_im"] or 0.5))
        if lam_c.imag <= 0.0:
            raise ConfigError("lambda_im: must be > 0")
        summary = validate_concentration(
            profile, None, lam_c, d=float(cfg["d"] or 2.0),
            delta=float(cfg["delta"] or 0.5), draws=samples, seed=seed)
        min_rate = float(cfg["min_pass_rate"] or 0.95)
        result = dict(summary)
        result["min_pass_rate"] = min_rate
        result["passed"] = bool(summary["pass_rate"] >= min_rate)
    else:
        raise ConfigError(f"what: unknown validation '{what}'")

    payload = {
        "command": "validate",
        "what": what,
        "config": cfg,
        "config_hash": _config_hash(cfg),
        "n": n,
        "samples": samples,
        "result": result,
    }
    _write_json(out, payload)
    status = "PASS" if result["passed"] else "FAIL"
    print(f"{what}: {status} ({out})")
    return 0


# ---------------------------------------------------------------- parser

def _add_common(sub):
    sub.add_argument("--config", help="JSON file with defaults for this command")
    sub.add_argument("--out", help="output file path")


def _build_parser() -> _Parser:
    parser = _Parser(prog="deteq",
                     description="Deterministic equivalents for deformed "
                                 "Gaussian matrices with variance profiles")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("profile", help="generate a variance profile CSV")
    _add_common(p)
    p.add_argument("--kind", choices=["constant", "piecewise", "bernoulli",
                                      "doubly-stochastic"])
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--p", type=float, help="bernoulli survival probability")
    p.add_argument("--k", type=int, help="permutation count (doubly-stochastic)")
    p.add_argument("--seed", type=int)
    p.add_argument("--value", type=float, help="constant profile variance")
    p.add_argument("--gamma-ratio", type=float,
                   help="gamma2^2 / gamma1^2 for piecewise profiles")
    p.add_argument("--hermitian", action="store_const", const=True)
    p.add_argument("--normalize", type=float,
                   help="rescale to this average variance")
    p.set_defaults(func=_cmd_profile)

    p = commands.add_parser("density", help="deterministic density curve CSV")
    _add_common(p)
    p.add_argument("--profile", help="profile CSV path or kind:key=value,... spec")
    p.add_argument("--y", help="zero | diag:v1,... | csv:path")
    p.add_argument("--grid", help="min:max[:step], step defaults to eta/2; "
                                  "use --grid=-3:3:0.1 for negative minima")
    p.add_argument("--eta", type=float)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--max-iterations", type=int)
    p.add_argument("--workers", type=int,
                   help="grid parallelism (default: DETEQ_THREADS or 1)")
    p.set_defaults(func=_cmd_density)

    p = commands.add_parser("outliers", help="locate spike-induced outliers")
    _add_common(p)
    p.add_argument("--model", help="profile CSV path or kind:key=value,... spec")
    p.add_argument("--y", help="zero | diag:v1,... | csv:path")
    p.add_argument("--theta-list", help="comma-separated spike strengths")
    p.add_argument("--vectors", help="constant | e1 | csv:path")
    p.add_argument("--use-tilde", action="store_const", const=True)
    p.add_argument("--threshold", type=float)
    p.add_argument("--window", help="lo:hi search window")
    p.add_argument("--scan-points", type=int)
    p.add_argument("--eta-eval", type=float)
    p.add_argument("--tolerance", type=float)
    p.add_argument("--max-iterations", type=int)
    p.set_defaults(func=_cmd_outliers)

    p = commands.add_parser("sample", help="Monte Carlo eigen/singular values")
    _add_common(p)
    p.add_argument("--profile", help="profile CSV path or kind:key=value,... spec")
    p.add_argument("--y", help="zero | diag:v1,... | csv:path")
    p.add_argument("--count", type=int)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_sample)

    p = commands.add_parser("validate", help="Monte Carlo identity checks")
    _add_common(p)
    p.add_argument("--what", choices=["master", "concentration"])
    p.add_argument("--n", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--d", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--lambda-re", type=float)
    p.add_argument("--lambda-im", type=float)
    p.add_argument("--profile")
    p.add_argument("--bound-factor", type=float)
    p.add_argument("--min-pass-rate", type=float)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except DysonDivergenceError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:  # ConfigError and validation errors from the library
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

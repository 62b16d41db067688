"""Config-driven experiment runner with reproducible CSV output.

Experiments: sew, holonomy, knit, certify.  Configs are JSON documents; all
floats print with 17 significant digits so identical config + seed produces
byte-identical CSV.  Exit codes: 0 all assertions pass, 1 config errors,
2 bound violations or non-convergence.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import certify as certify_mod
from .errors import BoundViolation, ConfigError, NonConvergence, SewkitError
from .flows import MODE_KNITTING, ApproxFlowModel
from .knitting import build_net, holonomy, knit_compare, linear_pair_homotopy
from .models import (
    FlatConnection,
    make_additive_sin,
    make_euler_linear,
    make_euler_matrix,
    make_euler_sin,
    make_flat_connection,
    make_young,
)
from .paths import (
    LipPath,
    arc_path,
    circle_path,
    ellipse_arc_path,
    path_from_csv,
    polyline,
    square_loop,
)
from .sewing import sew, within_bound

EXPERIMENTS = ("sew", "knit", "holonomy", "certify")

_YOUNG_FNS: dict[str, tuple[Callable[[float], float], float]] = {
    # name -> (function, Hoelder-1 constant on [0,1])
    "linear": (lambda t: t, 1.0),
    "sin": (math.sin, 1.0),
    "quadratic": (lambda t: t * t, 2.0),
}


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


_REQUIRED = object()


def _cfg_get(cfg: dict, key: str, kind, where: str, default=_REQUIRED):
    if key not in cfg:
        if default is not _REQUIRED:
            return default
        raise ConfigError(f"missing field {where}.{key}")
    val = cfg[key]
    if kind is float and isinstance(val, (int, float)) and not isinstance(val, bool):
        return float(val)
    if kind is int and isinstance(val, int) and not isinstance(val, bool):
        return val
    if not isinstance(val, kind):
        raise ConfigError(f"field {where}.{key} must be {kind.__name__}, got {type(val).__name__}")
    return val


def build_model(spec: dict, where: str = "model") -> ApproxFlowModel:
    name = _cfg_get(spec, "name", str, where)
    probes = _cfg_get(spec, "probes", int, where, 5)
    if name == "additive_sin":
        return make_additive_sin(probe_n=probes)
    if name == "euler_linear":
        return make_euler_linear(_cfg_get(spec, "lam", float, where, 1.0), probe_n=probes)
    if name == "euler_sin":
        return make_euler_sin(probe_n=probes)
    if name == "euler_matrix":
        return make_euler_matrix(_cfg_get(spec, "a", list, where))
    if name == "young":
        xk = _cfg_get(spec, "driver", str, where, "linear")
        yk = _cfg_get(spec, "integrand", str, where, "linear")
        for key, val in (("driver", xk), ("integrand", yk)):
            if val not in _YOUNG_FNS:
                raise ConfigError(
                    f"{where}.{key} must be one of {sorted(_YOUNG_FNS)}, got {val!r}"
                )
        x_fn, c_x = _YOUNG_FNS[xk]
        y_fn, c_y = _YOUNG_FNS[yk]
        return make_young(
            x_fn,
            y_fn,
            _cfg_get(spec, "alpha", float, where, 1.0),
            _cfg_get(spec, "beta", float, where, 1.0),
            c_x,
            c_y,
            name=f"young({xk},{yk})",
            probe_n=probes,
        )
    if name == "flat_connection":
        return make_flat_connection(
            variant=_cfg_get(spec, "variant", str, where, FlatConnection.EXACT),
            r0=_cfg_get(spec, "r0", float, where, 0.5),
            fiber_probes=_cfg_get(spec, "probes", int, where, 8),
        )
    raise ConfigError(
        f"unknown {where}.name {name!r}; expected one of additive_sin, euler_linear, "
        "euler_sin, euler_matrix, young, flat_connection"
    )


def build_path(spec: dict, where: str = "path") -> LipPath:
    kind = _cfg_get(spec, "kind", str, where)
    segs = _cfg_get(spec, "segments", int, where, 64)
    if kind == "circle":
        return circle_path(
            _cfg_get(spec, "radius", float, where, 1.0),
            _cfg_get(spec, "turns", float, where, 1.0),
            segs,
        )
    if kind == "arc":
        return arc_path(
            _cfg_get(spec, "radius", float, where, 1.0),
            _cfg_get(spec, "angle0", float, where, 0.0),
            _cfg_get(spec, "angle1", float, where, math.pi),
            segs,
        )
    if kind == "ellipse_arc":
        return ellipse_arc_path(
            _cfg_get(spec, "rx", float, where, 1.0),
            _cfg_get(spec, "ry", float, where, 1.5),
            _cfg_get(spec, "angle0", float, where, 0.0),
            _cfg_get(spec, "angle1", float, where, math.pi),
            segs,
        )
    if kind == "square":
        center = _cfg_get(spec, "center", list, where, [2.0, 0.0])
        return square_loop((float(center[0]), float(center[1])),
                           _cfg_get(spec, "half_side", float, where, 0.5))
    if kind == "points":
        pts = _cfg_get(spec, "points", list, where)
        breaks = spec.get("breaks")
        tupled = tuple(tuple(float(c) for c in p) if isinstance(p, list) else float(p) for p in pts)
        return polyline(tupled, tuple(float(b) for b in breaks) if breaks else None)
    if kind == "csv":
        return path_from_csv(_cfg_get(spec, "file", str, where))
    raise ConfigError(f"unknown {where}.kind {kind!r}")


def build_homotopy(spec: dict, where: str = "config.homotopy"):
    """A homotopy is a pair of PL paths (linear interpolation) or a named
    built-in from the circle family."""
    kind = spec.get("kind", "pair")
    if kind == "pair":
        g0 = build_path(_cfg_get(spec, "path0", dict, where), f"{where}.path0")
        g1 = build_path(_cfg_get(spec, "path1", dict, where), f"{where}.path1")
        return linear_pair_homotopy(g0, g1)
    if kind == "semicircle_to_ellipse":
        segs = _cfg_get(spec, "segments", int, where, 64)
        g0 = arc_path(1.0, 0.0, math.pi, segs)
        g1 = ellipse_arc_path(1.0, _cfg_get(spec, "ry", float, where, 1.6), 0.0, math.pi, segs)
        return linear_pair_homotopy(g0, g1)
    raise ConfigError(f"unknown {where}.kind {kind!r}; expected pair or semicircle_to_ellipse")


def _write_csv(path: str, header: list[str], rows: list[list[Any]]) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _run_sew(cfg: dict, rng: np.random.Generator) -> tuple[list[str], list[list[Any]], int]:
    model = build_model(_cfg_get(cfg, "model", dict, "config"))
    interval = _cfg_get(cfg, "interval", list, "config", [0.0, 1.0])
    tol = _cfg_get(cfg, "tol", float, "config", 1e-8)
    max_level = _cfg_get(cfg, "max_level", int, "config", 20)
    status = 0
    try:
        _, cert = sew(
            model,
            float(interval[0]),
            float(interval[1]),
            tol,
            max_level=max_level,
            value_fn=model.summary,
        )
    except (BoundViolation, NonConvergence) as exc:
        if isinstance(exc, NonConvergence) and exc.certificate is not None:
            cert = exc.certificate
            status = 2
        else:
            raise
    rows: list[list[Any]] = []
    for rec in cert.levels:
        rows.append(
            [
                rec.level,
                rec.mesh,
                rec.successive if rec.successive is not None else 0.0,
                rec.refine_bound,
                rec.value if rec.value is not None else "",
            ]
        )
    rows.append(["limit", 0.0, cert.tail_estimate, cert.claimed_bound,
                 cert.limit_value if cert.limit_value is not None else ""])
    if cert.mu_bound_ok is False:
        status = 2
    return ["level", "mesh", "successive_distance", "bound", "value"], rows, status


def _run_holonomy(cfg: dict, rng: np.random.Generator) -> tuple[list[str], list[list[Any]], int]:
    model = build_model(_cfg_get(cfg, "model", dict, "config"))
    path = build_path(_cfg_get(cfg, "path", dict, "config"))
    tol = _cfg_get(cfg, "tol", float, "config", 1e-8)
    max_level = _cfg_get(cfg, "max_level", int, "config", 20)
    status = 0
    _, summary = holonomy(model, path, tol, max_level=max_level)
    cert = summary.certificate
    rows: list[list[Any]] = []
    for rec in cert.levels:
        rows.append(
            [
                rec.level,
                rec.mesh,
                rec.successive if rec.successive is not None else 0.0,
                rec.refine_bound,
                "",
            ]
        )
    rows.append(["limit", 0.0, cert.tail_estimate, cert.claimed_bound, ""])
    if summary.angle is not None:
        rows.append(["angle", 0.0, 0.0, 0.0, summary.angle])
    return ["level", "mesh", "successive_distance", "bound", "value"], rows, status


def _run_knit(cfg: dict, rng: np.random.Generator) -> tuple[list[str], list[list[Any]], int]:
    model = build_model(_cfg_get(cfg, "model", dict, "config"))
    if model.hoelder.mode != MODE_KNITTING:
        raise ConfigError("knit experiments need a knitting-mode model (flat_connection)")
    H, ell = build_homotopy(_cfg_get(cfg, "homotopy", dict, "config"))
    ks = _cfg_get(cfg, "ks", list, "config", [8, 16, 32, 64])
    status = 0
    rows: list[list[Any]] = []
    for k in ks:
        net = build_net(H, int(k), ell)
        measured, bound = knit_compare(net, model)
        ok = within_bound(measured, bound)
        if not ok:
            status = 2
        rows.append([int(k), 1.0 / int(k), measured, bound, "pass" if ok else "fail"])
    if cfg.get("class_separation"):
        tol = _cfg_get(cfg, "tol", float, "config", 1e-8)
        upper = arc_path(1.0, 0.0, math.pi, 64)
        lower = arc_path(1.0, 0.0, -math.pi, 64)
        _, s_up = holonomy(model, upper, tol)
        _, s_lo = holonomy(model, lower, tol)
        sep = s_up.angle - s_lo.angle
        ok = abs(sep - 2.0 * math.pi) <= 1e-6
        if not ok:
            status = 2
        rows.append(["class_separation", 0.0, sep, 2.0 * math.pi, "pass" if ok else "fail"])
    return ["k", "delta", "measured", "bound", "note"], rows, status


def _run_certify(cfg: dict, rng: np.random.Generator) -> tuple[list[str], list[list[Any]], int]:
    model_spec = _cfg_get(cfg, "model", dict, "config")
    model = build_model(model_spec)
    mode = _cfg_get(cfg, "mode", str, "config", "three_point")
    n = _cfg_get(cfg, "samples", int, "config", 48)
    on_plane = model_spec.get("name") == "flat_connection"
    if mode == "three_point":
        samples = (
            certify_mod.annulus_three_point_samples(rng, n)
            if on_plane
            else certify_mod.interval_three_point_samples(rng, n)
        )
        report = certify_mod.fit_three_point(model, samples)
    elif mode == "strong_four_point":
        samples = (
            certify_mod.annulus_four_point_samples(rng, n)
            if on_plane
            else certify_mod.interval_four_point_samples(rng, n)
        )
        report = certify_mod.fit_strong_four_point(model, samples)
    else:
        raise ConfigError("config.mode must be three_point or strong_four_point")
    status = 0
    rows: list[list[Any]] = []
    for r in report.rows:
        ok = within_bound(r.defect, r.declared_bound) if r.declared_bound > 0.0 else True
        if not ok:
            status = 2
        rows.append(
            ["sample", r.geometry, r.defect, r.declared_bound,
             r.residual if r.residual is not None else ""]
        )
    summary = (
        f"eps_hat={_fmt(report.epsilon_hat)};c_hat={_fmt(report.c_hat)};"
        f"exact={report.exact};strong_mode_ok={report.strong_mode_ok};"
        f"n_used={report.n_used}"
    )
    rows.append(["fit", summary, 0.0, 0.0, report.residual_rms])
    if report.note:
        rows.append(["note", report.note, 0.0, 0.0, ""])
    return ["row", "geometry", "defect", "bound", "residual"], rows, status


_RUNNERS = {
    "sew": _run_sew,
    "holonomy": _run_holonomy,
    "knit": _run_knit,
    "certify": _run_certify,
}


def run(config_path: str, seed: int | None = None, quiet: bool = False,
        experiment: str | None = None) -> int:
    """Execute one experiment config; returns the process exit code."""
    try:
        try:
            cfg = json.loads(Path(config_path).read_text())
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {config_path}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}")
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        exp = cfg.get("experiment", experiment)
        if experiment is not None and exp != experiment:
            raise ConfigError(
                f"config.experiment {exp!r} does not match the {experiment!r} subcommand"
            )
        if exp not in EXPERIMENTS:
            raise ConfigError(f"config.experiment must be one of {EXPERIMENTS}, got {exp!r}")
        if seed is None:
            seed = _cfg_get(cfg, "seed", int, "config", 0)
        if "probes" in cfg and isinstance(cfg.get("model"), dict):
            cfg["model"].setdefault("probes", cfg["probes"])
        rng = np.random.default_rng(seed)
        output = _cfg_get(cfg, "output", str, "config")
        header, rows, status = _RUNNERS[exp](cfg, rng)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (BoundViolation, NonConvergence) as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return 2
    except SewkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write_csv(output, header, rows)
    if not quiet:
        print(f"{exp}: wrote {len(rows)} rows to {output} (exit {status})")
    return status


def main(argv: list[str] | None = None) -> None:
    parser = argparse.ArgumentParser(prog="sewkit", description=__doc__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name, help=f"run a {name} experiment")
        p.add_argument("--config", required=True, help="path to the JSON config")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--quiet", action="store_true", help="suppress the summary line")
    args = parser.parse_args(argv)
    sys.exit(run(args.config, seed=args.seed, quiet=args.quiet, experiment=args.experiment))


if __name__ == "__main__":
    main()

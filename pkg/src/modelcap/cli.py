"""Batch front-end: ``modelcap run <scenario.json> [--tol X] [--out DIR]``.

A scenario is a JSON object::

    {
      "manifold": "r3.model",            # path (relative to the scenario) or builtin:NAME[:m]
      "command": "capacity",
      "parameters": {"p": [2], "pairs": [[1, 2]]},
      "output": {"path": "cap.csv", "format": "csv"}
    }

Exit status: 0 for clean verdicts, 1 when any verdict is inconclusive,
2 for validation or I/O errors.  Relative output paths resolve against
``--out``, then ``$MODELCAP_OUT``, then the working directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import capacity as cap
from . import conditions as cond
from . import cutoffs, geometry, inequalities, sobolev, stokes
from .profiles import ProfileParseError
from .reports import write_csv, write_json

__all__ = ["ScenarioError", "COMMANDS", "load_scenario", "run_scenario", "main"]

OUT_ENV = "MODELCAP_OUT"
EXIT_OK, EXIT_INCONCLUSIVE, EXIT_INVALID = 0, 1, 2

REQUIRED = {
    "analyze": ("p",),
    "capacity": ("p", "pairs"),
    "parabolicity": ("p",),
    "cutoff-sweep": ("p", "radii"),
    "condition": ("condition", "p", "radii", "density"),
    "stokes": ("field", "condition", "p", "radii"),
    "lindqvist": ("p", "seed"),
    "sobolev-counterexample": (),
}
COMMANDS = tuple(REQUIRED)
NEEDS_MANIFOLD = {c for c in COMMANDS if c not in ("lindqvist", "sobolev-counterexample")}
BUILTINS = {
    "euclidean": lambda m: geometry.euclidean(m or 3),
    "cusp": lambda m: geometry.cusp(m or 2),
    "hyperbolic": lambda m: geometry.hyperbolic(m or 2),
    "cylinder": lambda m: geometry.cylinder(m or 2),
}


class ScenarioError(Exception):
    """Invalid scenario, manifold file or parameter; the message names the source."""


def _listify(v):
    return list(v) if isinstance(v, (list, tuple)) else [v]


def load_scenario(path):
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read scenario ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: scenario must be a JSON object")
    command = data.get("command")
    if command not in REQUIRED:
        raise ScenarioError(f"{path}: key 'command' must be one of {', '.join(COMMANDS)}")
    params = data.get("parameters", {})
    if not isinstance(params, dict):
        raise ScenarioError(f"{path}: key 'parameters' must be an object")
    for key in REQUIRED[command]:
        if key not in params:
            raise ScenarioError(f"{path}: command {command!r} requires parameters.{key}")
    if command in NEEDS_MANIFOLD and "manifold" not in data:
        raise ScenarioError(f"{path}: command {command!r} requires key 'manifold'")
    out = data.get("output")
    if not isinstance(out, dict) or "path" not in out:
        raise ScenarioError(f"{path}: key 'output' must be an object with a 'path'")
    fmt = out.get("format") or Path(out["path"]).suffix.lstrip(".")
    if fmt not in ("csv", "json"):
        raise ScenarioError(f"{path}: output.format must be 'csv' or 'json'")
    data["output"] = {"path": out["path"], "format": fmt}
    data["parameters"] = params
    data["_source"] = path
    return data


def load_manifold(ref: str, base_dir: Path) -> geometry.ModelManifold:
    if ref.startswith("builtin:"):
        parts = ref.split(":")
        name = parts[1] if len(parts) > 1 else ""
        if name not in BUILTINS:
            raise ScenarioError(f"manifold: unknown builtin {name!r}")
        try:
            m = int(parts[2]) if len(parts) > 2 else None
            return BUILTINS[name](m)
        except ValueError as exc:
            raise ScenarioError(f"manifold {ref!r}: {exc}") from None
    path = (base_dir / ref) if not Path(ref).is_absolute() else Path(ref)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read manifold file ({exc.strerror})") from None
    try:
        return dataclasses.replace(geometry.parse_manifold(text), name=path.stem)
    except ProfileParseError as exc:
        raise ScenarioError(f"{path}: {exc}") from None


# --------------------------------------------------------------------------
# commands; each returns (payload, rows, columns, status)


def _cmd_capacity(M, P, tol):
    constant = P.get("constant", "two_pow_p")
    rows = []
    for p in _listify(P["p"]):
        for r1, r2 in P["pairs"]:
            b = cap.capacity_bounds(M, p, float(r1), float(r2), constant, tol)
            rows.append({"p": b.p, "r1": b.r1, "r2": b.r2, "exact": b.exact_model,
                         "surface_bound": b.surface_bound, "volume_bound": b.volume_bound,
                         "tightness_volume": b.tightness_volume})
    cols = ["p", "r1", "r2", "exact", "surface_bound", "volume_bound", "tightness_volume"]
    return {"constant": constant, "rows": rows}, rows, cols, EXIT_OK


def _cmd_parabolicity(M, P, tol):
    out = []
    for p in _listify(P["p"]):
        v = cap.classify_parabolicity(M, p)
        out.append({"p": float(p), **v.to_dict()})
    status = EXIT_INCONCLUSIVE if any(v["verdict"] == "undetermined" for v in out) else EXIT_OK
    cols = ["p", "verdict", "certificate", "tail"]
    return {"manifold": M.name, "verdicts": out}, out, cols, status


def _cmd_analyze(M, P, tol):
    radii = [float(r) for r in P.get("radii", [1.0, 2.0, 4.0, 8.0])]
    out = []
    for p in _listify(P["p"]):
        v = cap.classify_parabolicity(M, p)
        f = geometry.EvansPotential(M, p)
        caps = [{"r1": r, "r2": 2 * r, "capacity": cap.cap_exact_model(M, p, r, 2 * r)} for r in radii]
        evans = [{"r": r, "f": f(r)} for r in radii if r >= M.base_radius]
        out.append({"p": float(p), "parabolicity": v.to_dict(), "capacities": caps, "evans": evans})
    status = EXIT_INCONCLUSIVE if any(o["parabolicity"]["verdict"] == "undetermined" for o in out) else EXIT_OK
    rows = [{"p": o["p"], "verdict": o["parabolicity"]["verdict"], **c} for o in out for c in o["capacities"]]
    return {"manifold": M.name, "dimension": M.m, "results": out}, rows, \
        ["p", "verdict", "r1", "r2", "capacity"], status


def _cmd_cutoff_sweep(M, P, tol):
    rows = []
    for p in _listify(P["p"]):
        for row in cutoffs.energy_sweep(M, p, [float(r) for r in P["radii"]],
                                        float(P.get("epsilon", 0.0)), bool(P.get("per_unit_sphere", False))):
            rows.append({"p": float(p), **row})
    return {"rows": rows}, rows, ["p", "r", "phi_energy", "xi_bound", "ratio"], EXIT_OK


def _density(M, p, spec, condition):
    if not isinstance(spec, dict) or "type" not in spec:
        raise ScenarioError("parameters.density must be an object with a 'type'")
    kind = spec["type"]
    default_meaning = "abs_X" if condition == "Karp" else "q_power"
    meaning = spec.get("meaning", default_meaning)
    if kind == "power":
        c, k = float(spec.get("c", 1.0)), float(spec["k"])
        return cond.RadialDensity(lambda t: c * np.asarray(t, dtype=float) ** k, meaning)
    if kind == "bump":
        prof = stokes.bump_profile(float(spec["a"]), float(spec["b"]), float(spec.get("scale", 1.0)))
        return cond.RadialDensity(prof, meaning)
    if kind == "unit_mass_field":
        X = stokes.make_unit_mass_field(M)
        if meaning == "abs_X":
            return cond.RadialDensity(stokes.magnitude(X), "abs_X")
        return cond.RadialDensity.q_power_of(stokes.magnitude(X), p)
    if kind == "evans_gradient":
        e = geometry.as_exponent(p)
        power = e.q if meaning == "q_power" else 1.0
        return cond.RadialDensity(lambda t: geometry.a_p(M, e, t) ** power, meaning)
    raise ScenarioError(f"parameters.density.type: unknown density {kind!r}")


def _gap(P):
    if "gap_scale" not in P:
        return None
    c = float(P["gap_scale"])
    if not c > 0:
        raise ScenarioError("parameters.gap_scale must be positive")
    return (lambda R: c * R), f"g(R) = {c:g} R"


def _cmd_condition(M, P, tol):
    name = P["condition"]
    p = float(P["p"])
    radii = [float(r) for r in P["radii"]]
    dens = _density(M, p, P["density"], name)
    th = cond.Thresholds(float(P.get("support_factor", 1e-3)), float(P.get("violation_factor", 0.1)))
    if name == "A":
        rep = cond.check_A(M, p, dens, radii, _gap(P), th)
    elif name == "V":
        rep = cond.check_V(M, p, dens, radii, _gap(P), th)
    elif name == "E":
        gap = None
        if "gap_scale" in P:
            c = float(P["gap_scale"])
            gap = (lambda r: c * r), f"g(r) = {c:g} r"
        rep = cond.check_E(M, p, geometry.EvansPotential(M, p), dens, radii, gap, th)
    elif name == "Karp":
        rep = cond.check_karp(M, dens, radii, th)
    else:
        raise ScenarioError("parameters.condition must be one of A, V, E, Karp")
    rows = [{"R": R, "ratio": r} for R, r in zip(rep.tested_radii, rep.ratios)]
    status = EXIT_INCONCLUSIVE if rep.verdict == "inconclusive" else EXIT_OK
    return rep.to_dict(), rows, ["R", "ratio"], status


def _field(M, p, spec):
    kind = spec.get("type") if isinstance(spec, dict) else spec
    if kind == "unit_mass":
        return stokes.make_unit_mass_field(M)
    if kind == "p_flux":
        return stokes.p_flux_field(M, p)
    if kind == "zero":
        return stokes.zero_field()
    if kind == "power":
        return stokes.radial_power_field(M, float(spec.get("k", 1.0)), float(spec.get("c", 1.0)))
    if kind == "bumps":
        pieces = [(stokes.bump_profile(float(a), float(b)), float(w)) for a, b, w in spec["bumps"]]
        return stokes.bump_field(M, pieces)
    raise ScenarioError(f"parameters.field: unknown field {kind!r}")


def _cmd_stokes(M, P, tol):
    p = float(P["p"])
    X = _field(M, p, P["field"])
    rep = stokes.theorem_harness(M, p, X, P["condition"], [float(r) for r in P["radii"]],
                                 tol=tol, strict=False)
    status = EXIT_INCONCLUSIVE if rep.conclusion == "inconclusive" or rep.inconsistent else EXIT_OK
    return rep.to_dict(), rep.rows(), ["R", "ball_integral", "flux", "condition_ratio"], status


def _cmd_lindqvist(M, P, tol):
    seed = P["seed"]
    if not isinstance(seed, int):
        raise ScenarioError("parameters.seed must be an integer")
    n = int(P.get("n", 2))
    count = int(P.get("sample_count", 100_000))
    rows = [inequalities.estimate_Cp_record(float(p), n, count, seed).to_dict() for p in _listify(P["p"])]
    return {"estimates": rows}, rows, ["p", "n", "estimated_Cp", "seed", "sample_count"], EXIT_OK


def _cmd_sobolev(M, P, tol):
    keys = ("m", "q", "beta", "H", "gamma", "smoothing_width")
    spec = sobolev.CounterexampleSpec(**{k: P[k] for k in keys if k in P})
    try:
        model = sobolev.build_counterexample(spec)
    except sobolev.CounterexampleError as exc:
        raise ScenarioError(f"parameters: {exc}") from None
    rep = sobolev.verify_counterexample(model, spec, float(P.get("r_max", 1000.0)))
    status = EXIT_OK if rep.tail_converges is not None else EXIT_INCONCLUSIVE
    return rep.to_dict(), rep.rows(), ["r", "volume_ratio", "lower_area_product"], status


DISPATCH = {
    "analyze": _cmd_analyze,
    "capacity": _cmd_capacity,
    "parabolicity": _cmd_parabolicity,
    "cutoff-sweep": _cmd_cutoff_sweep,
    "condition": _cmd_condition,
    "stokes": _cmd_stokes,
    "lindqvist": _cmd_lindqvist,
    "sobolev-counterexample": _cmd_sobolev,
}


def run_scenario(path, tol: float = 1e-9, out_dir=None) -> int:
    sc = load_scenario(path)
    src: Path = sc["_source"]
    M = load_manifold(sc["manifold"], src.parent) if sc["command"] in NEEDS_MANIFOLD else None
    try:
        payload, rows, cols, status = DISPATCH[sc["command"]](M, sc["parameters"], tol)
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"{src}: bad parameters for {sc['command']!r} ({exc})") from None
    except ValueError as exc:
        raise ScenarioError(f"{src}: {exc}") from None
    base = Path(out_dir or os.environ.get(OUT_ENV) or ".")
    target = Path(sc["output"]["path"])
    if not target.is_absolute():
        target = base / target
    try:
        if sc["output"]["format"] == "csv":
            write_csv(target, rows, cols)
        else:
            payload = {"command": sc["command"], "tol": tol, **payload}
            write_json(target, payload, kind=sc["command"])
    except OSError as exc:
        raise ScenarioError(f"{target}: cannot write output ({exc.strerror})") from None
    return status


def _positive_float(text):
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("tolerance must be a positive number")
    return v


def build_parser():
    ap = argparse.ArgumentParser(prog="modelcap", description="Capacity and decay-condition analyses "
                                 "on rotationally symmetric model manifolds.")
    sub = ap.add_subparsers(dest="action", required=True)
    run = sub.add_parser("run", help="run a JSON scenario file")
    run.add_argument("scenario")
    run.add_argument("--tol", type=_positive_float, default=1e-9, help="verdict tolerance (default 1e-9)")
    run.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or cwd)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        status = run_scenario(args.scenario, args.tol, args.out)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if status == EXIT_INCONCLUSIVE:
        print("inconclusive verdict; see report", file=sys.stderr)
    return status


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()

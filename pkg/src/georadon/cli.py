"""Command-line front end: transform/dual/invert/convert jobs, the identity
verification suite, Monte Carlo duality checks, and tabular output.

Jobs are single JSON documents (see README for the schema); command-line
flags override the seed, sample count, tolerance, output path, and format.
Exit codes: 0 success, 2 validation error, 3 divergence detected,
4 Monte Carlo non-convergence.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import inversion as IV
from . import mc as MC
from . import radial as R
from .errors import (DivergenceError, DomainError, GeoradonError,
                     McConvergenceWarning)
from .models import CANONICAL_KIND, Model, convert_distance
from .profiles import ArgKind, Profile1D, bump, from_grid, gaussian, power
from .quadrature import QuadratureSpec
from .verify import identity_suite

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DIVERGENCE = 3
EXIT_MC = 4

_COMMANDS = ("transform", "dual", "invert", "convert", "verify",
             "mc-duality", "chain", "table")

_KIND_ALIASES = {k.value: k for k in ArgKind}
_KIND_ALIASES.update({
    "cosh": ArgKind.CoshDistance, "sinh": ArgKind.SinhDistance,
    "tanh": ArgKind.TanhDistance, "angle": ArgKind.Angle,
    "radius": ArgKind.EuclideanRadius, "ball": ArgKind.BallRadius,
    "distance": ArgKind.GeodesicDistance,
})

_MODELS = {m.value: m for m in Model}
_MODELS.update({"euclidean": Model.EuclideanAffine,
                "ball": Model.BeltramiKlein,
                "hyperbolic": Model.Hyperboloid})

#: profile coordinate used by each model's forward / dual zonal transform
_TRANSFORM_KIND = {
    Model.EuclideanAffine: (ArgKind.EuclideanRadius, ArgKind.EuclideanRadius),
    Model.BeltramiKlein: (ArgKind.BallRadius, ArgKind.BallRadius),
    Model.Hyperboloid: (ArgKind.CoshDistance, ArgKind.SinhDistance),
    Model.Elliptic: (ArgKind.CosAngle, ArgKind.SinAngle),
    Model.Projective: (ArgKind.Angle, ArgKind.Angle),
}

_FORWARD = {
    Model.EuclideanAffine: R.radon_affine_radial,
    Model.BeltramiKlein: R.radon_chord_radial,
    Model.Hyperboloid: R.radon_hyper_zonal,
    Model.Elliptic: R.radon_elliptic_zonal,
    Model.Projective: R.radon_projective_zonal,
}

_DUAL = {
    Model.EuclideanAffine: R.dual_affine_radial,
    Model.BeltramiKlein: R.dual_chord_radial,
    Model.Hyperboloid: R.dual_hyper_zonal,
    Model.Elliptic: R.dual_elliptic_zonal,
    Model.Projective: R.dual_projective_zonal,
}


class JobError(GeoradonError, ValueError):
    """The job document is malformed or inconsistent."""


def _require(cond, msg):
    if not cond:
        raise JobError(msg)


def load_job(path: str, overrides: dict) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        job = json.load(fh)
    _require(isinstance(job, dict), "job document must be a JSON object")
    if overrides.get("seed") is not None:
        job.setdefault("mc", {})["seed"] = overrides["seed"]
    if overrides.get("samples") is not None:
        job.setdefault("mc", {})["n_samples"] = overrides["samples"]
    if overrides.get("rel_tol") is not None:
        job.setdefault("quadrature", {})["rel_tol"] = overrides["rel_tol"]
    if overrides.get("out") is not None:
        job.setdefault("output", {})["path"] = overrides["out"]
    if overrides.get("format") is not None:
        job.setdefault("output", {})["format"] = overrides["format"]
    return job


def parse_params(job) -> R.TransformParams:
    p = job.get("params")
    _require(isinstance(p, dict) and {"n", "j", "k"} <= set(p),
             "job needs params {n, j, k}")
    try:
        return R.TransformParams(int(p["n"]), int(p["j"]), int(p["k"]))
    except DomainError as exc:
        raise JobError(str(exc)) from exc


def parse_model(job) -> Model:
    name = str(job.get("model", "")).lower()
    _require(name in _MODELS, f"unknown model {name!r}")
    return _MODELS[name]


def parse_quadrature(job) -> QuadratureSpec:
    q = job.get("quadrature", {})
    try:
        return QuadratureSpec(
            rel_tol=float(q.get("rel_tol", 1e-10)),
            abs_tol=float(q.get("abs_tol", 1e-12)),
            max_subdivisions=int(q.get("max_subdivisions", 200)),
            truncation_tail_tol=float(q.get("truncation_tail_tol", 1e-12)))
    except ValueError as exc:
        raise JobError(f"bad quadrature spec: {exc}") from exc


def parse_mc(job) -> MC.McSpec:
    m = job.get("mc", {})
    try:
        return MC.McSpec(seed=int(m.get("seed", 0)),
                         n_samples=int(m.get("n_samples", 100000)),
                         stream_id=int(m.get("stream_id", 0)))
    except (ValueError, DomainError) as exc:
        raise JobError(f"bad mc spec: {exc}") from exc


def parse_profile(spec: dict, kind: ArgKind) -> Profile1D:
    _require(isinstance(spec, dict) and "family" in spec,
             "profile needs a 'family' field")
    fam = spec["family"]
    lo = 1.0 if kind is ArgKind.CoshDistance else 0.0
    if fam == "gaussian":
        g = gaussian(float(spec.get("sigma", 1.0)), arg_kind=kind, lo=lo)
        return g
    if fam == "power":
        return power(float(spec["p"]), lo=max(lo, 1e-12), arg_kind=kind)
    if fam == "bump":
        return bump(float(spec["a"]), arg_kind=kind, lo=lo)
    if fam == "closed_form":
        cf = _closed_form_by_name(str(spec.get("id", "")))
        pair = R.closed_form_pair(cf, alpha=spec.get("alpha"), a=spec.get("a"))
        return pair.input
    if fam == "grid":
        return from_grid(np.asarray(spec["x"], dtype=float),
                         np.asarray(spec["y"], dtype=float), kind,
                         order=int(spec.get("order", 3)),
                         decay_hint=spec.get("decay_hint"))
    raise JobError(f"unknown profile family {fam!r}")


def _closed_form_by_name(name: str) -> R.ClosedFormId:
    for cf in R.ClosedFormId:
        if cf.value == name or cf.name.lower() == name.lower():
            return cf
    raise JobError(f"unknown closed form id {name!r}; choose from "
                   f"{[c.value for c in R.ClosedFormId]}")


def parse_grid(job, default_kind: ArgKind) -> tuple[np.ndarray, ArgKind]:
    g = job.get("grid")
    _require(isinstance(g, dict), "job needs a grid {lo, hi, count}")
    kind = _KIND_ALIASES.get(str(g.get("kind", default_kind.value)).lower())
    _require(kind is not None, f"unknown grid kind {g.get('kind')!r}")
    lo, hi, count = float(g["lo"]), float(g["hi"]), int(g["count"])
    _require(hi > lo and count >= 2, "grid needs hi > lo and count >= 2")
    return np.linspace(lo, hi, count), kind


# -- output ---------------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def write_table(path: str, fmt: str, header_meta: dict, columns: dict):
    names = list(columns)
    rows = len(next(iter(columns.values())))
    if fmt == "json":
        doc = {"meta": header_meta,
               "columns": {k: [float(v) for v in vals]
                           for k, vals in columns.items()}}
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        lines = ["# " + " ".join(f"{k}={v}" for k, v in header_meta.items())]
        lines.append(",".join(names))
        for i in range(rows):
            lines.append(",".join(_fmt(columns[k][i]) for k in names))
        text = "\n".join(lines) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _out_of(job, default_path: str):
    out = job.get("output", {})
    return str(out.get("path", default_path)), str(out.get("format", "csv"))


# -- command handlers --------------------------------------------------------------

def _cmd_transform(job, dual: bool) -> int:
    model = parse_model(job)
    p = parse_params(job)
    spec = parse_quadrature(job)
    fkind, dkind = _TRANSFORM_KIND[model]
    kind = dkind if dual else fkind
    prof = parse_profile(job["profile"], kind)
    coords, gkind = parse_grid(job, _output_kind(model, dual))
    op = (_DUAL if dual else _FORWARD)[model]
    vals = np.asarray(op(p, prof, coords, spec))
    path, fmt = _out_of(job, "transform.csv")
    write_table(path, fmt,
                {"model": model.value, "variable": gkind.value,
                 "arg_kind": kind.value, "n": p.n, "j": p.j, "k": p.k},
                {"coordinate": coords, "value": vals})
    print(f"wrote {path}")
    return EXIT_OK


def _output_kind(model: Model, dual: bool) -> ArgKind:
    f, d = _TRANSFORM_KIND[model]
    # forward results live in the k-side coordinate, duals on the j-side;
    # zonally both share the model's coordinate convention
    return d if dual else f


def _cmd_invert(job) -> int:
    model = parse_model(job)
    p = parse_params(job)
    spec = parse_quadrature(job)
    dual = bool(job.get("dual", False))
    fkind, dkind = _TRANSFORM_KIND[model]
    kind = dkind if dual else fkind
    prof = parse_profile(job["profile"], kind)
    coords, gkind = parse_grid(job, kind)
    rec = R.invert_radial(model, p, prof, dual=dual, spec=spec,
                          out_range=(float(coords[0]), float(coords[-1])),
                          check_residual=bool(job.get("check_residual", True)))
    vals = rec(coords)
    path, fmt = _out_of(job, "invert.csv")
    write_table(path, fmt,
                {"model": model.value, "variable": gkind.value,
                 "arg_kind": kind.value, "n": p.n, "j": p.j, "k": p.k},
                {"coordinate": coords, "value": vals})
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_convert(job) -> int:
    conv = job.get("convert", {})
    _require({"from", "to"} <= set(conv), "convert needs {from, to}")
    src = _MODELS.get(str(conv["from"]).lower()) \
        or _KIND_ALIASES.get(str(conv["from"]).lower())
    dst = _MODELS.get(str(conv["to"]).lower()) \
        or _KIND_ALIASES.get(str(conv["to"]).lower())
    _require(src is not None and dst is not None, "unknown conversion endpoints")
    coords, _ = parse_grid(job, src if isinstance(src, ArgKind)
                           else CANONICAL_KIND[src])
    vals = convert_distance(coords, src, dst)
    path, fmt = _out_of(job, "convert.csv")
    write_table(path, fmt,
                {"from": conv["from"], "to": conv["to"],
                 "variable": "source_coordinate",
                 "arg_kind": (src.value if isinstance(src, ArgKind)
                              else CANONICAL_KIND[src].value)},
                {"coordinate": coords, "value": np.asarray(vals)})
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_table(job) -> int:
    model = parse_model(job) if "model" in job else Model.EuclideanAffine
    kind_default = CANONICAL_KIND[model]
    coords, gkind = parse_grid(job, kind_default)
    prof = parse_profile(job["profile"], gkind)
    vals = prof(coords)
    path, fmt = _out_of(job, "table.csv")
    write_table(path, fmt,
                {"model": model.value, "variable": gkind.value,
                 "arg_kind": gkind.value},
                {"coordinate": coords, "value": np.asarray(vals)})
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_verify(job) -> int:
    spec = parse_quadrature(job)
    results = identity_suite(spec)
    path, fmt = _out_of(job, "verify_report.json")
    doc = {"identities": [{"name": r.name,
                           "max_rel_err": r.max_rel_err,
                           "tol": r.tol,
                           "pass": bool(r.passed)} for r in results],
           "all_pass": bool(all(r.passed for r in results)),
           "count": len(results)}
    if fmt == "csv":
        lines = ["name,max_rel_err,tol,pass"]
        lines += [f"{r.name},{_fmt(r.max_rel_err)},{_fmt(r.tol)},"
                  f"{'PASS' if r.passed else 'FAIL'}" for r in results]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} "
              f"(err {r.max_rel_err:.3e}, tol {r.tol:.0e})")
    print(f"wrote {path}")
    return EXIT_OK if doc["all_pass"] else EXIT_VALIDATION


def _cmd_mc_duality(job) -> int:
    p = parse_params(job)
    mcspec = parse_mc(job)
    which = str(job.get("duality", {}).get("which", "affine")).lower()
    if which == "hyper":
        fkind, dkind = ArgKind.CoshDistance, ArgKind.SinhDistance
        f = MC.zonal_function(parse_profile(job["profile"], fkind))
        phi = MC.zonal_function(parse_profile(job.get("phi", job["profile"]),
                                              dkind))
    else:
        f = MC.radial_plane_function(
            parse_profile(job["profile"], ArgKind.EuclideanRadius))
        phi = MC.radial_plane_function(
            parse_profile(job.get("phi", job["profile"]),
                          ArgKind.EuclideanRadius))
    lhs, rhs = MC.duality_check_mc(which, f, phi, p, mcspec)
    combined = math.hypot(lhs.std_error, rhs.std_error)
    path, fmt = _out_of(job, "duality.csv")
    write_table(path, fmt,
                {"which": which, "variable": "side", "arg_kind": "estimate",
                 "n": p.n, "j": p.j, "k": p.k,
                 "seed": mcspec.seed, "n_samples": mcspec.n_samples},
                {"side": np.array([0.0, 1.0]),
                 "value": np.array([lhs.value, rhs.value]),
                 "stderr": np.array([lhs.std_error, rhs.std_error])})
    print(f"lhs {lhs.value:.6g} +- {lhs.std_error:.2g} | "
          f"rhs {rhs.value:.6g} +- {rhs.std_error:.2g} | "
          f"difference {abs(lhs.value - rhs.value) / max(combined, 1e-300):.2f} sigma")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_chain(job) -> int:
    p = parse_params(job)
    mcspec = parse_mc(job)
    ch = job.get("chain", {})
    h_spec = ch.get("h", {"family": "bump", "a": 1.2})
    if h_spec["family"] == "bump":
        h = IV.zonal_bump(float(h_spec.get("a", 1.2)))
        support = float(h_spec.get("a", 1.2))
    elif h_spec["family"] == "gaussian":
        h = IV.zonal_gaussian(float(h_spec.get("sigma", 1.0)))
        support = None
    else:
        raise JobError("chain h family must be 'bump' or 'gaussian'")
    rho = float(ch.get("rho", 0.6))
    rng = MC._rng(MC.McSpec(mcspec.seed, 1, mcspec.stream_id + 999), 0)
    rot = MC.sample_rotation(p.n, rng)
    z = MC.GeodesicElement(p.n, p.k, rot, rho)
    lhs, rhs = IV.chain_identity(p, h, z, mcspec, support=support)
    path, fmt = _out_of(job, "chain.csv")
    write_table(path, fmt,
                {"variable": "side", "arg_kind": "estimate",
                 "n": p.n, "j": p.j, "k": p.k, "rho": rho,
                 "seed": mcspec.seed, "n_samples": mcspec.n_samples},
                {"side": np.array([0.0, 1.0]),
                 "value": np.array([lhs.value, rhs]),
                 "stderr": np.array([lhs.std_error, 0.0])})
    sig = abs(lhs.value - rhs) / max(lhs.std_error, 1e-300)
    print(f"composed {lhs.value:.6g} +- {lhs.std_error:.2g} | "
          f"direct {rhs:.6g} | difference {sig:.2f} sigma")
    print(f"wrote {path}")
    return EXIT_OK


def run(job: dict, command: str) -> int:
    """Execute a parsed job; returns the process exit code."""
    if "command" in job:
        _require(str(job["command"]) == command,
                 f"job document says {job['command']!r}, invoked as {command!r}")
    handler = {
        "transform": lambda: _cmd_transform(job, dual=False),
        "dual": lambda: _cmd_transform(job, dual=True),
        "invert": lambda: _cmd_invert(job),
        "convert": lambda: _cmd_convert(job),
        "verify": lambda: _cmd_verify(job),
        "mc-duality": lambda: _cmd_mc_duality(job),
        "chain": lambda: _cmd_chain(job),
        "table": lambda: _cmd_table(job),
    }[command]
    return handler()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="georadon",
        description="geodesic Radon transforms on constant-curvature spaces")
    parser.add_argument("command", choices=_COMMANDS)
    parser.add_argument("--job", required=True, help="path to a JSON job file")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--rel-tol", type=float, default=None, dest="rel_tol")
    parser.add_argument("--out", default=None)
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    args = parser.parse_args(argv)

    try:
        job = load_job(args.job, vars(args))
    except (OSError, json.JSONDecodeError, JobError) as exc:
        print(f"error: invalid job: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            code = run(job, args.command)
        except (JobError, DomainError) as exc:
            print(f"error: validation: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        except DivergenceError as exc:
            print(f"error: divergence: {exc}", file=sys.stderr)
            return EXIT_DIVERGENCE
        except GeoradonError as exc:
            print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
    if any(issubclass(w.category, McConvergenceWarning) for w in caught):
        print("error: Monte Carlo estimator failed to converge at the "
              "n^-1/2 rate", file=sys.stderr)
        return EXIT_MC
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Every command prints its fully resolved configuration as JSON before doing
any work and writes it to ``<out>/config.json``; ``--config`` replays such a
file (flags given on the command line still win).

Exit codes: 0 success, 1 usage error, 2 numerical inconsistency, 3 model
contract violation (including models that are not quasiperiodic).
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import zoo
from ._tol import TOL, overridden
from .dynamics import evolve, evolve_ensemble, fourier_spectrum, random_states, steady_state_probe
from .errors import ModelError, NotQuasiperiodicError, NumericalInconsistency
from .floquet import floquet_report
from .model import GkslModel, TimeDependentOperator
from .operators import DimensionError, HilbertSpec, PAULI, kron_all
from .profiles import ProfileError, profile_from_dict
from .symmetry import classify

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_MODEL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------- models


def _matrix(spec) -> np.ndarray:
    """Matrix literal: nested lists of numbers or ``[re, im]`` pairs, or ``"pauli:xzi"``."""
    if isinstance(spec, str):
        if not spec.startswith("pauli:"):
            raise ModelError(f"unknown matrix literal {spec!r}")
        letters = spec[len("pauli:"):]
        if not letters or any(c not in PAULI for c in letters):
            raise ModelError(f"bad Pauli string {spec!r}")
        return kron_all([PAULI[c] for c in letters])
    rows = []
    for row in spec:
        rows.append([complex(x[0], x[1]) if isinstance(x, (list, tuple)) else complex(x) for x in row])
    return np.array(rows, dtype=complex)


def _operator(terms) -> TimeDependentOperator:
    if not (isinstance(terms, list) and terms and isinstance(terms[0], dict)):
        return TimeDependentOperator.constant(_matrix(terms))
    return TimeDependentOperator(tuple((profile_from_dict(t.get("profile", 1.0)), _matrix(t["matrix"])) for t in terms))


def model_from_json(data: dict) -> GkslModel:
    """Build a model from a JSON description.

    ``{"hamiltonian": OP, "jumps": [OP, ...], "quasiperiodic": true,
    "period": null, "name": "..."}`` where ``OP`` is a matrix literal or a
    list of ``{"profile": PROFILE, "matrix": MATRIX}`` terms.
    """
    try:
        ham = _operator(data["hamiltonian"])
        jumps = [_operator(j) for j in data.get("jumps", [])]
    except KeyError as exc:
        raise ModelError(f"model file is missing {exc}") from None
    space = HilbertSpec.generic(ham.dim)
    return GkslModel(
        space,
        ham,
        jumps,
        quasiperiodic=bool(data.get("quasiperiodic", True)),
        period=data.get("period"),
        name=data.get("name", "file-model"),
    )


def _load_model(cfg: dict):
    """Model, observables and zoo entry (or None) for a config."""
    source = cfg["model"]
    if source.startswith("zoo:"):
        try:
            entry = zoo.build(source[4:], **cfg["set"])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        model, observables = entry.model, dict(entry.observables)
        if cfg.get("sector") is not None:
            model = entry.sector_model(cfg["sector"])
            observables = entry.sector_observables(cfg["sector"])
        return model, observables, entry
    if source.startswith("file:"):
        path = Path(source[5:])
        if not path.exists():
            raise UsageError(f"model file {path} not found")
        data = json.loads(path.read_text())
        model = model_from_json(data)
        observables = {k: _matrix(v) for k, v in data.get("observables", {}).items()}
        if model.dim == 2 and not observables:
            observables = {"sx": PAULI["x"], "sy": PAULI["y"], "sz": PAULI["z"]}
        return model, observables, None
    raise UsageError("--model must be zoo:<name> or file:<path>")


def _pick_observables(cfg, available: dict) -> dict:
    names = cfg.get("observables")
    if not names:
        return available
    missing = [n for n in names if n not in available]
    if missing:
        raise UsageError(f"unknown observables {missing}; available: {sorted(available)}")
    return {n: available[n] for n in names}


# ---------------------------------------------------------------- output


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_json(path: Path, data: dict):
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def _write_series(path: Path, times, columns: dict):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + list(columns))
        for k, t in enumerate(times):
            w.writerow([_fmt(t)] + [_fmt(v[k]) for v in columns.values()])


def _series_columns(traj, names) -> dict:
    cols = {}
    for name in names:
        v = np.asarray(traj.observables[name])
        cols[name] = v.real
        if np.max(np.abs(v.imag), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(v.real), initial=0.0)):
            cols[name + "_im"] = v.imag
    cols["purity"] = traj.purity
    return cols


def _initial_states(model, cfg, n):
    return random_states(model.dim, n, seed=cfg["seed"])


# ---------------------------------------------------------------- commands


def cmd_classify(cfg: dict, out: Path) -> int:
    model, _, entry = _load_model(cfg)
    report = classify(model, route=cfg["route"], n_samples=cfg["samples"])
    data = report.to_dict()
    if entry is not None:
        data["expected"] = entry.sector if cfg.get("sector") is not None and entry.sector else entry.expected
    _write_json(out / "classification.json", data)
    print(json.dumps({"class": data["class"], "dim_c_sch": data["dim_c_sch"], "dim_c_int": data["dim_c_int"]}))
    return EXIT_OK


def cmd_simulate(cfg: dict, out: Path) -> int:
    model, available, entry = _load_model(cfg)
    obs = _pick_observables(cfg, available)
    states0 = _initial_states(model, cfg, cfg["ensemble"])
    trajs = evolve_ensemble(model, states0, cfg["t_end"], cfg["dt"], cfg["record_every"], obs)
    for k, tr in enumerate(trajs):
        name = "trajectory.csv" if len(trajs) == 1 else f"trajectory_{k}.csv"
        _write_series(out / name, tr.times, _series_columns(tr, obs))
    probe = steady_state_probe(model, trajs, cfg.get("window"))
    summary = {"schema": "v1", "model": model.name, "dt_used": trajs[0].dt, "t_end": cfg["t_end"]}
    summary.update(probe.to_dict())
    summary["final_states"] = [[[[float(z.real), float(z.imag)] for z in row] for row in tr.final] for tr in trajs]
    summary["min_eigenvalue"] = min(tr.min_eigenvalue for tr in trajs)
    algebraic = None
    if cfg["classify"] and model.quasiperiodic:
        algebraic = classify(model).steady_class
    summary["algebraic_class"] = algebraic
    summary["agreement"] = None if algebraic is None or probe.steady_class == "inconclusive" else algebraic == probe.steady_class
    _write_json(out / "summary.json", summary)
    print(json.dumps({"empirical_class": probe.steady_class, "algebraic_class": algebraic, "agreement": summary["agreement"]}))
    return EXIT_OK


def cmd_spectrum(cfg: dict, out: Path) -> int:
    model, available, _ = _load_model(cfg)
    names = cfg.get("observables") or [sorted(available)[0]]
    obs = _pick_observables({"observables": names}, available)
    rho0 = _initial_states(model, cfg, 1)[0]
    stride = max(1, int(round(cfg["sample_dt"] / cfg["dt"])))
    tr = evolve(model, rho0, cfg["t_end"], cfg["dt"], stride, obs, store_states=False)
    report = {"schema": "v1", "model": model.name, "window": [cfg["center"], cfg["width"]], "peaks": {}}
    columns = {}
    freqs = None
    for name in obs:
        spec = fourier_spectrum(tr.times, tr.observables[name].real, cfg["center"], cfg["width"], prominence=cfg["prominence"])
        freqs = spec.frequencies
        columns[name] = spec.magnitudes
        distinct = spec.distinct_peaks()
        report["peaks"][name] = {"count": int(distinct.size), "frequencies": [float(f) for f in distinct]}
    _write_series(out / "trajectory.csv", tr.times, _series_columns(tr, obs))
    with (out / "spectrum.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["omega"] + list(columns))
        for k, f in enumerate(freqs):
            w.writerow([_fmt(f)] + [_fmt(v[k]) for v in columns.values()])
    _write_json(out / "spectrum.json", report)
    print(json.dumps({k: v["count"] for k, v in report["peaks"].items()}))
    return EXIT_OK


def cmd_floquet(cfg: dict, out: Path) -> int:
    model, _, _ = _load_model(cfg)
    report = floquet_report(model, cfg.get("period"), cfg.get("dt"))
    data = report.to_dict()
    data["model"] = model.name
    _write_json(out / "floquet.json", data)
    print(json.dumps({"mixing": data["mixing"], "kraus_rank": data["kraus_rank"]}))
    return EXIT_OK


def cmd_zoo_list(cfg: dict, out: Path | None) -> int:
    for name in zoo.catalogue():
        entry = zoo.build(name)
        print(f"{name:20s} class={entry.expected['class']}  {entry.description}")
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "simulate": cmd_simulate,
    "spectrum": cmd_spectrum,
    "floquet": cmd_floquet,
    "zoo-list": cmd_zoo_list,
}


# ---------------------------------------------------------------- parsing


def _parse_set(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"expected key=value, got {item!r}")
        key, raw = item.split("=", 1)
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tdlindblad", description="Steady-state classification and dynamics of GKSL models.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, simulate=False):
        p.add_argument("--model", help="zoo:<name> or file:<path>")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a model parameter (JSON value)")
        p.add_argument("--sector", type=int, help="restrict a fermion model to this particle number")
        p.add_argument("--out", help="output directory")
        p.add_argument("--config", help="replay a config.json written by an earlier run")
        p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a numerical tolerance")
        if simulate:
            p.add_argument("--seed", type=int, help="seed for random initial states")
            p.add_argument("--t-end", type=float, dest="t_end")
            p.add_argument("--dt", type=float)
            p.add_argument("--observables", help="comma-separated observable names")

    p = sub.add_parser("classify", help="classify the steady states from strong symmetries")
    common(p)
    p.add_argument("--route", choices=["auto", "ad-ladder", "sampled", "both"])
    p.add_argument("--samples", type=int)

    p = sub.add_parser("simulate", help="integrate random initial states and probe the steady state")
    common(p, simulate=True)
    p.add_argument("--ensemble", type=int)
    p.add_argument("--record-every", type=int, dest="record_every")
    p.add_argument("--window", type=float)
    p.add_argument("--no-classify", action="store_false", dest="classify", default=None)

    p = sub.add_parser("spectrum", help="Gaussian-windowed spectrum of observables")
    common(p, simulate=True)
    p.add_argument("--center", type=float)
    p.add_argument("--width", type=float)
    p.add_argument("--sample-dt", type=float, dest="sample_dt")
    p.add_argument("--prominence", type=float)

    p = sub.add_parser("floquet", help="one-period channel, Kraus rank and mixing test")
    common(p)
    p.add_argument("--period", type=float)
    p.add_argument("--dt", type=float)

    sub.add_parser("zoo-list", help="list the model catalogue")
    return parser


_DEFAULTS = {
    "classify": {"route": "auto", "samples": 64},
    "simulate": {
        "seed": 0,
        "t_end": 50.0,
        "dt": 1e-2,
        "observables": None,
        "ensemble": 4,
        "record_every": 10,
        "window": None,
        "classify": True,
    },
    "spectrum": {
        "seed": 0,
        "t_end": 500.0,
        "dt": 5e-3,
        "observables": None,
        "center": 300.0,
        "width": 100.0,
        "sample_dt": 0.05,
        "prominence": TOL.peak_prominence,
    },
    "floquet": {"period": None, "dt": None},
    "zoo-list": {},
}


def resolve_config(args) -> dict:
    cfg = {"command": args.command}
    if args.command == "zoo-list":
        return cfg
    cfg.update({"model": None, "set": {}, "sector": None, "out": "tdlindblad-out", "tolerances": {}})
    cfg.update(_DEFAULTS[args.command])
    if args.config:
        stored = json.loads(Path(args.config).read_text())
        if stored.get("command") != args.command:
            raise UsageError(f"config was written by {stored.get('command')!r}, not {args.command!r}")
        cfg.update({k: v for k, v in stored.items() if k in cfg})
    given = {k: v for k, v in vars(args).items() if k not in ("command", "config", "set", "tol") and v is not None}
    if isinstance(given.get("observables"), str):
        given["observables"] = [s for s in given["observables"].split(",") if s]
    cfg.update(given)
    cfg["set"] = {**cfg["set"], **_parse_set(args.set)}
    tols = {**cfg["tolerances"], **_parse_set(args.tol)}
    unknown = set(tols) - set(TOL.as_dict())
    if unknown:
        raise UsageError(f"unknown tolerances {sorted(unknown)}; known: {sorted(TOL.as_dict())}")
    if not all(isinstance(v, (int, float)) and v > 0 for v in tols.values()):
        raise UsageError("tolerances must be positive numbers")
    cfg["tolerances"] = tols
    if not cfg["model"]:
        raise UsageError("--model is required")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        print(json.dumps(cfg, sort_keys=True))
        out = None
        if args.command != "zoo-list":
            out = Path(cfg["out"])
            out.mkdir(parents=True, exist_ok=True)
            _write_json(out / "config.json", cfg)
        with overridden(**cfg.get("tolerances", {})):
            return COMMANDS[args.command](cfg, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotQuasiperiodicError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (ModelError, ProfileError, DimensionError) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except NumericalInconsistency as exc:
        print(f"numerical inconsistency: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``eisenstein-lk {eval,transform,simulate,verify-lk,rho}``.

Parameters come from an optional INI file (one section per subcommand plus a
``[generator]`` section; values are JSON literals) and are overridden by flags.
Each run writes its outputs and a ``manifest.json`` into ``--out``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .eisenstein import DISC_MODE_STRIDE, matrix_to_csv, phi_matrix, rho_tensor, _rho_analytic, _rho_finite_diff
from .errors import ConfigError, EisensteinLKError
from .group import GroupElement, IwasawaFactors, exp_alg, reconstruct, to_disc
from .levy import GeneratorTriple, LevyMeasureDiscrete, paths_to_csv, simulate
from .lk import verify_lk
from .specfun import phi_disc
from .transform import eisenstein_transform, measure_from_json, right_K_invariantise

SCHEMA_VERSION = 1

COMMON = {"lambda", "window", "nodes", "seed", "out"}
KEYS = {
    "eval": COMMON | {"g", "iwasawa", "sharp", "compare_closed_form"},
    "transform": COMMON | {"measure", "invariantise"},
    "simulate": COMMON | {"t_end", "steps", "paths", "start", "record_every"},
    "verify-lk": COMMON | {"t_end", "steps", "paths", "start", "convention"},
    "rho": COMMON,
    "generator": {"drift", "diffusion", "atoms"},
}
DEFAULTS = {
    "lambda": [1.0], "window": 4, "nodes": None, "seed": 0, "out": "out",
    "g": None, "iwasawa": None, "sharp": False, "compare_closed_form": False,
    "measure": None, "invariantise": 0,
    "t_end": 1.0, "steps": 100, "paths": 100, "start": "identity", "record_every": None,
    "convention": "sharp",
}


def _load_config(path: str | None, command: str) -> tuple[dict, dict]:
    if path is None:
        return {}, {}
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ConfigError(f"cannot read config file {path}")
    values = {}
    for section in parser.sections():
        if section not in KEYS:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in KEYS[section]:
                raise ConfigError(f"unknown config key '{key}' in section [{section}]")
            try:
                values.setdefault(section, {})[key] = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config key '{key}' is not a JSON value: {exc.msg}") from None
    return values.get(command, {}), values.get("generator", {})


def _resolve(args, command: str) -> dict:
    section, generator = _load_config(args.config, command)
    cfg = {k: DEFAULTS[k] for k in KEYS[command]}
    cfg.update(section)
    for key in KEYS[command]:
        val = getattr(args, key, None)
        if val is not None and val is not False:
            cfg[key] = val
    if isinstance(cfg["lambda"], (int, float)):
        cfg["lambda"] = [cfg["lambda"]]
    _validate(cfg, command)
    if command in ("simulate", "verify-lk"):
        cfg["generator"] = {"drift": [0.0, 0.0, 0.0], "diffusion": [[0.0] * 3] * 3, "atoms": []}
        cfg["generator"].update(generator)
    return cfg


def _check(cond: bool, key: str, msg: str):
    if not cond:
        raise ConfigError(f"invalid value for '{key}': {msg}")


def _validate(cfg: dict, command: str):
    lam = cfg["lambda"]
    _check(isinstance(lam, list) and lam and all(isinstance(x, (int, float)) for x in lam),
           "lambda", "expected a number or list of numbers")
    if command != "verify-lk":
        _check(len(lam) == 1, "lambda", "this command takes a single value")
    _check(isinstance(cfg["window"], int) and cfg["window"] >= 0, "window", "expected an integer >= 0")
    _check(cfg["nodes"] is None or (isinstance(cfg["nodes"], int) and cfg["nodes"] >= 4),
           "nodes", "expected an integer >= 4")
    _check(isinstance(cfg["seed"], int) and cfg["seed"] >= 0, "seed", "expected an integer >= 0")
    if command in ("simulate", "verify-lk"):
        _check(isinstance(cfg["t_end"], (int, float)) and cfg["t_end"] > 0, "t_end", "expected a positive number")
        _check(isinstance(cfg["steps"], int) and cfg["steps"] > 0, "steps", "expected a positive integer")
        _check(isinstance(cfg["paths"], int) and cfg["paths"] > 0, "paths", "expected a positive integer")
        _check(cfg["start"] in ("identity", "haar_K"), "start", "expected identity or haar_K")
    if command == "verify-lk":
        _check(cfg["convention"] in ("sharp", "plain"), "convention", "expected sharp or plain")
    if command == "transform":
        _check(cfg["measure"] is not None, "measure", "a measure JSON file is required")
        _check(isinstance(cfg["invariantise"], int) and cfg["invariantise"] >= 0,
               "invariantise", "expected a number of angles >= 0")


def _element(cfg: dict) -> GroupElement:
    if cfg["g"] is not None and cfg["iwasawa"] is not None:
        raise ConfigError("give either 'g' or 'iwasawa', not both")
    if cfg["g"] is not None:
        return GroupElement.from_fields(_floats(cfg["g"], 4, "g"))
    if cfg["iwasawa"] is not None:
        return reconstruct(IwasawaFactors(*_floats(cfg["iwasawa"], 3, "iwasawa")))
    return GroupElement.identity()


def _floats(val, n: int, key: str) -> list[float]:
    if isinstance(val, str):
        val = val.split(",")
    try:
        out = [float(x) for x in val]
    except (TypeError, ValueError):
        out = []
    _check(len(out) == n, key, f"expected {n} comma-separated numbers")
    return out


def _generator(spec: dict) -> GeneratorTriple:
    atoms = []
    for at in spec["atoms"]:
        if "g" in at:
            g = GroupElement.from_fields(at["g"])
        elif "x" in at:
            g = exp_alg(at["x"])
        else:
            raise ConfigError("each atom needs 'g' (four fields) or 'x' (algebra coordinates)")
        atoms.append((g, at["rate"]))
    return GeneratorTriple(np.asarray(spec["drift"], dtype=float), np.asarray(spec["diffusion"], dtype=float),
                           LevyMeasureDiscrete(atoms))


def _write(out: Path, files: dict[str, str], cfg: dict, command: str, inputs: list[Path] = ()):
    out.mkdir(parents=True, exist_ok=True)
    h = hashlib.sha256(json.dumps(cfg, sort_keys=True).encode())
    for p in inputs:
        h.update(Path(p).read_bytes())
    for name, text in files.items():
        (out / name).write_text(text)
    manifest = {
        "schema_version": SCHEMA_VERSION, "command": command, "version": __version__,
        "config": cfg, "input_sha256": h.hexdigest(), "files": sorted(files),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n")


def cmd_eval(cfg: dict) -> int:
    lam, N = float(cfg["lambda"][0]), cfg["window"]
    g = _element(cfg)
    target = g.inverse() if cfg["sharp"] else g
    M = phi_matrix(lam, N, target, cfg["nodes"]).entries
    extra = None
    if cfg["compare_closed_form"]:
        z = to_disc(target)
        closed = np.full(M.shape, np.nan, dtype=complex)
        for n in range(-N, N + 1):
            if n % DISC_MODE_STRIDE == 0:
                closed[N, n + N] = phi_disc(lam, n // DISC_MODE_STRIDE, z)
            else:
                closed[N, n + N] = 0.0
        diff = np.abs(M - closed)
        extra = {"closed_re": closed.real, "closed_im": closed.imag, "absdiff": diff}
    _write(Path(cfg["out"]), {"matrix.csv": matrix_to_csv(M, N, extra)}, cfg, "eval")
    return 0


def cmd_transform(cfg: dict) -> int:
    path = Path(cfg["measure"])
    mu = measure_from_json(path.read_text())
    if cfg["invariantise"]:
        mu = right_K_invariantise(mu, cfg["invariantise"])
    T = eisenstein_transform(mu, float(cfg["lambda"][0]), cfg["window"], cfg["nodes"])
    _write(Path(cfg["out"]), {"transform.csv": matrix_to_csv(T.entries, T.N)}, cfg, "transform", [path])
    return 0


def cmd_simulate(cfg: dict) -> int:
    gen = _generator(cfg["generator"])
    rec = cfg["record_every"] or 1
    ens = simulate(gen, cfg["t_end"], cfg["steps"], cfg["paths"], cfg["seed"], cfg["start"], rec)
    cfg = dict(cfg, substeps=ens.substeps)
    _write(Path(cfg["out"]), {"paths.csv": paths_to_csv(ens)}, cfg, "simulate")
    return 0


def cmd_verify_lk(cfg: dict) -> int:
    gen = _generator(cfg["generator"])
    report = verify_lk(gen, cfg["lambda"], cfg["window"], cfg["t_end"], cfg["paths"], cfg["steps"],
                       seed=cfg["seed"], nodes=cfg["nodes"], start=cfg["start"], convention=cfg["convention"])
    _write(Path(cfg["out"]), {"report.json": report.to_json() + "\n", "report.csv": report.to_csv()},
           cfg, "verify-lk")
    bad = sum(not r["pass"] for r in report.rows)
    print(f"verify-lk: {len(report.rows) - bad}/{len(report.rows)} entries within tolerance")
    return 0 if report.passed else 1


def cmd_rho(cfg: dict) -> int:
    lam, N = float(cfg["lambda"][0]), cfg["window"]
    analytic = _rho_analytic(lam, N)
    fd = _rho_finite_diff(lam, N, 1e-4, cfg["nodes"])
    lines = ["i,nprime,n,analytic_re,analytic_im,fd_re,fd_im,absdiff"]
    for i in range(3):
        for a in range(2 * N + 1):
            for b in range(2 * N + 1):
                x, y = analytic[i, a, b], fd[i, a, b]
                lines.append("%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g" % (
                    i + 1, a - N, b - N, x.real, x.imag, y.real, y.imag, abs(x - y)))
    gap = float(np.max(np.abs(analytic - fd)))
    print(f"rho: max |analytic - finite_diff| = {gap:.3e}")
    _write(Path(cfg["out"]), {"rho.csv": "\n".join(lines) + "\n"}, dict(cfg, disagreement=gap), "rho")
    # surface a disagreement through the same check the library applies
    rho_tensor(lam, N, cross_check=True, nodes=cfg["nodes"])
    return 0


COMMANDS = {"eval": cmd_eval, "transform": cmd_transform, "simulate": cmd_simulate,
            "verify-lk": cmd_verify_lk, "rho": cmd_rho}


def _lambda_arg(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number or comma-separated list: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eisenstein-lk", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="INI file with [%s] and [generator] sections" % name)
        p.add_argument("--lambda", dest="lambda", type=_lambda_arg, help="spectral parameter(s)")
        p.add_argument("--window", type=int, help="mode window N (modes -N..N)")
        p.add_argument("--nodes", type=int, help="quadrature nodes (default: adaptive)")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output directory")
        if name == "eval":
            p.add_argument("--g", help="re_a,im_a,re_b,im_b")
            p.add_argument("--iwasawa", help="s,t,psi")
            p.add_argument("--sharp", action="store_true", help="evaluate at g^-1")
            p.add_argument("--compare-closed-form", action="store_true")
        if name == "transform":
            p.add_argument("--measure", help="measure JSON file")
            p.add_argument("--invariantise", type=int, help="average over this many rotation angles")
        if name in ("simulate", "verify-lk"):
            p.add_argument("--t-end", type=float)
            p.add_argument("--steps", type=int)
            p.add_argument("--paths", type=int)
            p.add_argument("--start", choices=["identity", "haar_K"])
        if name == "simulate":
            p.add_argument("--record-every", type=int)
        if name == "verify-lk":
            p.add_argument("--transform-convention", dest="convention", choices=["sharp", "plain"])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args, args.command)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"eisenstein-lk: configuration error: {exc}", file=sys.stderr)
        return 2
    except EisensteinLKError as exc:
        print(f"eisenstein-lk: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

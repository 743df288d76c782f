"""Command-line front end.

Commands: cycle, sweep, map, optimal-theta, circuit-compare. Parameters come
from flags and optionally a flat ``key = value`` config file (``--config``);
flags given on the command line win. Exit codes: 0 success, 2 configuration
error, 3 internal consistency error.
"""

import argparse
import concurrent.futures
import dataclasses
import enum
import io
import json
import math
import sys

import numpy as np

from . import analytic, engine, qmat
from .errors import ConsistencyError, DomainError
from .states import Family, InitialStateSpec, xi_admissible

DEFAULTS = {
    "family": "uncorrelated",
    "mode": "coherent",
    "a": 0.5,
    "a_prime": None,
    "a_grid": "0:1:51",
    "a_prime_grid": None,
    "complement": True,
    "beta_eps_inv": 1.65,
    "beta_eps_list": "0.1,1,10",
    "grid_n": 101,
    "theta": math.pi / 2,
    "phi": math.pi / 4,
    "phi_prime": 0.0,
    "zeta": 1.0,
    "zeta0": 1.0,
    "zeta1": 0.0,
    "xi_fraction": 1.0,
    "varphi": 0.0,
    "beta_d_inv": 0.0,
    "objective": "both",
    "shots": 8000,
    "reps": 10,
    "seed": 1,
    "workers": 1,
    "out": None,
    "format": None,
}

FLOAT_KEYS = {"a", "a_prime", "beta_eps_inv", "theta", "phi", "phi_prime", "zeta", "zeta0",
              "zeta1", "xi_fraction", "varphi", "beta_d_inv"}
INT_KEYS = {"grid_n", "shots", "reps", "seed", "workers"}
BOOL_KEYS = {"complement"}

SWEEP_COLUMNS = ["family", "a", "a_prime", "p_plus", "p_minus", "w_ext_plus", "w_ext_minus",
                 "w_ext_avg", "q_hot_avg", "eta_plus", "eta_minus", "delta_eta_coh", "eta_inc",
                 "flags"]
MAP_COLUMNS = ["beta_eps", "a", "a_prime", "delta_eta", "eta_minus_opt", "eta_plus_at_opt",
               "feasible"]
THETA_COLUMNS = ["family", "objective", "a", "beta_eps", "theta_opt", "value", "constrained",
                 "feasible"]


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- config

def _parse_bool(text):
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _coerce(key, value):
    if value is None:
        return None
    if key in FLOAT_KEYS:
        return float(value)
    if key in INT_KEYS:
        return int(value)
    if key in BOOL_KEYS:
        return value if isinstance(value, bool) else _parse_bool(value)
    return str(value)


def read_config(path):
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    out = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            if key not in DEFAULTS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                out[key] = _coerce(key, value.strip())
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return out


def parse_grid(text, name):
    """'lo:hi:n' for a linspace, or a comma-separated list."""
    try:
        if ":" in text:
            lo, hi, n = text.split(":")
            grid = np.linspace(float(lo), float(hi), int(n))
        else:
            grid = np.array([float(x) for x in text.split(",") if x.strip()])
    except ValueError:
        raise ConfigError(f"{name}: cannot parse grid {text!r}") from None
    if grid.size == 0:
        raise ConfigError(f"{name}: grid is empty")
    return grid


def _check_range(cfg, key, lo, hi):
    v = cfg[key]
    if v is not None and not lo <= v <= hi:
        raise ConfigError(f"{key} = {v} outside [{lo}, {hi}]")


def validate(cfg):
    try:
        cfg["family_list"] = ([f for f in Family] if cfg["family"] == "all"
                              else [Family(cfg["family"])])
    except ValueError:
        raise ConfigError(f"family: unknown value {cfg['family']!r}") from None
    if cfg["mode"] not in {m.value for m in engine.Mode}:
        raise ConfigError(f"mode: unknown value {cfg['mode']!r}")
    for key in ("a", "a_prime", "zeta", "zeta0", "zeta1", "xi_fraction"):
        _check_range(cfg, key, 0.0, 1.0)
    _check_range(cfg, "theta", 0.0, math.pi)
    _check_range(cfg, "phi", 0.0, 2 * math.pi)
    _check_range(cfg, "varphi", 0.0, 2 * math.pi)
    if not cfg["beta_eps_inv"] > 0:
        raise ConfigError("beta_eps_inv must be > 0")
    if cfg["beta_d_inv"] < 0:
        raise ConfigError("beta_d_inv must be >= 0")
    if cfg["shots"] < 1:
        raise ConfigError("shots must be >= 1")
    if cfg["reps"] < 1:
        raise ConfigError("reps must be >= 1")
    if cfg["workers"] < 1:
        raise ConfigError("workers must be >= 1")
    if cfg["grid_n"] < 1:
        raise ConfigError("grid_n must be >= 1")
    if cfg["objective"] not in ("eta_tilde", "eta_postselected", "both"):
        raise ConfigError(f"objective: unknown value {cfg['objective']!r}")
    if cfg["format"] not in (None, "csv", "json"):
        raise ConfigError(f"format: unknown value {cfg['format']!r}")
    cfg["a_values"] = parse_grid(cfg["a_grid"], "a_grid")
    if cfg["a_prime_grid"] is not None:
        cfg["a_prime_values"] = parse_grid(cfg["a_prime_grid"], "a_prime_grid")
    cfg["beta_eps_values"] = parse_grid(cfg["beta_eps_list"], "beta_eps_list")
    for name in ("a_values", "a_prime_values"):
        g = cfg.get(name)
        if g is not None and (g.min() < 0 or g.max() > 1):
            raise ConfigError(f"{name[:-7]}_grid: values must lie in [0, 1]")
    if np.any(cfg["beta_eps_values"] <= 0):
        raise ConfigError("beta_eps_list: values must be > 0")
    cfg["beta_eps"] = 1.0 / cfg["beta_eps_inv"]
    return cfg


def make_spec(cfg, family):
    family = Family(family)
    be = cfg["beta_eps"]
    kw = dict(family=family, theta=cfg["theta"], phi=cfg["phi"], beta_eps=be)
    if family is Family.UNCORRELATED:
        kw["zeta"] = cfg["zeta"]
    else:
        if not (cfg["zeta1"] <= cfg["zeta0"] and cfg["zeta0"] >= 0.5):
            raise ConfigError("need zeta1 <= zeta0 and zeta0 >= 1/2")
        kw.update(zeta0=cfg["zeta0"], zeta1=cfg["zeta1"])
        if family is Family.ENTANGLED:
            kw["xi"] = cfg["xi_fraction"] * xi_admissible(be, cfg["zeta0"], cfg["zeta1"])
            kw["varphi"] = cfg["varphi"]
    try:
        return InitialStateSpec(**kw)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _pairs(cfg):
    a_vals = cfg["a_values"]
    if cfg.get("a_prime_values") is not None:
        return [(a, b) for a in a_vals for b in cfg["a_prime_values"]]
    if cfg["complement"]:
        return [(a, 1.0 - a) for a in a_vals]
    raise ConfigError("give --a-prime-grid or use --complement")


# ---------------------------------------------------------------- output

def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating, int, np.integer)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        return f"{x:.17g}"
    return str(x)


def write_csv(columns, rows):
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(fmt(r[c]) for c in columns) + "\n")
    return buf.getvalue()


def jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return None if not math.isfinite(x) else x
    return obj


def write_json(obj):
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


# ---------------------------------------------------------------- commands

def run_cycle(cfg):
    family = cfg["family_list"][0]
    spec = make_spec(cfg, family)
    a = cfg["a"]
    ap = cfg["a_prime"] if cfg["a_prime"] is not None else 1.0 - a
    mode = engine.Mode(cfg["mode"])
    if mode is engine.Mode.DEFINITE:
        rep = engine.definite_cycle(a, spec.beta_eps)
    elif mode is engine.Mode.INCOHERENT:
        rep = engine.incoherent_cycle(a, ap, spec)
    else:
        rep = engine.coherent_cycle(a, ap, cfg["phi_prime"], spec, cfg["beta_d_inv"])
        analytic.cross_check(spec, a, ap, cfg["phi_prime"])
    return {"family": family.value, "a": a, "a_prime": ap, "phi_prime": cfg["phi_prime"],
            "beta_eps": spec.beta_eps, "beta_d_inv": cfg["beta_d_inv"], "report": rep}


def sweep_row(spec, a, ap, phi_prime):
    rep = engine.coherent_cycle(a, ap, phi_prime, spec)
    analytic.cross_check(spec, a, ap, phi_prime)
    plus, minus = rep.branches
    flags = list(rep.flags)
    delta = rep.delta_eta
    if not (plus.valid and minus.valid):
        delta = 0.0
        flags.append("coh_infeasible")
    eta_inc = rep.eta_inc if math.isfinite(rep.eta_inc) else 0.0
    return {
        "family": spec.family.value, "a": a, "a_prime": ap,
        "p_plus": plus.probability, "p_minus": minus.probability,
        "w_ext_plus": plus.w_ext, "w_ext_minus": minus.w_ext,
        "w_ext_avg": rep.avg_w_ext, "q_hot_avg": rep.avg_q_hot,
        "eta_plus": plus.reported_efficiency, "eta_minus": minus.reported_efficiency,
        "delta_eta_coh": delta if math.isfinite(delta) else 0.0, "eta_inc": eta_inc,
        "flags": ";".join(flags),
    }


def run_sweep(cfg):
    rows = []
    for family in cfg["family_list"]:
        spec = make_spec(cfg, family)
        for a, ap in sorted(_pairs(cfg)):
            rows.append(sweep_row(spec, float(a), float(ap), cfg["phi_prime"]))
    return rows


def ordered_map(func, items, workers):
    """map() that optionally fans out to processes; results keep input order."""
    if workers <= 1:
        return [func(*it) for it in items]
    with concurrent.futures.ProcessPoolExecutor(workers) as pool:
        return list(pool.map(func, *zip(*items), chunksize=max(1, len(items) // (8 * workers))))


def _map_row(family, be, a, ap):
    return {"beta_eps": be, "a": a, "a_prime": ap,
            **analytic.map_cell(family, float(a), float(ap), float(be))}


def run_map(cfg):
    family = cfg["family_list"][0]
    grid = np.linspace(0.0, 1.0, cfg["grid_n"])
    items = [(family, float(be), float(a), float(ap))
             for be in cfg["beta_eps_values"] for a in grid for ap in grid]
    return ordered_map(_map_row, items, cfg["workers"])


def _theta_row(family, obj, a, be):
    row = {"family": family.value, "objective": obj, "a": a, "beta_eps": be}
    try:
        res, _ = analytic.optimize_controls(family, a, 1.0 - a, be, obj)
        row.update(theta_opt=res.theta_opt, value=res.value,
                   constrained=res.constrained, feasible=True)
    except analytic.InfeasibleError:
        row.update(theta_opt=0.0, value=0.0, constrained=True, feasible=False)
    return row


def run_optimal_theta(cfg):
    objectives = (["eta_tilde", "eta_postselected"] if cfg["objective"] == "both"
                  else [cfg["objective"]])
    items = [(family, obj, float(a), float(be)) for family in cfg["family_list"]
             for obj in objectives for a in cfg["a_values"] for be in cfg["beta_eps_values"]]
    return ordered_map(_theta_row, items, cfg["workers"])


def run_circuit_compare(cfg):
    from . import circuit
    from .circuit import builders

    points = []
    worst_td = 0.0
    inside = total = 0
    for family in cfg["family_list"]:
        spec = make_spec(cfg, family)
        for a, ap in sorted(_pairs(cfg)):
            a, ap = float(a), float(ap)
            c = circuit.engine_circuit("coherent", spec, a, ap, cfg["phi_prime"],
                                       work_stroke=False)
            psi = circuit.statevector_run(c)
            branches = engine.coherent_branches(a, ap, cfg["phi_prime"], spec)
            exact = []
            for (p, rho), br in zip(builders.conditional_medium_states(psi), branches):
                entry = {"outcome": br.outcome.value, "p_circuit": p,
                         "p_error": abs(p - br.probability)}
                if not br.degenerate:
                    target = np.array([[br.a_bar, br.coherence],
                                       [np.conj(br.coherence), 1 - br.a_bar]])
                    entry["trace_distance"] = qmat.trace_distance(rho, target)
                    worst_td = max(worst_td, entry["trace_distance"], entry["p_error"])
                exact.append(entry)
            est = circuit.sample_and_tomograph(c, cfg["shots"], cfg["reps"], cfg["seed"])
            truth = circuit.reduced_density(psi, est.keep)
            diff = np.abs(est.rho_hat - truth)
            with np.errstate(divide="ignore", invalid="ignore"):
                z = np.where(est.std_errors > 0, diff / est.std_errors,
                             np.where(diff < 1e-12, 0.0, np.inf))
            inside += int(np.sum(z <= 5.0))
            total += z.size
            points.append({"family": family.value, "a": a, "a_prime": ap, "exact": exact,
                           "shot": {"rho_hat": est.rho_hat, "std_errors": est.std_errors,
                                    "z_scores": z, "max_z": float(np.max(z))}})
    frac = inside / total if total else 1.0
    summary = {"max_trace_distance": worst_td, "exact_pass": worst_td < 1e-9,
               "fraction_within_5sigma": frac, "shot_pass": frac >= 0.99,
               "shots": cfg["shots"], "reps": cfg["reps"], "seed": cfg["seed"]}
    summary["pass"] = summary["exact_pass"] and summary["shot_pass"]
    return {"summary": summary, "points": points}


COMMANDS = {
    "cycle": (run_cycle, "json"),
    "sweep": (lambda cfg: write_csv(SWEEP_COLUMNS, run_sweep(cfg)), "csv"),
    "map": (lambda cfg: write_csv(MAP_COLUMNS, run_map(cfg)), "csv"),
    "optimal-theta": (lambda cfg: write_csv(THETA_COLUMNS, run_optimal_theta(cfg)), "csv"),
    "circuit-compare": (run_circuit_compare, "json"),
}


# ---------------------------------------------------------------- argparse

def build_parser():
    p = argparse.ArgumentParser(
        prog="switchengine",
        description="Measurement-driven qubit engine with a switch of measurement orders.",
        epilog="Default grids: a in linspace(0, 1, 51); maps use 101 x 101 cells at "
               "beta*eps in {0.1, 1, 10}.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="flat key = value file; flags override it")
        sp.add_argument("--family", help="uncorrelated | separable | entangled | all")
        sp.add_argument("--mode", help="definite | incoherent | coherent (cycle only)")
        sp.add_argument("--a", help="strength of the first measurement (cycle)")
        sp.add_argument("--a-prime", help="strength of the second measurement (cycle)")
        sp.add_argument("--a-grid", help="lo:hi:n or comma list (default 0:1:51)")
        sp.add_argument("--a-prime-grid", help="independent a' grid (else a' = 1 - a)")
        sp.add_argument("--complement", action="store_const", const="true",
                        help="use a' = 1 - a (default)")
        sp.add_argument("--beta-eps-inv", help="k_B T / eps (default 1.65)")
        sp.add_argument("--beta-eps-list", help="beta*eps values for map/optimal-theta")
        sp.add_argument("--grid-n", help="cells per axis for map (default 101)")
        sp.add_argument("--theta", help="control polar angle (default pi/2)")
        sp.add_argument("--phi", help="control phase (default pi/4)")
        sp.add_argument("--phi-prime", help="readout phase (default 0)")
        sp.add_argument("--zeta", help="uncorrelated mixing weight")
        sp.add_argument("--zeta0", help="weight conditioned on the ground state")
        sp.add_argument("--zeta1", help="weight conditioned on the excited state")
        sp.add_argument("--xi-fraction", help="entangled amplitude as a fraction of its maximum")
        sp.add_argument("--varphi", help="phase of the entangled coherence")
        sp.add_argument("--beta-d-inv", help="detector temperature k_B T_D / eps")
        sp.add_argument("--objective", help="eta_tilde | eta_postselected | both")
        sp.add_argument("--shots", help="shots per tomography setting")
        sp.add_argument("--reps", help="tomography repetitions")
        sp.add_argument("--seed", help="RNG seed")
        sp.add_argument("--workers", help="worker processes for map/optimal-theta (default 1)")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", help="csv | json")
    return p


def resolve(args):
    cfg = dict(DEFAULTS)
    if args.config:
        cfg.update(read_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            try:
                cfg[key] = _coerce(key, val)
            except ValueError as exc:
                raise ConfigError(f"--{key.replace('_', '-')}: {exc}") from None
    return validate(cfg)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        func, default_fmt = COMMANDS[args.command]
        result = func(cfg)
        fmt_ = cfg["format"] or default_fmt
        if isinstance(result, str):
            if fmt_ != "csv":
                raise ConfigError(f"{args.command} writes csv only")
            text = result
        else:
            if fmt_ != "json":
                raise ConfigError(f"{args.command} writes json only")
            text = write_json(result)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ConsistencyError as exc:
        print(f"consistency error: {exc}", file=sys.stderr)
        return 3
    if cfg["out"]:
        with open(cfg["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

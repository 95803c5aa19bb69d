"""
Command-line front end.

    python3 -m lrberry {verify,diagonalize,coherent-state,berry,sweep,wavefunction}
        [--config PATH] [--set KEY=VALUE ...] [--out PATH] [--format csv|json] [--seed N]

Configuration is a flat INI-style file of ``key = value`` lines (a section
header is optional); ``--set`` overrides individual keys.  Floats are written
with 17 significant digits; CSV output is UTF-8 with LF line endings.
"""

import argparse
import configparser
import csv
import io
import itertools
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import algebra as alg
from .coherent_states import (
    PolarGrid,
    evaluate_su11_wavefunction,
    evaluate_su2_wavefunction,
    gauge_fix,
    pncs_su11_series,
    pncs_su2_series,
    zeta_from_params,
)
from .diagonalizer import LinearHamiltonian, diagonalize, spectrum_check
from .displacement import CoherentParams, displacement_operator, verify_similarity
from .errors import LRBerryError
from .linalg import commutator, frobenius
from .lr_phases import DrivingProtocol, berry_phase_closed_form, schedule
from .oracle import evolve, extract_phases, linear_reference, tracked_eigenvector
from .tavis_cummings import (
    SectorSpec,
    TCLabels,
    TCParams,
    build_trilinear_hamiltonian,
    extract_sector,
    sector_hamiltonian,
    tc_berry_phase,
)

MODELS = ("su11-linear", "su2-linear", "tc-su11", "tc-su2", "tc-full-sector")
BERRY_COLUMNS = ["model", "T", "steps", "total_phase", "dynamical_phase", "geometric_phase", "closed_form", "deviation"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    model: str = "su2-linear"
    k: float = 0.5
    n: int = 0
    j: float = 0.5
    mu: float = 0.5
    trunc_dim: int = 48
    c0: float | None = None
    c0_kind: str = "constant"
    c0_amp: float = 0.0
    lam: float | None = None
    lam_kind: str = "constant"
    lam_amp: float = 0.0
    phi_profile: str = "linear"
    winding: int = 1
    T: str = "200"
    steps_per_time: float = 25.0
    omega1: float = 0.0
    omega2: float = 1.0
    omega3: float = 4.0
    s_ab: int = 1
    s_ac: int = 1
    dims: str = "3,3,3"
    n_l: int = 0
    m_n: int = 0
    algebra: str = "su2"
    zeta: complex = 0j
    tau: float = 0.0
    phi: float = 0.0
    c1: complex = 0j
    rho_max: float = 6.0
    n_rho: int = 241
    n_angle: int = 16
    tolerance: float | None = None
    scope: str = "all"
    sweep: str = ""
    workers: int = 1
    seed: int = 0

    @property
    def t_values(self):
        return [float(x) for x in str(self.T).split(",") if x.strip()]


MODEL_DEFAULTS = {
    "su11-linear": {"c0": 5.0, "lam": 1.0},
    "su2-linear": {"c0": 1.0, "lam": 0.5},
    "tc-su11": {"lam": 1.0},
    "tc-su2": {"lam": 0.5, "omega1": 1.0, "omega2": 2.0, "omega3": 0.0},
    "tc-full-sector": {"lam": 1.0},
}


def _coerce(name, typ, text):
    text = text.strip()
    try:
        if "complex" in str(typ):
            return complex(text.replace(" ", ""))
        if "float" in str(typ):
            return float(text)
        if "int" in str(typ):
            return int(text)
    except ValueError as exc:
        raise UsageError(f"bad value for {name}: {text!r}") from exc
    return text


def load_config(path=None, overrides=(), seed=None):
    raw = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        if not text.lstrip().startswith("["):
            text = "[run]\n" + text
        parser = configparser.ConfigParser()
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise UsageError(f"config parse error: {exc}") from exc
        for section in parser.sections():
            raw.update(parser[section])
    for item in overrides:
        if "=" not in item:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        raw[key.strip()] = value
    types = {f.name: f.type for f in fields(RunConfig)}
    unknown = sorted(set(raw) - set(types))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    values = {key: _coerce(key, types[key], value) for key, value in raw.items()}
    if seed is not None:
        values["seed"] = seed
    cfg = RunConfig(**values)
    if cfg.model not in MODELS:
        raise UsageError(f"model must be one of {', '.join(MODELS)}")
    for key, value in MODEL_DEFAULTS[cfg.model].items():
        if key not in raw:
            setattr(cfg, key, value)
    for key in ("c0", "lam"):
        if getattr(cfg, key) is None:
            setattr(cfg, key, 1.0)
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if isinstance(v, (float, complex)) and not np.isfinite(v):
            raise UsageError(f"{f.name} must be finite")
    try:
        periods = cfg.t_values
    except ValueError as exc:
        raise UsageError(f"T must be a comma list of numbers, got {cfg.T!r}") from exc
    if not periods or not all(math.isfinite(t) and t > 0 for t in periods):
        raise UsageError("every period in T must be positive and finite")
    return cfg


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if value is None:
        return ""
    return str(value)


def render(rows, columns, kind):
    if kind == "json":
        clean = [{c: (float(r[c]) if isinstance(r.get(c), np.floating) else r.get(c)) for c in columns} for r in rows]
        return json.dumps(clean, indent=1, sort_keys=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r.get(c)) for c in columns])
    return buf.getvalue()


# -- berry -------------------------------------------------------------------


def _protocol(cfg, algebra, T):
    c0, dc0 = schedule(cfg.c0_kind, cfg.c0, cfg.c0_amp, T)
    lam, dlam = schedule(cfg.lam_kind, cfg.lam, cfg.lam_amp, T)
    if cfg.c0_kind == "constant" and cfg.lam_kind == "constant":
        return DrivingProtocol.constant_loop(algebra, cfg.c0, cfg.lam, T, cfg.winding, cfg.phi_profile)
    base = DrivingProtocol.constant_loop(algebra, cfg.c0, cfg.lam, T, cfg.winding, cfg.phi_profile)
    return DrivingProtocol(algebra, c0, lam, base.phi, T, cfg.winding, dc0=dc0, dlam=dlam, dphi=base.dphi)


def _tc_params(cfg, T):
    return TCParams.constant_loop(cfg.omega1, cfg.omega2, cfg.omega3, cfg.lam, T, cfg.winding, cfg.phi_profile)


def berry_row(cfg, T):
    steps = max(1, int(math.ceil(T * cfg.steps_per_time)))
    model = cfg.model
    if model in ("su11-linear", "su2-linear"):
        algebra = alg.SU11 if model == "su11-linear" else alg.SU2
        label = (cfg.k, cfg.n) if algebra == alg.SU11 else (cfg.j, cfg.mu)
        gens = alg.build_su11_rep(cfg.k, cfg.trunc_dim) if algebra == alg.SU11 else alg.build_su2_rep(cfg.j)
        protocol = _protocol(cfg, algebra, T)
        closed = berry_phase_closed_form(protocol, label)
        ref = linear_reference(gens, protocol, label)

        def provider(t):
            return protocol.hamiltonian(gens, t)

    else:
        params = _tc_params(cfg, T)
        sector = SectorSpec(cfg.s_ab, cfg.s_ac)
        states = sector.states()
        branch = alg.SU2 if model == "tc-su2" else alg.SU11
        anchor = states[-1] if branch == alg.SU2 else states[0]
        if branch == alg.SU11:
            labels = TCLabels(max(anchor[0], 1), anchor[1], anchor[2])
        else:
            labels = TCLabels(anchor[0], anchor[1], max(anchor[2], 1))
        label = anchor
        closed, _ = tc_berry_phase(branch, params, labels)
        if model == "tc-full-sector":
            dims = tuple(int(x) for x in cfg.dims.split(","))
            if any(a >= d for a, d in zip(anchor, dims)):
                raise UsageError(f"dims {dims} too small for sector state {anchor}")

            def provider(t):
                return extract_sector(build_trilinear_hamiltonian(params, dims, t), dims, sector)[0]

        else:

            def provider(t):
                return sector_hamiltonian(params, sector, t)

        ref = tracked_eigenvector(provider, states.index(anchor))
    run = evolve(provider, ref(0.0), T, steps)
    ph = extract_phases(run, ref, provider, label)
    return {
        "model": model,
        "T": T,
        "steps": steps,
        "total_phase": ph.total,
        "dynamical_phase": ph.dynamical,
        "geometric_phase": ph.geometric,
        "closed_form": closed,
        "deviation": ph.geometric - closed,
    }


def cmd_berry(cfg):
    return [berry_row(cfg, T) for T in cfg.t_values], BERRY_COLUMNS, 0


def parse_axes(spec):
    """``name=start:stop:count`` entries separated by ``;`` (at most two)."""
    axes = []
    for part in [p for p in spec.split(";") if p.strip()]:
        try:
            name, rng = part.split("=")
            start, stop, count = rng.split(":")
            values = np.linspace(float(start), float(stop), int(count))
        except ValueError as exc:
            raise UsageError(f"bad sweep axis {part!r}; expected name=start:stop:count") from exc
        name = name.strip()
        if name not in {f.name for f in fields(RunConfig)}:
            raise UsageError(f"unknown sweep axis {name!r}")
        axes.append((name, [float(v) for v in values]))
    if not 1 <= len(axes) <= 2:
        raise UsageError("sweep needs one or two axes")
    return axes


def cmd_sweep(cfg):
    axes = parse_axes(cfg.sweep)
    names = [a for a, _ in axes]
    points = sorted(itertools.product(*[v for _, v in axes]))

    def work(point):
        local = RunConfig(**{f.name: getattr(cfg, f.name) for f in fields(RunConfig)})
        for name, value in zip(names, point):
            setattr(local, name, type(getattr(cfg, name))(value) if getattr(cfg, name) is not None else value)
        out = []
        for T in cfg.t_values:
            base = dict(zip(names, point))
            try:
                row = berry_row(local, T)
                row["error"] = ""
            except LRBerryError as exc:
                row = {"model": cfg.model, "T": T, "error": type(exc).__name__}
            base.update(row)
            out.append(base)
        return out

    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        chunks = list(pool.map(work, points))
    rows = [r for chunk in chunks for r in chunk]
    return rows, names + BERRY_COLUMNS + ["error"], 0


# -- verify ------------------------------------------------------------------


def _verify_checks(cfg):
    rng = np.random.default_rng(cfg.seed)
    checks = []

    def add(name, scope, fn, tol):
        checks.append((name, scope, fn, tol))

    def su2_comm():
        return max(max(alg.build_su2_rep(j / 2).commutator_residuals().values()) for j in range(1, 11))

    def su2_bch():
        worst = 0.0
        for j in (0.5, 1.0, 1.5):
            g = alg.build_su2_rep(j)
            for tau in np.linspace(-2, 2, 5):
                for phi in np.linspace(0, 2 * math.pi, 4, endpoint=False):
                    worst = max(worst, verify_similarity(g, CoherentParams(tau, phi)))
        return worst

    def su2_spec():
        return spectrum_check(LinearHamiltonian(alg.SU2, 1.0, 0.5), alg.build_su2_rep(0.5))["max_abs_dev"]

    def su2_pncs():
        worst = 0.0
        for _ in range(5):
            j = int(rng.integers(1, 7)) / 2
            mu = j - int(rng.integers(0, int(2 * j) + 1))
            p = CoherentParams(rng.uniform(-3, 3), rng.uniform(0, 2 * math.pi))
            s = pncs_su2_series(j, mu, zeta_from_params(alg.SU2, p)[0]).amplitudes
            d = displacement_operator(alg.build_su2_rep(j), p)[:, int(round(j - mu))]
            worst = max(worst, 1 - abs(np.vdot(s, d)))
        return worst

    def su11_comm():
        return max(alg.build_su11_rep(0.5, 128).commutator_residuals().values())

    def boson_comm():
        m = alg.build_boson_mode(128)
        return frobenius((commutator(m.lower, m.raise_) - np.eye(128))[:-1, :-1])

    def su11_bch():
        return verify_similarity(alg.build_su11_rep(0.5, 32), CoherentParams(1.0, 0.7))

    def su11_spec():
        return spectrum_check(LinearHamiltonian(alg.SU11, 5.0, 1.0), alg.build_su11_rep(0.5, 128))["max_abs_dev"]

    def su11_pncs():
        worst = 0.0
        g = alg.build_su11_rep(0.5, 160)
        for _ in range(3):
            n = int(rng.integers(0, 4))
            p = CoherentParams(rng.uniform(-1.5, 1.5), rng.uniform(0, 2 * math.pi))
            s = pncs_su11_series(0.5, n, zeta_from_params(alg.SU11, p)[0], 160).amplitudes
            d = gauge_fix(displacement_operator(g, p)[:, n])
            worst = max(worst, 1 - abs(np.vdot(s[:100], d[:100])))
        return worst

    add("su2_commutators", "su2", su2_comm, 1e-12)
    add("su2_similarity", "su2", su2_bch, 1e-10)
    add("su2_spectrum", "su2", su2_spec, 1e-12)
    add("su2_coherent_state", "su2", su2_pncs, 1e-10)
    add("su11_commutators", "su11", su11_comm, 1e-10)
    add("boson_commutator", "su11", boson_comm, 1e-10)
    add("su11_similarity", "su11", su11_bch, 1e-8)
    add("su11_spectrum", "su11", su11_spec, 1e-8)
    add("su11_coherent_state", "su11", su11_pncs, 1e-10)
    return checks


def cmd_verify(cfg):
    if cfg.scope not in ("all", "su2", "su11"):
        raise UsageError("scope must be all, su2 or su11")
    rows = []
    status = 0
    for name, scope, fn, tol in _verify_checks(cfg):
        if cfg.scope != "all" and scope != cfg.scope:
            continue
        tol = cfg.tolerance if cfg.tolerance is not None else tol
        value = float(fn())
        ok = value <= tol
        status = status or (0 if ok else 1)
        rows.append({"check": name, "scope": scope, "residual": value, "tolerance": tol, "pass": ok})
    return rows, ["check", "scope", "residual", "tolerance", "pass"], status


# -- diagonalize / coherent-state / wavefunction --------------------------------


def cmd_diagonalize(cfg):
    c0 = cfg.c0
    h = LinearHamiltonian(cfg.algebra, c0, cfg.c1)
    res = diagonalize(h)
    rep = alg.build_su11_rep(cfg.k, cfg.trunc_dim) if cfg.algebra == alg.SU11 else alg.build_su2_rep(cfg.j)
    chk = spectrum_check(h, rep)
    row = {
        "algebra": cfg.algebra,
        "tau": res.params.tau,
        "phi": res.params.phi,
        "energy_scale": res.energy_scale,
        "residual_offdiag": res.residual_offdiag,
        "spectrum_max_abs_dev": chk["max_abs_dev"],
        "levels_compared": chk["levels_compared"],
    }
    return [row], list(row), 0


def cmd_coherent_state(cfg):
    p = CoherentParams(cfg.tau, cfg.phi)
    zeta, _ = zeta_from_params(cfg.algebra, p)
    if cfg.algebra == alg.SU11:
        state = pncs_su11_series(cfg.k, cfg.n, zeta, cfg.trunc_dim)
        col = displacement_operator(alg.build_su11_rep(cfg.k, cfg.trunc_dim), p)[:, cfg.n]
    else:
        state = pncs_su2_series(cfg.j, cfg.mu, zeta)
        col = displacement_operator(alg.build_su2_rep(cfg.j), p)[:, int(round(cfg.j - cfg.mu))]
    fid = abs(np.vdot(state.amplitudes, col))
    rows = [
        {"index": i, "re": a.real, "im": a.imag, "abs2": abs(a) ** 2, "displacement_fidelity": fid}
        for i, a in enumerate(state.amplitudes)
    ]
    return rows, ["index", "re", "im", "abs2", "displacement_fidelity"], 0


def cmd_wavefunction(cfg):
    if cfg.n_l < 0 or cfg.m_n < 0:
        raise UsageError("n_l and m_n must be nonnegative")
    grid = PolarGrid.uniform(cfg.rho_max, cfg.n_rho, cfg.n_angle, cfg.n_l, cfg.m_n)
    if cfg.algebra == alg.SU11:
        if not abs(cfg.zeta) < 1:
            raise UsageError("su11 wavefunctions need |zeta| < 1")
        out = evaluate_su11_wavefunction(cfg.n_l, cfg.m_n, cfg.zeta, grid)
    else:
        out = evaluate_su2_wavefunction(cfg.n_l, cfg.m_n, cfg.zeta, grid)
    cols = ["rho", "angle", "re", "im", "abs2"]
    rows = [dict(zip(cols, r)) for r in out.rows()]
    return rows, cols, 0


COMMANDS = {
    "verify": cmd_verify,
    "diagonalize": cmd_diagonalize,
    "coherent-state": cmd_coherent_state,
    "berry": cmd_berry,
    "sweep": cmd_sweep,
    "wavefunction": cmd_wavefunction,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="lrberry", description="Lie-algebraic phases toolkit")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="flat key = value configuration file")
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override one key")
    ap.add_argument("--out", help="output path (default stdout)")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--seed", type=int)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.set, args.seed)
        rows, columns, status = COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except LRBerryError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    text = render(rows, columns, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status:
        failed = [r["check"] for r in rows if r.get("pass") is False]
        if failed:
            print("failed checks: " + ", ".join(failed), file=sys.stderr)
    return status

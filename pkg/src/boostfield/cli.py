"""Command-line front end.

Exit codes: 0 success, 1 a verification or evolution failed, 2 bad usage or
configuration.  Every file-producing run writes a manifest.json next to its
outputs recording the resolved configuration, input digests, seed,
tolerances and library versions.  The manifest is the only file that
carries a timestamp, so reruns with the same seed are byte-identical
everywhere else.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import platform
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .fields import FieldSpec, MassParameters, load_spec
from .kinematics import Event, LorentzBoost, boost_event, inverse_boost_event
from .pde import (
    Grid,
    GridState,
    SolverConfig,
    SolverError,
    evolve_kgf,
    evolve_schrodinger,
    evolve_wave,
    measure_observables,
)
from .spectral import SampledSignal, sample_rest_signal, scan_spectrum
from .verify import (
    derivative_slopes,
    envelope_equation_residual,
    klein_gordon_residual,
    neglected_term_scan,
    sample_events,
    scalar_invariance_check,
    schrodinger_residual,
    separable_potential,
)


class ConfigError(Exception):
    pass


class VerificationFailure(Exception):
    pass


_COMMANDS = ("boost", "field", "spectrum", "verify", "evolve", "limit-scan")

_PARAM_KEYS = {
    "boost": {"beta", "c", "event", "inverse"},
    "field": {"event", "component", "tau", "z_min", "z_max", "n"},
    "spectrum": {"csv", "z", "t_max", "dt", "omegas", "omegas_from_spec", "window"},
    "verify": {
        "check",
        "component",
        "events",
        "h",
        "gamma_mode",
        "mass",
        "hbar",
        "c",
        "betas",
        "tolerance",
        "box_z",
        "box_tau",
    },
    "evolve": {
        "equation",
        "component",
        "init",
        "grid",
        "extent",
        "dt",
        "steps",
        "snap_every",
        "mass_scalar",
        "mass",
        "hbar",
        "c",
        "potential_from_spec",
        "dispersion_modes",
    },
    "limit-scan": {"mass", "hbar", "c", "betas"},
}

_TOLERANCES = {
    "envelope": 1e-10,
    "klein-gordon": 1e-10,
    "scalar": 1e-10,
    "schrodinger": 1e-10,
    "derivative_slope_band": [1.9, 2.1],
    "beta4_slope_band": [3.8, 4.2],
}


@dataclass(frozen=True)
class ExperimentConfig:
    """One resolved run: command, inputs, parameters, output directory, seed."""

    command: str
    spec: str | None
    params: dict
    out: str | None
    seed: int

    def __post_init__(self) -> None:
        if self.command not in _COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        unknown = set(self.params) - _PARAM_KEYS[self.command]
        if unknown:
            raise ConfigError(
                f"unknown parameters for {self.command}: {sorted(unknown)}"
            )

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "spec": self.spec,
            "params": dict(self.params),
            "out": self.out,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ConfigError("config must be a mapping")
        required = {"command", "spec", "params", "out", "seed"}
        if set(d) != required:
            raise ConfigError(
                f"config keys must be exactly {sorted(required)}, got {sorted(d)}"
            )
        return cls(d["command"], d["spec"], dict(d["params"]), d["out"], int(d["seed"]))


def _fmt(v: float) -> str:
    return format(float(v), ".12g")


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (int, float, np.floating)) else v for v in row])


def _emit_manifest(cfg: ExperimentConfig, out_dir: Path, outputs: list[str]) -> None:
    manifest = {
        "config": cfg.to_dict(),
        "inputs": {},
        "tolerances": _TOLERANCES,
        "versions": {
            "boostfield": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "python": platform.python_version(),
        },
        "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "outputs": sorted(outputs),
    }
    if cfg.spec:
        manifest["inputs"][cfg.spec] = _sha256(cfg.spec)
    _write_json(out_dir / "manifest.json", manifest)


def _out_dir(cfg: ExperimentConfig) -> Path:
    if not cfg.out:
        raise ConfigError(f"command {cfg.command!r} needs an output directory (--out)")
    p = Path(cfg.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


def _load_spec_arg(cfg: ExperimentConfig) -> FieldSpec:
    if not cfg.spec:
        raise ConfigError(f"command {cfg.command!r} needs a field spec (--spec)")
    try:
        return load_spec(cfg.spec)
    except FileNotFoundError:
        raise ConfigError(f"spec file not found: {cfg.spec}") from None
    except ValueError as exc:
        raise ConfigError(f"bad spec file {cfg.spec}: {exc}") from None


def _parse_floats(text: str, n: int | None = None) -> list[float]:
    try:
        vals = [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError:
        raise ConfigError(f"cannot parse float list from {text!r}") from None
    if n is not None and len(vals) != n:
        raise ConfigError(f"expected {n} comma-separated values, got {text!r}")
    return vals


def _default_component(spec: FieldSpec) -> int:
    for i, comp in enumerate(spec.components):
        if comp.omega > 0:
            return i
    raise ConfigError("spec has no oscillating component")


def _events_for(spec: FieldSpec, params: dict, n: int, seed: int):
    box_z = tuple(_parse_floats(params["box_z"], 2)) if params.get("box_z") else (-1.0, 1.0)
    box_tau = tuple(_parse_floats(params["box_tau"], 2)) if params.get("box_tau") else (-1.0, 1.0)
    return sample_events(n, seed, z=box_z, tau=box_tau)


# -- command bodies ---------------------------------------------------------


def _run_boost(cfg: ExperimentConfig) -> int:
    p = cfg.params
    if "beta" not in p or "event" not in p:
        raise ConfigError("boost needs beta and event")
    b = LorentzBoost(float(p["beta"]), float(p.get("c", 1.0)))
    e = Event(*_parse_floats(p["event"], 4))
    out = inverse_boost_event(e, b) if p.get("inverse") else boost_event(e, b)
    line = ",".join(_fmt(v) for v in (out.x, out.y, out.z, out.tau))
    print(line)
    if cfg.out:
        d = _out_dir(cfg)
        _write_json(
            d / "boost.json",
            {
                "input": [e.x, e.y, e.z, e.tau],
                "beta": b.beta,
                "inverse": bool(p.get("inverse")),
                "output": [out.x, out.y, out.z, out.tau],
            },
        )
        _emit_manifest(cfg, d, ["boost.json"])
    return 0


def _run_field(cfg: ExperimentConfig) -> int:
    spec = _load_spec_arg(cfg)
    p = cfg.params
    if p.get("event"):
        e = Event(*_parse_floats(p["event"], 4))
        if p.get("component") is not None:
            val = spec.harmonic_lab(int(p["component"]), e)
        else:
            val = spec.psi_lab(e)
        print(f"{_fmt(val.real)},{_fmt(val.imag)},{_fmt(spec.scalar_density(e))}")
        if cfg.out:
            d = _out_dir(cfg)
            _write_json(
                d / "field.json",
                {
                    "event": [e.x, e.y, e.z, e.tau],
                    "psi": [val.real, val.imag],
                    "scalar_density": spec.scalar_density(e),
                },
            )
            _emit_manifest(cfg, d, ["field.json"])
        return 0
    for key in ("tau", "z_min", "z_max", "n"):
        if key not in p:
            raise ConfigError("field sampling needs tau, z_min, z_max and n (or event)")
    n = int(p["n"])
    if n < 2:
        raise ConfigError("need at least 2 sample points")
    z = np.linspace(float(p["z_min"]), float(p["z_max"]), n)
    tau = float(p["tau"])
    psi = spec.psi_lab_on_axis(z, tau)
    phi = np.zeros_like(z)
    for k in range(len(spec.components)):
        phi += np.abs(spec.envelope_on_axis(k, z, tau)) ** 2
    d = _out_dir(cfg)
    _write_csv(
        d / "field.csv",
        ["z", "re_psi", "im_psi", "phi"],
        zip(z, psi.real, psi.imag, phi),
    )
    _emit_manifest(cfg, d, ["field.csv"])
    return 0


def _read_signal_csv(path: str) -> SampledSignal:
    try:
        raw = np.genfromtxt(path, delimiter=",", names=True)
    except OSError:
        raise ConfigError(f"cannot read signal csv {path}") from None
    for col in ("t", "re", "im"):
        if raw.dtype.names is None or col not in raw.dtype.names:
            raise ConfigError("signal csv needs columns t, re, im")
    t = np.asarray(raw["t"], dtype=float)
    if t.size < 2:
        raise ConfigError("signal csv needs at least 2 rows")
    dts = np.diff(t)
    if not np.allclose(dts, dts[0], rtol=1e-9, atol=0.0):
        raise ConfigError("signal csv must be uniformly sampled")
    return SampledSignal(raw["re"] + 1j * raw["im"], float(dts[0]), float(t[0]))


def _run_spectrum(cfg: ExperimentConfig) -> int:
    p = cfg.params
    if p.get("csv"):
        sig = _read_signal_csv(p["csv"])
        spec = load_spec(cfg.spec) if cfg.spec else None
    else:
        spec = _load_spec_arg(cfg)
        for key in ("t_max", "dt"):
            if key not in p:
                raise ConfigError("synthesized spectrum needs t_max and dt")
        sig = sample_rest_signal(
            spec, float(p.get("z", 0.0)), float(p["t_max"]), float(p["dt"])
        )
    if p.get("omegas_from_spec"):
        if spec is None:
            raise ConfigError("--omegas-from-spec needs --spec")
        omegas = [c.omega for c in spec.components]
    elif p.get("omegas"):
        omegas = _parse_floats(p["omegas"])
    else:
        raise ConfigError("spectrum needs probe frequencies (--omegas or --omegas-from-spec)")
    window = p.get("window", "max")
    T = sig.max_symmetric_window() if window == "max" else float(window)
    est = scan_spectrum(sig, omegas, T)
    d = _out_dir(cfg)
    _write_csv(
        d / "spectrum.csv",
        ["omega", "re_q", "im_q", "abs_q", "window_T"],
        [
            (ent.omega, ent.q_hat.real, ent.q_hat.imag, abs(ent.q_hat), ent.window_T)
            for ent in est.entries
        ],
    )
    _write_json(d / "spectrum.json", {"residual_rms": est.residual_rms, "window_T": T})
    _emit_manifest(cfg, d, ["spectrum.csv", "spectrum.json"])
    return 0


def _mass_from_params(p: dict, fallback_m: float | None = None) -> MassParameters:
    m = p.get("mass", fallback_m)
    if m is None:
        raise ConfigError("need --mass (plus optional --hbar, --c)")
    return MassParameters(float(m), float(p.get("hbar", 1.0)), float(p.get("c", 1.0)))


def _run_verify(cfg: ExperimentConfig) -> int:
    p = cfg.params
    check = p.get("check")
    if check not in ("envelope", "schrodinger", "klein-gordon", "scalar", "beta4", "derivatives"):
        raise ConfigError(f"unknown verify check {check!r}")
    d = _out_dir(cfg)
    n_events = int(p.get("events", 100))
    seed = cfg.seed

    if check == "beta4":
        mass = _mass_from_params(p)
        betas = _parse_floats(p["betas"]) if p.get("betas") else [0.01, 0.02, 0.04, 0.08]
        scan = neglected_term_scan(mass, betas)
        lo, hi = _TOLERANCES["beta4_slope_band"]
        ok = lo <= scan.fitted_slope <= hi
        report = {"check": check, "passed": bool(ok), "scan": scan.to_dict()}
        _write_json(d / "report.json", report)
        _emit_manifest(cfg, d, ["report.json"])
        if not ok:
            raise VerificationFailure(
                f"beta4 slope {scan.fitted_slope:.4f} outside [{lo}, {hi}]"
            )
        return 0

    spec = _load_spec_arg(cfg)
    k = int(p["component"]) if p.get("component") is not None else _default_component(spec)
    events = _events_for(spec, p, n_events, seed)

    if check == "derivatives":
        hs = None
        if p.get("h"):
            h0 = float(p["h"])
            hs = [h0, h0 / 2.0, h0 / 4.0]
        slopes = derivative_slopes(spec, k, events[: min(len(events), 8)], hs=hs)
        lo, hi = _TOLERANCES["derivative_slope_band"]
        bad = {n: s for n, s in slopes.items() if s is not None and not (lo <= s <= hi)}
        report = {
            "check": check,
            "passed": not bad,
            "slopes": {n: s for n, s in slopes.items()},
            "slope_band": [lo, hi],
        }
        _write_json(d / "report.json", report)
        rows = [(name, "" if s is None else s) for name, s in sorted(slopes.items())]
        _write_csv(d / "derivative_slopes.csv", ["entry", "slope"], rows)
        _emit_manifest(cfg, d, ["report.json", "derivative_slopes.csv"])
        if bad:
            raise VerificationFailure(f"derivative slopes out of band: {bad}")
        return 0

    if check == "envelope":
        rep = envelope_equation_residual(spec, k, events, h=float(p["h"]) if p.get("h") else None)
        tol = float(p.get("tolerance", _TOLERANCES["envelope"]))
    elif check == "klein-gordon":
        rep = klein_gordon_residual(spec, k, events)
        tol = float(p.get("tolerance", _TOLERANCES["klein-gordon"]))
    elif check == "scalar":
        rep = scalar_invariance_check(spec, k, events)
        tol = float(p.get("tolerance", _TOLERANCES["scalar"]))
    else:  # schrodinger
        gamma_mode = p.get("gamma_mode", "exact")
        mass = _mass_from_params(p, fallback_m=spec.components[k].omega)
        try:
            u = separable_potential(spec, k)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        rep = schrodinger_residual(spec, k, mass, u, events, gamma_mode=gamma_mode)
        default = _TOLERANCES["schrodinger"] if gamma_mode == "exact" else float("inf")
        tol = float(p.get("tolerance", default))
    ok = rep.max_abs <= tol
    report = {"check": check, "passed": bool(ok), "tolerance": tol, "report": rep.to_dict()}
    _write_json(d / "report.json", report)
    _emit_manifest(cfg, d, ["report.json"])
    if not ok:
        raise VerificationFailure(
            f"{check} residual max {rep.max_abs:.3e} above tolerance {tol:.3e}"
        )
    return 0


def _write_snapshot(d: Path, state: GridState, index: int) -> list[str]:
    if state.grid.dim == 1:
        name = f"snap_{index:06d}.csv"
        _write_csv(
            d / name,
            ["z", "re", "im"],
            zip(state.grid.axis(0), state.field.real, state.field.imag),
        )
        return [name]
    base = f"snap_{index:06d}"
    data = np.empty(state.field.shape + (2,), dtype="<f8")
    data[..., 0] = state.field.real
    data[..., 1] = state.field.imag
    (d / f"{base}.bin").write_bytes(data.tobytes(order="C"))
    _write_json(
        d / f"{base}.json",
        {
            "shape": list(state.field.shape),
            "dtype": "<f8",
            "layout": "C-order, innermost axis interleaves re,im",
            "t": state.t,
            "step": state.step_count,
        },
    )
    return [f"{base}.bin", f"{base}.json"]


def _run_evolve(cfg: ExperimentConfig) -> int:
    p = cfg.params
    equation = p.get("equation")
    if equation not in ("schrodinger", "kgf", "wave"):
        raise ConfigError(f"unknown equation {equation!r}")
    for key in ("grid", "extent", "dt", "steps"):
        if key not in p:
            raise ConfigError("evolve needs grid, extent, dt and steps")
    pts = tuple(int(v) for v in _parse_floats(str(p["grid"])))
    ext = tuple(_parse_floats(str(p["extent"])))
    if len(ext) == 1 and len(pts) > 1:
        ext = ext * len(pts)
    try:
        grid = Grid(ext, pts)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    second_order = equation in ("kgf", "wave")
    spec = None
    if p.get("init"):
        raw = np.genfromtxt(p["init"], delimiter=",", names=True)
        names = raw.dtype.names or ()
        if grid.dim != 1 or "z" not in names:
            raise ConfigError("--init supports 1-d csv snapshots with a z column")
        if raw["z"].size != grid.points[0]:
            raise ConfigError("init snapshot size does not match grid")
        field = raw["re"] + 1j * raw["im"]
        if second_order:
            if "pi_re" not in names:
                raise ConfigError("second-order init needs pi_re, pi_im columns")
            pi = raw["pi_re"] + 1j * raw["pi_im"]
        else:
            pi = None
    else:
        spec = _load_spec_arg(cfg)
        k = int(p["component"]) if p.get("component") is not None else _default_component(spec)
        z = grid.axis(grid.dim - 1)
        if equation == "schrodinger":
            line = spec.envelope_on_axis(k, z, 0.0)
            dline = None
        else:
            line = spec.harmonic_on_axis(k, z, 0.0)
            dline = spec.harmonic_dtau_on_axis(k, z, 0.0)
        if grid.dim == 1:
            field = line
            pi = dline
        else:
            shape = grid.points
            field = np.broadcast_to(line, shape).copy()
            pi = np.broadcast_to(dline, shape).copy() if dline is not None else None
        if not second_order:
            pi = None

    state = GridState(grid, field, pi)

    mass = None
    mass_scalar = None
    potential = None
    if equation == "schrodinger":
        fallback = spec.components[k].omega if spec is not None else None
        mass = _mass_from_params(p, fallback_m=fallback)
        if p.get("potential_from_spec"):
            if spec is None:
                raise ConfigError("--potential-from-spec needs --spec")
            potential = separable_potential(spec, k)
        scheme = "crank_nicolson"
    else:
        scheme = "leapfrog"
        if equation == "wave":
            mass_scalar = 0.0
        elif p.get("mass_scalar") is not None:
            mass_scalar = float(p["mass_scalar"])
        else:
            # intrinsic default: the carrier frequency is m c / hbar
            fallback = spec.components[k].omega if spec is not None else None
            mass = _mass_from_params(p, fallback_m=fallback)
    sc = SolverConfig(
        dt=float(p["dt"]),
        steps=int(p["steps"]),
        scheme=scheme,
        mass=mass,
        mass_scalar=mass_scalar,
        potential=potential,
    )

    d = _out_dir(cfg)
    snap_every = int(p.get("snap_every", 0))
    outputs: list[str] = []
    obs_rows = []
    modes = [int(v) for v in _parse_floats(str(p["dispersion_modes"]))] if p.get("dispersion_modes") else []
    mode_series: dict[int, list[complex]] = {m: [] for m in modes}
    times: list[float] = []

    def record(st: GridState) -> None:
        if snap_every and st.step_count > 0 and st.step_count % snap_every == 0:
            outputs.extend(_write_snapshot(d, st, st.step_count))
        obs = measure_observables(st, sc)
        obs_rows.append(
            (st.t, obs.norm, obs.energy)
            + obs.centroid
            + obs.width
        )
        if modes and st.grid.dim == 1:
            n = st.grid.points[0]
            f = np.fft.fft(st.field) / n
            times.append(st.t)
            for m in modes:
                mode_series[m].append(complex(f[m % n]))

    outputs.extend(_write_snapshot(d, state, 0))
    record(state)

    evolve = {
        "schrodinger": evolve_schrodinger,
        "kgf": evolve_kgf,
        "wave": evolve_wave,
    }[equation]
    final = evolve(state, sc, monitor=record)

    axes = ["z"] if grid.dim == 1 else ["x", "y", "z"]
    header = ["t", "norm", "energy"] + [f"centroid_{a}" for a in axes] + [f"width_{a}" for a in axes]
    _write_csv(d / "observables.csv", header, obs_rows)
    outputs.append("observables.csv")
    outputs.extend(_write_snapshot(d, final, final.step_count))

    if modes:
        m_s = sc.resolved_mass_scalar() if equation != "schrodinger" else 0.0
        rows = []
        t_arr = np.asarray(times)
        for m in modes:
            series = np.asarray(mode_series[m])
            k = 2.0 * np.pi * m / grid.extents[-1]
            if np.any(np.abs(series) < 1e-12):
                raise VerificationFailure(f"mode {m} amplitude too weak to fit")
            phase = np.unwrap(np.angle(series))
            omega_meas = abs(np.polyfit(t_arr, phase, 1)[0])
            rows.append((k, omega_meas, float(np.sqrt(k * k + m_s))))
        _write_csv(d / "dispersion.csv", ["k", "omega_measured", "omega_continuum"], rows)
        outputs.append("dispersion.csv")

    _emit_manifest(cfg, d, sorted(set(outputs)))
    return 0


def _run_limit_scan(cfg: ExperimentConfig) -> int:
    p = cfg.params
    mass = _mass_from_params(p)
    betas = _parse_floats(p["betas"]) if p.get("betas") else [0.01, 0.02, 0.04, 0.08]
    scan = neglected_term_scan(mass, betas)
    d = _out_dir(cfg)
    _write_csv(d / "beta_term.csv", ["beta", "term"], scan.points)
    _write_json(d / "scan.json", scan.to_dict())
    _emit_manifest(cfg, d, ["beta_term.csv", "scan.json"])
    return 0


_RUNNERS = {
    "boost": _run_boost,
    "field": _run_field,
    "spectrum": _run_spectrum,
    "verify": _run_verify,
    "evolve": _run_evolve,
    "limit-scan": _run_limit_scan,
}


def run(cfg: ExperimentConfig) -> int:
    """Execute one configured command; returns the process exit code."""
    try:
        return _RUNNERS[cfg.command](cfg)
    except VerificationFailure as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


# -- argument parsing --------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="boostfield",
        description="Boosted almost-periodic fields: evaluate, extract, verify, evolve.",
    )
    ap.add_argument("--config", help="run a JSON ExperimentConfig instead of flags")
    sub = ap.add_subparsers(dest="command")

    def common(sp, needs_spec=False):
        sp.add_argument("--spec", required=needs_spec, help="field spec JSON")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("boost", help="apply the coordinate map to one event")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--event", required=True, help="x,y,z,tau")
    sp.add_argument("--inverse", action="store_true")
    common(sp)

    sp = sub.add_parser("field", help="evaluate the lab field")
    sp.add_argument("--event", help="x,y,z,tau")
    sp.add_argument("--component", type=int)
    sp.add_argument("--tau", type=float)
    sp.add_argument("--z-min", type=float, dest="z_min")
    sp.add_argument("--z-max", type=float, dest="z_max")
    sp.add_argument("--n", type=int)
    common(sp, needs_spec=True)

    sp = sub.add_parser("spectrum", help="boxcar harmonic extraction")
    sp.add_argument("--csv", help="signal csv with t,re,im columns")
    sp.add_argument("--z", type=float, default=0.0)
    sp.add_argument("--t-max", type=float, dest="t_max")
    sp.add_argument("--dt", type=float)
    sp.add_argument("--omegas", help="comma-separated probe frequencies")
    sp.add_argument("--omegas-from-spec", action="store_true", dest="omegas_from_spec")
    sp.add_argument("--window", default="max", help="half-width T or 'max'")
    common(sp)

    sp = sub.add_parser("verify", help="residual and convergence certification")
    sp.add_argument(
        "check",
        choices=["envelope", "schrodinger", "klein-gordon", "scalar", "beta4", "derivatives"],
    )
    sp.add_argument("--component", type=int)
    sp.add_argument("--events", type=int, default=100)
    sp.add_argument("--h", type=float)
    sp.add_argument("--gamma-mode", choices=["exact", "unity"], default="exact", dest="gamma_mode")
    sp.add_argument("--mass", type=float)
    sp.add_argument("--hbar", type=float, default=1.0)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--betas", help="comma-separated betas for beta4")
    sp.add_argument("--tolerance", type=float)
    sp.add_argument("--box-z", dest="box_z", help="zlo,zhi event box")
    sp.add_argument("--box-tau", dest="box_tau", help="taulo,tauhi event box")
    common(sp)

    sp = sub.add_parser("evolve", help="finite-difference evolution")
    sp.add_argument("equation", choices=["schrodinger", "kgf", "wave"])
    sp.add_argument("--component", type=int)
    sp.add_argument("--init", help="1-d csv snapshot (z,re,im[,pi_re,pi_im])")
    sp.add_argument("--grid", required=True, help="points per axis, e.g. 512 or 32,32,32")
    sp.add_argument("--extent", required=True, help="domain length per axis")
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--snap-every", type=int, default=0, dest="snap_every")
    sp.add_argument("--mass-scalar", type=float, dest="mass_scalar")
    sp.add_argument("--mass", type=float)
    sp.add_argument("--hbar", type=float, default=1.0)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--potential-from-spec", action="store_true", dest="potential_from_spec")
    sp.add_argument("--dispersion-modes", dest="dispersion_modes", help="integer mode numbers")
    common(sp)

    sp = sub.add_parser("limit-scan", help="rest-energy correction against beta")
    sp.add_argument("--mass", type=float, required=True)
    sp.add_argument("--hbar", type=float, default=1.0)
    sp.add_argument("--c", type=float, default=1.0)
    sp.add_argument("--betas", help="comma-separated betas")
    common(sp)

    return ap


def _config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    command = ns.command
    skip = {"command", "config", "spec", "out", "seed"}
    params = {
        k: v
        for k, v in vars(ns).items()
        if k not in skip and v is not None and v is not False
    }
    return ExperimentConfig(
        command=command,
        spec=getattr(ns, "spec", None),
        params=params,
        out=getattr(ns, "out", None),
        seed=getattr(ns, "seed", 0),
    )


def main(argv=None) -> int:
    ap = _build_parser()
    ns = ap.parse_args(argv)
    try:
        if ns.config:
            try:
                cfg = ExperimentConfig.from_dict(json.loads(Path(ns.config).read_text()))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot load config {ns.config}: {exc}") from None
        else:
            if ns.command is None:
                ap.print_usage(sys.stderr)
                return 2
            cfg = _config_from_args(ns)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

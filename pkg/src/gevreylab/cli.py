"""Command-line orchestration: direct tools plus config-driven experiments.

Direct subcommands (simulate, gevrey, radius, cellular, shear, strip, phi,
majorant) expose single module operations; `run <config.json>` executes a
named experiment end to end and writes a manifest recording every check with
its measured value, tolerance, and verdict.  Exit status is nonzero when any
check fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import __version__
from .errors import ConfigurationError, GevreyLabError
from .spectral import SpectralField, forward_transform
from .snapshots import read_snapshot, write_snapshot
from .gevrey import build_ladder, estimate_radius, gevrey_norm
from .euler2d import Euler2D, disc_probe, strip_vorticity
from .flows import (
    CellularFlow,
    cellular_singularity_radius,
    cellular_y22_field,
    cellular_y22_pole,
    cellular_persistence_time,
    shear_radius_prediction,
    shear_u3_coefficients,
)
from . import analytic_profile as profile
from .majorant import (
    MajorantState,
    comb_inequality_check,
    persistence_time,
    solve_recursion,
    stirling_check,
)

EXPERIMENTS = (
    "lagrangian-persistence",
    "eulerian-decay",
    "cellular-singularity",
    "strip-rotation",
    "phi-construction",
    "majorant-table",
)


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""


@dataclass
class RunManifest:
    experiment: str
    config: dict
    version: str = __version__
    wall_time: float = 0.0
    serial: bool = True
    seed: int = 0
    checks: List[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, value: float, tolerance: float,
            detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), float(value), tolerance, detail))

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def write(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2)
        return path


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


# -- experiments --------------------------------------------------------------------


def exp_lagrangian_persistence(cfg: dict, out: Path, manifest: RunManifest) -> None:
    """Cellular flow: Lagrangian Y22 radius shrinks per the closed form while
    the Eulerian field (stationary, band-limited) never loses regularity."""
    ts = cfg.get("t_values", [0.5, 1.0, 2.0])
    n = int(cfg.get("n", 512))
    rows = []
    for t in ts:
        est = estimate_radius(cellular_y22_field(n, t), axis=0)
        exact = cellular_singularity_radius(t)
        rel = abs(est.delta_hat / exact - 1.0)
        rows.append([t, est.delta_hat, exact, est.r_squared, int(est.reliable)])
        manifest.add(f"y22_radius_fit_t={t}", rel < 0.02 and est.reliable, rel, 0.02,
                     f"fit {est.delta_hat:.6f} vs closed form {exact:.6f}")
    # Eulerian side: the vorticity is a single Fourier mode, so no decaying
    # tail exists to fit — the radius tracker must refuse rather than decay.
    w = forward_transform(SpectralField.from_function(
        lambda x, y: 2.0 * np.sin(x) * np.sin(y), 2, 64))
    est = estimate_radius(w)
    manifest.add("eulerian_band_limited_unreliable", not est.reliable,
                 est.delta_hat, 0.0, "stationary field has no radius decay")
    _write_csv(out / "lagrangian_radius.csv",
               ["t", "fitted_radius", "closed_form_radius", "r_squared", "reliable"], rows)


def exp_eulerian_decay(cfg: dict, out: Path, manifest: RunManifest) -> None:
    """Shear flow: fitted analyticity radius of u3(., ., t) tracks 1/(1+t)."""
    ts = cfg.get("t_values", [0.5, 1.0, 2.0])
    n = int(cfg.get("n", 512))
    rows = []
    for t in ts:
        est = estimate_radius(shear_u3_coefficients(n, t))
        pred = shear_radius_prediction(t)
        rel = abs(est.delta_hat / pred - 1.0)
        rows.append([t, est.delta_hat, pred, est.r_squared])
        manifest.add(f"u3_radius_t={t}", rel < 0.05 and est.reliable, rel, 0.05,
                     f"fit {est.delta_hat:.6f} vs 1/(1+t) = {pred:.6f}")
    _write_csv(out / "eulerian_radius.csv",
               ["t", "fitted_radius", "predicted_radius", "r_squared"], rows)


def exp_cellular_singularity(cfg: dict, out: Path, manifest: RunManifest) -> None:
    """Radius formula vs Newton pole location, involution, and the growth of
    the Y22 Gevrey sums as t approaches the persistence time."""
    ts = cfg.get("t_values", [0.25, 0.5, 1.0, 2.0])
    n = int(cfg.get("n", 512))
    rows = []
    for t in ts:
        radius = cellular_singularity_radius(t)
        pole = cellular_y22_pole(t)
        err = abs(pole - 1j * radius)
        rows.append([t, radius, pole.real, pole.imag, err])
        manifest.add(f"pole_location_t={t}", err < 1e-10, err, 1e-10)
    _write_csv(out / "singularity_scan.csv",
               ["t", "radius", "pole_re", "pole_im", "pole_error"], rows)
    invol = abs(cellular_persistence_time(cellular_singularity_radius(0.8)) - 0.8)
    manifest.add("persistence_involution", invol < 1e-12, invol, 1e-12)
    # Gevrey sums of Y22 at delta=1 blow up as t approaches T(1)
    T1 = cellular_persistence_time(1.0)
    sums = []
    for frac in (0.5, 0.9, 0.99):
        fld = cellular_y22_field(n, frac * T1)
        lad = build_ladder(fld, mode="axis-0", m_max=40)
        sums.append(gevrey_norm(lad, 1.0, 1.0).partial_sums[-1])
    manifest.add("gevrey_sum_growth_towards_T", sums[0] < sums[1] < sums[2],
                 sums[-1], 0.0, f"partial sums at t/T={0.5, 0.9, 0.99}: {sums}")


def exp_strip_rotation(cfg: dict, out: Path, manifest: RunManifest) -> None:
    """Rotating localized blob in a horizontal vorticity strip: the probe on
    the left end of the strip empties while the right end stays occupied, and
    time reversal restores the initial probes."""
    n = int(cfg.get("n", 2048))
    k = float(cfg.get("k", 16.0))
    dt = float(cfg.get("dt", 2e-3))
    t_end = float(cfg.get("t_end", 0.05))
    radius = float(cfg.get("probe_radius", 0.05))
    left_tol = float(cfg.get("left_tol", 1e-6))
    w0 = strip_vorticity(k, n)
    probes0 = {"left": disc_probe(w0, (-1.0, 1.0), radius),
               "right": disc_probe(w0, (1.0, 1.0), radius)}
    solver = Euler2D(w0, dt)
    series = [[0.0, solver.kinetic_energy(), solver.enstrophy(),
               probes0["left"][0], probes0["right"][0]]]
    n_steps = int(round(t_end / dt))
    solver.step(n_steps)
    w_t = solver.omega
    left_t = disc_probe(w_t, (-1.0, 1.0), radius)
    right_t = disc_probe(w_t, (1.0, 1.0), radius)
    series.append([solver.t, solver.kinetic_energy(), solver.enstrophy(),
                   left_t[0], right_t[0]])
    manifest.add("left_probe_emptied", left_t[0] < left_tol, left_t[0], left_tol)
    manifest.add("right_probe_occupied", right_t[0] > 0.1 * probes0["right"][0],
                 right_t[0], 0.1 * probes0["right"][0],
                 f"initial {probes0['right'][0]:.3e}")
    solver.reverse()
    solver.step(n_steps)
    solver.reverse()
    w_back = solver.omega
    left_b = disc_probe(w_back, (-1.0, 1.0), radius)
    right_b = disc_probe(w_back, (1.0, 1.0), radius)
    drift = max(abs(left_b[0] - probes0["left"][0]),
                abs(right_b[0] - probes0["right"][0]))
    manifest.add("reversal_restores_probes", drift < 1e-5, drift, 1e-5)
    series.append([0.0, solver.kinetic_energy(), solver.enstrophy(),
                   left_b[0], right_b[0]])
    _write_csv(out / "strip_series.csv",
               ["t", "energy", "enstrophy", "probe_left_max", "probe_right_max"],
               series)
    write_snapshot(out / "strip_final.snap", w_t, name="vorticity", time=t_end)


def exp_phi_construction(cfg: dict, out: Path, manifest: RunManifest) -> None:
    """The unit-strip profile: coefficient table, Gevrey sums at and beyond
    the critical radius, and the imaginary-axis blowup scan."""
    k_max = int(cfg.get("k_max", 128))
    xi = np.linspace(0.0, 8.0, 81)
    ident = np.max(np.abs(profile.hat_H(xi) * xi ** 4 - profile.hat_h(xi)))
    manifest.add("fourth_derivative_identity", ident < 1e-12, float(ident), 1e-12)
    coeffs = [[k, profile.phi_fourier(k)] for k in range(k_max + 1)]
    _write_csv(out / "phi_coefficients.csv", ["k", "phi_hat"], coeffs)
    for delta, expect in ((1.0, "convergent"), (1.2, "divergent")):
        g = profile.g11_partial_sums(delta, k_max=k_max)
        manifest.add(f"series_{expect}_delta={delta}", g.verdict == expect,
                     g.tail_ratio, 1.0, f"verdict {g.verdict}")
        _write_csv(out / f"partial_sums_delta_{delta}.csv", ["n", "partial_sum"],
                   list(enumerate(g.partial_sums)))
    ys = cfg.get("scan_y", [-0.9, -0.99, -0.999, -0.9999])
    vals = [abs(profile.phi_triple_prime_imag_axis(y)) for y in ys]
    _write_csv(out / "blowup_scan.csv", ["y", "abs_phi_triple_prime"],
               list(zip(ys, vals)))
    inc = all(a < b for a, b in zip(vals, vals[1:]))
    manifest.add("blowup_monotone", inc, vals[-1], 0.0, f"scan {vals}")
    ratio = profile.log_blowup_ratio("1e-40")
    manifest.add("blowup_log_asymptote", abs(ratio - 1.0) < 0.05, ratio, 0.05)


def exp_majorant_table(cfg: dict, out: Path, manifest: RunManifest) -> None:
    """Certified-time table over M plus the combinatorial/Stirling checks."""
    Ms = cfg.get("M_values", [0.1, 1.0, 10.0])
    m_max = int(cfg.get("m_max", 40))
    seed = int(cfg.get("seed", 0))
    records, prev_T = [], None
    for M in Ms:
        pt = persistence_time(M)
        omega = np.zeros(m_max + 1)
        omega[0] = M
        st = solve_recursion(MajorantState(omega=omega, T=pt.T))
        ws = st.weighted_sum()
        records.append({"M": M, "T": pt.T, "binding": pt.binding,
                        "residuals": pt.residuals, "weighted_sum": ws,
                        "bound": 4.0 * st.C1 * M})
        manifest.add(f"weighted_sum_bound_M={M}", ws <= 4.0 * st.C1 * M, ws,
                     4.0 * st.C1 * M)
        manifest.add(f"binding_residual_M={M}",
                     abs(pt.residuals[pt.binding]) <= 1e-10,
                     abs(pt.residuals[pt.binding]), 1e-10)
        if prev_T is not None:
            manifest.add(f"T_decreasing_at_M={M}", pt.T < prev_T, pt.T, prev_T)
        prev_T = pt.T
        _write_csv(out / f"majorant_M_{M}.csv", ["m", "Omega_m", "B_m"],
                   [[m, omega[m], st.B[m]] for m in range(m_max + 1)])
    with open(out / "persistence_times.json", "w") as fh:
        json.dump(records, fh, indent=2)
    bad2 = comb_inequality_check(6, 3, d=2, trials=1000, seed=seed)
    bad3 = comb_inequality_check(6, 2, 2, d=3, trials=1000, seed=seed)
    manifest.add("bilinear_inequality_trials", not bad2, len(bad2), 0)
    manifest.add("trilinear_inequality_trials", not bad3, len(bad3), 0)
    rep = stirling_check(200)
    ok = rep["lower_ok"] and rep["upper_ok"] and rep["quarter_power_ok"]
    manifest.add("stirling_exact", ok, rep["l2_identity_max_rel_err"], 1e-10)


_EXPERIMENT_FNS = {
    "lagrangian-persistence": exp_lagrangian_persistence,
    "eulerian-decay": exp_eulerian_decay,
    "cellular-singularity": exp_cellular_singularity,
    "strip-rotation": exp_strip_rotation,
    "phi-construction": exp_phi_construction,
    "majorant-table": exp_majorant_table,
}


def run_experiment(config: dict, out_dir: Path, serial: bool = True,
                   seed: int = 0) -> RunManifest:
    name = config.get("experiment")
    if name not in _EXPERIMENT_FNS:
        raise ConfigurationError(
            f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(experiment=name, config=config, serial=serial, seed=seed)
    t0 = time.time()
    cfg = dict(config)
    cfg.setdefault("seed", seed)
    _EXPERIMENT_FNS[name](cfg, out_dir, manifest)
    manifest.wall_time = time.time() - t0
    manifest.write(out_dir)
    return manifest


# -- direct subcommands --------------------------------------------------------------


def _cmd_simulate(args, out: Path) -> int:
    if args.initial == "cellular":
        w0 = forward_transform(SpectralField.from_function(
            lambda x, y: 2.0 * np.sin(x) * np.sin(y), 2, args.n))
    elif args.initial == "strip":
        w0 = strip_vorticity(args.k, args.n)
    else:
        raise ConfigurationError(f"unknown initial datum {args.initial!r}")
    solver = Euler2D(w0, args.dt)
    rows = []
    n_steps = int(round(args.t_end / args.dt))
    every = max(1, args.snap_every)
    for i in range(0, n_steps, every):
        solver.step(min(every, n_steps - i))
        est = estimate_radius(solver.omega)
        rows.append([solver.t, solver.kinetic_energy(), solver.enstrophy(),
                     est.delta_hat, int(est.reliable)])
    write_snapshot(out / "final.snap", solver.omega, name="vorticity", time=solver.t)
    _write_csv(out / "series.csv",
               ["t", "energy", "enstrophy", "radius_fit", "radius_reliable"], rows)
    return 0


def _cmd_gevrey(args, out: Path) -> int:
    fld, header = read_snapshot(args.snapshot)
    lad = build_ladder(fld, mode=args.mode, r=args.r, m_max=args.m_max)
    est = gevrey_norm(lad, args.s, args.delta)
    _write_csv(out / "ladder.csv", ["m", "L_m", "partial_sum"],
               [[m, lad.term(m), est.partial_sums[m]] for m in range(lad.m_max + 1)])
    record = {"field": header.get("field"), "s": args.s, "delta": args.delta,
              "verdict": est.verdict, "value": est.value, "tail_ratio": est.tail_ratio}
    with open(out / "verdict.json", "w") as fh:
        json.dump(record, fh, indent=2)
    print(json.dumps(record))
    return 0


def _cmd_radius(args, out: Path) -> int:
    fld, _ = read_snapshot(args.snapshot)
    est = estimate_radius(fld, axis=args.axis)
    record = {"delta_hat": est.delta_hat, "k_window": est.k_window,
              "r_squared": est.r_squared, "reliable": est.reliable}
    print(json.dumps(record))
    return 0


def _experiment_cmd(name: str, extra=None):
    def cmd(args, out: Path) -> int:
        cfg = {"experiment": name}
        if extra:
            cfg.update(extra(args))
        manifest = run_experiment(cfg, out, serial=args.serial, seed=args.seed)
        for c in manifest.checks:
            print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.value:.6g} "
                  f"(tolerance {c.tolerance:.6g}) {c.detail}")
        return 0 if manifest.all_passed else 1
    return cmd


def _cmd_run(args, out: Path) -> int:
    with open(args.config) as fh:
        config = json.load(fh)
    manifest = run_experiment(config, out, serial=args.serial, seed=args.seed)
    print(json.dumps({"experiment": manifest.experiment,
                      "passed": manifest.all_passed,
                      "checks": len(manifest.checks)}))
    return 0 if manifest.all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gevreylab",
                                description="Lagrangian/Eulerian analyticity laboratory")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--serial", action="store_true", help="force sequential execution")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run the 2D Euler solver")
    s.add_argument("--n", type=int, default=256)
    s.add_argument("--dt", type=float, default=1e-3)
    s.add_argument("--t-end", type=float, default=1.0)
    s.add_argument("--initial", default="cellular", choices=["cellular", "strip"])
    s.add_argument("--k", type=float, default=16.0)
    s.add_argument("--snap-every", type=int, default=100)
    s.set_defaults(fn=_cmd_simulate)

    s = sub.add_parser("gevrey", help="Gevrey series of a snapshot")
    s.add_argument("snapshot")
    s.add_argument("--mode", default="isotropic")
    s.add_argument("--r", type=float, default=2.0)
    s.add_argument("--s", type=float, default=1.0)
    s.add_argument("--delta", type=float, default=1.0)
    s.add_argument("--m-max", type=int, default=40)
    s.set_defaults(fn=_cmd_gevrey)

    s = sub.add_parser("radius", help="analyticity radius of a snapshot")
    s.add_argument("snapshot")
    s.add_argument("--axis", type=int, default=None)
    s.set_defaults(fn=_cmd_radius)

    s = sub.add_parser("cellular", help="cellular-flow singularity scan")
    s.set_defaults(fn=_experiment_cmd("cellular-singularity"))

    s = sub.add_parser("shear", help="shear-flow Eulerian radius decay")
    s.set_defaults(fn=_experiment_cmd("eulerian-decay"))

    s = sub.add_parser("strip", help="rotating-strip vorticity experiment")
    s.add_argument("--n", type=int, default=2048)
    s.add_argument("--k", type=float, default=16.0)
    s.add_argument("--dt", type=float, default=2e-3)
    s.add_argument("--t-end", type=float, default=0.05)
    s.set_defaults(fn=_experiment_cmd(
        "strip-rotation",
        lambda a: {"n": a.n, "k": a.k, "dt": a.dt, "t_end": a.t_end}))

    s = sub.add_parser("phi", help="unit-strip profile construction")
    s.add_argument("--k-max", type=int, default=128)
    s.set_defaults(fn=_experiment_cmd("phi-construction",
                                      lambda a: {"k_max": a.k_max}))

    s = sub.add_parser("majorant", help="majorant recursion table")
    s.add_argument("--M", type=float, nargs="+", default=[0.1, 1.0, 10.0])
    s.add_argument("--m-max", type=int, default=40)
    s.set_defaults(fn=_experiment_cmd(
        "majorant-table", lambda a: {"M_values": a.M, "m_max": a.m_max}))

    s = sub.add_parser("run", help="run an experiment from a JSON config")
    s.add_argument("config")
    s.set_defaults(fn=_cmd_run)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        return args.fn(args, out)
    except GevreyLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: info, sweeps, gate synthesis, reference table.

Every file-producing command writes a JSON manifest next to each output
(``<output>.manifest.json``) holding the resolved configuration, options and
seed, so runs can be reproduced bit-identically.  Wall-clock timings go to
stderr only, keeping manifests deterministic.

Exit codes: 0 success, 2 usage or configuration error, 3 synthesis
infeasible, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import SystemConfig
from .dynamics import SequenceModel, SequenceOracle
from .errors import ConfigError, DiagonalizationError, SivicError, SynthesisError
from .gates import KET_UP, canonical_gate_name, standard_gate
from .hamiltonian import build_hamiltonian
from .setpoints import resolve_setpoint_b, setpoint_config
from .spectrum import diagonalize, nuclear_quantization_fields, select_transition
from .sweeps import (
    DEFAULT_ANGLES,
    DEFAULT_MAGNITUDES,
    DTHETA_HEADER,
    ORIENTATION_HEADER,
    PRECESSION_HEADER,
    SweepRow,
    eigenstate_orientations,
    sweep_delta_theta,
    sweep_precession,
    write_csv,
)
from .synth import (
    REFERENCE_PERIODS,
    SynthesisOptions,
    synthesize,
    verify,
)

GATE_ORDER = ("X", "Y", "Z", "H", "S", "S-1", "T", "T-1")
TABLE_HEADER = (
    "strain_case",
    "gate",
    "tau1_ns",
    "tau2_ns",
    "tau3_ns",
    "tau4_ns",
    "total_ns",
    "fidelity",
    "status",
)


def _fmt(value: float) -> str:
    v = float(value)
    return "nan" if np.isnan(v) else f"{v:.9g}"


def _add_common(parser: argparse.ArgumentParser, with_setpoint: bool = False) -> None:
    parser.add_argument("--config", type=Path, help="flat key=value configuration file")
    parser.add_argument("--strain", type=float, help="set alpha = beta to this value (MHz)")
    parser.add_argument("--bmag", type=float, help="field magnitude (T)")
    parser.add_argument("--theta", type=float, help="field polar angle from the defect axis (deg)")
    parser.add_argument("--phi", type=float, help="field azimuth (deg)")
    parser.add_argument("--seed", type=int, default=0, help="random seed for stochastic commands")
    parser.add_argument("--out", type=Path, help="output path")
    if with_setpoint:
        parser.add_argument(
            "--setpoint",
            choices=["A", "B"],
            help="named operating point: A = unstrained 3.5 T @ 54.7 deg, "
            "B = strained, resolved on the 54.7 deg line",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sivic",
        description="Spin-Hamiltonian simulation and indirect-control gate synthesis "
        "for the SiV- host nuclear spin.",
    )
    parser.add_argument("--version", action="version", version=f"sivic {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_info = sub.add_parser("info", help="print spectrum and quantization geometry")
    _add_common(p_info, with_setpoint=True)

    p_sweep = sub.add_parser("sweep", help="grid sweeps written as CSV")
    p_sweep.add_argument("kind", choices=["dtheta", "precession", "orientations"])
    _add_common(p_sweep)
    p_sweep.add_argument("--bmin", type=float, default=0.0, help="grid field minimum (T)")
    p_sweep.add_argument("--bmax", type=float, default=7.0, help="grid field maximum (T)")
    p_sweep.add_argument("--bsteps", type=int, default=141, help="grid field steps")
    p_sweep.add_argument("--theta-min", type=float, default=0.0, help="grid angle minimum (deg)")
    p_sweep.add_argument("--theta-max", type=float, default=90.0, help="grid angle maximum (deg)")
    p_sweep.add_argument("--theta-steps", type=int, default=91, help="grid angle steps")

    p_synth = sub.add_parser("synth", help="synthesize one gate sequence")
    p_synth.add_argument("gate", help="gate name: X, Y, Z, H, S, S-1, T, T-1")
    _add_common(p_synth, with_setpoint=True)
    p_synth.add_argument("--budget", type=int, default=12_000, help="objective evaluation budget")
    p_synth.add_argument("--floor", type=float, default=0.98, help="fidelity floor")
    p_synth.add_argument(
        "--periods",
        type=int,
        help="pin the total to this many rotating-frame periods; defaults to the "
        "reference operating point when a named set-point is used",
    )
    p_synth.add_argument(
        "--free",
        action="store_true",
        help="free time-minimizing search instead of the reference period count",
    )
    p_synth.add_argument(
        "--trajectory", type=Path, help="also write a rotating-frame Bloch trajectory CSV"
    )

    p_table = sub.add_parser(
        "table2", help="batch-synthesize the 16-row reference gate table (CSV)"
    )
    _add_common(p_table)
    p_table.add_argument("--budget", type=int, default=12_000, help="objective evaluation budget per row")

    return parser


def _resolve_config(args) -> tuple[SystemConfig, dict | None]:
    """Defaults < config file < --setpoint < individual field flags."""
    setpoint_info = None
    if args.config is not None:
        config = SystemConfig.from_file(args.config)
    else:
        config = SystemConfig.default()
    if getattr(args, "setpoint", None):
        config = setpoint_config(args.setpoint)
        setpoint_info = {"name": args.setpoint}
        if args.setpoint == "B":
            spb = resolve_setpoint_b()
            setpoint_info.update(
                {
                    "B_mag_T": spb.b_mag,
                    "theta_deg": config.field_point.polar_angle,
                    "delta_theta_deg": spb.delta_theta,
                    "f_alpha_MHz": spb.f_alpha,
                    "f_beta_MHz": spb.f_beta,
                }
            )
    if args.strain is not None:
        config = config.with_strain(args.strain, args.strain)
    fp = config.field_point
    mag = args.bmag if args.bmag is not None else fp.magnitude
    theta = args.theta if args.theta is not None else fp.polar_angle
    phi = args.phi if args.phi is not None else fp.azimuth
    config = config.with_field(mag, theta, phi)
    return config, setpoint_info


def _write_manifest(out: Path, command: str, config: SystemConfig, options: dict, setpoint: dict | None) -> Path:
    manifest = {
        "command": command,
        "version": __version__,
        "config": config.to_dict(),
        "options": options,
        "outputs": [str(out)],
        "setpoint": setpoint,
    }
    path = Path(str(out) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def cmd_info(args) -> int:
    config, setpoint_info = _resolve_config(args)
    spec = diagonalize(build_hamiltonian(config))
    lines = ["configuration:"]
    for key, value in config.to_dict().items():
        lines.append(f"  {key} = {_fmt(value)}")
    lines.append("eigenvalues (MHz):")
    for k, e in enumerate(spec.eigenvalues):
        lines.append(f"  E{k} = {_fmt(e)}")
    try:
        case = "strained" if config.strain.is_strained else "unstrained"
        pair = select_transition(spec, case=case)
        geo = nuclear_quantization_fields(config, spec, pair)
        lines.append(f"transition {pair.label}: doublets ({pair.lower_index}, {pair.upper_index}), "
                     f"frequency = {_fmt(pair.frequency)} MHz")
        lines.append(f"delta_theta = {_fmt(geo.delta_theta)} deg")
        lines.append(f"f_alpha = {_fmt(geo.f_alpha)} MHz (period {_fmt(geo.period_alpha)} ns)")
        lines.append(f"f_beta = {_fmt(geo.f_beta)} MHz (period {_fmt(geo.period_beta)} ns)")
        lines.append(f"|B_hf| = {_fmt(np.linalg.norm(geo.B_hf_alpha))} T (alpha), "
                     f"{_fmt(np.linalg.norm(geo.B_hf_beta))} T (beta)")
    except SivicError:
        lower = float(np.mean(spec.eigenvalues[:4]))
        upper = float(np.mean(spec.eigenvalues[4:]))
        lines.append("transition selection unavailable (degenerate levels); "
                     "manifold splitting instead:")
        lines.append(f"manifold_splitting = {_fmt(upper - lower)} MHz")
    text = "\n".join(lines) + "\n"
    if args.out is not None:
        args.out.write_text(text)
        _write_manifest(args.out, "info", config, {}, setpoint_info)
    else:
        sys.stdout.write(text)
    return 0


def _sweep_grids(args, parser_error) -> tuple[np.ndarray, np.ndarray]:
    if args.bsteps < 1 or args.theta_steps < 1:
        parser_error("grid steps must be >= 1")
    if args.bmax < args.bmin or args.theta_max < args.theta_min:
        parser_error("grid maxima must not be below minima")
    if args.bmin < 0:
        parser_error("field magnitudes must be >= 0")
    mags = np.linspace(args.bmin, args.bmax, args.bsteps)
    if args.theta is not None:
        thetas = np.array([args.theta])
    else:
        thetas = np.linspace(args.theta_min, args.theta_max, args.theta_steps)
    return mags, thetas


def cmd_sweep(args, parser: argparse.ArgumentParser) -> int:
    if args.out is None:
        parser.error("sweep requires --out")
    config, setpoint_info = _resolve_config(args)
    mags, thetas = _sweep_grids(args, parser.error)
    t0 = time.monotonic()
    if args.kind == "dtheta":
        rows = sweep_delta_theta(config, mags, thetas)
        header = DTHETA_HEADER
    elif args.kind == "precession":
        rows = sweep_precession(config, mags, thetas)
        header = PRECESSION_HEADER
    else:
        angle = args.theta if args.theta is not None else 54.7
        rows = eigenstate_orientations(config, mags, angle)
        header = ORIENTATION_HEADER
    write_csv(args.out, header, rows)
    options = {
        "kind": args.kind,
        "bmin": args.bmin,
        "bmax": args.bmax,
        "bsteps": args.bsteps,
        "theta": args.theta,
        "theta_min": args.theta_min,
        "theta_max": args.theta_max,
        "theta_steps": args.theta_steps,
    }
    _write_manifest(args.out, f"sweep {args.kind}", config, options, setpoint_info)
    print(f"sweep {args.kind}: wrote {args.out} ({time.monotonic() - t0:.2f} s)", file=sys.stderr)
    return 0


def _result_document(result, report, config: SystemConfig, strain_case: str) -> dict:
    return {
        "gate": result.gate,
        "strain_case": strain_case,
        "B_mag_T": config.field_point.magnitude,
        "theta_deg": config.field_point.polar_angle,
        "tau_ns": list(result.taus),
        "total_ns": result.total_ns,
        "pair_fidelities": list(result.pair_fidelities),
        "gate_fidelity": result.gate_fidelity,
        "oracle_fidelity": result.oracle_fidelity,
        "oracle_gap": report.max_gap,
        "seed": result.seed,
        "evaluations": result.evaluations,
        "converged": result.converged,
    }


def cmd_synth(args) -> int:
    config, setpoint_info = _resolve_config(args)
    target = standard_gate(args.gate)
    model = SequenceModel.from_config(config)
    periods = args.periods
    if periods is None and not args.free and args.setpoint is not None:
        periods = REFERENCE_PERIODS[args.setpoint].get(target.name)
    opts = SynthesisOptions(
        fidelity_floor=args.floor,
        budget=args.budget,
        seed=args.seed,
        periods=periods,
    )
    t0 = time.monotonic()
    result = synthesize(target, model, opts)
    oracle = SequenceOracle.from_model(model)
    result, report = verify(result, target, model, oracle)
    strain_case = args.setpoint or ("strained" if config.strain.is_strained else "unstrained")
    doc = _result_document(result, report, config, strain_case)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    options = {"budget": args.budget, "floor": args.floor, "periods": periods,
               "gate": target.name, "seed": args.seed}
    if args.out is not None:
        args.out.write_text(text)
        _write_manifest(args.out, "synth", config, options, setpoint_info)
    else:
        sys.stdout.write(text)
    if args.trajectory is not None:
        traj = oracle.evolve(result.taus, oracle.embed(KET_UP), frame="rot")
        with args.trajectory.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(("t_ns", "frame", "x", "y", "z"))
            for t, vec in zip(traj.times, traj.vectors):
                writer.writerow((_fmt(t), traj.frame, _fmt(vec[0]), _fmt(vec[1]), _fmt(vec[2])))
        _write_manifest(args.trajectory, "synth --trajectory", config, options, setpoint_info)
    print(f"synth {target.name}: converged={result.converged} "
          f"({time.monotonic() - t0:.2f} s)", file=sys.stderr)
    return 0 if result.converged else 3


def cmd_table2(args, parser: argparse.ArgumentParser) -> int:
    if args.out is None:
        parser.error("table2 requires --out")
    t0 = time.monotonic()
    rows = []
    all_converged = True
    spb = resolve_setpoint_b()
    setpoint_info = {
        "A": {"B_mag_T": 3.5, "theta_deg": 54.7},
        "B": {
            "B_mag_T": spb.b_mag,
            "theta_deg": 54.7,
            "delta_theta_deg": spb.delta_theta,
            "f_alpha_MHz": spb.f_alpha,
        },
    }
    row_index = 0
    for case in ("A", "B"):
        config = setpoint_config(case)
        model = SequenceModel.from_config(config)
        oracle = SequenceOracle.from_model(model)
        for gate_name in GATE_ORDER:
            target = standard_gate(gate_name)
            opts = SynthesisOptions(
                budget=args.budget,
                seed=args.seed + row_index,
                periods=REFERENCE_PERIODS[case][gate_name],
            )
            row_index += 1
            try:
                result = synthesize(target, model, opts)
                result, _ = verify(result, target, model, oracle)
                status = "ok" if result.converged else "not-converged"
                all_converged &= result.converged
                rows.append(
                    (
                        case,
                        gate_name,
                        *(_fmt(t) for t in result.taus),
                        _fmt(result.total_ns),
                        _fmt(min(result.pair_fidelities)),
                        status,
                    )
                )
            except SivicError as exc:
                all_converged = False
                rows.append((case, gate_name, "nan", "nan", "nan", "nan", "nan", "nan", f"error: {exc}"))
    with args.out.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TABLE_HEADER)
        writer.writerows(rows)
    _write_manifest(
        args.out,
        "table2",
        SystemConfig.default(),
        {"seed": args.seed, "budget": args.budget, "reference_periods": REFERENCE_PERIODS},
        setpoint_info,
    )
    print(f"table2: wrote {args.out} ({time.monotonic() - t0:.2f} s)", file=sys.stderr)
    return 0 if all_converged else 3


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "info":
            return cmd_info(args)
        if args.command == "sweep":
            return cmd_sweep(args, parser)
        if args.command == "synth":
            return cmd_synth(args)
        if args.command == "table2":
            return cmd_table2(args, parser)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except SynthesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DiagonalizationError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    except SivicError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())

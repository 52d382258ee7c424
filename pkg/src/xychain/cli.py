"""Command-line front end: ``xychain <command> [options]``.

Exit codes: 0 success, 1 verification or validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import chain, entanglement, nmr, pulses
from .qlinalg import basis_state, check_density_matrix, ket_to_dm, pauli_string
from .spins import SpinSystem

DEFAULT_SEED = 20110
MODES = ("ideal", "compiled", "schedule", "schedule-noise")
SIG = 12


class ValidationError(Exception):
    pass


def fmt(x: float) -> str:
    """12 significant digits; magnitudes below 1e-12 print as 0."""
    x = float(x)
    if abs(x) < 1e-12:
        return "0"
    return f"{x:.{SIG}g}"


def _round(x: float) -> float:
    return float(fmt(x))


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise ValidationError(f"cannot write {out}: {exc}") from exc


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in r])
    return buf.getvalue()


def _load_system(path: str | None) -> SpinSystem:
    if path is None:
        return SpinSystem()
    try:
        return SpinSystem.from_json(path)
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        raise ValidationError(f"bad spin-system file {path}: {exc}") from exc


def phi_grid(args) -> np.ndarray:
    if args.phi_step <= 0:
        raise ValidationError("--phi-step must be positive")
    if args.phi_end < args.phi_start:
        raise ValidationError("--phi-end must not be below --phi-start")
    return entanglement.default_phi_grid(args.phi_start, args.phi_end, args.phi_step)


def _initial(label: str) -> np.ndarray:
    try:
        psi = chain.initial_state(label)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    if psi.shape != (8,):
        raise ValidationError("initial state must be a three-qubit label")
    return psi


# --- protocol pipelines -------------------------------------------------------


def ideal_protocol_state(protocol: str) -> np.ndarray:
    if protocol == "ghz":
        return chain.prepare_ghz().final_state
    if protocol == "w":
        return chain.prepare_w().final_state
    return chain.prepare_bell(pulses.PROTOCOL_INITIAL[protocol]).final_state


def run_protocol(protocol: str, mode: str, system: SpinSystem, slices: int = 16) -> dict:
    """Final density matrix of ``protocol`` under the chosen pipeline."""
    if protocol not in pulses.PROTOCOLS:
        raise ValidationError(f"unknown protocol {protocol!r}")
    psi0 = basis_state(pulses.PROTOCOL_INITIAL[protocol])
    info: dict = {}
    if mode == "ideal":
        rho = ket_to_dm(ideal_protocol_state(protocol))
    elif mode == "compiled":
        seq = pulses.protocol_sequence(protocol)
        rho = ket_to_dm(pulses.sequence_unitary(seq, 3) @ psi0)
        info["gate_counts"] = seq.counts()
    else:
        sched = pulses.protocol_schedule(protocol, system)
        noise = nmr.NoiseParams(True, slices) if mode == "schedule-noise" else None
        rho = nmr.simulate_schedule(ket_to_dm(psi0), sched, system, noise)
        info["total_duration_s"] = sched.total_duration
    return {"rho": rho, **info}


def _matrix_json(m: np.ndarray) -> dict:
    return {
        "real": [[_round(v) for v in row] for row in m.real],
        "imag": [[_round(v) for v in row] for row in m.imag],
    }


def prepare_report(protocol: str, mode: str, system: SpinSystem, slices: int = 16) -> dict:
    run = run_protocol(protocol, mode, system, slices)
    rho = run["rho"]
    target = ket_to_dm(ideal_protocol_state(protocol))
    prof = entanglement.profile(rho, pulses.PROTOCOL_PHI[protocol])
    report = {
        "protocol": protocol,
        "mode": mode,
        "phi": _round(prof.phi),
        "density_matrix": _matrix_json(rho),
        "fidelity": _round(nmr.fidelity(target, rho)),
        "attenuated_correlation": _round(nmr.attenuated_correlation(target, rho)),
        "entanglement": {
            k: (None if v is None else _round(v))
            for k, v in prof.as_dict().items()
            if k != "phi"
        },
    }
    if "total_duration_s" in run:
        report["total_duration_s"] = _round(run["total_duration_s"])
    if "gate_counts" in run:
        report["gate_counts"] = run["gate_counts"]
    return report


def load_state_json(path: str) -> np.ndarray:
    try:
        data = json.loads(Path(path).read_text())
        dm = data.get("density_matrix", data)
        rho = np.array(dm["real"], dtype=float) + 1j * np.array(dm["imag"], dtype=float)
        rho = check_density_matrix(rho, tol=1e-9)
    except (OSError, KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ValidationError(f"malformed state file {path}: {exc}") from exc
    if rho.shape != (8, 8):
        raise ValidationError("state file must hold an 8x8 density matrix")
    return rho


# --- verification suite --------------------------------------------------------


def verification_suite(samples: int, seed: int, system: SpinSystem, inject_fault: bool = False):
    """Run the compiler soundness checks; returns (name, max residual, tol, ok)."""
    rng = np.random.default_rng(seed)
    phis = rng.uniform(0, 2 * np.pi, samples)
    angles = rng.uniform(-np.pi, np.pi, samples)

    def compiled(phi, inline=False):
        seq = pulses.compile_xy_unitary(phi, inline=inline)
        if inject_fault:
            g = seq.gates[0]
            seq.gates[0] = replace(g, angle=-g.angle)
        return seq

    checks = []

    def run(name, tol, residuals):
        worst = max(residuals) if residuals else 0.0
        checks.append((name, worst, tol, worst < tol))

    run("xy-compile", 1e-9, [
        pulses.verify_equivalence(compiled(p), chain.xy_unitary_closed_form(p)).residual
        for p in phis
    ])
    run("xy-compile-inlined", 1e-9, [
        pulses.verify_equivalence(compiled(p, True), chain.xy_unitary_closed_form(p)).residual
        for p in phis
    ])
    zzz_diag = np.real(np.diag(pauli_string("ZZZ")))
    run("zzz-synthesis", 1e-9, [
        pulses.verify_equivalence(pulses.compile_zzz(a), np.diag(np.exp(-1j * a * zzz_diag))).residual
        for a in angles
    ])
    rz = pulses.gate_unitary(pulses.Rotation(2, "z", np.pi / 2), 3)
    run("composite-z", 1e-10, [pulses.verify_equivalence(pulses.compile_z_rotation(2), rz).residual])
    run("schedule-lowering", 1e-8, [
        pulses.verify_equivalence(
            pulses.lower_to_schedule(compiled(p), system), chain.xy_unitary_closed_form(p), system=system
        ).residual
        for p in phis
    ])
    return checks


# --- commands --------------------------------------------------------------------


def cmd_dynamics(args) -> int:
    psi = _initial(args.initial)
    rows = [
        (p.phi, p.c12, p.c13, p.c23, p.c1_23, p.c123)
        for p in entanglement.dynamics_sweep(psi, phi_grid(args))
    ]
    _write(_csv(["phi", "c12", "c13", "c23", "c1_23", "c123"], rows), args.out)
    return 0


def cmd_prepare(args) -> int:
    system = _load_system(args.spin_system)
    report = prepare_report(args.protocol, args.mode, system, args.slices)
    _write(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_pauli_set(args) -> int:
    if args.state:
        rho = load_state_json(args.state)
    elif args.basis:
        rho = ket_to_dm(_initial(args.basis))
    elif args.mixed:
        rho = np.eye(8, dtype=complex) / 8
    else:
        system = _load_system(args.spin_system)
        rho = run_protocol(args.protocol, args.mode, system, args.slices)["rho"]
    values = nmr.pauli_set(rho)
    _write(_csv(["label", "value"], [(k, v) for k, v in values.items()]), args.out)
    return 0


def cmd_sweep_correlation(args) -> int:
    grid = phi_grid(args)
    try:
        pps = nmr.make_pps(args.initial, args.epsilon)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    ideal = nmr.correlation_sweep(pps, grid)
    if args.mode == "schedule-noise":
        system = _load_system(args.spin_system)
        noisy = nmr.noisy_correlation_sweep(pps, grid, system, nmr.NoiseParams(True, args.slices))
        rows = [(p, v, w) for (p, v), (_, w) in zip(ideal, noisy)]
        header = ["phi", "xx_corr", "xx_corr_noisy"]
    else:
        rows = ideal
        header = ["phi", "xx_corr"]
    _write(_csv(header, rows), args.out)
    return 0


def cmd_verify(args) -> int:
    system = _load_system(args.spin_system)
    checks = verification_suite(args.phi_samples, args.seed, system, args.inject_fault)
    lines = [f"seed={args.seed} phi_samples={args.phi_samples}"]
    for name, worst, tol, ok in checks:
        lines.append(f"{'PASS' if ok else 'FAIL'} {name:<20} max_residual={worst:.3e} tol={tol:.0e}")
    failed = [c[0] for c in checks if not c[3]]
    lines.append("all checks passed" if not failed else "failed: " + ", ".join(failed))
    _write("\n".join(lines) + "\n", args.out)
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spin-system", metavar="PATH", help="JSON spin-system config")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--slices", type=int, default=16, help="relaxation slices per delay")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--phi-start", type=float, default=0.0)
    grid.add_argument("--phi-end", type=float, default=np.pi)
    grid.add_argument("--phi-step", type=float, default=np.pi / 628)

    parser = argparse.ArgumentParser(prog="xychain", description="Three-spin XY chain simulator and NMR compiler.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dynamics", parents=[common, grid], help="entanglement vs phi (CSV)")
    p.add_argument("--initial", default="010", help="basis label or 'superposition'")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("prepare", parents=[common], help="run a preparation protocol (JSON)")
    p.add_argument("protocol", choices=pulses.PROTOCOLS)
    p.add_argument("--mode", choices=MODES, default="ideal")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("pauli-set", parents=[common], help="64 Pauli expectations (CSV)")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--protocol", choices=pulses.PROTOCOLS)
    src.add_argument("--state", metavar="JSON", help="density matrix JSON, e.g. from prepare")
    src.add_argument("--basis", help="computational basis label")
    src.add_argument("--mixed", action="store_true", help="maximally mixed state")
    p.add_argument("--mode", choices=MODES, default="ideal")
    p.set_defaults(func=cmd_pauli_set)

    p = sub.add_parser("sweep-correlation", parents=[common, grid], help="<X1 X3> vs phi (CSV)")
    p.add_argument("--initial", default="010")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--mode", choices=("ideal", "schedule-noise"), default="ideal")
    p.set_defaults(func=cmd_sweep_correlation)

    p = sub.add_parser("verify", parents=[common], help="compiler equivalence checks")
    p.add_argument("--phi-samples", type=int, default=50)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

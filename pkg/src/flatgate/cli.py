"""Command-line front end: plan pulses, simulate them, compare against the
three-pulse baseline, sweep detuning, and run a self-test.

File formats
------------
Schedule:    CSV with header ``t,u1,u2``, 17 significant digits per value,
             plus a sidecar JSON manifest (same path with a .json suffix)
             carrying {format_version, target, T, N, k, eta_bar, min_abs_z,
             interpolation}.
Trajectory:  CSV with header ``t,q0,q1,q2,q3`` (scalar-first components).
Sweep:       CSV with header ``delta_r,fidelity``.

Exit codes: 0 success, 1 domain errors, 2 I/O errors.  Identical inputs
produce byte-identical output files.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import planner, propagator, zyz
from .errors import FlatGateError
from .quat import UnitQuaternion, as_unit, from_su2, SU2Matrix
from .schedule import FORMAT_VERSION, PulseSchedule

SQ2 = 1.0 / math.sqrt(2.0)
NAMED_GATES = {
    "X": UnitQuaternion(0.0, 1.0, 0.0, 0.0),
    "Y": UnitQuaternion(0.0, 0.0, 1.0, 0.0),
    "Z": UnitQuaternion(0.0, 0.0, 0.0, 1.0),
    "H": UnitQuaternion(0.0, SQ2, 0.0, SQ2),
    "minus-one": UnitQuaternion(-1.0, 0.0, 0.0, 0.0),
}


def resolve_gate(args) -> UnitQuaternion:
    """Resolve --gate/--quat/--su2 to the documented SU(2) representative."""
    given = [x for x in (args.gate, args.quat, args.su2) if x is not None]
    if len(given) != 1:
        raise FlatGateError("give exactly one of --gate, --quat, --su2")
    if args.gate is not None:
        return NAMED_GATES[args.gate]
    if args.quat is not None:
        vals = [float(v) for v in args.quat.split(",")]
        if len(vals) != 4:
            raise FlatGateError("--quat needs w,x,y,z")
        return UnitQuaternion(*vals)
    vals = [float(v) for v in args.su2.split(",")]
    if len(vals) != 8:
        raise FlatGateError("--su2 needs 8 reals: re,im per entry, row-major")
    m = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
    return from_su2(SU2Matrix(m.reshape(2, 2)))


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_schedule(sched: PulseSchedule, path: str) -> Path:
    """Write the schedule CSV and its JSON sidecar; returns the sidecar path."""
    p = Path(path)
    lines = ["t,u1,u2"]
    for t, a, b in zip(sched.t, sched.u1, sched.u2):
        lines.append(f"{_fmt(t)},{_fmt(a)},{_fmt(b)}")
    p.write_text("\n".join(lines) + "\n")
    manifest = {
        "format_version": sched.format_version,
        "target": [sched.target.w, sched.target.x, sched.target.y, sched.target.z],
        "T": sched.duration,
        "N": sched.n_intervals,
        "k": sched.warp_order,
        "eta_bar": sched.eta_bar,
        "min_abs_z": sched.min_abs_z,
        "interpolation": sched.interpolation,
    }
    side = p.with_suffix(".json")
    side.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return side


def read_schedule(path: str) -> PulseSchedule:
    """Read a schedule CSV plus its sidecar manifest."""
    p = Path(path)
    rows = p.read_text().strip().splitlines()
    if not rows or rows[0].strip() != "t,u1,u2":
        raise FlatGateError(f"{path}: expected header t,u1,u2")
    data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    if data.size == 0 or data.shape[0] < 2:
        raise FlatGateError(f"{path}: schedule needs at least two samples")
    man = json.loads(p.with_suffix(".json").read_text())
    if man.get("format_version") != FORMAT_VERSION:
        raise FlatGateError(f"{path}: unsupported format_version")
    return PulseSchedule(
        data[:, 0], data[:, 1], data[:, 2],
        target=UnitQuaternion(*man["target"]),
        interpolation=man["interpolation"],
        warp_order=man["k"], eta_bar=man["eta_bar"],
        min_abs_z=man["min_abs_z"])


def write_trajectory(result: propagator.PropagationResult, path: str) -> None:
    lines = ["t,q0,q1,q2,q3"]
    for t, row in zip(result.t, result.states):
        lines.append(",".join(_fmt(v) for v in (t, *row)))
    Path(path).write_text("\n".join(lines) + "\n")


def cmd_plan(args) -> int:
    target = resolve_gate(args)
    sched = planner.synthesize(target, args.T, args.N, args.k)
    ok_ends = sched.u1[0] == 0.0 and sched.u2[0] == 0.0 \
        and sched.u1[-1] == 0.0 and sched.u2[-1] == 0.0
    _, _, ss = planner.plan_controls(target)
    print(f"min |z| on s grid:   {_fmt(sched.min_abs_z)}")
    print(f"|theta(1)|:          {_fmt(abs(ss.theta_end))}")
    print(f"endpoint controls are exactly zero: {ok_ends}")
    side = write_schedule(sched, args.out)
    print(f"wrote {args.out} and {side}")
    return 0


def cmd_simulate(args) -> int:
    sched = read_schedule(args.schedule)
    result = propagator.propagate(sched, delta_r=args.delta_r, h=args.h)
    fid = propagator.fidelity(result.final, sched.target)
    print(f"terminal state:      {' '.join(_fmt(v) for v in result.final.as_array())}")
    print(f"fidelity vs target:  {_fmt(fid)}")
    print(f"max norm drift:      {_fmt(result.max_norm_drift)}")
    if args.out:
        write_trajectory(result, args.out)
        print(f"wrote {args.out}")
    return 0


def cmd_compare(args) -> int:
    target = resolve_gate(args)
    angles = zyz.euler_decompose(target)
    zsched = zyz.zyz_schedule(angles, args.T)
    zmax1, zmax2 = zsched.max_amplitudes()
    zfid_exact = propagator.fidelity(
        propagator.propagate_piecewise_exact(zsched), target)
    zfid_rk4 = propagator.fidelity(
        propagator.propagate(zsched).final, target)

    try:
        fsched = planner.synthesize(target, args.T)
        fmax1, fmax2 = fsched.max_amplitudes()
        ffid = propagator.fidelity(propagator.propagate(fsched).final, target)
        flat_cols = (_fmt(fmax1), _fmt(fmax2), _fmt(ffid), "yes")
    except FlatGateError as exc:
        flat_cols = ("rejected", "rejected", f"rejected ({exc})", "-")

    print("method  max|u1|  max|u2|  fidelity(rk4)  endpoint-zero")
    print(f"flat    {flat_cols[0]}  {flat_cols[1]}  {flat_cols[2]}  {flat_cols[3]}")
    print(f"zyz     {_fmt(zmax1)}  {_fmt(zmax2)}  {_fmt(zfid_rk4)}  no")
    print(f"zyz exact-propagation fidelity: {_fmt(zfid_exact)}")
    print(f"zyz angles (a, b, c): {_fmt(angles.a)} {_fmt(angles.b)} {_fmt(angles.c)}")
    return 0


def cmd_sweep(args) -> int:
    target = resolve_gate(args)
    if args.steps < 1:
        raise FlatGateError("sweep needs at least one step")
    sched = planner.synthesize(target, args.T, args.N, args.k)
    drs = np.linspace(args.delta_r_min, args.delta_r_max, args.steps)
    sweep = propagator.detuning_sweep(sched, drs, target, h=args.h)
    lines = ["delta_r,fidelity"]
    for dr, fid in sweep.rows():
        lines.append(f"{_fmt(dr)},{_fmt(fid)}")
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"wrote {args.out} ({args.steps} rows)")
    return 0


def cmd_selftest(args) -> int:
    del args
    from . import selftest
    t0 = time.perf_counter()
    results = selftest.run_all()
    width = max(len(name) for name, _, _ in results)
    for name, ok, detail in results:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}")
    n_bad = sum(1 for _, ok, _ in results if not ok)
    print(f"{len(results) - n_bad}/{len(results)} suites passed "
          f"in {time.perf_counter() - t0:.1f} s")
    return 1 if n_bad else 0


def _add_gate_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gate", choices=sorted(NAMED_GATES),
                   help="named gate (SU(2) representative, global phase fixed)")
    p.add_argument("--quat", help="target as w,x,y,z")
    p.add_argument("--su2", help="target as 8 reals: re,im of entries, row-major")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="flatgate",
        description="Smooth single-pulse qubit gate synthesis and verification.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="synthesize a schedule and write it out")
    _add_gate_opts(p)
    p.add_argument("--T", type=float, default=1.0, help="pulse duration")
    p.add_argument("--N", type=int, default=planner.DEFAULT_SAMPLES,
                   help="sample intervals")
    p.add_argument("--k", type=int, default=1, help="clock smoothness order")
    p.add_argument("--out", default="schedule.csv", help="output CSV path")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="propagate a schedule file")
    p.add_argument("schedule", help="schedule CSV (sidecar JSON must exist)")
    p.add_argument("--delta-r", type=float, default=0.0, dest="delta_r",
                   help="detuning offset")
    p.add_argument("--h", type=float, default=None, help="integrator step")
    p.add_argument("--out", default=None, help="trajectory CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="flat pulse vs three-pulse baseline")
    _add_gate_opts(p)
    p.add_argument("--T", type=float, default=1.0, help="pulse duration")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="fidelity across a detuning range")
    _add_gate_opts(p)
    p.add_argument("--T", type=float, default=1.0, help="pulse duration")
    p.add_argument("--N", type=int, default=planner.DEFAULT_SAMPLES)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--delta-r-min", type=float, required=True, dest="delta_r_min")
    p.add_argument("--delta-r-max", type=float, required=True, dest="delta_r_max")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--out", default="sweep.csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run the built-in invariant suites")
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FlatGateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

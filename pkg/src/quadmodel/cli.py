"""Command-line surface: build/serialize models, analyze them, run
simulations to CSV, and convert between rotor forces and generalized
inputs.

Exit codes are fixed for scriptability:
    0  success
    2  input problem (missing/garbled file, bad flag combination, bad spec)
    3  physical parameter validation failure
    4  simulation runtime failure (state left the finite floats)

Error paths print a one-line diagnostic on stderr and nothing on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .analysis import analyze
from .linalg import StateSpaceModel
from .models import DOF6_STATE_LABELS, ROTOR_FORCE_LABELS, build_3dof, build_6dof
from .params import ParameterError, QuadParams, hover_thrust_per_rotor, validate
from .rotor_forces import GeneralizedInput, RotorForces, demix, mix
from .simulate import (
    NonFiniteDerivative,
    NonFiniteState,
    SimConfig,
    Trajectory,
    simulate,
    simulate_nonlinear,
)
from .stabilize import (
    GainMatrix,
    PolePlacementError,
    PoleSpec,
    design_3dof_gains,
    design_6dof_gains,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VALIDATION = 3
EXIT_RUNTIME = 4

PARAM_KEYS = ("m", "d", "c", "Ix", "Iy", "Iz")
OPTIONAL_PARAM_KEYS = ("g",)

DEFAULT_POLE = -2.0


class InputError(Exception):
    """Anything wrong with what the user handed us (exit code 2)."""


def load_params(path: str) -> QuadParams:
    """Read and validate a JSON parameter file.

    Required numeric keys: m, d, c, Ix, Iy, Iz; optional: g (defaults to
    9.81). Unknown keys are rejected so typos cannot silently become
    defaults. Units are SI (kg, m, kg*m^2, m/s^2); see the README.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as e:
        raise InputError(f"cannot read parameter file {path!r}: {e}") from e
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise InputError(f"parameter file {path!r} is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise InputError(f"parameter file {path!r} must hold a JSON object")
    allowed = set(PARAM_KEYS) | set(OPTIONAL_PARAM_KEYS)
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise InputError(f"parameter file {path!r} has unknown keys: {', '.join(unknown)}")
    missing = [k for k in PARAM_KEYS if k not in doc]
    if missing:
        raise InputError(f"parameter file {path!r} is missing keys: {', '.join(missing)}")
    values = {}
    for key, value in doc.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise InputError(f"parameter {key!r} must be a number, got {value!r}")
        values[key] = float(value)
    return validate(QuadParams(**values))


def model_to_dict(m: StateSpaceModel) -> dict:
    return {
        "n": m.n,
        "p": m.p,
        "q": m.q,
        "A": m.A.tolist(),
        "B": m.B.tolist(),
        "C": m.C.tolist(),
        "D": m.D.tolist(),
        "state_labels": list(m.state_labels),
        "input_labels": list(m.input_labels),
        "output_labels": list(m.output_labels),
    }


def _matrix_lines(name, mat, row_labels, col_labels):
    cells = [[f"{v:g}" for v in row] for row in mat]
    widths = [
        max(len(col_labels[j]), max((len(r[j]) for r in cells), default=1))
        for j in range(len(col_labels))
    ]
    label_w = max((len(s) for s in row_labels), default=0)
    lines = [f"{name} ({mat.shape[0]}x{mat.shape[1]}):"]
    lines.append(
        " " * (label_w + 2) + "  ".join(col_labels[j].rjust(widths[j]) for j in range(len(col_labels)))
    )
    for i, row in enumerate(cells):
        lines.append(
            row_labels[i].ljust(label_w + 2) + "  ".join(row[j].rjust(widths[j]) for j in range(len(row)))
        )
    lines.append("")
    return lines


def format_model_pretty(m: StateSpaceModel, title: str) -> str:
    lines = [f"{title} state-space model: n={m.n} states, p={m.p} inputs, q={m.q} outputs", ""]
    lines += _matrix_lines("A", m.A, m.state_labels, m.state_labels)
    lines += _matrix_lines("B", m.B, m.state_labels, m.input_labels)
    lines += _matrix_lines("C", m.C, m.output_labels, m.state_labels)
    lines += _matrix_lines("D", m.D, m.output_labels, m.input_labels)
    return "\n".join(lines).rstrip("\n")


def parse_assignments(specs, labels, what: str, defaults=None) -> np.ndarray:
    """Turn repeated ``label=value`` flags into a vector over ``labels``.

    Unassigned entries keep ``defaults`` (zeros when not given). Values
    must be finite.
    """
    values = np.zeros(len(labels)) if defaults is None else np.array(defaults, dtype=float)
    for spec in specs or []:
        for part in spec.split(","):
            part = part.strip()
            if not part:
                continue
            name, sep, raw = part.partition("=")
            name = name.strip()
            if not sep:
                raise InputError(f"bad {what} assignment {part!r}; expected label=value")
            if name not in labels:
                raise InputError(
                    f"unknown {what} label {name!r}; choose from {', '.join(labels)}"
                )
            try:
                value = float(raw)
            except ValueError:
                raise InputError(f"bad numeric value in {what} assignment {part!r}") from None
            if not np.isfinite(value):
                raise InputError(f"{what} value for {name!r} must be finite")
            values[labels.index(name)] = value
    return values


def parse_pole_spec(pole_args, dof: int) -> PoleSpec:
    """Build a PoleSpec from --poles flags.

    Accepted forms: a bare value (``--poles=-2.5``) placing every chain at
    that repeated pole, or chain assignments (``--poles z=-1,-2``,
    ``--poles roll=-2,-2,-3,-3``), repeatable. Defaults to all poles at -2.
    """
    chain_sizes = {"z": 2, "roll": 4, "pitch": 4, "yaw": 2} if dof == 6 else {
        "roll": 2, "pitch": 2, "yaw": 2
    }
    uniform = PoleSpec.uniform_6dof if dof == 6 else PoleSpec.uniform_3dof
    if not pole_args:
        return uniform(DEFAULT_POLE)
    named: dict[str, tuple] = {}
    bare = None
    for spec in pole_args:
        if "=" in spec:
            name, _, raw = spec.partition("=")
            name = name.strip()
            if name not in chain_sizes:
                raise InputError(
                    f"unknown pole chain {name!r}; choose from {', '.join(chain_sizes)}"
                )
            try:
                named[name] = tuple(float(s) for s in raw.split(","))
            except ValueError:
                raise InputError(f"bad pole list in {spec!r}") from None
        else:
            try:
                bare = float(spec)
            except ValueError:
                raise InputError(f"bad pole value {spec!r}") from None
    if bare is not None and named:
        raise InputError("give either one bare pole value or chain=pole,... specs, not both")
    try:
        if bare is not None:
            return uniform(bare)
        fields = {name: named.get(name, (DEFAULT_POLE,) * size) for name, size in chain_sizes.items()}
        return PoleSpec(**fields)
    except PolePlacementError as e:
        raise InputError(str(e)) from e


def write_trajectory_csv(traj: Trajectory, fh) -> None:
    """Header then one row per sample, full double precision."""
    fh.write("t," + ",".join(traj.state_labels + traj.input_labels) + "\n")
    for i in range(len(traj)):
        row = (traj.times[i], *traj.states[i], *traj.inputs[i])
        fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _fmt12(v: float) -> str:
    return f"{v:.12g}"


def cmd_model(args) -> int:
    p = load_params(args.params)
    model = build_3dof(p) if args.dof == 3 else build_6dof(p)
    if args.format == "json":
        print(json.dumps(model_to_dict(model), indent=2))
    else:
        print(format_model_pretty(model, f"{args.dof}DOF"))
    return EXIT_OK


def cmd_analyze(args) -> int:
    p = load_params(args.params)
    model = build_3dof(p) if args.dof == 3 else build_6dof(p)
    report = analyze(model)
    doc = {
        "controllability_rank": report.controllability_rank,
        "observability_rank": report.observability_rank,
        "is_controllable": report.is_controllable,
        "is_observable": report.is_observable,
        "open_loop_char_poly": list(report.open_loop_char_poly),
        "stability_class": report.stability_class,
        "nilpotency_index": report.nilpotency_index,
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def _write_gains(gains: GainMatrix, path: str) -> None:
    doc = {
        "input_labels": list(gains.input_labels),
        "state_labels": list(gains.state_labels),
        "K": gains.K.tolist(),
    }
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(doc, indent=2) + "\n")
    except OSError as e:
        raise InputError(f"cannot write gains file {path!r}: {e}") from e


def cmd_sim(args) -> int:
    p = load_params(args.params)
    nonlinear = args.plant == "nonlinear"
    if nonlinear and args.dof != 6:
        raise InputError("the nonlinear plant is only available with --dof 6")
    if args.mode == "open" and args.poles:
        raise InputError("--poles only applies to --mode closed")
    if args.mode == "open" and args.gains_out:
        raise InputError("--gains-out only applies to --mode closed")
    if args.mode == "closed" and args.input:
        raise InputError("--input only applies to --mode open (closed mode drives u = r - K x)")

    model = build_3dof(p) if args.dof == 3 else build_6dof(p)
    state_labels = DOF6_STATE_LABELS if nonlinear else model.state_labels
    input_labels = ROTOR_FORCE_LABELS if nonlinear else model.input_labels
    x0 = parse_assignments(args.x0, state_labels, "state")

    plant_name = "nonlinear_6dof" if nonlinear else f"linear_{args.dof}dof"
    try:
        cfg = SimConfig(
            t_final=args.t_final,
            dt=args.dt,
            integrator="rk4" if nonlinear else "exact_zoh",
            plant=plant_name,
        )
    except ValueError as e:
        raise InputError(str(e)) from e

    hover = hover_thrust_per_rotor(p)
    gains = None
    if args.mode == "closed":
        try:
            spec = parse_pole_spec(args.poles, args.dof)
            gains = design_6dof_gains(p, spec) if args.dof == 6 else design_3dof_gains(p, spec)
        except PolePlacementError as e:
            raise InputError(str(e)) from e
        if args.gains_out:
            _write_gains(gains, args.gains_out)

    if nonlinear:
        if args.mode == "open":
            base = parse_assignments(args.input, input_labels, "input", defaults=[hover] * 4)

            def forces_fn(t, x):
                return RotorForces(*base)

        else:
            k_matrix = gains.K

            def forces_fn(t, x):
                u = -k_matrix @ x
                if not np.all(np.isfinite(u)):
                    raise NonFiniteState("feedback input became non-finite")
                return demix(GeneralizedInput(*u), p)

        traj = simulate_nonlinear(p, x0, forces_fn, cfg)
    else:
        if args.mode == "open":
            u0 = parse_assignments(args.input, input_labels, "input")
            input_fn = lambda t, x: u0
        else:
            # r = hover equilibrium input: zero in the 6DOF deviation
            # coordinates, equal per-rotor hover thrust for the 3DOF model
            # (which adds no torque, so regulation is unaffected).
            r = np.zeros(4) if args.dof == 6 else np.full(4, hover)
            k_matrix = gains.K
            input_fn = lambda t, x: r - k_matrix @ x
        traj = simulate(model, x0, input_fn, cfg)

    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_trajectory_csv(traj, fh)
    except OSError as e:
        raise InputError(f"cannot write output file {args.out!r}: {e}") from e
    return EXIT_OK


def cmd_mix(args) -> int:
    p = load_params(args.params)
    try:
        forces = RotorForces(*args.forces)
    except ValueError as e:
        raise InputError(str(e)) from e
    u = mix(forces, p)
    print(" ".join(_fmt12(v) for v in u.as_tuple()))
    return EXIT_OK


def cmd_demix(args) -> int:
    p = load_params(args.params)
    try:
        u = GeneralizedInput(*args.inputs)
    except ValueError as e:
        raise InputError(str(e)) from e
    forces = demix(u, p)
    print(" ".join(_fmt12(v) for v in forces.as_tuple()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadmodel",
        description="Quadcopter state-space models: build, analyze, simulate, stabilize.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--dof", type=int, choices=(3, 6), required=True,
                        help="which model: 3 (attitude) or 6 (full)")
        sp.add_argument("--params", required=True, metavar="FILE",
                        help="JSON parameter file (see params.example.json)")

    sp = sub.add_parser("model", help="build a model and print it")
    add_common(sp)
    sp.add_argument("--format", choices=("json", "pretty"), default="json")
    sp.set_defaults(func=cmd_model)

    sp = sub.add_parser("analyze", help="controllability/observability/stability report")
    add_common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("sim", help="simulate a trajectory and write CSV")
    add_common(sp)
    sp.add_argument("--mode", choices=("open", "closed"), default="open")
    sp.add_argument("--plant", choices=("linear", "nonlinear"), default="linear")
    sp.add_argument("--x0", action="append", metavar="LABEL=VALUE",
                    help="initial state entries (repeatable; unset entries are 0)")
    sp.add_argument("--input", action="append", metavar="LABEL=VALUE",
                    help="held input entries for open loop (default 0 for the "
                         "linear models, hover thrust for the nonlinear plant)")
    sp.add_argument("--poles", action="append", metavar="SPEC",
                    help="closed-loop poles: a bare value (--poles=-2.5) or "
                         "chain=p1,p2,... specs (z/roll/pitch/yaw); default all -2")
    sp.add_argument("--t-final", type=float, required=True, dest="t_final",
                    help="simulation horizon, seconds")
    sp.add_argument("--dt", type=float, default=0.001, help="step size, seconds")
    sp.add_argument("--out", required=True, metavar="FILE", help="CSV output path")
    sp.add_argument("--gains-out", metavar="FILE", dest="gains_out",
                    help="also write the feedback gain matrix as JSON (closed mode)")
    sp.set_defaults(func=cmd_sim)

    sp = sub.add_parser("mix", help="rotor forces -> generalized input (U1..U4)")
    sp.add_argument("--params", required=True, metavar="FILE")
    sp.add_argument("forces", type=float, nargs=4, metavar="F")
    sp.set_defaults(func=cmd_mix)

    sp = sub.add_parser("demix", help="generalized input -> rotor forces (F1..F4)")
    sp.add_argument("--params", required=True, metavar="FILE")
    sp.add_argument("inputs", type=float, nargs=4, metavar="U")
    sp.set_defaults(func=cmd_demix)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except InputError as e:
        print(f"quadmodel: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ParameterError as e:
        print(f"quadmodel: invalid parameters: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NonFiniteState, NonFiniteDerivative) as e:
        print(f"quadmodel: simulation failed: {e}", file=sys.stderr)
        return EXIT_RUNTIME


def entry() -> None:
    sys.exit(main())

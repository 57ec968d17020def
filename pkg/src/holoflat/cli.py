"""Command-line interface.

Subcommands cover the library surface: Gram matrices, orthonormalization,
kernel grids, the heat-kernel formula, ladder operators, Green functions,
time evolution, and the acceptance suite.  Output is deterministic CSV or
JSON, written atomically when a path is given.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .cylinder import (
    DEFAULT_N,
    HeatKernelParams,
    calibrate_heat_kernel,
    cylinder_basis,
    cylinder_chart,
    heat_kernel_formula,
)
from .errors import FactorizationError, QuadratureError, ValidationError
from .hilbert import (
    HoloState,
    gram_matrix,
    orthonormalize,
    reproducing_kernel,
    state_norm,
)
from .io import complex_matrix_to_lists, matrix_csv, rows_csv, write_output
from .operators import adjointness_residual, hamiltonian_free, ladder_lower, ladder_raise
from .propagator import (
    DEFAULT_EPSILON,
    PropagatorConfig,
    evolve,
    greens_spectral,
    greens_winding,
)
from .quadrature import DEFAULT_ORDER, gaussian_rule
from .validation import run_criteria

# Defaults shared by every subcommand (also documented in the README):
#   truncation N = 8, quadrature order 64, heat-kernel modes M = 12,
#   256 periodic x-nodes, regularization epsilon = 0.05.
DEFAULT_MODES = 12
DEFAULT_X_QUAD = 256


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", help="output file path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    p.add_argument("--config", help="JSON file whose keys override flag defaults")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holoflat",
        description="Holomorphic quantization on flat manifolds: "
        "kernels, ladder operators, and path-integral evolution.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gram", help="Gram matrix of the periodic basis")
    p.add_argument("--truncation", type=int, default=DEFAULT_N)
    group = p.add_mutually_exclusive_group()
    group.add_argument(
        "--normalized", action="store_true", default=True,
        help="normalized e^{ikz - k^2/2} basis (the default)",
    )
    group.add_argument("--raw", action="store_true", help="raw e^{ikz} basis instead")
    p.add_argument("--quadrature", action="store_true", help="integrate instead of closed form")
    p.add_argument("--quad-order", type=int, default=DEFAULT_ORDER)
    _add_common(p)

    p = sub.add_parser("orthonormalize", help="Gram-Schmidt coefficient matrix")
    p.add_argument("--truncation", type=int, default=DEFAULT_N)
    _add_common(p)

    p = sub.add_parser("kernel", help="reproducing-kernel values on a real grid")
    p.add_argument("--truncation", type=int, default=DEFAULT_N)
    p.add_argument("--grid-points", type=int, default=5)
    _add_common(p)

    p = sub.add_parser("heatkernel", help="calibrated heat-kernel formula on a real grid")
    p.add_argument("--truncation", type=int, default=DEFAULT_N)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--modes", type=int, default=DEFAULT_MODES)
    p.add_argument("--x-nodes", type=int, default=DEFAULT_X_QUAD)
    p.add_argument("--grid-points", type=int, default=5)
    _add_common(p)

    p = sub.add_parser("ladder", help="ladder operator matrices and adjointness residual")
    p.add_argument("--truncation", type=int, default=DEFAULT_N)
    _add_common(p)

    p = sub.add_parser("greens", help="circle Green function, both sum forms")
    p.add_argument("--theta0", type=float, default=0.0)
    p.add_argument("--T-real", type=float, default=1.0)
    p.add_argument("--T-imag", type=float, default=0.0)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--modes", type=int, default=40)
    p.add_argument("--windings", type=int, default=40)
    p.add_argument("--points", type=int, default=32, help="theta grid size on [-pi, pi)")
    _add_common(p)

    p = sub.add_parser("evolve", help="path-integral time evolution of a state")
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--truncation", type=int, default=DEFAULT_N)
    p.add_argument("--quad-order", type=int, default=DEFAULT_ORDER)
    p.add_argument("--initial", help="JSON state file {N, coeffs: [[re, im], ...]}")
    _add_common(p)

    p = sub.add_parser("validate", help="run the acceptance suite")
    p.add_argument("--only", nargs="*", help="run only criteria whose name contains a token")
    _add_common(p)

    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    # --config supplies defaults; explicit flags still win.
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                overrides = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(overrides, dict):
            raise ValidationError("config file must hold a JSON object")
        for key, value in overrides.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                raise ValidationError(f"config key {key!r} unknown for this subcommand")
            flag = "--" + key.replace("_", "-")
            explicit = any(tok == flag or tok.startswith(flag + "=") for tok in argv)
            if not explicit:
                setattr(args, attr, value)
    return args


def _cmd_gram(args) -> int:
    basis = cylinder_basis(args.truncation, normalized=not args.raw)
    if args.quadrature:
        g = gram_matrix(
            basis, cylinder_chart(), gaussian_rule(2, args.quad_order), force_quadrature=True
        )
    else:
        g = gram_matrix(basis)
    labels = list(basis.labels)
    if args.format == "json":
        payload = {"labels": labels, "matrix": complex_matrix_to_lists(g.matrix)}
        write_output(payload, args.output, "json")
    else:
        write_output(matrix_csv(g.matrix, labels, labels), args.output, "csv")
    return 0


def _cmd_orthonormalize(args) -> int:
    basis = cylinder_basis(args.truncation)
    gram = gram_matrix(basis)
    C = orthonormalize(gram)
    residual = float(np.abs(np.conj(C).T @ gram.matrix @ C - np.eye(basis.size)).max())
    labels = list(basis.labels)
    if args.format == "json":
        payload = {
            "labels": labels,
            "coefficients": complex_matrix_to_lists(C),
            "orthonormality_residual": residual,
        }
        write_output(payload, args.output, "json")
    else:
        text = matrix_csv(C, labels, [f"beta_{j}" for j in range(basis.size)])
        text += f"orthonormality_residual,{residual!r}\n"
        write_output(text, args.output, "csv")
    return 0


def _kernel_grid(args):
    basis = cylinder_basis(args.truncation)
    gram = gram_matrix(basis)
    kernel = reproducing_kernel(gram, basis)
    grid = np.linspace(-math.pi, math.pi, args.grid_points, endpoint=False)
    return kernel, grid


def _emit_grid(values: np.ndarray, grid: np.ndarray, args) -> None:
    labels = [f"{v:.12g}" for v in grid]
    if args.format == "json":
        payload = {"grid": [float(v) for v in grid], "values": complex_matrix_to_lists(values)}
        write_output(payload, args.output, "json")
    else:
        write_output(matrix_csv(values, labels, labels), args.output, "csv")


def _cmd_kernel(args) -> int:
    kernel, grid = _kernel_grid(args)
    values = kernel.eval_grid(grid, grid)
    _emit_grid(values, grid, args)
    return 0


def _cmd_heatkernel(args) -> int:
    kernel, grid = _kernel_grid(args)
    params = HeatKernelParams(t=args.t, M=args.modes, x0=0.0, x_quad=args.x_nodes)
    c = calibrate_heat_kernel(params, kernel)
    values = np.array(
        [[c * heat_kernel_formula(params, zv, wv) for wv in grid] for zv in grid]
    )
    _emit_grid(values, grid, args)
    return 0


def _cmd_ladder(args) -> int:
    N = args.truncation
    basis = cylinder_basis(N)
    gram = gram_matrix(basis)
    lower = ladder_lower(N)
    raised = ladder_raise(gram, N)
    residual = adjointness_residual(gram, N)
    labels = list(basis.labels)
    if args.format == "json":
        payload = {
            "labels": labels,
            "lower": complex_matrix_to_lists(lower.entries),
            "raise": complex_matrix_to_lists(raised.entries),
            "adjointness_residual": residual,
        }
        write_output(payload, args.output, "json")
    else:
        text = "lower\n" + matrix_csv(lower.entries, labels, labels)
        text += "raise\n" + matrix_csv(raised.entries, labels, labels)
        text += f"adjointness_residual,{residual!r}\n"
        write_output(text, args.output, "csv")
    return 0


def _cmd_greens(args) -> int:
    T = complex(args.T_real, args.T_imag) * (1 - 1j * args.epsilon)
    thetas = np.linspace(-math.pi, math.pi, args.points, endpoint=False)
    rows = []
    for th in thetas:
        gw = greens_winding(float(th), args.theta0, T, args.windings)
        gs = greens_spectral(float(th), args.theta0, T, args.modes)
        rows.append(
            [
                f"{th:.12g}",
                repr(gw.real),
                repr(gw.imag),
                repr(gs.real),
                repr(gs.imag),
                repr(abs(gw - gs)),
            ]
        )
    header = ["theta", "winding_re", "winding_im", "spectral_re", "spectral_im", "difference"]
    if args.format == "json":
        payload = {
            "T": [T.real, T.imag],
            "theta0": args.theta0,
            "rows": [
                {
                    "theta": float(r[0]),
                    "winding": [float(r[1]), float(r[2])],
                    "spectral": [float(r[3]), float(r[4])],
                    "difference": float(r[5]),
                }
                for r in rows
            ],
        }
        write_output(payload, args.output, "json")
    else:
        write_output(rows_csv(header, rows), args.output, "csv")
    return 0


def _cmd_evolve(args) -> int:
    N = args.truncation
    if args.initial:
        try:
            with open(args.initial) as fh:
                state = HoloState.from_dict(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read initial state {args.initial}: {exc}") from exc
        if state.N != N:
            raise ValidationError(
                f"initial state truncation {state.N} does not match --truncation {N}"
            )
    else:
        coeffs = np.zeros(2 * N + 1, dtype=complex)
        coeffs[N] = 1.0
        coeffs[N + 1] = 1.0
        state = HoloState(N=N, coeffs=coeffs)
    basis = cylinder_basis(N)
    gram = gram_matrix(basis)
    state = HoloState(N=N, coeffs=state.coeffs / state_norm(state, gram))
    kernel = reproducing_kernel(gram, basis)
    chart = cylinder_chart()
    rule = gaussian_rule(2, args.quad_order)
    config = PropagatorConfig(H=hamiltonian_free(N), t=args.t, n_steps=args.steps)
    _, history = evolve(state, config, kernel, chart, rule, return_history=True)
    delta = args.t / args.steps
    if args.format == "json":
        payload = {
            "t": args.t,
            "steps": args.steps,
            "history": [
                {"step": i, "time": i * delta, "norm": state_norm(s, gram), **s.to_dict()}
                for i, s in enumerate(history)
            ],
        }
        write_output(payload, args.output, "json")
    else:
        header = ["step", "time", "norm"] + [f"c_{k}" for k in range(-N, N + 1)]
        rows = []
        for i, s in enumerate(history):
            rows.append(
                [str(i), f"{i * delta:.12g}", repr(state_norm(s, gram))]
                + [complex(c) for c in s.coeffs]
            )
        write_output(rows_csv(header, rows), args.output, "csv")
    return 0


def _cmd_validate(args) -> int:
    results = run_criteria(args.only)
    if not results:
        raise ValidationError("no acceptance criteria match the requested names")
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.name}: {r.detail}")
    text = "\n".join(lines) + "\n"
    if args.format == "json":
        payload = [
            {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results
        ]
        write_output(payload, args.output, "json")
        if args.output is not None:
            sys.stdout.write(text)
    else:
        write_output(text, args.output, "csv")
        if args.output is not None:
            sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 1


_COMMANDS = {
    "gram": _cmd_gram,
    "orthonormalize": _cmd_orthonormalize,
    "kernel": _cmd_kernel,
    "heatkernel": _cmd_heatkernel,
    "ladder": _cmd_ladder,
    "greens": _cmd_greens,
    "evolve": _cmd_evolve,
    "validate": _cmd_validate,
}


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = _apply_config(parser, list(sys.argv[1:] if argv is None else argv))
        return _COMMANDS[args.command](args)
    except (ValidationError, QuadratureError, FactorizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())

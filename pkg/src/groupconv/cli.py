"""Command line interface for group operations and solvers."""

from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from .block_encoding import (
    apply_block_encoding,
    fourier_block_encoding,
    lcu_block_encoding,
)
from .convolution import (
    OperationVariant,
    condition_data,
    convolve_direct,
    convolve_fourier,
    operation_matrix,
)
from .deconvolution import deconvolve_exact, deconvolve_svt
from .errors import GroupConvError, IrrepsUnavailableError, NormalizationError
from .groups import parse_group_spec
from .integral import (
    convergence_slope,
    convergence_study,
    exp_manhattan_kernel,
)
from .representations import fourier_matrix, irrep_dims
from .serialization import read_signal, write_fourier, write_matrix, write_signal


def _variant(value: str) -> OperationVariant:
    return OperationVariant(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupconv",
        description="finite group convolutions, block encodings, and solvers")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output file format when not implied by the extension")
    parser.add_argument("--tolerance", type=float, default=1e-10,
                        help="numerical tolerance for verification commands")
    sub = parser.add_subparsers(dest="command", required=True)

    p_group = sub.add_parser("group", help="validate a group and describe it")
    p_group.add_argument("spec", help="cyclic:N, dihedral:N, product:..., or cayley:PATH")

    p_fourier = sub.add_parser("fourier", help="export the group Fourier matrix")
    p_fourier.add_argument("--group", required=True, dest="spec")
    p_fourier.add_argument("--out", required=True, help="destination file")

    p_conv = sub.add_parser("convolve", help="apply a group operation to a signal")
    p_conv.add_argument("--group", required=True, dest="spec")
    p_conv.add_argument("--filter", required=True, dest="filter_path")
    p_conv.add_argument("--input", required=True, dest="input_path")
    p_conv.add_argument("--variant", type=_variant,
                        default=OperationVariant.CONVOLUTION,
                        choices=list(OperationVariant),
                        help="one of: " + ", ".join(v.value for v in OperationVariant))
    p_conv.add_argument("--method", choices=("direct", "matrix", "fourier"),
                        default="direct")
    p_conv.add_argument("--out", required=True)

    p_enc = sub.add_parser("encode", help="build a block encoding of an operation")
    p_enc.add_argument("--group", required=True, dest="spec")
    p_enc.add_argument("--filter", required=True, dest="filter_path")
    p_enc.add_argument("--variant", type=_variant,
                       default=OperationVariant.CONVOLUTION,
                       choices=list(OperationVariant))
    p_enc.add_argument("--method", choices=("lcu", "fourier"), default="lcu")
    p_enc.add_argument("--quantize-bits", type=int, default=None)
    p_enc.add_argument("--out", default=None,
                       help="write the block-encoding unitary here")
    p_enc.add_argument("--apply", dest="apply_path", default=None,
                       help="also apply the encoding to this signal")
    p_enc.add_argument("--apply-out", dest="apply_out", default=None,
                       help="write the applied output signal here")

    p_dec = sub.add_parser("deconvolve", help="solve (filter op x) = input for x")
    p_dec.add_argument("--group", required=True, dest="spec")
    p_dec.add_argument("--filter", required=True, dest="filter_path")
    p_dec.add_argument("--input", required=True, dest="input_path")
    p_dec.add_argument("--variant", type=_variant,
                       default=OperationVariant.CONVOLUTION,
                       choices=list(OperationVariant))
    p_dec.add_argument("--method", choices=("exact", "svt"), default="exact")
    p_dec.add_argument("--epsilon", type=float, default=1e-6,
                       help="output state accuracy for the svt method")
    p_dec.add_argument("--output", default=None,
                       help="write the recovered signal here")

    p_int = sub.add_parser("integral", help="benchmark the periodic integral solver")
    p_int.add_argument("--n-list", default="8,16,32",
                       help="comma separated grid sizes")
    p_int.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p_int.add_argument("--kernel", choices=("exp-manhattan",), default="exp-manhattan")
    p_int.add_argument("--dimension", type=int, default=2)
    p_int.add_argument("--out", default=None,
                       help="write the study records as CSV")
    p_int.add_argument("--plot-data", dest="plot_data", default=None,
                       help="write log n, log error pairs for plotting")
    return parser


def _cmd_group(args) -> int:
    group = parse_group_spec(args.spec)
    print(f"order: {group.order}")
    print(f"family: {group.family_tag}")
    abelian = group.family_tag.cyclic_orders() is not None
    print(f"abelian: {'yes' if abelian else 'no'}")
    print("cayley table:")
    width = len(str(group.order - 1))
    for row in np.asarray(group.compose_table):
        print("  " + " ".join(f"{v:>{width}d}" for v in row))
    try:
        dims = irrep_dims(group)
        print(f"irrep dims: {list(dims)}")
    except IrrepsUnavailableError:
        print("irrep dims: unavailable for a generic table")
    print("axioms: ok")
    return 0


def _cmd_fourier(args) -> int:
    group = parse_group_spec(args.spec)
    fm = fourier_matrix(group)
    write_fourier(args.out, fm, args.format)
    print(f"wrote {fm.matrix.shape[0]} rows to {args.out}")
    return 0


def _cmd_convolve(args) -> int:
    group = parse_group_spec(args.spec)
    m = read_signal(args.filter_path, args.format)
    x = read_signal(args.input_path, args.format)
    if args.method == "matrix":
        values = operation_matrix(group, m, args.variant).apply(x)
    else:
        run = convolve_direct if args.method == "direct" else convolve_fourier
        values = run(group, m, x, args.variant).values
    write_signal(args.out, values, args.format)
    print(f"wrote {group.order} values to {args.out}")
    return 0


def _cmd_encode(args) -> int:
    group = parse_group_spec(args.spec)
    m = read_signal(args.filter_path, args.format)
    if args.method == "lcu":
        encoding = lcu_block_encoding(group, m, args.variant)
    else:
        encoding = fourier_block_encoding(group, m, args.variant,
                                          quantize_bits=args.quantize_bits)
    n = encoding.source_dim
    target = operation_matrix(group, m, args.variant).matrix
    block = encoding.unitary[:n, :n]
    residual = np.linalg.norm(block - target / encoding.normalization, 2)
    print(f"construction: {encoding.construction_tag}")
    print(f"normalization: {encoding.normalization:.12g}")
    print(f"data qubits: {encoding.data_qubits}")
    print(f"ancilla qubits: {encoding.ancilla_qubits}")
    print(f"block residual: {residual:.12g}")
    kappa, _, sigma_min = condition_data(group, m, args.variant)
    print(f"kappa: {kappa:.12g}")
    print(f"worst-case success probability: "
          f"{(sigma_min / encoding.normalization) ** 2:.12g}")
    if residual > args.tolerance:
        raise NormalizationError(
            f"block residual {residual:.3e} exceeds tolerance {args.tolerance:.3e}")
    if args.out is not None:
        write_matrix(args.out, encoding.unitary, args.format)
        print(f"wrote the {encoding.unitary.shape[0]}-dim unitary to {args.out}")
    if args.apply_path is not None:
        x = read_signal(args.apply_path, args.format)
        result = apply_block_encoding(encoding, x)
        print(f"success probability: {result.success_probability:.12g}")
        print(f"expected repetitions: {result.expected_repetitions:.12g}")
        print(f"amplified repetitions: {result.amplified_repetitions}")
        if args.apply_out is not None:
            write_signal(args.apply_out, result.signal, args.format)
            print(f"wrote {result.signal.size} values to {args.apply_out}")
    return 0


def _cmd_deconvolve(args) -> int:
    group = parse_group_spec(args.spec)
    m = read_signal(args.filter_path, args.format)
    y = read_signal(args.input_path, args.format)
    if args.method == "exact":
        result = deconvolve_exact(group, m, y, args.variant)
        kappa, _, _ = condition_data(group, m, args.variant)
        print("method: exact")
        print(f"kappa: {kappa:.12g}")
        print(f"scale: {result.scale:.12g}")
        print(f"sigma_min: {result.sigma_min:.12g}")
        solution = result.signal.values * result.scale
    else:
        result = deconvolve_svt(group, m, y, args.variant, epsilon=args.epsilon)
        print("method: svt")
        print(f"scale: {result.scale:.12g}")
        print(f"kappa: {result.kappa:.12g}")
        print(f"delta: {result.delta:.12g}")
        print(f"alpha: {result.alpha:.12g}")
        print(f"polynomial degree: {result.polynomial_degree}")
        print(f"success probability: {result.success_probability:.12g}")
        print(f"success probability (analytic): "
              f"{result.success_probability_analytic:.12g}")
        print(f"expected repetitions: {result.expected_repetitions_plain:.12g}")
        print(f"amplified repetitions: {result.expected_repetitions_amplified}")
        print(f"rescaled: {'yes' if result.rescaled else 'no'}")
        solution = result.signal.values * result.scale
    if args.output is not None:
        write_signal(args.output, solution, args.format)
        print(f"wrote {solution.size} values to {args.output}")
    return 0


def _cmd_integral(args) -> int:
    try:
        n_list = [int(part) for part in args.n_list.split(",") if part]
    except ValueError as exc:
        raise ValueError(f"bad --n-list: {args.n_list}") from exc
    if not n_list:
        raise ValueError("--n-list must name at least one grid size")
    kernel = exp_manhattan_kernel()
    records = convergence_study(n_list, lam=args.lam, kernel=kernel,
                                dimension=args.dimension)
    print(f"{'n':>6} {'error':>14} {'kappa':>10} {'bound':>10} "
          f"{'column_sum':>12} {'runtime_ms':>11}")
    for r in records:
        print(f"{r.n:>6d} {r.error:>14.6e} {r.kappa:>10.4f} "
              f"{r.kappa_bound:>10.4f} {r.column_sum:>12.6f} {r.runtime_ms:>11.2f}")
    if len(records) >= 2:
        print(f"slope: {convergence_slope(records):.4f}")
    if args.out is not None:
        import csv as _csv
        with open(args.out, "w", newline="") as handle:
            writer = _csv.writer(handle, lineterminator="\n")
            writer.writerow(["n", "error", "kappa_measured", "kappa_bound",
                             "runtime_ms"])
            for r in records:
                writer.writerow([r.n, "%.17g" % r.error, "%.17g" % r.kappa,
                                 "%.17g" % r.kappa_bound, "%.3f" % r.runtime_ms])
        print(f"wrote {len(records)} records to {args.out}")
    if args.plot_data is not None:
        with open(args.plot_data, "w", newline="") as handle:
            handle.write("log_n,log_error\n")
            for r in records:
                handle.write(f"{'%.17g' % math.log(r.n)},"
                             f"{'%.17g' % math.log(r.error)}\n")
        print(f"wrote plot data to {args.plot_data}")
    return 0


_COMMANDS = {
    "group": _cmd_group,
    "fourier": _cmd_fourier,
    "convolve": _cmd_convolve,
    "encode": _cmd_encode,
    "deconvolve": _cmd_deconvolve,
    "integral": _cmd_integral,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (GroupConvError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

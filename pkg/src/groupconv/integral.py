"""Periodic second-kind integral equations discretized as group operations."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .convolution import GroupSignal, OperationVariant, condition_data, convolve_fourier
from .deconvolution import deconvolve_exact
from .errors import IllConditionedProblemError
from .groups import FiniteGroup, make_cyclic, make_product

_SQRT_E = math.sqrt(math.e)


@dataclass(frozen=True)
class PeriodicKernel:
    """A kernel k(d) evaluated on periodic Manhattan distances."""

    name: str
    function: Callable[[np.ndarray], np.ndarray]

    def __call__(self, distance):
        return self.function(np.asarray(distance, dtype=float))


def exp_manhattan_kernel() -> PeriodicKernel:
    """k(d) = exp(-d) on the periodic Manhattan distance."""
    return PeriodicKernel("exp-manhattan", lambda d: np.exp(-d))


def manhattan_periodic(a, b, period: float = 1.0) -> np.ndarray:
    """Coordinate-wise wrapped distance sum_k min(|d_k|, period - |d_k|)."""
    diff = np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))
    wrapped = np.minimum(diff, period - diff)
    return wrapped.sum(axis=-1)


def grid_group(n: int, dimension: int) -> FiniteGroup:
    """The translation group of the n^d periodic grid."""
    return make_product([make_cyclic(n) for _ in range(dimension)])


def grid_points(n: int, dimension: int) -> np.ndarray:
    """Grid coordinates i/n ordered to match the group element indexing."""
    axes = np.indices((n,) * dimension).reshape(dimension, -1).T
    return axes / n


def column_sum(kernel: PeriodicKernel, n: int, dimension: int) -> float:
    """Quadrature mass s = (1/n^d) sum_i k(D(t_i, 0)) of one kernel column."""
    pts = grid_points(n, dimension)
    dist = manhattan_periodic(pts, np.zeros(dimension))
    return float(np.sum(kernel(dist))) / n ** dimension


def build_filter(kernel: PeriodicKernel, lam: float, n: int,
                 dimension: int, group: FiniteGroup | None = None) -> GroupSignal:
    """Filter of the discretized operator I + lam * quadrature(kernel).

    The discrete operator acts by cross-correlation with this filter, whose
    value at group element i is delta_{i0} + lam * k(D(t_i, 0)) / n^d.
    """
    if group is None:
        group = grid_group(n, dimension)
    pts = grid_points(n, dimension)
    dist = manhattan_periodic(pts, np.zeros(dimension))
    values = lam * kernel(dist) / n ** dimension
    values = values.astype(complex)
    values[0] += 1.0
    return GroupSignal(group, values)


def stability_margin(kernel: PeriodicKernel, lam: float, n: int, dimension: int) -> float:
    """1 - |lam| * s, positive when the Neumann-series bound applies."""
    return 1.0 - abs(lam) * column_sum(kernel, n, dimension)


def condition_bound(kernel: PeriodicKernel, lam: float, n: int, dimension: int) -> float:
    """A priori bound (1 + |lam| s) / (1 - |lam| s) on the condition number."""
    s = column_sum(kernel, n, dimension)
    margin = 1.0 - abs(lam) * s
    if margin <= 0.0:
        raise IllConditionedProblemError(
            f"|lam| * column sum = {abs(lam) * s:.6g} >= 1, the bound degenerates")
    return (1.0 + abs(lam) * s) / margin


@dataclass(frozen=True)
class IntegralSolution:
    """Grid solution of (I + lam K) x = g with conditioning report."""

    values: np.ndarray
    n: int
    dimension: int
    kappa: float
    kappa_bound: float
    column_sum: float


def _rhs_values(rhs, n: int, dimension: int) -> np.ndarray:
    if callable(rhs):
        return np.asarray(rhs(grid_points(n, dimension)), dtype=complex)
    arr = np.asarray(rhs, dtype=complex).ravel()
    if arr.size != n ** dimension:
        raise ValueError(f"right-hand side has {arr.size} values, expected {n ** dimension}")
    return arr


def apply_forward(kernel: PeriodicKernel, lam: float, n: int, dimension: int,
                  x) -> np.ndarray:
    """Evaluate (I + lam K) x on the grid through the Fourier fast path."""
    group = grid_group(n, dimension)
    m = build_filter(kernel, lam, n, dimension, group)
    x_vals = _rhs_values(x, n, dimension)
    return convolve_fourier(group, m, x_vals,
                            OperationVariant.CROSS_CORRELATION).values


def solve_integral_equation(kernel: PeriodicKernel, lam: float, rhs,
                            n: int, dimension: int) -> IntegralSolution:
    """Solve (I + lam K) x = g on the n^d periodic grid.

    The discretized operator is a group cross-correlation on (Z_n)^d, so the
    solve reduces to elementwise spectral division.  Refuses lam outside the
    stability region |lam| * s < 1.

    Returns
    -------
    IntegralSolution
        Solution values in grid order plus measured and bounded condition
        numbers and the kernel column sum.
    """
    s = column_sum(kernel, n, dimension)
    if abs(lam) * s >= 1.0:
        raise IllConditionedProblemError(
            f"|lam| * column sum = {abs(lam) * s:.6g} lies outside the "
            f"stability region; the operator may lose invertibility")
    group = grid_group(n, dimension)
    m = build_filter(kernel, lam, n, dimension, group)
    g_vals = _rhs_values(rhs, n, dimension)
    kappa = condition_data(group, m, OperationVariant.CROSS_CORRELATION).kappa
    result = deconvolve_exact(group, m, g_vals, OperationVariant.CROSS_CORRELATION)
    return IntegralSolution(
        values=result.signal.values * result.scale,
        n=n, dimension=dimension, kappa=kappa,
        kappa_bound=(1.0 + abs(lam) * s) / (1.0 - abs(lam) * s),
        column_sum=s)


def benchmark_h(u) -> np.ndarray:
    """One-axis factor of the benchmark kernel integral, in closed form.

    h(u) = integral over [0, 1) of exp(-min(|u - s|, 1 - |u - s|)) (s - s^3) ds,
    evaluated piecewise; continuous and periodic on [0, 1).
    """
    u = np.asarray(u, dtype=float)
    frac = np.mod(u, 1.0)
    lower = (-3.0 * np.exp(-frac)
             - 2.0 * frac * (5.0 + frac ** 2)
             + (1.0 + 2.0 * frac) * (21.0 + 4.0 * frac * (1.0 + frac)) / (4.0 * _SQRT_E))
    upper = (9.0 * np.exp(frac - 1.0)
             - 2.0 * frac * (5.0 + frac ** 2)
             + (2.0 * frac - 1.0) * (21.0 + 4.0 * frac * (frac - 1.0)) / (4.0 * _SQRT_E))
    return np.where(frac < 0.5, lower, upper)


def benchmark_rhs(points: np.ndarray) -> np.ndarray:
    """Closed-form g = f + (K f) for the two-dimensional benchmark problem."""
    points = np.asarray(points, dtype=float)
    return benchmark_exact(points) + benchmark_h(points[..., 0]) * benchmark_h(points[..., 1])


def benchmark_exact(points: np.ndarray) -> np.ndarray:
    """Exact solution f(t) = (t1 - t1^3)(t2 - t2^3) of the benchmark problem."""
    points = np.asarray(points, dtype=float)
    t1, t2 = points[..., 0], points[..., 1]
    return (t1 - t1 ** 3) * (t2 - t2 ** 3)


def error_metric(numeric: np.ndarray, exact: np.ndarray) -> float:
    """Normalized l1 discrepancy ||a - b||_1 / N between grid functions."""
    numeric = np.asarray(numeric).ravel()
    exact = np.asarray(exact).ravel()
    return float(np.sum(np.abs(numeric - exact))) / numeric.size


@dataclass(frozen=True)
class ConvergenceRecord:
    n: int
    error: float
    kappa: float
    kappa_bound: float
    column_sum: float
    runtime_ms: float


def convergence_study(n_list: Sequence[int], lam: float = 1.0,
                      kernel: PeriodicKernel | None = None,
                      dimension: int = 2) -> list[ConvergenceRecord]:
    """Solve the benchmark problem on a list of grids and record the errors.

    The right-hand side is the closed-form benchmark g and errors are taken
    against the known exact solution, so the records expose the quadrature
    convergence rate of the discretization.
    """
    if kernel is None:
        kernel = exp_manhattan_kernel()
    records = []
    for n in n_list:
        started = time.perf_counter()
        sol = solve_integral_equation(
            kernel, lam, benchmark_rhs, n, dimension)
        elapsed_ms = (time.perf_counter() - started) * 1e3
        exact = benchmark_exact(grid_points(n, dimension))
        records.append(ConvergenceRecord(
            n=n, error=error_metric(sol.values.real, exact),
            kappa=sol.kappa, kappa_bound=sol.kappa_bound,
            column_sum=sol.column_sum, runtime_ms=elapsed_ms))
    return records


def convergence_slope(records: Sequence[ConvergenceRecord]) -> float:
    """Log-log slope of error versus n from a least-squares fit."""
    if len(records) < 2:
        raise ValueError("need at least two grid sizes to fit a slope")
    logs_n = np.log([r.n for r in records])
    logs_e = np.log([r.error for r in records])
    return float(np.polyfit(logs_n, logs_e, 1)[0])

"""The four group operations: direct, matrix, and Fourier-domain forms."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import IncompatibleSignalError
from .groups import FiniteGroup, GroupElement, element_index
from .representations import (
    FourierCoefficients,
    abelian_fourier_flat,
    abelian_labels,
    classical_fourier_inverse,
    irreps,
    signal_values,
)

# relative threshold below which an operation matrix counts as singular
SINGULARITY_RTOL = 1e-14
_ROW_CHUNK_ENTRIES = 1 << 22


class OperationVariant(enum.Enum):
    """The four group operations expressible as regular-representation sums."""

    CONVOLUTION = "convolution"
    RIGHT_CONVOLUTION = "right-convolution"
    CROSS_CORRELATION = "cross-correlation"
    RIGHT_CROSS_CORRELATION = "right-cross-correlation"

    @property
    def is_right(self) -> bool:
        return self in (OperationVariant.RIGHT_CONVOLUTION,
                        OperationVariant.RIGHT_CROSS_CORRELATION)

    @property
    def is_correlation(self) -> bool:
        return self in (OperationVariant.CROSS_CORRELATION,
                        OperationVariant.RIGHT_CROSS_CORRELATION)


@dataclass(frozen=True, eq=False)
class GroupSignal:
    """A complex vector indexed by the elements of a group."""

    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.values, dtype=complex))
        if arr.shape != (self.group.order,):
            raise IncompatibleSignalError(
                f"signal has shape {arr.shape}, expected ({self.group.order},)")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @classmethod
    def delta(cls, group: FiniteGroup, index: int = 0) -> "GroupSignal":
        vals = np.zeros(group.order, dtype=complex)
        vals[element_index(index)] = 1
        return cls(group, vals)

    def norm(self, ord: int = 2) -> float:
        return float(np.linalg.norm(self.values, ord))


def as_signal(group: FiniteGroup, f) -> GroupSignal:
    if isinstance(f, GroupSignal):
        if f.group is not group and f.group.order != group.order:
            raise IncompatibleSignalError(
                f"signal lives on a group of order {f.group.order}, expected {group.order}")
        return f
    return GroupSignal(group, signal_values(f, group))


def _filter_index_block(group: FiniteGroup, variant: OperationVariant,
                        rows: np.ndarray) -> np.ndarray:
    """Index table I with M[u, v] = m[I[u, v]] for the rows ``rows``."""
    table, inv = group.compose_table, group.inverse_table
    if variant is OperationVariant.CONVOLUTION:          # m(u v^-1)
        return table[rows[:, None], inv[None, :]]
    if variant is OperationVariant.RIGHT_CONVOLUTION:    # m(v^-1 u)
        return table[inv[None, :], rows[:, None]]
    if variant is OperationVariant.CROSS_CORRELATION:    # m(v u^-1)
        return table[np.arange(group.order)[None, :], inv[rows][:, None]]
    # right cross-correlation: m(u^-1 v)
    return table[inv[rows][:, None], np.arange(group.order)[None, :]]


def convolve_direct(group: FiniteGroup, m, x, variant: OperationVariant) -> GroupSignal:
    """Evaluate a group operation by its defining double sum.

    Parameters
    ----------
    group : FiniteGroup
    m, x : GroupSignal or array-like
        Filter and input, both of length |G|.
    variant : OperationVariant
        Which of the four operations to apply; Convolution is
        out(u) = sum_v m(u v^-1) x(v).

    Returns
    -------
    GroupSignal
    """
    m_vals = signal_values(m, group)
    x_vals = signal_values(x, group)
    n = group.order
    out = np.empty(n, dtype=complex)
    chunk = max(1, _ROW_CHUNK_ENTRIES // n)
    for start in range(0, n, chunk):
        rows = np.arange(start, min(start + chunk, n))
        idx = _filter_index_block(group, variant, rows)
        out[rows] = m_vals[idx] @ x_vals
    return GroupSignal(group, out)


@dataclass(frozen=True, eq=False)
class OperationMatrix:
    """Dense matrix form of a group operation, with cached spectral data."""

    matrix: np.ndarray
    variant: OperationVariant
    filter_signal: GroupSignal

    @cached_property
    def _singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.matrix, compute_uv=False)

    @property
    def sigma_max(self) -> float:
        return float(self._singular_values[0])

    @property
    def sigma_min(self) -> float:
        return float(self._singular_values[-1])

    @property
    def norm(self) -> float:
        return self.sigma_max

    @property
    def kappa(self) -> float:
        if self.sigma_min < SINGULARITY_RTOL * self.sigma_max:
            return math.inf
        return self.sigma_max / self.sigma_min

    def apply(self, x) -> np.ndarray:
        return self.matrix @ signal_values(x, self.filter_signal.group)


def operation_matrix(group: FiniteGroup, m, variant: OperationVariant) -> OperationMatrix:
    """The |G| x |G| matrix of the operation, sum_i m_i U_i.

    U_i is L_i, R_i, L_i^-1, or R_i^-1 according to the variant.  Materializes
    a dense matrix, so this is meant for desk-scale groups.
    """
    m_sig = as_signal(group, m)
    idx = _filter_index_block(group, variant, np.arange(group.order))
    return OperationMatrix(m_sig.values[idx], variant, m_sig)


def variant_coefficients(group: FiniteGroup, m, variant: OperationVariant) -> FourierCoefficients:
    """Fourier coefficients that multiply the input spectrum for a variant.

    Convolution variants use m_hat(rho) = sum_i m_i rho(i); cross-correlation
    variants use the inverse-argument transform sum_i m_i rho(i^-1), which
    block-diagonalizes sum_i m_i U_i^-1.  (For real filters the latter equals
    m_hat(rho)^dagger.)
    """
    m_vals = signal_values(m, group)
    inv = group.inverse_table
    orders = group.family_tag.cyclic_orders()
    if orders is not None:
        flat = abelian_fourier_flat(orders, m_vals, conjugate=variant.is_correlation)
        labels = abelian_labels(group.family_tag)
        return FourierCoefficients({lab: np.array([[v]]) for lab, v in zip(labels, flat)})
    coeffs = {}
    for rho in irreps(group):
        mats = rho.matrices[inv] if variant.is_correlation else rho.matrices
        coeffs[rho.label] = np.tensordot(m_vals, mats, axes=(0, 0))
    return FourierCoefficients(coeffs)


def convolve_fourier(group: FiniteGroup, m, x, variant: OperationVariant) -> GroupSignal:
    """Evaluate a group operation through the Fourier domain.

    Computes the per-irrep coefficients of filter and input, multiplies them
    (filter on the left for left variants, on the right for right variants),
    and inverts the transform.
    """
    x_vals = signal_values(x, group)
    orders = group.family_tag.cyclic_orders()
    if orders is not None:
        m_vals = signal_values(m, group)
        c = abelian_fourier_flat(orders, m_vals, conjugate=variant.is_correlation)
        x_hat = abelian_fourier_flat(orders, x_vals)
        out = abelian_fourier_flat(orders, c * x_hat, conjugate=True) / group.order
        return GroupSignal(group, out)
    c = variant_coefficients(group, m, variant)
    x_hat = {rho.label: np.tensordot(x_vals, rho.matrices, axes=(0, 0))
             for rho in irreps(group)}
    combined = {}
    for label, c_mat in c.items():
        combined[label] = (x_hat[label] @ c_mat) if variant.is_right else (c_mat @ x_hat[label])
    return GroupSignal(group, classical_fourier_inverse(group, FourierCoefficients(combined)))


class ConditionData(NamedTuple):
    kappa: float
    norm: float
    sigma_min: float


def condition_data(group: FiniteGroup, m, variant: OperationVariant) -> ConditionData:
    """Condition number, operator norm, and sigma_min of the operation matrix.

    For groups with irreducible representations the singular values are read
    off the per-irrep Fourier coefficients; for generic groups a dense SVD of
    the operation matrix is used.  A singular filter yields kappa = inf rather
    than an exception.
    """
    orders = group.family_tag.cyclic_orders()
    if orders is not None:
        m_vals = signal_values(m, group)
        flat = abelian_fourier_flat(orders, m_vals, conjugate=variant.is_correlation)
        svals = np.abs(flat)
    elif group.family_tag.kind != "generic":
        coeffs = variant_coefficients(group, m, variant)
        svals = np.concatenate([
            np.linalg.svd(mat, compute_uv=False) for mat in coeffs.coefficients.values()])
    else:
        svals = np.linalg.svd(operation_matrix(group, m, variant).matrix, compute_uv=False)
    sigma_max = float(np.max(svals))
    sigma_min = float(np.min(svals))
    if sigma_min < SINGULARITY_RTOL * sigma_max or sigma_max == 0.0:
        return ConditionData(math.inf, sigma_max, sigma_min)
    return ConditionData(sigma_max / sigma_min, sigma_max, sigma_min)


class EquivarianceResult(NamedTuple):
    ok: bool
    max_deviation: float


def translate_right(group: FiniteGroup, x, g: GroupElement | int) -> np.ndarray:
    """The right-action coordinate permutation (T_g x)(u) = x(u g)."""
    x_vals = signal_values(x, group)
    return x_vals[group.compose_table[:, element_index(g)]]


def check_equivariance(group: FiniteGroup, m, variant: OperationVariant,
                       g: GroupElement | int, x,
                       tolerance: float = 1e-10) -> EquivarianceResult:
    """Verify that the operation commutes with the right action u -> u g.

    Only Convolution and CrossCorrelation commute with right translations
    (the right variants commute with left translations instead), so the
    other variants are rejected.
    """
    if variant.is_right:
        raise ValueError(
            f"equivariance to right actions is defined for convolution and "
            f"cross-correlation, not {variant.value}")
    shifted = convolve_direct(group, m, translate_right(group, x, g), variant)
    reference = translate_right(group, convolve_direct(group, m, x, variant), g)
    dev = float(np.max(np.abs(shifted.values - reference)))
    return EquivarianceResult(dev <= tolerance, dev)

"""Unitary block encodings of group operation matrices."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .convolution import OperationVariant, variant_coefficients
from .errors import (
    DegenerateFilterError,
    NormalizationError,
    ZeroOutputError,
)
from .groups import FiniteGroup, left_regular, right_regular
from .representations import fourier_matrix, irreps, signal_values

UNITARITY_TOLERANCE = 1e-9


def _qubits_for(dim: int) -> int:
    return (dim - 1).bit_length()


@dataclass(frozen=True, eq=False)
class BlockEncoding:
    """A unitary whose top-left block is a rescaled target matrix.

    The ancilla register is the most significant one, so rows and columns
    0 .. 2**data_qubits - 1 of ``unitary`` form the encoded block and the
    encoded operator satisfies M = normalization * unitary[:n, :n] for an
    n x n target.

    Parameters
    ----------
    unitary : ndarray
        Square unitary of dimension 2**(ancilla_qubits + data_qubits).
    source_dim : int
        Dimension n of the target matrix; at most 2**data_qubits.
    normalization : float
        The subnormalization factor alpha with ||M|| <= alpha.
    construction_tag : str
        One of "lcu", "fourier_abelian", "fourier_nonabelian", "dilation".
    """

    unitary: np.ndarray
    data_qubits: int
    ancilla_qubits: int
    normalization: float
    construction_tag: str
    source_dim: int
    group: FiniteGroup | None = None
    variant: OperationVariant | None = None

    def __post_init__(self):
        u = np.ascontiguousarray(np.asarray(self.unitary, dtype=complex))
        dim = 1 << (self.ancilla_qubits + self.data_qubits)
        if u.shape != (dim, dim):
            raise ValueError(f"unitary has shape {u.shape}, expected {(dim, dim)}")
        if self.source_dim > (1 << self.data_qubits):
            raise ValueError("source_dim does not fit the data register")
        defect = np.max(np.abs(u.conj().T @ u - np.eye(dim)))
        if defect > UNITARITY_TOLERANCE:
            raise NormalizationError(f"matrix is not unitary (defect {defect:.3e})")
        u.setflags(write=False)
        object.__setattr__(self, "unitary", u)

    @cached_property
    def encoded_operator(self) -> np.ndarray:
        """normalization * top-left source_dim x source_dim block."""
        n = self.source_dim
        return self.normalization * self.unitary[:n, :n]


class ApplicationResult(NamedTuple):
    signal: np.ndarray
    success_probability: float
    expected_repetitions: float
    amplified_repetitions: int
    output_norm: float


class DigitalToAnalogPlan(NamedTuple):
    amplitudes: np.ndarray
    success_probability: float
    rescaled: bool
    scale: float


def prep_unitary(m) -> np.ndarray:
    """Real orthogonal matrix sending e_0 to sqrt(|m_i| / ||m||_1).

    The target amplitudes are zero-padded to the next power of two, and the
    map is the Householder reflection through e_0 - t (the identity when the
    filter is already a scaled delta at index 0).
    """
    m_vals = np.asarray(m, dtype=complex).ravel()
    l1 = float(np.sum(np.abs(m_vals)))
    if l1 == 0.0:
        raise DegenerateFilterError("cannot build a state preparation for the zero filter")
    dim = 1 << _qubits_for(m_vals.size)
    t = np.zeros(dim)
    t[:m_vals.size] = np.sqrt(np.abs(m_vals) / l1)
    v = -t
    v[0] += 1.0
    vnorm2 = float(v @ v)
    if vnorm2 < 1e-30:
        return np.eye(dim)
    return np.eye(dim) - (2.0 / vnorm2) * np.outer(v, v)


def _variant_unitaries(group: FiniteGroup, variant: OperationVariant, i: int) -> np.ndarray:
    if variant is OperationVariant.CROSS_CORRELATION:
        i = group.inverse_table[i]
        variant = OperationVariant.CONVOLUTION
    elif variant is OperationVariant.RIGHT_CROSS_CORRELATION:
        i = group.inverse_table[i]
        variant = OperationVariant.RIGHT_CONVOLUTION
    if variant is OperationVariant.CONVOLUTION:
        return left_regular(group, i).dense()
    return right_regular(group, i).dense()


def lcu_block_encoding(group: FiniteGroup, m,
                       variant: OperationVariant = OperationVariant.CONVOLUTION
                       ) -> BlockEncoding:
    """Block-encode an operation matrix as a linear combination of unitaries.

    The operation matrix is sum_i m_i U_i with U_i a regular-representation
    permutation.  PREP loads sqrt(|m_i| / ||m||_1) on the ancilla register,
    SELECT applies exp(i arg m_i) U_i controlled on ancilla value i (identity
    on padded values), and the encoding is PREP^dagger SELECT PREP with
    normalization ||m||_1.  Works for any valid Cayley table; no irreducible
    representations are needed.

    Returns
    -------
    BlockEncoding
    """
    m_vals = signal_values(m, group)
    n = group.order
    l1 = float(np.sum(np.abs(m_vals)))
    if l1 == 0.0:
        raise DegenerateFilterError("cannot block-encode the zero filter")
    w = _qubits_for(n)
    dim = 1 << w
    pad = dim - n

    prep = prep_unitary(m_vals)
    select = np.zeros((dim * dim, dim * dim), dtype=complex)
    eye = np.eye(dim, dtype=complex)
    for i in range(dim):
        if i < n and m_vals[i] != 0:
            block = np.eye(dim, dtype=complex)
            block[:n, :n] = _variant_unitaries(group, variant, i)
            block *= np.exp(1j * np.angle(m_vals[i]))
            # keep the padded corner an exact identity
            if pad:
                block[n:, n:] = np.eye(pad)
        else:
            block = eye
        s = i * dim
        select[s:s + dim, s:s + dim] = block

    prep_full = np.kron(prep, eye)
    unitary = prep_full.T.conj() @ select @ prep_full
    return BlockEncoding(
        unitary=unitary, data_qubits=w, ancilla_qubits=w,
        normalization=l1, construction_tag="lcu", source_dim=n,
        group=group, variant=variant)


def unitary_dilation(block: np.ndarray) -> np.ndarray:
    """Two-block unitary dilation [[B, sqrt(I-BB+)], [sqrt(I-B+B), -B+]].

    Requires ||B|| <= 1; the defect square roots are built from one SVD of B.
    """
    b = np.asarray(block, dtype=complex)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("dilation expects a square matrix")
    w, s, vh = np.linalg.svd(b)
    if s.size and s[0] > 1.0 + 1e-9:
        raise NormalizationError(
            f"cannot dilate a matrix with operator norm {s[0]:.6g} > 1")
    root = np.sqrt(np.clip(1.0 - s ** 2, 0.0, None))
    upper_right = (w * root) @ w.conj().T
    lower_left = (vh.conj().T * root) @ vh
    top = np.hstack([b, upper_right])
    bottom = np.hstack([lower_left, -b.conj().T])
    return np.vstack([top, bottom])


def _quantize(values: np.ndarray, bits: int) -> np.ndarray:
    scale = float(1 << bits)
    return (np.round(values.real * scale) + 1j * np.round(values.imag * scale)) / scale


def fourier_block_encoding(group: FiniteGroup, m,
                           variant: OperationVariant = OperationVariant.CONVOLUTION,
                           quantize_bits: int | None = None) -> BlockEncoding:
    """Block-encode an operation matrix through its Fourier diagonalization.

    The operation matrix is conjugated to block-diagonal form by the group
    Fourier matrix, the block-diagonal core is dilated to a unitary with a
    single ancilla qubit, and the Fourier rotations are folded back in.  The
    normalization is the largest irrep dimension, and every entry of every
    Fourier coefficient matrix of the filter must have modulus at most one.

    Parameters
    ----------
    quantize_bits : int, optional
        If given, round real and imaginary parts of the coefficient entries
        to this many fractional bits before dilating.

    Returns
    -------
    BlockEncoding
    """
    coeffs = variant_coefficients(group, m, variant)
    n = group.order
    w = _qubits_for(n)
    dim = 1 << w
    pad = dim - n

    reps = irreps(group)
    d_max = max(rho.dim for rho in reps)
    abelian = d_max == 1

    blocks = []
    for rho in reps:
        mat = np.asarray(coeffs[rho.label], dtype=complex)
        worst = np.unravel_index(np.argmax(np.abs(mat)), mat.shape)
        if np.abs(mat[worst]) > 1.0 + 1e-12:
            raise NormalizationError(
                f"coefficient entry {rho.label}[{worst[0]},{worst[1]}] has modulus "
                f"{np.abs(mat[worst]):.6g} > 1; rescale the filter first")
        if quantize_bits is not None:
            mat = _quantize(mat, quantize_bits)
        if variant.is_right:
            blocks.append(np.kron(np.eye(rho.dim), mat.T))
        else:
            blocks.append(np.kron(mat, np.eye(rho.dim)))

    core = np.zeros((dim, dim), dtype=complex)
    pos = 0
    for blk in blocks:
        k = blk.shape[0]
        core[pos:pos + k, pos:pos + k] = blk
        pos += k
    if pad:
        core[n:, n:] = np.eye(pad)
    core /= d_max

    alpha = float(d_max)
    if quantize_bits is not None:
        # rounding can nudge a coefficient modulus past 1; absorb the excess
        # into the normalization so the dilation stays contractive
        top = float(np.linalg.norm(core, 2))
        if top > 1.0 + 1e-12:
            core /= top
            alpha *= top

    dil = unitary_dilation(core)

    f_small = fourier_matrix(group).matrix
    f_tilde = np.eye(dim, dtype=complex)
    f_tilde[:n, :n] = f_small
    rot = np.kron(np.eye(2), f_tilde)
    unitary = rot.conj().T @ dil @ rot
    return BlockEncoding(
        unitary=unitary, data_qubits=w, ancilla_qubits=1,
        normalization=alpha,
        construction_tag="fourier_abelian" if abelian else "fourier_nonabelian",
        source_dim=n, group=group, variant=variant)


def apply_block_encoding(encoding: BlockEncoding, x) -> ApplicationResult:
    """Simulate one application of a block-encoded operator.

    The input is normalized, loaded on the data register with the ancilla in
    state zero, pushed through the unitary, and post-selected on ancilla
    zero.  The reported success probability is exact, not sampled.

    Returns
    -------
    ApplicationResult
        The normalized output vector, the post-selection probability, the
        expected repetition counts without and with amplitude amplification,
        and ||M x / ||x|| || for the encoded M.
    """
    x_vals = np.asarray(getattr(x, "values", x), dtype=complex).ravel()
    if x_vals.size != encoding.source_dim:
        raise ValueError(
            f"input has length {x_vals.size}, encoding expects {encoding.source_dim}")
    xnorm = float(np.linalg.norm(x_vals))
    if xnorm == 0.0:
        raise ZeroOutputError("cannot apply a block encoding to the zero vector")

    dim_data = 1 << encoding.data_qubits
    full = np.zeros(1 << (encoding.ancilla_qubits + encoding.data_qubits), dtype=complex)
    full[:x_vals.size] = x_vals / xnorm
    out = encoding.unitary @ full
    branch = out[:dim_data]
    p = float(np.real(branch.conj() @ branch))
    if p < 1e-28:
        raise ZeroOutputError("the encoded operator annihilates this input")
    signal = branch[:encoding.source_dim] / math.sqrt(p)
    return ApplicationResult(
        signal=signal,
        success_probability=p,
        expected_repetitions=1.0 / p,
        amplified_repetitions=int(math.ceil(math.pi / (4.0 * math.sqrt(p)))),
        output_norm=encoding.normalization * math.sqrt(p))


def worst_case_success_probability(sigma_min: float, normalization: float) -> float:
    """Lower bound (sigma_min / alpha)**2 on the post-selection probability."""
    if normalization <= 0:
        raise ValueError("normalization must be positive")
    return (sigma_min / normalization) ** 2


def digital_to_analog(m) -> DigitalToAnalogPlan:
    """Plan an amplitude encoding of stored filter values.

    Entries must satisfy max |m_i| = 1; otherwise the filter is rescaled to
    that convention with a warning.  The prepared amplitudes are proportional
    to sqrt(|m_i|), and the success probability of the comparison-based
    loading step is the mean of |m_i| over the nonzero entries.
    """
    m_vals = np.asarray(m, dtype=complex).ravel()
    mags = np.abs(m_vals)
    peak = float(mags.max(initial=0.0))
    if peak == 0.0:
        raise DegenerateFilterError("cannot amplitude-encode the zero filter")
    rescaled = abs(peak - 1.0) > 1e-12
    if rescaled:
        warnings.warn(
            f"filter peak magnitude is {peak:.6g}, rescaling so max |m_i| = 1",
            stacklevel=2)
        mags = mags / peak
    support = mags > 0
    p = float(np.mean(mags[support]))
    amps = np.sqrt(mags)
    amps /= np.linalg.norm(amps)
    return DigitalToAnalogPlan(
        amplitudes=amps, success_probability=p, rescaled=rescaled, scale=peak)

"""Irreducible representations and the unitary group Fourier transform."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import IncompatibleSignalError, IrrepsUnavailableError
from .groups import FamilyTag, FiniteGroup

IDENTITY_TOLERANCE = 1e-10
_CHECK_LIMIT = 64  # exhaustive homomorphism checking up to this order


@dataclass(frozen=True, eq=False)
class Irrep:
    """One irreducible representation as a matrix-valued function on elements.

    ``matrices[u]`` is the d x d unitary representing element u.
    """

    label: str
    dim: int
    matrices: np.ndarray

    def __post_init__(self):
        mats = np.ascontiguousarray(np.asarray(self.matrices, dtype=complex))
        if mats.ndim != 3 or mats.shape[1:] != (self.dim, self.dim):
            raise ValueError(
                f"irrep {self.label!r}: matrices have shape {mats.shape}, "
                f"expected (|G|, {self.dim}, {self.dim})")
        mats.setflags(write=False)
        object.__setattr__(self, "matrices", mats)

    def __repr__(self) -> str:
        return f"Irrep(label={self.label!r}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class FourierMatrix:
    """The unitary Fourier transform matrix of a group.

    Row (rho, j, k) and column x hold sqrt(d_rho / |G|) * rho(x)_{j,k}; the
    row order is recorded in ``row_index`` as 1-based (label, j, k) triples.
    """

    group: FiniteGroup
    matrix: np.ndarray
    row_index: tuple[tuple[str, int, int], ...]


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    """Per-irrep Fourier coefficient matrices, keyed by irrep label."""

    coefficients: dict[str, np.ndarray]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.coefficients)

    def __getitem__(self, label: str) -> np.ndarray:
        return self.coefficients[label]

    def items(self):
        return self.coefficients.items()


def signal_values(f, group: FiniteGroup) -> np.ndarray:
    """Coerce a GroupSignal or array-like to a complex vector of length |G|."""
    values = getattr(f, "values", f)
    owner = getattr(f, "group", None)
    if owner is not None and owner is not group and owner.order != group.order:
        raise IncompatibleSignalError(
            f"signal lives on a group of order {owner.order}, expected {group.order}")
    arr = np.asarray(values, dtype=complex)
    if arr.shape != (group.order,):
        raise IncompatibleSignalError(
            f"signal has shape {arr.shape}, expected ({group.order},)")
    return arr


def _check_homomorphism(group: FiniteGroup, irreps_list: list[Irrep]) -> None:
    n = group.order
    table = group.compose_table
    if n <= _CHECK_LIMIT:
        pairs = np.indices((n, n)).reshape(2, -1)
    else:
        rng = np.random.default_rng(1)
        pairs = rng.integers(0, n, size=(2, 10 * n))
    i, j = pairs
    for rho in irreps_list:
        mats = rho.matrices
        prod = np.einsum("pab,pbc->pac", mats[i], mats[j])
        expect = mats[table[i, j]]
        err = np.max(np.abs(prod - expect))
        if err > IDENTITY_TOLERANCE:
            raise AssertionError(
                f"irrep {rho.label!r} fails the homomorphism law (max error {err:.2e})")
        unit = np.einsum("pab,pcb->pac", mats, mats.conj())
        err = np.max(np.abs(unit - np.eye(rho.dim)))
        if err > IDENTITY_TOLERANCE:
            raise AssertionError(
                f"irrep {rho.label!r} is not unitary (max error {err:.2e})")


def _cyclic_irreps(n: int) -> list[Irrep]:
    omega = np.exp(2j * np.pi / n)
    k = np.arange(n)
    out = []
    for kk in range(n):
        vals = omega ** (kk * k)
        out.append(Irrep(f"chi_{kk}", 1, vals.reshape(n, 1, 1)))
    return out


def _dihedral_irreps(n: int) -> list[Irrep]:
    order = 2 * n
    idx = np.arange(order)
    x, a = idx % n, idx // n
    out = [Irrep("sigma_tt", 1, np.ones(order, dtype=complex).reshape(-1, 1, 1)),
           Irrep("sigma_ts", 1, ((-1.0) ** a).astype(complex).reshape(-1, 1, 1))]
    if n % 2 == 0:
        out.append(Irrep("sigma_st", 1, ((-1.0) ** x).astype(complex).reshape(-1, 1, 1)))
        out.append(Irrep("sigma_ss", 1, ((-1.0) ** (x + a)).astype(complex).reshape(-1, 1, 1)))
    omega = np.exp(2j * np.pi / n)
    for h in range(1, (n + 1) // 2 if n % 2 else n // 2):
        up, down = omega ** (h * x), omega ** (-h * x)
        mats = np.zeros((order, 2, 2), dtype=complex)
        rot = a == 0
        mats[rot, 0, 0] = up[rot]
        mats[rot, 1, 1] = down[rot]
        mats[~rot, 0, 1] = up[~rot]
        mats[~rot, 1, 0] = down[~rot]
        out.append(Irrep(f"sigma_h{h}", 2, mats))
    return out


def _family_irreps(tag: FamilyTag) -> list[Irrep] | None:
    if tag.kind == "cyclic":
        return _cyclic_irreps(tag.order_parameter)
    if tag.kind == "dihedral":
        return _dihedral_irreps(tag.order_parameter)
    if tag.kind == "product":
        subs = []
        for f in tag.factors:
            s = _family_irreps(f)
            if s is None:
                return None
            subs.append(s)
        out = subs[0]
        for s in subs[1:]:
            merged = []
            for r1 in out:
                for r2 in s:
                    # element index is mixed-radix, so kron over the element
                    # axis and the matrix axes together lines the blocks up
                    # with the enumeration
                    mats = np.einsum("iab,jcd->ijacbd", r1.matrices, r2.matrices).reshape(
                        r1.matrices.shape[0] * r2.matrices.shape[0],
                        r1.dim * r2.dim, r1.dim * r2.dim)
                    merged.append(Irrep(f"{r1.label}*{r2.label}", r1.dim * r2.dim, mats))
            out = merged
        return out
    return None


@functools.lru_cache(maxsize=32)
def _irreps_cached(group: FiniteGroup) -> tuple[Irrep, ...]:
    out = _family_irreps(group.family_tag)
    if out is None:
        raise IrrepsUnavailableError(
            f"no irreducible representations available for family {group.family_tag}; "
            "the dense matrix and LCU paths still work")
    dims_sq = sum(r.dim ** 2 for r in out)
    if dims_sq != group.order:
        raise AssertionError(
            f"irrep dimensions inconsistent: sum d^2 = {dims_sq} != {group.order}")
    _check_homomorphism(group, out)
    return tuple(out)


def irreps(group: FiniteGroup) -> list[Irrep]:
    """All irreducible representations of a cyclic, dihedral, or product group.

    Parameters
    ----------
    group : FiniteGroup
        Group built by one of the canonical constructors.  Groups loaded from
        raw composition tables (family ``generic``) are rejected.

    Returns
    -------
    list of Irrep
        Cyclic: the n characters chi_k(x) = omega**(k*x).  Dihedral: the
        one-dimensional sign representations followed by the two-dimensional
        ones.  Products: tensor products of factor irreps in mixed-radix
        label order.
    """
    return list(_irreps_cached(group))


def irrep_dims(group: FiniteGroup) -> list[int]:
    return [r.dim for r in irreps(group)]


def max_irrep_dim(group: FiniteGroup) -> int:
    return max(r.dim for r in irreps(group))


def build_row_index(irreps_list: Iterable[Irrep]) -> tuple[tuple[str, int, int], ...]:
    """Row labels (label, j, k), 1-based, (j, k) in row-major order per irrep."""
    rows = []
    for rho in irreps_list:
        for j in range(1, rho.dim + 1):
            for k in range(1, rho.dim + 1):
                rows.append((rho.label, j, k))
    return tuple(rows)


@functools.lru_cache(maxsize=32)
def _fourier_matrix_cached(group: FiniteGroup) -> FourierMatrix:
    reps = _irreps_cached(group)
    n = group.order
    rows = np.empty((n, n), dtype=complex)
    r = 0
    for rho in reps:
        scale = np.sqrt(rho.dim / n)
        for j in range(rho.dim):
            for k in range(rho.dim):
                rows[r] = scale * rho.matrices[:, j, k]
                r += 1
    matrix = rows
    matrix.setflags(write=False)
    return FourierMatrix(group, matrix, build_row_index(reps))


def fourier_matrix(group: FiniteGroup) -> FourierMatrix:
    """The unitary group Fourier transform matrix F_G.

    For abelian families this coincides with the tensor product of the
    per-factor unitary DFT matrices in factor order; for dihedral groups the
    rows follow the irrep order of :func:`irreps` with (j, k) row-major.
    """
    return _fourier_matrix_cached(group)


def classical_fourier(group: FiniteGroup, f) -> FourierCoefficients:
    """Unnormalized Fourier coefficients f_hat(rho) = sum_u f(u) rho(u)."""
    values = signal_values(f, group)
    orders = group.family_tag.cyclic_orders()
    if orders is not None:
        flat = abelian_fourier_flat(orders, values)
        labels = abelian_labels(group.family_tag)
        coeffs = {lab: np.array([[v]]) for lab, v in zip(labels, flat)}
        return FourierCoefficients(coeffs)
    coeffs = {}
    for rho in irreps(group):
        coeffs[rho.label] = np.tensordot(values, rho.matrices, axes=(0, 0))
    return FourierCoefficients(coeffs)


def classical_fourier_inverse(group: FiniteGroup, coeffs: FourierCoefficients) -> np.ndarray:
    """Invert classical_fourier: f(u) = (1/|G|) sum_rho d_rho tr(rho(u^-1) f_hat(rho))."""
    orders = group.family_tag.cyclic_orders()
    if orders is not None:
        labels = abelian_labels(group.family_tag)
        flat = np.array([complex(coeffs[lab][0, 0]) for lab in labels])
        return abelian_fourier_flat(orders, flat, conjugate=True) / group.order
    out = np.zeros(group.order, dtype=complex)
    inv = group.inverse_table
    for rho in irreps(group):
        c = np.asarray(coeffs[rho.label], dtype=complex)
        if c.shape != (rho.dim, rho.dim):
            raise IncompatibleSignalError(
                f"coefficient for {rho.label!r} has shape {c.shape}, "
                f"expected {(rho.dim, rho.dim)}")
        out += rho.dim * np.einsum("ujk,kj->u", rho.matrices[inv], c)
    return out / group.order


def fourier_apply(fourier: FourierMatrix, f, inverse: bool = False) -> np.ndarray:
    """Apply F_G (or its inverse, the conjugate transpose) to a signal."""
    values = signal_values(f, fourier.group)
    if inverse:
        return fourier.matrix.conj().T @ values
    return fourier.matrix @ values


def abelian_labels(tag: FamilyTag) -> list[str]:
    """Character labels of a cyclic/product-of-cyclic family in flat order."""
    if tag.kind == "cyclic":
        return [f"chi_{k}" for k in range(tag.order_parameter)]
    if tag.kind == "product":
        parts = [abelian_labels(f) for f in tag.factors]
        out = parts[0]
        for p in parts[1:]:
            out = [f"{a}*{b}" for a in out for b in p]
        return out
    raise IrrepsUnavailableError(f"family {tag} is not a cyclic product")


def abelian_fourier_flat(orders: tuple[int, ...], values: np.ndarray,
                         conjugate: bool = False) -> np.ndarray:
    """Character-by-character transform sum_x chi_k(x) f(x) on a cyclic product.

    ``orders`` are the cyclic factor sizes; characters and elements share the
    same mixed-radix flat enumeration.  With ``conjugate=True`` the conjugate
    characters are used (this is the unnormalized inverse up to 1/|G|).
    Runs as one small dense DFT matrix per axis, so large products never
    require the full |G| x |G| transform matrix.
    """
    values = np.asarray(values, dtype=complex)
    tensor = values.reshape(orders)
    for axis, n in enumerate(orders):
        k = np.arange(n)
        omega = np.exp((-2j if conjugate else 2j) * np.pi / n)
        dft = omega ** np.outer(k, k)
        tensor = np.moveaxis(np.tensordot(dft, tensor, axes=(1, axis)), 0, axis)
    return tensor.reshape(-1)

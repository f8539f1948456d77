"""Finite groups as explicit composition tables with canonical enumeration."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import GroupAxiomError

# Full O(N^3) associativity checking is affordable up to this order; above it
# we fall back to random sampling.
EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 256
_ASSOCIATIVITY_SAMPLES_PER_ELEMENT = 10


@dataclass(frozen=True)
class GroupElement:
    """A group element identified by its canonical index in [0, |G|)."""

    index: int


def element_index(u: GroupElement | int) -> int:
    """Accept either a ``GroupElement`` or a plain index."""
    return u.index if isinstance(u, GroupElement) else int(u)


@dataclass(frozen=True)
class FamilyTag:
    """Records which canonical construction produced a group.

    ``kind`` is one of ``cyclic``, ``dihedral``, ``product``, ``generic``.
    ``order_parameter`` holds n for cyclic(n)/dihedral(n); ``factors`` holds
    the factor tags of a product.
    """

    kind: str
    order_parameter: int | None = None
    factors: tuple["FamilyTag", ...] = ()

    def __str__(self) -> str:
        if self.kind in ("cyclic", "dihedral"):
            return f"{self.kind}({self.order_parameter})"
        if self.kind == "product":
            return "product(" + ",".join(str(f) for f in self.factors) + ")"
        return self.kind

    def cyclic_orders(self) -> tuple[int, ...] | None:
        """Flattened cyclic factor orders, or None if not a pure cyclic product."""
        if self.kind == "cyclic":
            return (self.order_parameter,)
        if self.kind == "product":
            orders: list[int] = []
            for f in self.factors:
                sub = f.cyclic_orders()
                if sub is None:
                    return None
                orders.extend(sub)
            return tuple(orders)
        return None


def _latin_square_witness(table: np.ndarray, axis: int) -> tuple | None:
    """Return (line, j1, j2) with table values repeated along ``axis``, or None."""
    n = table.shape[0]
    lines = table if axis == 0 else table.T
    for i in range(n):
        seen: dict[int, int] = {}
        for j, v in enumerate(lines[i]):
            v = int(v)
            if v in seen:
                return (i, seen[v], j)
            seen[v] = j
    return None


def _validate_tables(table: np.ndarray, inverse: np.ndarray) -> None:
    n = table.shape[0]
    rng_row = np.arange(n)

    if not np.array_equal(table[0], rng_row):
        j = int(np.argmax(table[0] != rng_row))
        raise GroupAxiomError("identity", (0, j, int(table[0, j])),
                              "row of element 0 must fix every element")
    if not np.array_equal(table[:, 0], rng_row):
        i = int(np.argmax(table[:, 0] != rng_row))
        raise GroupAxiomError("identity", (i, 0, int(table[i, 0])),
                              "column of element 0 must fix every element")

    sorted_rows = np.sort(table, axis=1)
    if not np.array_equal(sorted_rows, np.broadcast_to(rng_row, table.shape)):
        witness = _latin_square_witness(table, axis=0)
        raise GroupAxiomError("latin-square", witness, "repeated entry in a row")
    sorted_cols = np.sort(table, axis=0)
    if not np.array_equal(sorted_cols, np.broadcast_to(rng_row[:, None], table.shape)):
        witness = _latin_square_witness(table, axis=1)
        raise GroupAxiomError("latin-square", witness, "repeated entry in a column")

    left = table[rng_row, inverse]
    right = table[inverse, rng_row]
    if np.any(left != 0) or np.any(right != 0):
        i = int(np.argmax((left != 0) | (right != 0)))
        raise GroupAxiomError("inverse", (i, int(inverse[i]), int(left[i])))

    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
        for i in range(n):
            lhs = table[table[i], :]
            rhs = table[i][table]
            if not np.array_equal(lhs, rhs):
                j, k = np.unravel_index(int(np.argmax(lhs != rhs)), lhs.shape)
                raise GroupAxiomError("associativity", (i, int(j), int(k)))
    else:
        rng = np.random.default_rng(0)
        m = _ASSOCIATIVITY_SAMPLES_PER_ELEMENT * n
        i, j, k = rng.integers(0, n, size=(3, m))
        lhs = table[table[i, j], k]
        rhs = table[i, table[j, k]]
        bad = lhs != rhs
        if np.any(bad):
            b = int(np.argmax(bad))
            raise GroupAxiomError("associativity", (int(i[b]), int(j[b]), int(k[b])))


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its composition table.

    Element 0 is always the identity.  ``compose_table[i, j]`` is the index of
    ``i * j`` and ``inverse_table[i]`` the index of ``i**-1``.  The tables are
    validated against the group axioms at construction (associativity is
    checked exhaustively up to order 256 and sampled above that).
    """

    order: int
    compose_table: np.ndarray
    inverse_table: np.ndarray
    family_tag: FamilyTag

    def __post_init__(self):
        table = np.ascontiguousarray(np.asarray(self.compose_table, dtype=np.int32))
        inverse = np.ascontiguousarray(np.asarray(self.inverse_table, dtype=np.int32))
        if table.shape != (self.order, self.order):
            raise ValueError(
                f"compose_table has shape {table.shape}, expected {(self.order, self.order)}")
        if inverse.shape != (self.order,):
            raise ValueError(
                f"inverse_table has length {inverse.shape}, expected {self.order}")
        if self.order < 1:
            raise ValueError(f"group order must be positive, got {self.order}")
        if table.size and (table.min() < 0 or table.max() >= self.order):
            raise ValueError("compose_table entries out of range")
        _validate_tables(table, inverse)
        table.setflags(write=False)
        inverse.setflags(write=False)
        object.__setattr__(self, "compose_table", table)
        object.__setattr__(self, "inverse_table", inverse)

    @property
    def identity(self) -> int:
        return 0

    def compose(self, u: GroupElement | int, v: GroupElement | int) -> int:
        return int(self.compose_table[element_index(u), element_index(v)])

    def inverse(self, u: GroupElement | int) -> int:
        return int(self.inverse_table[element_index(u)])

    def elements(self) -> range:
        return range(self.order)

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order}, family={self.family_tag})"


@dataclass(frozen=True, eq=False)
class PermutationMatrix:
    """A permutation matrix stored as its permutation.

    Column j carries a single 1 in row ``mapping[j]``; the dense matrix is
    materialized only on demand.
    """

    size: int
    mapping: np.ndarray

    def __post_init__(self):
        mapping = np.ascontiguousarray(np.asarray(self.mapping, dtype=np.int64))
        if mapping.shape != (self.size,):
            raise ValueError(f"mapping has shape {mapping.shape}, expected ({self.size},)")
        if not np.array_equal(np.sort(mapping), np.arange(self.size)):
            raise ValueError("mapping is not a bijection on [0, size)")
        mapping.setflags(write=False)
        object.__setattr__(self, "mapping", mapping)

    def dense(self, dtype=float) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=dtype)
        out[self.mapping, np.arange(self.size)] = 1
        return out

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Multiply this matrix onto a vector without densifying."""
        vec = np.asarray(vec)
        if vec.shape[0] != self.size:
            raise ValueError(f"vector length {vec.shape[0]} != size {self.size}")
        out = np.empty_like(vec)
        out[self.mapping] = vec
        return out

    def inverse(self) -> "PermutationMatrix":
        return PermutationMatrix(self.size, np.argsort(self.mapping))

    def transpose(self) -> "PermutationMatrix":
        # permutation matrices are orthogonal, so transpose == inverse
        return self.inverse()

    def __matmul__(self, other: "PermutationMatrix") -> "PermutationMatrix":
        if not isinstance(other, PermutationMatrix):
            return NotImplemented
        if other.size != self.size:
            raise ValueError("size mismatch")
        return PermutationMatrix(self.size, self.mapping[other.mapping])


def make_cyclic(n: int) -> FiniteGroup:
    """The cyclic group of order n with elements the residues mod n.

    Parameters
    ----------
    n : int
        Group order, at least 1.

    Returns
    -------
    FiniteGroup
        Group with ``compose(i, j) = (i + j) % n``.
    """
    if n < 1:
        raise ValueError(f"cyclic group order must be a positive integer, got {n}")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    inverse = (-idx) % n
    return FiniteGroup(n, table, inverse, FamilyTag("cyclic", n))


def make_dihedral(n: int) -> FiniteGroup:
    """The dihedral group of order 2n.

    Elements are pairs (x, a) with x mod n and a mod 2, enumerated as
    ``index = x + n * a`` (rotations first, then reflections), composed by
    ``(x, a) * (y, b) = (x + (-1)**a * y, a + b)``.
    """
    if n < 1:
        raise ValueError(f"dihedral group parameter must be a positive integer, got {n}")
    order = 2 * n
    idx = np.arange(order)
    x, a = idx % n, idx // n
    sign = 1 - 2 * a
    x2 = (x[:, None] + sign[:, None] * x[None, :]) % n
    a2 = (a[:, None] + a[None, :]) % 2
    table = x2 + n * a2
    inverse = np.argmax(table == 0, axis=1)
    return FiniteGroup(order, table, inverse, FamilyTag("dihedral", n))


def make_product(factors: Sequence[FiniteGroup]) -> FiniteGroup:
    """The direct product of the given groups.

    Element indices are mixed-radix over factor indices, first factor most
    significant (lexicographic), and composition is componentwise.
    """
    if len(factors) == 0:
        raise ValueError("product requires at least one factor group")
    table = factors[0].compose_table.astype(np.int64)
    for g in factors[1:]:
        n2 = g.order
        t2 = g.compose_table.astype(np.int64)
        n1 = table.shape[0]
        combined = (n2 * table)[:, None, :, None] + t2[None, :, None, :]
        table = combined.reshape(n1 * n2, n1 * n2)
    order = table.shape[0]
    inverse = np.argmax(table == 0, axis=1)
    tag = FamilyTag("product", factors=tuple(g.family_tag for g in factors))
    return FiniteGroup(order, table, inverse, tag)


def load_cayley(table) -> FiniteGroup:
    """Validate an explicit composition table and wrap it as a group.

    The identity is relabeled to index 0 if necessary (preserving the relative
    order of the remaining elements).  Raises ``GroupAxiomError`` naming the
    violated axiom and a witness triple if the table is not a group.
    """
    arr = np.asarray(table)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValueError(f"expected a nonempty square table, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        cast = arr.astype(np.int64)
        if not np.array_equal(cast, arr):
            raise ValueError("table entries must be integers")
        arr = cast
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        i, j = np.unravel_index(int(np.argmax((arr < 0) | (arr >= n))), arr.shape)
        raise ValueError(f"table entry {arr[i, j]} at ({i}, {j}) out of range [0, {n})")

    rng_row = np.arange(n)
    identity = None
    for e in range(n):
        if np.array_equal(arr[e], rng_row) and np.array_equal(arr[:, e], rng_row):
            identity = e
            break
    if identity is None:
        raise GroupAxiomError("identity", None, "no element acts as a two-sided identity")

    if identity != 0:
        new_of_old = np.where(rng_row < identity, rng_row + 1,
                              np.where(rng_row == identity, 0, rng_row))
        old_of_new = np.argsort(new_of_old)
        arr = new_of_old[arr[np.ix_(old_of_new, old_of_new)]]

    mask = arr == 0
    if not np.all(mask.sum(axis=1) == 1):
        i = int(np.argmax(mask.sum(axis=1) != 1))
        raise GroupAxiomError("inverse", (i, -1, -1), "row lacks a unique identity entry")
    inverse = np.argmax(mask, axis=1)
    return FiniteGroup(n, arr, inverse, FamilyTag("generic"))


def left_regular(group: FiniteGroup, u: GroupElement | int) -> PermutationMatrix:
    """Left regular representation L_u, sending e_j to e_{u*j}."""
    i = element_index(u)
    if not 0 <= i < group.order:
        raise IndexError(f"element index {i} out of range for group of order {group.order}")
    return PermutationMatrix(group.order, group.compose_table[i, :])


def right_regular(group: FiniteGroup, u: GroupElement | int) -> PermutationMatrix:
    """Right regular representation R_u, sending e_j to e_{j*u}."""
    i = element_index(u)
    if not 0 <= i < group.order:
        raise IndexError(f"element index {i} out of range for group of order {group.order}")
    return PermutationMatrix(group.order, group.compose_table[:, i])


def parse_group_spec(spec: str) -> FiniteGroup:
    """Build a group from a spec string.

    Grammar: ``cyclic:<n>``, ``dihedral:<n>``, ``product:<spec>,<spec>,...``,
    ``cayley:<path>`` where the file holds a JSON array-of-arrays of indices.
    Product factors are split on top-level commas, so nested products are not
    expressible in this grammar; build those programmatically instead.
    """
    spec = spec.strip()
    head, sep, rest = spec.partition(":")
    if not sep:
        raise ValueError(f"malformed group spec {spec!r}: expected '<family>:<args>'")
    if head == "cyclic":
        return make_cyclic(_parse_order(rest, spec))
    if head == "dihedral":
        return make_dihedral(_parse_order(rest, spec))
    if head == "product":
        parts = [p for p in rest.split(",") if p.strip()]
        if not parts:
            raise ValueError(f"malformed group spec {spec!r}: product needs factors")
        return make_product([parse_group_spec(p) for p in parts])
    if head == "cayley":
        path = Path(rest)
        if not path.exists():
            raise ValueError(f"cayley table file not found: {rest}")
        with open(path) as fh:
            return load_cayley(json.load(fh))
    raise ValueError(f"unknown group family {head!r} in spec {spec!r}")


def _parse_order(text: str, spec: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"malformed group spec {spec!r}: order {text!r} is not an integer")

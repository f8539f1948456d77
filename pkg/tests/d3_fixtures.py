"""Hand-entered reference data for the order-6 dihedral group.

Elements are enumerated e, r, r^2, s, rs, r^2s (rotation exponent plus 3 times
the reflection bit).  All values below were worked out by hand from the group
law (x, a) * (y, b) = (x + (-1)**a * y, a + b) and are used as frozen golden
values; nothing here is imported from the library under test.
"""

from __future__ import annotations

import numpy as np

OMEGA = np.exp(2j * np.pi / 3)

CAYLEY = np.array([
    [0, 1, 2, 3, 4, 5],
    [1, 2, 0, 4, 5, 3],
    [2, 0, 1, 5, 3, 4],
    [3, 5, 4, 0, 2, 1],
    [4, 3, 5, 1, 0, 2],
    [5, 4, 3, 2, 1, 0],
])

INVERSES = np.array([0, 2, 1, 3, 4, 5])

# column j of L_u holds a single 1 in row LEFT_REGULAR_MAPS[u][j]
LEFT_REGULAR_MAPS = {
    0: [0, 1, 2, 3, 4, 5],
    1: [1, 2, 0, 4, 5, 3],
    2: [2, 0, 1, 5, 3, 4],
    3: [3, 5, 4, 0, 2, 1],
    4: [4, 3, 5, 1, 0, 2],
    5: [5, 4, 3, 2, 1, 0],
}

RIGHT_REGULAR_MAPS = {
    0: [0, 1, 2, 3, 4, 5],
    1: [1, 2, 0, 5, 3, 4],
    2: [2, 0, 1, 4, 5, 3],
    3: [3, 4, 5, 0, 1, 2],
    4: [4, 5, 3, 2, 0, 1],
    5: [5, 3, 4, 1, 2, 0],
}


def dense_from_map(mapping) -> np.ndarray:
    out = np.zeros((6, 6))
    out[np.asarray(mapping), np.arange(6)] = 1
    return out


# the three irreducible representations, indexed by element
IRREP_TRIVIAL = np.ones(6, dtype=complex)
IRREP_SIGN = np.array([1, 1, 1, -1, -1, -1], dtype=complex)
IRREP_2D = np.array([
    [[1, 0], [0, 1]],
    [[OMEGA, 0], [0, OMEGA**-1]],
    [[OMEGA**2, 0], [0, OMEGA**-2]],
    [[0, 1], [1, 0]],
    [[0, OMEGA], [OMEGA**-1, 0]],
    [[0, OMEGA**2], [OMEGA**-2, 0]],
])

# unitary Fourier matrix; rows are (trivial), (sign), then the 2-dim irrep
# entries in row-major (j, k) order
FOURIER = np.array([
    [1, 1, 1, 1, 1, 1] / np.sqrt(6),
    [1, 1, 1, -1, -1, -1] / np.sqrt(6),
    [1, OMEGA, OMEGA**2, 0, 0, 0] / np.sqrt(3),
    [0, 0, 0, 1, OMEGA, OMEGA**2] / np.sqrt(3),
    [0, 0, 0, 1, OMEGA**-1, OMEGA**-2] / np.sqrt(3),
    [1, OMEGA**-1, OMEGA**-2, 0, 0, 0] / np.sqrt(3),
])

# worked example: m = f supported on the rotations
EXAMPLE_M = np.array([1, OMEGA, OMEGA**2, 0, 0, 0])
EXAMPLE_M_HAT = np.array([0, 0, 0, 0, 0, np.sqrt(3)])
EXAMPLE_CONV = np.array([3, 3 * OMEGA, 3 * OMEGA**2, 0, 0, 0])
EXAMPLE_M_HAT_2D = np.array([[0, 0], [0, 3]], dtype=complex)
EXAMPLE_CONV_HAT_2D = np.array([[0, 0], [0, 9]], dtype=complex)
EXAMPLE_CONV_HAT = np.array([0, 0, 0, 0, 0, 3 * np.sqrt(3)])

"""Hand-transcribed reference tables, kept separate from everything derived.

These are comparison fixtures only; no solver reads them.
"""

import numpy as np

FIVE_QUBIT_CLASS_SIZES = {
    "0": 1, "1": 15, "2A": 30, "2B": 60, "3A": 30, "3B": 180, "3C": 60,
    "4A": 90, "4B": 120, "4C": 180, "4D": 15,
    "5A": 30, "5B": 60, "5C": 90, "5D": 60, "5E": 3,
}

# unit-rate depolarizing jump matrix on the 16 classes, as tabulated
FIVE_QUBIT_L1 = np.array([
    [-15, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [15, -13, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 4, -15, 2, 3, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 8, 4, -13, 0, 2, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 3, 0, -15, 1, 0, 0, 1, 0, 4, 0, 0, 0, 0, 0],
    [0, 0, 6, 6, 6, -12, 6, 4, 3, 2, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 3, 0, 2, -15, 0, 0, 2, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 2, 0, -15, 3, 2, 0, 0, 3, 1, 0, 0],
    [0, 0, 0, 0, 4, 2, 0, 4, -14, 2, 8, 4, 2, 0, 2, 0],
    [0, 0, 0, 0, 0, 2, 6, 4, 3, -11, 0, 0, 0, 4, 0, 0],
    [0, 0, 0, 0, 2, 0, 0, 0, 1, 0, -15, 1, 0, 0, 0, 5],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 2, -14, 2, 0, 2, 10],
    [0, 0, 0, 0, 0, 0, 0, 2, 1, 0, 0, 4, -12, 2, 2, 0],
    [0, 0, 0, 0, 0, 0, 0, 1, 0, 2, 0, 0, 3, -11, 6, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 4, 2, 4, -15, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 0, -15],
], dtype=float)

FIVE_QUBIT_L0 = np.zeros((16, 16))
FIVE_QUBIT_L0[0, 1] = 1
for _i in (1, 2, 3, 4, 6, 8, 9, 10, 11, 12, 14):
    FIVE_QUBIT_L0[_i, _i] = -1
FIVE_QUBIT_L0[5, [2, 3, 4, 5, 6, 7, 8, 9]] = [1, 1, 1, -1 / 3, 1, 2 / 3, 1 / 2, 1 / 3]
FIVE_QUBIT_L0[7, [5, 7, 8, 9, 12, 13]] = [1 / 3, -5 / 6, 1 / 2, 1 / 3, 1 / 2, 1 / 6]
FIVE_QUBIT_L0[13, [7, 9, 12, 13, 14]] = [1 / 6, 1 / 3, 1 / 2, -1 / 6, 1]
FIVE_QUBIT_L0[15, [10, 11]] = [1, 1]
del _i

FIVE_QUBIT_L1_NULL = np.array([1, 15, 30, 60, 30, 180, 60, 90, 120, 180, 15, 30, 60, 90, 60, 3], dtype=float)
FIVE_QUBIT_L1_SPECTRUM = {0: 1, -4: 1, -8: 2, -12: 3, -16: 4, -20: 5}
# unit-rate correction matrix; threefold zero eigenvalue
FIVE_QUBIT_L0_SPECTRUM = {0: 3, -1: 11, (-2 + np.sqrt(2)) / 3: 1, (-2 - np.sqrt(2)) / 3: 1}

# long-time mixture for strong correction, unnormalized weights on 0, 3B, 4A, 5C, 5E
FIVE_QUBIT_STRONG_CORRECTION_MIX = {"0": 1, "3B": 30, "4A": 15, "5C": 15, "5E": 1}

THREE_QUBIT_L0 = np.array([[0, 1, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 1, 0]], dtype=float)
THREE_QUBIT_L1 = np.array([[-3, 1, 0, 0], [3, -3, 2, 0], [0, 2, -3, 3], [0, 0, 1, -3]], dtype=float)


def one_qubit_markov_pauli(g: float, e: float) -> np.ndarray:
    return np.array([[0, 0, 0, 0], [0, -e, 0, 0], [0, 0, -(2 * g + e), 0],
                     [e, 0, 0, -(2 * g + e)]], dtype=float)


def one_qubit_markov_computational(g: float, e: float) -> np.ndarray:
    return np.array([[-g, 0, 0, g + e], [0, -(g + e), g, 0], [0, g, -(g + e), 0],
                     [g, 0, 0, -(g + e)]], dtype=float)


def matrix_diff(derived: np.ndarray, transcribed: np.ndarray, labels, tol: float = 1e-12) -> list[str]:
    """Cells where the two matrices differ, as ``row,col: derived vs transcribed`` lines."""
    out = []
    rows, cols = np.nonzero(np.abs(derived - transcribed) > tol)
    for i, j in zip(rows, cols):
        out.append(f"{labels[i]},{labels[j]}: derived {derived[i, j]:.6g} vs transcribed {transcribed[i, j]:.6g}")
    return out

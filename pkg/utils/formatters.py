"""
Number formats shared by the CSV writers and the console tables.
"""

import numpy as np

from utils.constants import SIGNIFICANT_DIGITS

# 15 significant digits, the exact round-trip precision of a double
NUMBER_FORMAT = f"%.{SIGNIFICANT_DIGITS}g"


def summarize_matrix(name: str, matrix: np.ndarray) -> dict[str, str]:
    """
    Compact description of a matrix for the console tables.

    :param name: Label used as the dictionary key prefix
    :param matrix: Array to describe
    :return: Mapping with shape, Frobenius norm and extreme entries
    """
    if matrix.size == 0:
        return {f"{name}.shape": str(matrix.shape)}
    return {
        f"{name}.shape": str(matrix.shape),
        f"{name}.norm": f"{np.linalg.norm(matrix):.6g}",
        f"{name}.min": f"{np.min(matrix):.6g}",
        f"{name}.max": f"{np.max(matrix):.6g}",
    }

"""
Fundação numérica densa

DenseTensor é um numpy.ndarray float32; a forma vive no próprio array.
Reduções podem acumular em float64.
"""

from typing import Any, Optional, Sequence

import numpy as np

from fedquant.exceptions import DataError, DimensionError

DTYPE = np.float32

DenseTensor = np.ndarray


def check_finite(x: np.ndarray, name: str = "tensor") -> np.ndarray:
    """Levanta DataError se houver NaN/Inf"""
    if not np.all(np.isfinite(x)):
        bad = int(np.size(x) - np.count_nonzero(np.isfinite(x)))
        raise DataError(f"{name} contains {bad} non-finite value(s)")
    return x


def as_tensor(values: Any, shape: Optional[Sequence[int]] = None, name: str = "tensor") -> DenseTensor:
    """
    Converter para tensor float32 contíguo (sempre uma cópia)

    Args:
        values: Array-like
        shape: Forma esperada; product(shape) precisa bater com o número de elementos
        name: Nome usado nas mensagens de erro

    Returns:
        DenseTensor
    """
    data = np.array(values, dtype=DTYPE, copy=True)
    if shape is not None:
        shape = tuple(int(d) for d in shape)
        if any(d < 0 for d in shape):
            raise DimensionError(f"{name}: negative dimension in {shape}")
        if int(np.prod(shape, dtype=np.int64)) != data.size:
            raise DimensionError(f"{name}: {data.size} elements cannot take shape {shape}")
        data = data.reshape(shape)
    return check_finite(np.ascontiguousarray(data), name)


def zeros(shape: Sequence[int]) -> DenseTensor:
    return np.zeros(tuple(shape), dtype=DTYPE)


def matmul(a: DenseTensor, b: DenseTensor) -> DenseTensor:
    """
    Produto matricial [m×k]·[k×n] -> [m×n]

    Raises:
        DimensionError: operandos não 2-D ou dimensões internas diferentes
    """
    if a.ndim != 2 or b.ndim != 2:
        raise DimensionError(f"matmul expects 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul inner dimensions differ: {a.shape} · {b.shape}")
    # float32 in, float32 out; float64 operands stay float64 (gradient checks)
    out = np.matmul(a, b)
    return check_finite(out, "matmul result")

"""
Códigos 8-bit de árvore dinâmica (referência do estudo de precisão)

Layout do código, bit mais significativo primeiro::

    s | 1...1 (e uns) | 0 | f (6 - e bits)

``s`` é o sinal; a sequência de ``e`` uns é um expoente binário unário e o
zero a termina; os ``F = 6 - e`` bits restantes são uma fração linear. A
magnitude é ``2**-e * (1/2 + (f + 1) / 2**(F + 1))`` relativa ao absmax do
tensor, no intervalo ``(2**-(e+1), 2**-e]``. Sete uns depois do sinal não
têm terminador nem fração e valem ``2**-7``; o código 0 vale zero.

Valores pequenos pagam o expoente com bits de fração e nada abaixo de
``2**-8`` do absmax sobrevive.
"""

from functools import lru_cache
from typing import Tuple

import numpy as np

from fedquant.exceptions import DataError
from fedquant.utils.logging import get_logger

logger = get_logger('quant.dynamic_tree')

NUM_CODES = 256
SIGN_BIT = 0x80
MAGNITUDE_BITS = 7


def _exponent(bits: int) -> int:
    """Comprimento da sequência de uns no topo dos 7 bits de magnitude"""
    e = 0
    while e < MAGNITUDE_BITS and bits & (1 << (MAGNITUDE_BITS - 1 - e)):
        e += 1
    return e


def _magnitude(bits: int) -> float:
    if bits == 0:
        return 0.0
    exponent = _exponent(bits)
    if exponent == MAGNITUDE_BITS:
        return 2.0 ** (-MAGNITUDE_BITS)
    fraction_bits = MAGNITUDE_BITS - 1 - exponent
    fraction = bits & ((1 << fraction_bits) - 1)
    return 2.0 ** (-exponent) * (0.5 + (fraction + 1) / (1 << (fraction_bits + 1)))


@lru_cache(maxsize=1)
def dynamic_tree_table() -> np.ndarray:
    """Tabela de decodificação: float64[256] indexada pelo código"""
    table = np.empty(NUM_CODES, dtype=np.float64)
    for code in range(NUM_CODES):
        magnitude = _magnitude(code & (SIGN_BIT - 1))
        table[code] = -magnitude if code & SIGN_BIT else magnitude
    table.setflags(write=False)
    return table


@lru_cache(maxsize=1)
def _positive_grid() -> Tuple[np.ndarray, np.ndarray]:
    """Magnitudes não negativas ordenadas e os códigos que as produzem"""
    codes = np.arange(SIGN_BIT)
    magnitudes = dynamic_tree_table()[codes]
    order = np.argsort(magnitudes, kind="stable")
    return magnitudes[order], codes[order].astype(np.uint8)


def quantize_dynamic_tree(x) -> Tuple[np.ndarray, float]:
    """
    Codifica ``x`` como um código uint8 por elemento mais a escala absmax

    Cada |x| / absmax vai para a magnitude representável mais próxima
    (empates vão para a menor); o bit de sinal marca entradas negativas.
    """
    flat = np.asarray(x, dtype=np.float32).ravel()
    if not np.all(np.isfinite(flat)):
        raise DataError("quantize_dynamic_tree: input contains non-finite values")

    absmax = float(np.max(np.abs(flat))) if flat.size else 0.0
    if absmax == 0.0:
        return np.zeros(flat.size, dtype=np.uint8), 0.0

    grid, grid_codes = _positive_grid()
    normalized = np.abs(flat.astype(np.float64)) / absmax

    upper = np.clip(np.searchsorted(grid, normalized, side="left"), 1, grid.size - 1)
    lower = upper - 1
    pick_upper = (grid[upper] - normalized) < (normalized - grid[lower])
    index = np.where(pick_upper, upper, lower)

    codes = grid_codes[index]
    negative = (flat < 0) & (codes != 0)
    codes = codes | np.where(negative, SIGN_BIT, 0).astype(np.uint8)
    return codes.astype(np.uint8), absmax


def dequantize_dynamic_tree(codes: np.ndarray, absmax: float) -> np.ndarray:
    """Consulta na tabela vezes absmax"""
    codes = np.asarray(codes, dtype=np.uint8)
    return (dynamic_tree_table()[codes] * float(absmax)).astype(np.float32)

"""
Quantização 8-bit em blocos

Dois esquemas compartilham o mesmo layout (``QuantizedTensor``):

- LINEAR: por bloco ``lo = min``, ``hi = max``, ``q = floor((x - lo) / r * 255)``
- LOG: a mesma grade aplicada a ``l = ln(x + eps)``; o erro de reconstrução
  é multiplicativo em vez de aditivo

Os metadados por bloco ficam em float32 e a posição na grade de cada elemento
é calculada contra esses float32. Valores reconstruídos são arredondados para
cima até o próximo float32. No FLOOR, uma entrada que é exatamente a
reconstrução do nível ``q + 1`` recebe o código ``q + 1`` mesmo quando o ruído
de float64 deixa sua posição um fio abaixo do inteiro; assim um tensor
desquantizado volta ao mesmo payload.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from fedquant.exceptions import DataError, DimensionError, ParameterError, UsageError
from fedquant.utils.logging import get_logger

logger = get_logger('quant.blockwise')

DEFAULT_EPSILON = 1e-8
LEVELS = 255

# (níveis float64, lo, hi) -> reconstrução levada de volta ao domínio quantizado
Reconstruct = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


class QuantMode(Enum):
    """Esquema de quantização (valor = código no formato binário)"""

    LINEAR = 0
    LOG = 1

    def __str__(self):
        return self.name.lower()


class Rounding(Enum):
    """Mapeamento da posição na grade para o código"""

    FLOOR = "floor"
    NEAREST = "nearest"

    def __str__(self):
        return self.value


@dataclass
class QuantizedTensor:
    """
    Tensor quantizado em blocos

    Attributes:
        payload: uint8 de tamanho num_blocks·B (cauda preenchida com código 0)
        lo: float32 por bloco (mínimo, ou l_min no modo LOG)
        hi: float32 por bloco (máximo, ou l_max no modo LOG)
        block_size: B
        original_len: N antes do preenchimento
        mode: LINEAR ou LOG
        epsilon: deslocamento do log (só usado no modo LOG)
    """

    payload: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    block_size: int
    original_len: int
    mode: QuantMode
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        self._validate()

    def _validate(self) -> None:
        if not isinstance(self.mode, QuantMode):
            self.mode = QuantMode(self.mode)
        if self.block_size < 1:
            raise ParameterError(f"block_size must be >= 1, got {self.block_size}")
        if self.original_len < 0:
            raise ParameterError(f"original_len must be >= 0, got {self.original_len}")
        nb = self.num_blocks
        if self.payload.dtype != np.uint8 or self.payload.shape != (nb * self.block_size,):
            raise DimensionError(
                f"payload must be uint8[{nb * self.block_size}], "
                f"got {self.payload.dtype}{list(self.payload.shape)}"
            )
        if self.lo.shape != (nb,) or self.hi.shape != (nb,):
            raise DimensionError(f"lo/hi must have {nb} entries")
        if np.any(self.lo > self.hi):
            raise DataError("block metadata violates lo <= hi")

    @property
    def num_blocks(self) -> int:
        return -(-self.original_len // self.block_size)

    @property
    def padding(self) -> int:
        return self.num_blocks * self.block_size - self.original_len

    @property
    def ranges(self) -> np.ndarray:
        """r por bloco (hi - lo), em float64"""
        return self.hi.astype(np.float64) - self.lo.astype(np.float64)

    def codes(self) -> np.ndarray:
        """Códigos dos elementos reais (sem a cauda)"""
        return self.payload[: self.original_len]

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuantizedTensor):
            return NotImplemented
        return (
            self.mode == other.mode
            and self.block_size == other.block_size
            and self.original_len == other.original_len
            and self.epsilon == other.epsilon
            and np.array_equal(self.payload, other.payload)
            and np.array_equal(self.lo, other.lo)
            and np.array_equal(self.hi, other.hi)
        )


def _check_block_size(block_size: int) -> int:
    if isinstance(block_size, bool) or int(block_size) != block_size or block_size < 1:
        raise ParameterError(f"block size must be a positive integer, got {block_size!r}")
    return int(block_size)


def _flatten(x, name: str) -> np.ndarray:
    flat = np.asarray(x, dtype=np.float32).ravel()
    if not np.all(np.isfinite(flat)):
        raise DataError(f"{name}: input contains non-finite values")
    return flat


def _encode_blocks(
    values: np.ndarray,
    block_size: int,
    rounding: Rounding,
    reconstruct: Optional[Reconstruct] = None,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Núcleo comum: values (float64, já no domínio quantizado) -> (payload, lo, hi)

    Min/max são tomados só sobre elementos reais; a cauda recebe o último
    valor real e depois é zerada no payload. ``reconstruct`` refaz o caminho
    do dequantizador para os níveis candidatos do FLOOR.
    """
    n = values.size
    nb = -(-n // block_size)
    if nb == 0:
        return np.zeros(0, np.uint8), np.zeros(0, np.float32), np.zeros(0, np.float32)

    pad = nb * block_size - n
    blocks = np.pad(values, (0, pad), mode="edge").reshape(nb, block_size)

    lo = blocks.min(axis=1).astype(np.float32)
    hi = blocks.max(axis=1).astype(np.float32)
    lo64 = lo.astype(np.float64)[:, None]
    r64 = hi.astype(np.float64)[:, None] - lo64

    live = r64[:, 0] > 0
    t = np.zeros_like(blocks)
    np.divide(blocks - lo64, r64, out=t, where=np.broadcast_to(r64 > 0, blocks.shape))
    t *= LEVELS

    offset = 0.5 if rounding is Rounding.NEAREST else 0.0
    q = np.clip(np.floor(t + offset), 0, LEVELS)
    q[~live] = 0

    if rounding is Rounding.FLOOR and reconstruct is not None:
        up = np.minimum(q + 1, LEVELS)
        candidate = reconstruct(
            lo64 + up / LEVELS * r64,
            np.broadcast_to(lo[:, None], blocks.shape),
            np.broadcast_to(hi[:, None], blocks.shape),
        )
        snap = (q < LEVELS) & (candidate == blocks) & live[:, None]
        q[snap] += 1

    payload = q.astype(np.uint8).ravel()
    if pad:
        payload[n:] = 0
    return payload, lo, hi


def _levels(qt: QuantizedTensor) -> np.ndarray:
    """lo + q/255·r por elemento real, em float64"""
    B = qt.block_size
    codes = qt.codes().astype(np.float64)
    block_of = np.arange(qt.original_len) // B
    lo64 = qt.lo.astype(np.float64)[block_of]
    r64 = qt.ranges[block_of]
    return lo64 + codes / LEVELS * r64


def _round_up_to_float32(values: np.ndarray) -> np.ndarray:
    out = values.astype(np.float32)
    low = out.astype(np.float64) < values
    if np.any(low):
        out[low] = np.nextafter(out[low], np.float32(np.inf))
    return out


def _linear_values(levels: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    return np.clip(_round_up_to_float32(levels), lo, hi)


def _log_values(levels: np.ndarray, epsilon: float) -> np.ndarray:
    """exp(nível) - eps; níveis em ou abaixo de ln(eps) em float32 viram 0"""
    floor_level = float(np.float32(np.log(epsilon)))
    values = np.maximum(np.exp(levels) - epsilon, 0.0)
    values[levels <= floor_level] = 0.0
    return _round_up_to_float32(values)


def quantize_linear(x, block_size: int, rounding: Rounding = Rounding.FLOOR) -> QuantizedTensor:
    """
    Quantização linear em blocos

    Args:
        x: Array finito (achatado em ordem C)
        block_size: B >= 1
        rounding: FLOOR (regra de armazenamento) ou NEAREST

    Returns:
        QuantizedTensor(mode=LINEAR)
    """
    B = _check_block_size(block_size)
    flat = _flatten(x, "quantize_linear")

    def reconstruct(levels, lo, hi):
        return _linear_values(levels, lo, hi).astype(np.float64)

    payload, lo, hi = _encode_blocks(flat.astype(np.float64), B, Rounding(rounding), reconstruct)
    return QuantizedTensor(payload, lo, hi, B, flat.size, QuantMode.LINEAR)


def dequantize_linear(qt: QuantizedTensor) -> np.ndarray:
    """x̃ = q/255·r + lo por bloco; cauda descartada"""
    if qt.mode is not QuantMode.LINEAR:
        raise UsageError(f"dequantize_linear called on a {qt.mode} tensor")
    if qt.original_len == 0:
        return np.zeros(0, np.float32)
    block_of = np.arange(qt.original_len) // qt.block_size
    return _linear_values(_levels(qt), qt.lo[block_of], qt.hi[block_of])


def quantize_log(
    x,
    block_size: int,
    epsilon: float = DEFAULT_EPSILON,
    rounding: Rounding = Rounding.FLOOR,
) -> QuantizedTensor:
    """
    Quantização em espaço log: grade linear sobre ln(x + eps)

    Args:
        x: Array não negativo
        block_size: B >= 1
        epsilon: Deslocamento do log (> 0)
        rounding: FLOOR ou NEAREST

    Returns:
        QuantizedTensor(mode=LOG)

    Raises:
        DataError: entrada negativa ou não finita
    """
    B = _check_block_size(block_size)
    if not np.isfinite(epsilon) or epsilon <= 0:
        raise ParameterError(f"epsilon must be > 0, got {epsilon}")
    flat = _flatten(x, "quantize_log")
    if np.any(flat < 0):
        raise DataError(f"quantize_log: {int(np.sum(flat < 0))} negative value(s)")

    def reconstruct(levels, lo, hi):
        return np.log(_log_values(levels, epsilon).astype(np.float64) + epsilon)

    logs = np.log(flat.astype(np.float64) + epsilon)
    payload, lo, hi = _encode_blocks(logs, B, Rounding(rounding), reconstruct)
    return QuantizedTensor(payload, lo, hi, B, flat.size, QuantMode.LOG, float(epsilon))


def dequantize_log(qt: QuantizedTensor) -> np.ndarray:
    """
    x̃ = exp(q/255·r + l_min) - eps, limitado a >= 0

    Níveis em ou abaixo de ln(eps) (como armazenado em float32) voltam
    exatamente como 0.
    """
    if qt.mode is not QuantMode.LOG:
        raise UsageError(f"dequantize_log called on a {qt.mode} tensor")
    if qt.original_len == 0:
        return np.zeros(0, np.float32)
    return _log_values(_levels(qt), qt.epsilon)


def quantize(
    x,
    mode: QuantMode,
    block_size: int,
    epsilon: float = DEFAULT_EPSILON,
    rounding: Rounding = Rounding.FLOOR,
) -> QuantizedTensor:
    if QuantMode(mode) is QuantMode.LOG:
        return quantize_log(x, block_size, epsilon, rounding)
    return quantize_linear(x, block_size, rounding)


def dequantize(qt: QuantizedTensor) -> np.ndarray:
    if qt.mode is QuantMode.LOG:
        return dequantize_log(qt)
    return dequantize_linear(qt)

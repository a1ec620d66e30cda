"""
Adam com estados armazenados em 8 bits

Cada passo desquantiza m e v para FP32, atualiza os momentos, aplica a
correção de viés e o passo nos parâmetros com os valores em FP32, e só
então reescreve m e v no formato do modo. O erro de armazenamento afeta
apenas os passos seguintes.
"""

from dataclasses import dataclass, field, replace
from typing import List, Sequence, Tuple, Union

import numpy as np

from fedquant.exceptions import DataError, DimensionError, ParameterError, StateError, UsageError
from fedquant.optim.modes import OptimizerMode, StateStorage
from fedquant.quant import (
    MemoryReport,
    QuantizedTensor,
    QuantMode,
    Rounding,
    dequantize,
    fp32_report,
    memory_report,
    quantize_linear,
    quantize_log,
)
from fedquant.utils import get_logger, validate_positive, validate_positive_int, validate_probability

logger = get_logger('optim.adam')

MAX_STEP = 2 ** 31

Buffer = Union[np.ndarray, QuantizedTensor]


@dataclass(frozen=True)
class AdamHyper:
    """
    Hiperparâmetros do Adam

    Attributes:
        lr: Taxa de aprendizado (eta)
        beta1: Decaimento do momento
        beta2: Decaimento da variância
        eps: Estabilizador do denominador, também usado como deslocamento do log
    """

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self):
        self._validate()

    def _validate(self) -> None:
        if not validate_positive(self.lr, "lr"):
            raise ParameterError(f"Invalid lr: {self.lr}")
        if not validate_probability(self.beta1, "beta1"):
            raise ParameterError(f"Invalid beta1: {self.beta1}")
        if not validate_probability(self.beta2, "beta2"):
            raise ParameterError(f"Invalid beta2: {self.beta2}")
        if not validate_positive(self.eps, "eps"):
            raise ParameterError(f"Invalid eps: {self.eps}")


@dataclass
class AdamState:
    """
    Estado de Adam de um cliente

    Attributes:
        m: Um buffer por tensor de parâmetro (np.ndarray FP32 ou QuantizedTensor)
        v: Idem
        step: Contador de mini-batches desde a inicialização
        hyper: Hiperparâmetros
        block_size: B dos buffers quantizados
        mode: Modo que determina o formato de m e v
        shapes: Formas dos tensores de parâmetro
    """

    m: List[Buffer]
    v: List[Buffer]
    step: int
    hyper: AdamHyper
    block_size: int
    mode: OptimizerMode
    shapes: List[Tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self):
        if len(self.m) != len(self.v) or len(self.m) != len(self.shapes):
            raise DimensionError(
                f"state has {len(self.m)} m, {len(self.v)} v buffers for {len(self.shapes)} shapes"
            )
        if self.step < 0:
            raise StateError(f"step must be >= 0, got {self.step}")

    @property
    def num_params(self) -> int:
        return int(sum(int(np.prod(s, dtype=np.int64)) for s in self.shapes))


def _store(values: np.ndarray, storage: StateStorage, block_size: int, eps: float) -> Buffer:
    if storage is StateStorage.FP32:
        return values
    if storage is StateStorage.LINEAR_INT8:
        return quantize_linear(values, block_size, Rounding.FLOOR)
    return quantize_log(values, block_size, eps, Rounding.FLOOR)


def _load(buffer: Buffer, storage: StateStorage, shape: Tuple[int, ...]) -> np.ndarray:
    if storage is StateStorage.FP32:
        if not isinstance(buffer, np.ndarray):
            raise UsageError("expected an FP32 buffer, found a quantized one")
        return buffer.astype(np.float32, copy=False).reshape(shape)
    if not isinstance(buffer, QuantizedTensor):
        raise UsageError(f"expected a {storage} buffer, found an FP32 array")
    expected = QuantMode.LOG if storage is StateStorage.LOG_INT8 else QuantMode.LINEAR
    if buffer.mode is not expected:
        raise UsageError(f"expected a {storage} buffer, found a {buffer.mode} tensor")
    return dequantize(buffer).reshape(shape)


def storage_roundtrip(
    values,
    storage: StateStorage,
    block_size: int = 64,
    eps: float = 1e-8,
) -> np.ndarray:
    """Armazena e recupera um array no formato dado (FP32 é identidade)"""
    flat = np.asarray(values, dtype=np.float32).ravel()
    stored = _store(flat, StateStorage(storage), block_size, eps)
    return _load(stored, StateStorage(storage), flat.shape)


def init_state(
    param_shapes: Sequence[Sequence[int]],
    mode: OptimizerMode,
    hyper: AdamHyper = AdamHyper(),
    block_size: int = 64,
) -> AdamState:
    """
    Estado zerado no formato do modo (m = 0, v = 0, step = 0)

    Args:
        param_shapes: Formas dos tensores de parâmetro
        mode: Modo do otimizador
        hyper: Hiperparâmetros
        block_size: B

    Returns:
        AdamState
    """
    mode = OptimizerMode.parse(mode)
    if not validate_positive_int(block_size, "block_size"):
        raise ParameterError(f"Invalid block_size: {block_size}")
    m_storage, v_storage = mode.storage
    shapes = [tuple(int(d) for d in s) for s in param_shapes]

    m: List[Buffer] = []
    v: List[Buffer] = []
    for shape in shapes:
        zeros = np.zeros(int(np.prod(shape, dtype=np.int64)), dtype=np.float32)
        m.append(_store(zeros, m_storage, block_size, hyper.eps))
        v.append(_store(zeros.copy(), v_storage, block_size, hyper.eps))

    return AdamState(m=m, v=v, step=0, hyper=hyper, block_size=block_size, mode=mode, shapes=shapes)


def dequantize_state(state: AdamState) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """(m, v) em FP32 com as formas dos parâmetros"""
    m_storage, v_storage = state.mode.storage
    ms = [_load(buf, m_storage, shape) for buf, shape in zip(state.m, state.shapes)]
    vs = [_load(buf, v_storage, shape) for buf, shape in zip(state.v, state.shapes)]
    return ms, vs


def adam_step(
    state: AdamState,
    params: Sequence[np.ndarray],
    grads: Sequence[np.ndarray],
    mode: OptimizerMode,
) -> Tuple[List[np.ndarray], AdamState]:
    """
    Um passo de Adam

    Args:
        state: Estado atual (não é modificado)
        params: Tensores de parâmetro FP32
        grads: Gradientes alinhados com params
        mode: Precisa coincidir com state.mode

    Returns:
        (novos parâmetros, novo estado)

    Raises:
        UsageError: modo diferente do estado
        DimensionError: params/grads desalinhados
        DataError: gradiente não finito
        StateError: contador de passos acima de 2**31
    """
    mode = OptimizerMode.parse(mode)
    if mode is not state.mode:
        raise UsageError(f"adam_step called with mode {mode} on a {state.mode} state")
    if len(params) != len(state.shapes) or len(grads) != len(state.shapes):
        raise DimensionError(
            f"expected {len(state.shapes)} tensors, got {len(params)} params and {len(grads)} grads"
        )

    step = state.step + 1
    if step > MAX_STEP:
        raise StateError(f"step counter overflow: {step} > {MAX_STEP}")

    hyper = state.hyper
    b1 = np.float32(hyper.beta1)
    b2 = np.float32(hyper.beta2)
    lr = np.float32(hyper.lr)
    eps = np.float32(hyper.eps)
    bias1 = np.float32(1.0 - hyper.beta1 ** step)
    bias2 = np.float32(1.0 - hyper.beta2 ** step)
    m_storage, v_storage = mode.storage

    new_params: List[np.ndarray] = []
    new_m: List[Buffer] = []
    new_v: List[Buffer] = []

    for i, shape in enumerate(state.shapes):
        theta = np.asarray(params[i], dtype=np.float32)
        g = np.asarray(grads[i], dtype=np.float32)
        if theta.shape != shape or g.shape != shape:
            raise DimensionError(
                f"tensor {i}: expected shape {shape}, got params {theta.shape}, grads {g.shape}"
            )
        if not np.all(np.isfinite(g)):
            raise DataError(f"tensor {i}: non-finite gradient")

        m_prev = _load(state.m[i], m_storage, shape)
        v_prev = _load(state.v[i], v_storage, shape)

        m = b1 * m_prev + (np.float32(1.0) - b1) * g
        v = b2 * v_prev + (np.float32(1.0) - b2) * (g * g)

        m_hat = m / bias1
        v_hat = v / bias2
        new_params.append(theta - lr * m_hat / (np.sqrt(v_hat) + eps))

        new_m.append(_store(m.ravel(), m_storage, state.block_size, hyper.eps))
        new_v.append(_store(v.ravel(), v_storage, state.block_size, hyper.eps))

    return new_params, replace(state, m=new_m, v=new_v, step=step)


def state_memory_bytes(state: AdamState) -> MemoryReport:
    """Bytes de m e v somados sobre todos os tensores"""
    total = MemoryReport()
    for buffer in list(state.m) + list(state.v):
        if isinstance(buffer, QuantizedTensor):
            total = total + memory_report(buffer)
        else:
            total = total + fp32_report(int(buffer.size))
    return total

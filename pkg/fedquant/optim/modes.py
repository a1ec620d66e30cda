"""
Modos do otimizador e o formato de armazenamento de m e v em cada um
"""

from enum import Enum
from typing import Dict, Tuple


class StateStorage(Enum):
    """Formato de um buffer de estado"""

    FP32 = "fp32"
    LINEAR_INT8 = "linear-int8"
    LOG_INT8 = "log-int8"

    def __str__(self):
        return self.value


class OptimizerMode(Enum):
    """Modos do otimizador (valor = nome usado na CLI)"""

    FP32 = "fp32"
    Q_LOCAL_ADAM = "qlocaladam"
    NAIVE_INT8 = "naive-int8"
    MOMENTUM_ONLY = "m-only"
    VARIANCE_ONLY = "v-only"

    def __str__(self):
        return self.value

    @property
    def storage(self) -> Tuple[StateStorage, StateStorage]:
        """(armazenamento de m, armazenamento de v)"""
        return MODE_STORAGE[self]

    @property
    def is_quantized(self) -> bool:
        return any(s is not StateStorage.FP32 for s in self.storage)

    @classmethod
    def parse(cls, value) -> "OptimizerMode":
        """Aceita o enum, o valor da CLI ou o nome ('Q_LOCAL_ADAM')"""
        if isinstance(value, cls):
            return value
        text = str(value).strip()
        try:
            return cls(text.lower())
        except ValueError:
            pass
        try:
            return cls[text.upper().replace("-", "_")]
        except KeyError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"Unknown optimizer mode {value!r} (choose from {choices})")


MODE_STORAGE: Dict[OptimizerMode, Tuple[StateStorage, StateStorage]] = {
    OptimizerMode.FP32: (StateStorage.FP32, StateStorage.FP32),
    OptimizerMode.Q_LOCAL_ADAM: (StateStorage.LINEAR_INT8, StateStorage.LOG_INT8),
    OptimizerMode.NAIVE_INT8: (StateStorage.LINEAR_INT8, StateStorage.LINEAR_INT8),
    OptimizerMode.MOMENTUM_ONLY: (StateStorage.LINEAR_INT8, StateStorage.FP32),
    OptimizerMode.VARIANCE_ONLY: (StateStorage.FP32, StateStorage.LOG_INT8),
}

"""Adam com estado em FP32, INT8 linear e INT8 log"""

from .modes import MODE_STORAGE, OptimizerMode, StateStorage
from .adam import (
    AdamHyper,
    AdamState,
    MAX_STEP,
    adam_step,
    dequantize_state,
    init_state,
    state_memory_bytes,
    storage_roundtrip,
)
from .fedadam import fedadam_server_step
from .checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    'MODE_STORAGE',
    'OptimizerMode',
    'StateStorage',
    'AdamHyper',
    'AdamState',
    'MAX_STEP',
    'adam_step',
    'dequantize_state',
    'init_state',
    'state_memory_bytes',
    'storage_roundtrip',
    'fedadam_server_step',
    'load_checkpoint',
    'save_checkpoint',
]

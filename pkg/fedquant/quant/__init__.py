"""Quantização 8-bit em blocos (linear e log), contabilidade de memória e codecs"""

from .blockwise import (
    DEFAULT_EPSILON,
    QuantizedTensor,
    QuantMode,
    Rounding,
    dequantize,
    dequantize_linear,
    dequantize_log,
    quantize,
    quantize_linear,
    quantize_log,
)
from .dynamic_tree import dequantize_dynamic_tree, dynamic_tree_table, quantize_dynamic_tree
from .memory import MemoryReport, fp32_report, memory_report, quantized_bytes, MIB
from .serialization import HEADER_BYTES, from_bytes, read_tensor, to_bytes

__all__ = [
    'DEFAULT_EPSILON',
    'QuantizedTensor',
    'QuantMode',
    'Rounding',
    'dequantize',
    'dequantize_linear',
    'dequantize_log',
    'quantize',
    'quantize_linear',
    'quantize_log',
    'dequantize_dynamic_tree',
    'dynamic_tree_table',
    'quantize_dynamic_tree',
    'MemoryReport',
    'fp32_report',
    'memory_report',
    'quantized_bytes',
    'MIB',
    'HEADER_BYTES',
    'from_bytes',
    'read_tensor',
    'to_bytes',
]

"""Fundação numérica: tensores FP32, matmul e streams aleatórios determinísticos"""

from .tensor import DTYPE, DenseTensor, as_tensor, check_finite, matmul, zeros
from .rng import (
    RngStream,
    sample_dirichlet,
    sample_gaussian,
    STREAM_ANALYSIS,
    STREAM_CLIENT_BASE,
    STREAM_DATA,
    STREAM_MODEL_INIT,
    STREAM_PARTITION,
    STREAM_SAMPLING,
    STREAM_TEST_DATA,
)

__all__ = [
    'DTYPE',
    'DenseTensor',
    'as_tensor',
    'check_finite',
    'matmul',
    'zeros',
    'RngStream',
    'sample_dirichlet',
    'sample_gaussian',
    'STREAM_ANALYSIS',
    'STREAM_CLIENT_BASE',
    'STREAM_DATA',
    'STREAM_MODEL_INIT',
    'STREAM_PARTITION',
    'STREAM_SAMPLING',
    'STREAM_TEST_DATA',
]

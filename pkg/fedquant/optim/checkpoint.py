"""
Checkpoint binário do estado do otimizador

Layout (little-endian)::

    cabeçalho: magic "QLAS" | versão u16 | modo u8 | reservado u8 | block_size u32
               step u64 | lr f64 | beta1 f64 | beta2 f64 | eps f64 | num_tensors u32
    índice:    por buffer (m0, v0, m1, v1, ...):
               tipo u8 (0=FP32, 1=quantizado) | ndim u8 | reservado u16
               offset u64 | length u64 | dims u64 × ndim
    corpo:     buffers concatenados; FP32 como float32 cru, quantizados no
               formato "QLAQ". offset é relativo ao início do corpo.
"""

import struct
from typing import List, Tuple

import numpy as np

from fedquant.exceptions import SerializationError
from fedquant.optim.adam import AdamHyper, AdamState, Buffer
from fedquant.optim.modes import OptimizerMode
from fedquant.quant import QuantizedTensor, QuantMode
from fedquant.quant.serialization import read_tensor, to_bytes
from fedquant.utils import get_logger

logger = get_logger('optim.checkpoint')

MAGIC = b"QLAS"
VERSION = 1
HEADER = struct.Struct("<4sHBBIQddddI")
ENTRY = struct.Struct("<BBHQQ")
DIM = struct.Struct("<Q")

KIND_FP32 = 0
KIND_QUANTIZED = 1

_MODES = list(OptimizerMode)


def save_checkpoint(state: AdamState) -> bytes:
    """Serializa o estado completo"""
    hyper = state.hyper
    header = HEADER.pack(
        MAGIC, VERSION, _MODES.index(state.mode), 0, state.block_size, state.step,
        hyper.lr, hyper.beta1, hyper.beta2, hyper.eps, len(state.shapes),
    )

    index: List[bytes] = []
    blobs: List[bytes] = []
    offset = 0
    for i, shape in enumerate(state.shapes):
        for buffer in (state.m[i], state.v[i]):
            if isinstance(buffer, QuantizedTensor):
                kind, blob = KIND_QUANTIZED, to_bytes(buffer, strict_epsilon=False)
            else:
                kind, blob = KIND_FP32, np.asarray(buffer, dtype="<f4").tobytes()
            index.append(ENTRY.pack(kind, len(shape), 0, offset, len(blob)))
            index.extend(DIM.pack(d) for d in shape)
            blobs.append(blob)
            offset += len(blob)

    data = b"".join([header] + index + blobs)
    logger.debug(f"Checkpoint written: {len(state.shapes)} tensors, {len(data)} bytes")
    return data


def _read_entry(data: bytes, pos: int) -> Tuple[int, Tuple[int, ...], int, int, int]:
    if len(data) - pos < ENTRY.size:
        raise SerializationError(f"truncated index entry at byte {pos}")
    kind, ndim, _reserved, offset, length = ENTRY.unpack_from(data, pos)
    pos += ENTRY.size
    if len(data) - pos < ndim * DIM.size:
        raise SerializationError(f"truncated shape at byte {pos}")
    shape = tuple(DIM.unpack_from(data, pos + k * DIM.size)[0] for k in range(ndim))
    return kind, shape, offset, length, pos + ndim * DIM.size


def load_checkpoint(data: bytes) -> AdamState:
    """Reconstrói o AdamState salvo por save_checkpoint"""
    if len(data) < HEADER.size:
        raise SerializationError("truncated checkpoint header")
    (magic, version, mode_code, _reserved, block_size, step,
     lr, beta1, beta2, eps, num_tensors) = HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise SerializationError(f"bad checkpoint magic {magic!r}")
    if version != VERSION:
        raise SerializationError(f"unsupported checkpoint version {version}")
    if mode_code >= len(_MODES):
        raise SerializationError(f"unknown optimizer mode code {mode_code}")

    entries = []
    pos = HEADER.size
    for _ in range(2 * num_tensors):
        kind, shape, offset, length, pos = _read_entry(data, pos)
        entries.append((kind, shape, offset, length))

    body = pos
    buffers: List[Buffer] = []
    for kind, shape, offset, length in entries:
        start = body + offset
        if start + length > len(data):
            raise SerializationError("buffer extends past end of checkpoint")
        if kind == KIND_FP32:
            n = int(np.prod(shape, dtype=np.int64))
            if length != 4 * n:
                raise SerializationError(f"FP32 buffer of {length} bytes for {n} elements")
            buffers.append(np.frombuffer(data, dtype="<f4", count=n, offset=start).astype(np.float32))
        elif kind == KIND_QUANTIZED:
            qt, end = read_tensor(data[start:start + length])
            if end != length:
                raise SerializationError("quantized buffer length mismatch")
            if qt.mode is QuantMode.LOG:
                qt.epsilon = eps
            buffers.append(qt)
        else:
            raise SerializationError(f"unknown buffer kind {kind}")

    shapes = [entries[2 * i][1] for i in range(num_tensors)]
    return AdamState(
        m=buffers[0::2],
        v=buffers[1::2],
        step=step,
        hyper=AdamHyper(lr=lr, beta1=beta1, beta2=beta2, eps=eps),
        block_size=block_size,
        mode=_MODES[mode_code],
        shapes=shapes,
    )

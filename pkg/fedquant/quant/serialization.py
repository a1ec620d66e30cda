"""
(De)serialização binária de QuantizedTensor

Layout little-endian::

    magic "QLAQ" | version u16 | mode u8 | reserved u8 | block_size u32 | original_len u64
    payload (num_blocks * B bytes) | lo (num_blocks f32) | hi (num_blocks f32)

O formato não tem campo para o deslocamento do log: só tensores quantizados
com o epsilon padrão podem ser gravados.
"""

import struct
from typing import Tuple

import numpy as np

from fedquant.exceptions import SerializationError
from fedquant.quant.blockwise import DEFAULT_EPSILON, QuantizedTensor, QuantMode

MAGIC = b"QLAQ"
FORMAT_VERSION = 1
HEADER = struct.Struct("<4sHBBIQ")
HEADER_BYTES = HEADER.size  # 20


def to_bytes(qt: QuantizedTensor, strict_epsilon: bool = True) -> bytes:
    """``strict_epsilon=False`` é para contêineres que gravam o epsilon por conta própria"""
    if strict_epsilon and qt.mode is QuantMode.LOG and qt.epsilon != DEFAULT_EPSILON:
        raise SerializationError(
            f"cannot serialize a LOG tensor with epsilon={qt.epsilon}; format assumes {DEFAULT_EPSILON}"
        )
    header = HEADER.pack(MAGIC, FORMAT_VERSION, qt.mode.value, 0, qt.block_size, qt.original_len)
    return b"".join(
        (
            header,
            qt.payload.astype(np.uint8).tobytes(),
            qt.lo.astype("<f4").tobytes(),
            qt.hi.astype("<f4").tobytes(),
        )
    )


def read_tensor(data: bytes, offset: int = 0) -> Tuple[QuantizedTensor, int]:
    """Decodifica um tensor em ``offset``; devolve o tensor e o offset logo depois dele"""
    if len(data) - offset < HEADER_BYTES:
        raise SerializationError(f"truncated header at byte {offset}")
    magic, version, mode, _reserved, block_size, original_len = HEADER.unpack_from(data, offset)
    if magic != MAGIC:
        raise SerializationError(f"bad magic {magic!r} at byte {offset}")
    if version != FORMAT_VERSION:
        raise SerializationError(f"unsupported format version {version}")
    try:
        mode = QuantMode(mode)
    except ValueError:
        raise SerializationError(f"unknown mode code {mode}")
    if block_size < 1:
        raise SerializationError("block_size must be >= 1")

    num_blocks = -(-original_len // block_size)
    body = num_blocks * block_size + 8 * num_blocks
    start = offset + HEADER_BYTES
    if len(data) - start < body:
        raise SerializationError(
            f"truncated body: need {body} bytes, have {len(data) - start}"
        )

    payload_end = start + num_blocks * block_size
    lo_end = payload_end + 4 * num_blocks
    payload = np.frombuffer(data, dtype=np.uint8, count=num_blocks * block_size, offset=start)
    lo = np.frombuffer(data, dtype="<f4", count=num_blocks, offset=payload_end)
    hi = np.frombuffer(data, dtype="<f4", count=num_blocks, offset=lo_end)

    try:
        qt = QuantizedTensor(
            payload=payload.copy(),
            lo=lo.astype(np.float32),
            hi=hi.astype(np.float32),
            block_size=int(block_size),
            original_len=int(original_len),
            mode=mode,
        )
    except ValueError as e:
        raise SerializationError(f"invalid tensor body: {e}") from e
    return qt, start + body


def from_bytes(data: bytes) -> QuantizedTensor:
    qt, end = read_tensor(data)
    if end != len(data):
        raise SerializationError(f"{len(data) - end} trailing byte(s) after tensor")
    return qt

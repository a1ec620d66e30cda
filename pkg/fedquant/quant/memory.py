"""
Contabilidade de memória dos estados quantizados

Conta exatamente payload + metadados do formato binário (sem o cabeçalho
de 20 bytes). MB nos relatórios significa MiB (2**20 bytes).
"""

from dataclasses import dataclass
from typing import Any, Dict

from fedquant.quant.blockwise import QuantizedTensor

FP32_BYTES = 4
METADATA_BYTES_PER_BLOCK = 8  # lo + hi em float32
MIB = float(1 << 20)


@dataclass(frozen=True)
class MemoryReport:
    """
    Relatório de memória

    Attributes:
        payload_bytes: Bytes de códigos (inclui preenchimento)
        metadata_bytes: Bytes de escala por bloco
        padding_bytes: Bytes de preenchimento contidos em payload_bytes
        total_bytes: payload_bytes + metadata_bytes
        fp32_equivalent_bytes: 4 bytes por elemento real
        compression_ratio: fp32_equivalent_bytes / total_bytes
    """

    payload_bytes: int = 0
    metadata_bytes: int = 0
    padding_bytes: int = 0
    fp32_equivalent_bytes: int = 0

    @property
    def total_bytes(self) -> int:
        return self.payload_bytes + self.metadata_bytes

    @property
    def compression_ratio(self) -> float:
        if self.total_bytes == 0:
            return 1.0
        return self.fp32_equivalent_bytes / self.total_bytes

    @property
    def metadata_fraction(self) -> float:
        """Fração do total gasta em metadados"""
        if self.total_bytes == 0:
            return 0.0
        return self.metadata_bytes / self.total_bytes

    @property
    def total_mib(self) -> float:
        return self.total_bytes / MIB

    @property
    def fp32_mib(self) -> float:
        return self.fp32_equivalent_bytes / MIB

    def __add__(self, other: "MemoryReport") -> "MemoryReport":
        if not isinstance(other, MemoryReport):
            return NotImplemented
        return MemoryReport(
            payload_bytes=self.payload_bytes + other.payload_bytes,
            metadata_bytes=self.metadata_bytes + other.metadata_bytes,
            padding_bytes=self.padding_bytes + other.padding_bytes,
            fp32_equivalent_bytes=self.fp32_equivalent_bytes + other.fp32_equivalent_bytes,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Converte relatório para dicionário"""
        return {
            "payload_bytes": self.payload_bytes,
            "metadata_bytes": self.metadata_bytes,
            "padding_bytes": self.padding_bytes,
            "total_bytes": self.total_bytes,
            "fp32_equivalent_bytes": self.fp32_equivalent_bytes,
            "compression_ratio": self.compression_ratio,
        }


def memory_report(qt: QuantizedTensor) -> MemoryReport:
    """Bytes exatos de um QuantizedTensor"""
    return MemoryReport(
        payload_bytes=qt.num_blocks * qt.block_size,
        metadata_bytes=qt.num_blocks * METADATA_BYTES_PER_BLOCK,
        padding_bytes=qt.padding,
        fp32_equivalent_bytes=FP32_BYTES * qt.original_len,
    )


def fp32_report(num_elements: int) -> MemoryReport:
    """Relatório de um buffer mantido em FP32 (4 bytes/elemento, sem metadados)"""
    return MemoryReport(
        payload_bytes=FP32_BYTES * num_elements,
        fp32_equivalent_bytes=FP32_BYTES * num_elements,
    )


def quantized_bytes(num_elements: int, block_size: int) -> int:
    """Bytes de um buffer quantizado de N elementos sem materializá-lo"""
    num_blocks = -(-num_elements // block_size)
    return num_blocks * (block_size + METADATA_BYTES_PER_BLOCK)

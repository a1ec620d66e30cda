"""
Projeção de memória do otimizador em função de N

fp32 = 8N bytes; quantizado ~ 2N + 16N/B bytes (dois estados, cada um com
N bytes de códigos e 8 bytes por bloco). exact_bytes conta blocos inteiros,
2·ceil(N/B)·(B + 8); coincide com a fórmula quando B divide N.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Sequence

from fedquant.exceptions import ParameterError
from fedquant.quant import MIB, quantized_bytes


@dataclass(frozen=True)
class ScalingRow:
    num_params: int
    block_size: int

    @property
    def fp32_bytes(self) -> int:
        return 8 * self.num_params

    @property
    def quantized_bytes(self) -> float:
        return 2 * self.num_params + 16 * self.num_params / self.block_size

    @property
    def exact_bytes(self) -> int:
        return 2 * quantized_bytes(self.num_params, self.block_size)

    @property
    def fp32_mib(self) -> float:
        return self.fp32_bytes / MIB

    @property
    def quantized_mib(self) -> float:
        return self.quantized_bytes / MIB

    @property
    def ratio(self) -> float:
        return self.fp32_bytes / self.quantized_bytes

    @property
    def metadata_overhead(self) -> float:
        return (16 * self.num_params / self.block_size) / self.quantized_bytes

    def to_dict(self) -> Dict[str, Any]:
        return {
            "num_params": self.num_params,
            "block_size": self.block_size,
            "fp32_mib": self.fp32_mib,
            "quantized_mib": self.quantized_mib,
            "ratio": self.ratio,
            "fp32_bytes": self.fp32_bytes,
            "quantized_bytes": self.quantized_bytes,
            "exact_bytes": self.exact_bytes,
        }


def scaling_projection(param_counts: Sequence[int], block_size: int = 64) -> List[ScalingRow]:
    if block_size < 1:
        raise ParameterError(f"block size must be >= 1, got {block_size}")
    rows = []
    for n in param_counts:
        if int(n) != n or n <= 0:
            raise ParameterError(f"parameter counts must be positive integers, got {n}")
        rows.append(ScalingRow(int(n), int(block_size)))
    return rows

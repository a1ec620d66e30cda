"""
Registro por rodada
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List

from fedquant.exceptions import DataError

# Ordem fixa das chaves em metrics.jsonl
RECORD_KEYS = (
    "round",
    "test_accuracy",
    "test_loss",
    "selected_clients",
    "per_client_state_bytes",
    "per_client_steps",
)


@dataclass
class RoundMetrics:
    """
    Métricas de uma rodada

    Attributes:
        round: Índice t (a partir de 1)
        test_accuracy: Acurácia no conjunto de teste
        test_loss: Loss médio no conjunto de teste
        selected_clients: Clientes sorteados, em ordem crescente
        per_client_state_bytes: Bytes de estado do otimizador por cliente sorteado
        per_client_steps: Passos locais por cliente sorteado
        wall_ms: Tempo de parede da rodada (fora do registro determinístico)
    """

    round: int
    test_accuracy: float
    test_loss: float
    selected_clients: List[int] = field(default_factory=list)
    per_client_state_bytes: List[int] = field(default_factory=list)
    per_client_steps: List[int] = field(default_factory=list)
    wall_ms: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.test_accuracy <= 1.0:
            raise DataError(f"test_accuracy out of [0, 1]: {self.test_accuracy}")
        n = len(self.selected_clients)
        if len(self.per_client_state_bytes) != n or len(self.per_client_steps) != n:
            raise DataError("per-client lists must align with selected_clients")

    def to_record(self) -> Dict[str, Any]:
        """Registro determinístico (sem wall_ms) com ordem de chaves fixa"""
        return {
            "round": self.round,
            "test_accuracy": self.test_accuracy,
            "test_loss": self.test_loss,
            "selected_clients": list(self.selected_clients),
            "per_client_state_bytes": list(self.per_client_state_bytes),
            "per_client_steps": list(self.per_client_steps),
        }

    def to_dict(self) -> Dict[str, Any]:
        data = self.to_record()
        data["wall_ms"] = self.wall_ms
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RoundMetrics":
        return cls(
            round=int(data["round"]),
            test_accuracy=float(data["test_accuracy"]),
            test_loss=float(data["test_loss"]),
            selected_clients=[int(c) for c in data.get("selected_clients", [])],
            per_client_state_bytes=[int(b) for b in data.get("per_client_state_bytes", [])],
            per_client_steps=[int(s) for s in data.get("per_client_steps", [])],
            wall_ms=float(data.get("wall_ms", 0.0)),
        )

# fedquant/models/config.py

"""
Configuração de um experimento federado

Padrões: eta=1e-3, beta1=0.9, beta2=0.999, eps=1e-8, E=2, batch 64, B=64,
K=10 clientes com 5 sorteados por rodada, T=30, seed 42, alpha=0.1,
modo qlocaladam.
"""

from dataclasses import dataclass, field, fields
from typing import Any, Dict, Optional, Tuple

from fedquant.exceptions import ConfigurationError
from fedquant.optim import AdamHyper, OptimizerMode
from fedquant.utils import get_logger, validate_federated_config
from fedquant.utils.parser import format_alpha, parse_alpha

logger = get_logger('models.config')


@dataclass
class FederatedConfig:
    """
    Hiperparâmetros de uma execução

    Attributes:
        rounds: T
        num_clients: K
        clients_per_round: |S_t|
        local_epochs: E
        batch_size: Tamanho do mini-batch local
        mode: Modo do otimizador
        lr, beta1, beta2, eps: Hiperparâmetros do Adam
        block_size: B
        seed: Semente de todos os streams
        alpha: Concentração de Dirichlet (None = IID)
        hidden: Larguras das camadas ocultas do MLP
    """

    rounds: int = 30
    num_clients: int = 10
    clients_per_round: int = 5
    local_epochs: int = 2
    batch_size: int = 64
    mode: OptimizerMode = OptimizerMode.Q_LOCAL_ADAM
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    block_size: int = 64
    seed: int = 42
    alpha: Optional[float] = 0.1
    hidden: Tuple[int, ...] = field(default=(128, 64))

    def __post_init__(self):
        """Validar após inicialização"""
        self._validate()

    def _validate(self) -> None:
        """Valida e normaliza campos (string -> enum, 'iid' -> None)"""
        try:
            self.mode = OptimizerMode.parse(self.mode)
        except ValueError as e:
            raise ConfigurationError("mode", str(e))

        try:
            self.alpha = parse_alpha(self.alpha)
        except (TypeError, ValueError):
            raise ConfigurationError("alpha", f"must be a number or 'iid', got {self.alpha!r}")

        for name in ("lr", "beta1", "beta2", "eps"):
            value = getattr(self, name)
            if isinstance(value, str):
                try:
                    setattr(self, name, float(value))
                except ValueError:
                    raise ConfigurationError(name, f"must be a number, got {value!r}")

        try:
            self.hidden = tuple(int(h) for h in self.hidden)
        except (TypeError, ValueError):
            raise ConfigurationError("hidden", f"must be a list of integers, got {self.hidden!r}")
        if any(h < 1 for h in self.hidden):
            raise ConfigurationError("hidden", "layer widths must be >= 1")

        ok, errors = validate_federated_config(self.to_dict(raw=True))
        if not ok:
            field_name, _, message = errors[0].partition(": ")
            raise ConfigurationError(field_name, message)

        logger.debug(f"✅ Config validated: mode={self.mode}, alpha={format_alpha(self.alpha)}")

    @property
    def hyper(self) -> AdamHyper:
        return AdamHyper(lr=self.lr, beta1=self.beta1, beta2=self.beta2, eps=self.eps)

    def to_dict(self, raw: bool = False) -> Dict[str, Any]:
        """Converte config para dicionário serializável"""
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        if not raw:
            data["mode"] = str(self.mode)
            data["alpha"] = "iid" if self.alpha is None else self.alpha
            data["hidden"] = list(self.hidden)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FederatedConfig":
        """Cria config a partir de dicionário (chaves desconhecidas são erro)"""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(unknown[0], "unknown config field")
        return cls(**data)

    def replace(self, **changes: Any) -> "FederatedConfig":
        data = self.to_dict()
        data.update(changes)
        return FederatedConfig.from_dict(data)


def default_config_dict() -> Dict[str, Any]:
    """Padrões embutidos como dicionário (base da precedência de configuração)"""
    return FederatedConfig().to_dict()

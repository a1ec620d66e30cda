"""
Manifesto de execução

Gravado antes do treino; recarregá-lo reproduz a execução bit a bit.
"""

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

from fedquant.__version__ import __version__
from fedquant.exceptions import ConfigurationError
from fedquant.models.config import FederatedConfig
from fedquant.utils import get_logger

logger = get_logger('models.manifest')

DATASET_KINDS = ("synthetic", "file")


@dataclass
class RunManifest:
    """
    Attributes:
        config: Configuração resolvida
        dataset: Descritor do dataset (kind 'synthetic' ou 'file' e parâmetros)
        version: Versão do fedquant que gerou a execução
        started_at: Timestamp ISO-8601 (UTC)
        outputs: Caminhos dos arquivos de saída
    """

    config: FederatedConfig
    dataset: Dict[str, Any]
    version: str = __version__
    started_at: Optional[str] = None
    outputs: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        kind = self.dataset.get("kind")
        if kind not in DATASET_KINDS:
            raise ConfigurationError("dataset", f"unknown dataset kind {kind!r}")
        if kind == "file" and not self.dataset.get("path"):
            raise ConfigurationError("dataset", "file dataset needs a path")
        if self.started_at is None:
            self.started_at = datetime.now(timezone.utc).isoformat(timespec="seconds")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "version": self.version,
            "started_at": self.started_at,
            "config": self.config.to_dict(),
            "dataset": dict(self.dataset),
            "outputs": dict(self.outputs),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        return cls(
            config=FederatedConfig.from_dict(data["config"]),
            dataset=dict(data["dataset"]),
            version=data.get("version", __version__),
            started_at=data.get("started_at"),
            outputs=dict(data.get("outputs", {})),
        )

    def save(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
        logger.debug(f"Manifest written to {path}")
        return path

    @classmethod
    def load(cls, path) -> "RunManifest":
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        if data.get("version") != __version__:
            logger.warning(
                f"⚠️  Manifest was written by fedquant {data.get('version')}, running {__version__}"
            )
        return cls.from_dict(data)

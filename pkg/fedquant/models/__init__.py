# fedquant/models/__init__.py
"""
Modelos de dados para fedquant
Estruturas dataclass para validação e serialização de execuções
"""

from .config import FederatedConfig, default_config_dict
from .metrics import RECORD_KEYS, RoundMetrics
from .manifest import RunManifest

__all__ = [
    'FederatedConfig',
    'default_config_dict',
    'RECORD_KEYS',
    'RoundMetrics',
    'RunManifest',
]

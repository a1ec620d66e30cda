"""
Leitura de arquivos de configuração (YAML ou JSON) e mesclagem com flags

Precedência: flags > arquivo > padrões.
"""

from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from fedquant.exceptions import ConfigurationError
from fedquant.utils.logging import get_logger

logger = get_logger('config')


def _normalize_key(key: str) -> str:
    return str(key).strip().replace("-", "_")


def load_config_file(path: str) -> Dict[str, Any]:
    """
    Carregar arquivo de configuração

    JSON é um subconjunto de YAML, então yaml.safe_load cobre os dois.

    Args:
        path: Caminho para .yaml/.yml/.json

    Returns:
        dict: Campos com chaves normalizadas ('block-size' -> 'block_size')
    """
    config_path = Path(path)
    with open(config_path, "r", encoding="utf-8") as f:
        content = f.read()

    try:
        data = yaml.safe_load(content)
    except yaml.YAMLError as e:
        raise ConfigurationError("config", f"could not parse {config_path}: {e}") from e

    if data is None:
        logger.warning(f"⚠️  Empty config file: {config_path}")
        return {}
    if not isinstance(data, dict):
        raise ConfigurationError(
            "config", f"{config_path} must contain a mapping, got {type(data).__name__}"
        )

    # Seção 'hyper' opcional é achatada
    hyper = data.pop("hyper", None) or {}
    if not isinstance(hyper, dict):
        raise ConfigurationError("hyper", "must be a mapping")
    data.update(hyper)

    normalized = {_normalize_key(k): v for k, v in data.items()}
    logger.info(f"✅ Loaded config file {config_path} ({len(normalized)} fields)")
    return normalized


def merge_config(
    defaults: Mapping[str, Any],
    file_values: Optional[Mapping[str, Any]] = None,
    flag_values: Optional[Mapping[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Mesclar camadas de configuração

    Args:
        defaults: Padrões embutidos
        file_values: Valores do arquivo (chaves desconhecidas são rejeitadas)
        flag_values: Flags da CLI; None significa 'não informado'

    Returns:
        dict: Configuração resolvida
    """
    merged = dict(defaults)

    for key, value in (file_values or {}).items():
        if key not in merged:
            raise ConfigurationError(key, "unknown field in config file")
        merged[key] = value

    for key, value in (flag_values or {}).items():
        if value is None:
            continue
        if key not in merged:
            raise ConfigurationError(key, "unknown flag")
        merged[key] = value

    return merged

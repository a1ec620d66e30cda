"""Parsing de valores da CLI e de arquivos de métricas com um JSON por linha"""

import json
from typing import Any, Dict, List, Optional, Tuple

from fedquant.utils.logging import get_logger

logger = get_logger('parser')

IID_SENTINELS = ("iid", "inf", "none")


def parse_alpha(text: Any) -> Optional[float]:
    """'iid' -> None, qualquer outro valor -> float"""
    if text is None:
        return None
    if isinstance(text, str) and text.strip().lower() in IID_SENTINELS:
        return None
    return float(text)


def format_alpha(alpha: Optional[float]) -> str:
    return "iid" if alpha is None else repr(float(alpha))


def parse_float_list(text: str) -> List[float]:
    items = [item.strip() for item in str(text).split(",")]
    return [float(item) for item in items if item]


def parse_int_list(text: str) -> List[int]:
    # Accepts '10e6' style counts
    return [int(round(value)) for value in parse_float_list(text)]


def parse_dataset_spec(spec: str) -> Tuple[str, Optional[str]]:
    """
    'synthetic' -> ('synthetic', None); 'file:<path>' -> ('file', path)
    """
    spec = spec.strip()
    if spec == "synthetic":
        return ("synthetic", None)
    if spec.startswith("file:") and len(spec) > len("file:"):
        return ("file", spec[len("file:"):])
    raise ValueError(f"Unknown dataset spec: {spec!r} (expected 'synthetic' or 'file:<path>')")


def dumps_record(record: Dict[str, Any]) -> str:
    """Uma linha JSON autocontida com ordem de chaves fixa"""
    return json.dumps(record, sort_keys=False, separators=(",", ":"), allow_nan=False)


def read_jsonl(path: str) -> List[Dict[str, Any]]:
    """
    Lê um arquivo com um JSON por linha

    Uma última linha truncada (escrita interrompida) é descartada com aviso;
    uma linha malformada em qualquer outro ponto é erro.
    """
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().split("\n")

    if lines and lines[-1] == "":
        lines.pop()

    records: List[Dict[str, Any]] = []
    for index, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            if index == len(lines) - 1:
                logger.warning(f"⚠️  Dropping truncated final line in {path}")
                break
            raise ValueError(f"{path}:{index + 1}: malformed record")
        if not isinstance(obj, dict):
            raise ValueError(f"{path}:{index + 1}: expected JSON object, got {type(obj).__name__}")
        records.append(obj)

    return records

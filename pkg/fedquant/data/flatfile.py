"""
Arquivos de dataset

Formato texto (separado por espaços, uma amostra por linha)::

    n features classes
    label f_1 ... f_features
    ...

Arquivos ``.npz`` com os arrays ``x``, ``y`` e o escalar ``num_classes`` são
aceitos como variante binária.
"""

import re
from pathlib import Path
from typing import List, Union

import numpy as np

from fedquant.data.dataset import Dataset
from fedquant.exceptions import DataError, FlatFileParseError
from fedquant.utils import get_logger

logger = get_logger('data.flatfile')

_TOKEN = re.compile(r"\S+")

PathLike = Union[str, Path]


def _parse_int(token: str, path: str, line: int, offset: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FlatFileParseError(path, line, f"{what} must be an integer, got {token!r}", offset)


def _load_npz(path: Path) -> Dataset:
    try:
        with np.load(path, allow_pickle=False) as archive:
            x, y, classes = archive["x"], archive["y"], int(archive["num_classes"])
    except KeyError as e:
        raise FlatFileParseError(str(path), 0, f"missing array {e} in archive")
    except ValueError as e:
        raise FlatFileParseError(str(path), 0, f"unreadable archive: {e}")
    return Dataset(x=x, y=y, num_classes=classes)


def load_flat_file(path: PathLike) -> Dataset:
    """
    Lê um arquivo de dataset

    Raises:
        FlatFileParseError: cabeçalho ou linha malformados (com linha e coluna)
        DataError: rótulo fora de [0, classes)
        OSError: arquivo ilegível
    """
    path = Path(path)
    if path.suffix == ".npz":
        return _load_npz(path)

    name = str(path)
    with open(path, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()

    # Skip leading blank lines to the header
    first = next((i for i, text in enumerate(lines) if text.strip()), None)
    if first is None:
        raise FlatFileParseError(name, 1, "empty file, expected header 'n features classes'")

    header = list(_TOKEN.finditer(lines[first]))
    if len(header) != 3:
        raise FlatFileParseError(
            name, first + 1, f"header must have 3 fields (n features classes), found {len(header)}"
        )
    n, features, classes = (
        _parse_int(m.group(), name, first + 1, m.start() + 1, label)
        for m, label in zip(header, ("n", "features", "classes"))
    )
    if n < 1 or features < 1 or classes < 1:
        raise FlatFileParseError(name, first + 1, "n, features and classes must be >= 1")

    x = np.empty((n, features), dtype=np.float32)
    y = np.empty(n, dtype=np.int64)
    row = 0
    for line_no in range(first + 2, len(lines) + 1):
        text = lines[line_no - 1]
        tokens = list(_TOKEN.finditer(text))
        if not tokens:
            continue
        if row >= n:
            raise FlatFileParseError(name, line_no, f"more than {n} sample rows", tokens[0].start() + 1)
        if len(tokens) != features + 1:
            raise FlatFileParseError(
                name, line_no, f"expected {features + 1} fields, found {len(tokens)}",
                tokens[min(len(tokens), features + 1) - 1].start() + 1,
            )
        label = _parse_int(tokens[0].group(), name, line_no, tokens[0].start() + 1, "label")
        if not 0 <= label < classes:
            raise DataError(f"{name}:{line_no}: label {label} outside [0, {classes})")
        y[row] = label
        for j, m in enumerate(tokens[1:]):
            try:
                x[row, j] = float(m.group())
            except ValueError:
                raise FlatFileParseError(name, line_no, f"bad feature value {m.group()!r}", m.start() + 1)
        row += 1

    if row != n:
        raise FlatFileParseError(name, len(lines) + 1, f"header declares {n} samples, found {row}")

    logger.info(f"✅ Loaded {name}: {n} samples, {features} features, {classes} classes")
    return Dataset(x=x, y=y, num_classes=classes)


def save_flat_file(dataset: Dataset, path: PathLike) -> Path:
    """Grava ``dataset``; linhas de texto usam 9 dígitos significativos e o float32 volta exato"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix == ".npz":
        np.savez(path, x=dataset.x, y=dataset.y, num_classes=np.int64(dataset.num_classes))
        return path

    lines: List[str] = [f"{len(dataset)} {dataset.num_features} {dataset.num_classes}"]
    for label, row in zip(dataset.y, dataset.x):
        lines.append(" ".join([str(int(label))] + [format(float(v), ".9g") for v in row]))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {len(dataset)} samples to {path}")
    return path

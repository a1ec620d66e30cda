"""
Dados de classificação em blobs gaussianos

A classe ``c`` fica centrada em ``class_sep * u_c`` para direções unitárias
aleatórias ``u_c``; o ruído tem covariância identidade. Rótulos são
``i % C``, então as classes diferem em no máximo uma amostra.
"""

from typing import Optional, Tuple

import numpy as np

from fedquant.data.dataset import Dataset
from fedquant.exceptions import DimensionError, ParameterError
from fedquant.ndcore import STREAM_DATA, STREAM_TEST_DATA, RngStream, sample_gaussian
from fedquant.utils import get_logger

logger = get_logger('data.synthetic')


def class_directions(rng: RngStream, features: int, classes: int) -> np.ndarray:
    """Vetores unitários u_c, uma linha por classe"""
    raw = sample_gaussian(rng, 0.0, 1.0, (classes, features)).astype(np.float64)
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return (raw / norms).astype(np.float32)


def generate_synthetic(
    rng: RngStream,
    n: int,
    features: int,
    classes: int,
    class_sep: float,
    directions: Optional[np.ndarray] = None,
) -> Dataset:
    """
    Sorteia ``n`` amostras; as direções saem primeiro de ``rng`` se não forem dadas
    """
    if classes < 2:
        raise ParameterError(f"need at least 2 classes, got {classes}")
    if features < 1:
        raise ParameterError(f"features must be >= 1, got {features}")
    if n < classes:
        raise ParameterError(f"n={n} is smaller than the number of classes {classes}")
    if not np.isfinite(class_sep) or class_sep < 0:
        raise ParameterError(f"class_sep must be >= 0, got {class_sep}")

    if directions is None:
        directions = class_directions(rng, features, classes)
    elif directions.shape != (classes, features):
        raise DimensionError(f"directions must be {classes}×{features}, got {directions.shape}")

    y = np.arange(n, dtype=np.int64) % classes
    noise = sample_gaussian(rng, 0.0, 1.0, (n, features))
    x = np.float32(class_sep) * directions[y] + noise
    return Dataset(x=x, y=y, num_classes=classes)


def generate_synthetic_split(
    seed: int,
    n_train: int,
    n_test: int,
    features: int = 64,
    classes: int = 10,
    class_sep: float = 3.0,
) -> Tuple[Dataset, Dataset]:
    """Treino e teste com as mesmas direções de classe, em streams separados"""
    train_rng = RngStream(seed, STREAM_DATA)
    directions = class_directions(train_rng, features, classes)
    train = generate_synthetic(train_rng, n_train, features, classes, class_sep, directions)
    test = generate_synthetic(
        RngStream(seed, STREAM_TEST_DATA), n_test, features, classes, class_sep, directions
    )
    logger.info(
        f"✅ Synthetic data: {n_train} train / {n_test} test, "
        f"{features} features, {classes} classes, sep={class_sep}"
    )
    return train, test

"""
Modelo de dados do dataset
"""

from dataclasses import dataclass
from typing import Dict, Any, Optional, Sequence

import numpy as np

from fedquant.exceptions import DataError, DimensionError, ParameterError
from fedquant.utils import get_logger

logger = get_logger('data.dataset')


@dataclass
class Dataset:
    """
    Conjunto rotulado

    Attributes:
        x: Features float32 [n×features]
        y: Rótulos int64 [n] em [0, num_classes)
        num_classes: C
    """

    x: np.ndarray
    y: np.ndarray
    num_classes: int

    def __post_init__(self):
        self.x = np.ascontiguousarray(self.x, dtype=np.float32)
        self.y = np.ascontiguousarray(self.y, dtype=np.int64)
        self._validate()

    def _validate(self) -> None:
        if self.num_classes < 1:
            raise ParameterError(f"num_classes must be >= 1, got {self.num_classes}")
        if self.x.ndim != 2:
            raise DimensionError(f"x must be 2-D, got shape {self.x.shape}")
        if self.y.shape != (self.x.shape[0],):
            raise DimensionError(f"{self.x.shape[0]} samples but {self.y.shape} labels")
        if self.x.shape[0] < 1:
            raise ParameterError("dataset must hold at least one sample")
        if self.y.min() < 0 or self.y.max() >= self.num_classes:
            raise DataError(f"labels must lie in [0, {self.num_classes})")
        if not np.all(np.isfinite(self.x)):
            raise DataError("features contain non-finite values")

    def __len__(self) -> int:
        return self.x.shape[0]

    @property
    def num_features(self) -> int:
        return self.x.shape[1]

    def subset(self, indices: Sequence[int]) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.x[idx], self.y[idx], self.num_classes)

    def class_histogram(self, indices: Optional[Sequence[int]] = None) -> np.ndarray:
        """Contagem por classe (do conjunto inteiro ou dos índices dados)"""
        labels = self.y if indices is None else self.y[np.asarray(indices, dtype=np.int64)]
        return np.bincount(labels, minlength=self.num_classes).astype(np.int64)

    def describe(self) -> Dict[str, Any]:
        """Descritor curto usado no manifesto"""
        return {
            "samples": len(self),
            "features": self.num_features,
            "classes": self.num_classes,
        }

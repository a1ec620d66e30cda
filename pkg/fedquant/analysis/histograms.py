"""
Histogramas do estado do otimizador: m em 100 bins lineares, v em bins log10
de um quarto de década. Variâncias zero vão para uma contagem de underflow
explícita, logo ``sum(counts) + underflow == total``.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

import numpy as np

from fedquant.optim import AdamState, dequantize_state

LINEAR_BINS = 100
LOG_BIN_WIDTH = 0.25


@dataclass
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    total: int
    data_min: float
    data_max: float
    scale: str = "linear"
    underflow: int = 0

    def __post_init__(self):
        if self.edges.size != self.counts.size + 1 or np.any(np.diff(self.edges) <= 0):
            raise ValueError("histogram edges must be strictly increasing, one more than counts")
        if int(self.counts.sum()) + self.underflow != self.total:
            raise ValueError("histogram counts do not conserve the element total")

    @property
    def decades_spanned(self) -> float:
        """log10(max / min) dos dados positivos (só histogramas log)"""
        if self.scale != "log10" or self.data_min <= 0:
            return 0.0
        return float(np.log10(self.data_max / self.data_min))

    def to_rows(self) -> List[Tuple[float, float, int]]:
        return [
            (float(lo), float(hi), int(c))
            for lo, hi, c in zip(self.edges[:-1], self.edges[1:], self.counts)
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scale": self.scale,
            "total": self.total,
            "underflow": self.underflow,
            "min": self.data_min,
            "max": self.data_max,
            "edges": [float(e) for e in self.edges],
            "counts": [int(c) for c in self.counts],
        }


def linear_histogram(values: np.ndarray, bins: int = LINEAR_BINS) -> Histogram:
    values = np.asarray(values, dtype=np.float64).ravel()
    lo, hi = float(values.min()), float(values.max())
    lo_edge, hi_edge = (lo - 0.5, hi + 0.5) if lo == hi else (lo, hi)
    counts, edges = np.histogram(values, bins=bins, range=(lo_edge, hi_edge))
    return Histogram(edges, counts.astype(np.int64), int(values.size), lo, hi, "linear")


def log10_histogram(values: np.ndarray, bin_width: float = LOG_BIN_WIDTH) -> Histogram:
    values = np.asarray(values, dtype=np.float64).ravel()
    positive = values[values > 0]
    underflow = int(values.size - positive.size)

    if positive.size == 0:
        edges = np.array([0.0, bin_width])
        return Histogram(edges, np.zeros(1, np.int64), int(values.size), 0.0, 0.0, "log10", underflow)

    logs = np.log10(positive)
    lo_edge = np.floor(logs.min() / bin_width) * bin_width
    hi_edge = np.ceil(logs.max() / bin_width) * bin_width
    if hi_edge <= lo_edge:
        hi_edge = lo_edge + bin_width
    num_bins = int(round((hi_edge - lo_edge) / bin_width))
    edges = lo_edge + bin_width * np.arange(num_bins + 1)
    counts, _ = np.histogram(logs, bins=edges)
    return Histogram(
        edges, counts.astype(np.int64), int(values.size),
        float(positive.min()), float(positive.max()), "log10", underflow,
    )


def state_histograms(state: AdamState) -> Tuple[Histogram, Histogram]:
    """(histograma de m, histograma de v) sobre todos os tensores do estado"""
    ms, vs = dequantize_state(state)
    m_all = np.concatenate([m.ravel() for m in ms])
    v_all = np.concatenate([v.ravel() for v in vs])
    if m_all.size == 0:
        raise ValueError("state has no elements")
    return linear_histogram(m_all), log10_histogram(v_all)

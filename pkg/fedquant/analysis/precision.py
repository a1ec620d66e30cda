"""
Precisão de 8 bits sobre dados log-uniformes

Compara o quantizador em espaço log (em blocos) com os códigos de árvore
dinâmica. Erro relativo = |x̃ - x| / max(x, piso), piso padrão 1e-30.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from fedquant.exceptions import ParameterError
from fedquant.ndcore import RngStream
from fedquant.optim import StateStorage, storage_roundtrip
from fedquant.quant import (
    DEFAULT_EPSILON,
    Rounding,
    dequantize_dynamic_tree,
    dequantize_log,
    quantize_dynamic_tree,
    quantize_linear,
    quantize_log,
)
from fedquant.utils import get_logger

logger = get_logger('analysis.precision')

RELATIVE_FLOOR = 1e-30


@dataclass
class PrecisionReport:
    """
    Erro de um esquema

    Attributes:
        scheme: Nome do esquema
        mean_relative_error: Média do erro relativo
        per_decade: (início da década, fim, erro médio, amostras) por década
        n: Número de amostras
    """

    scheme: str
    mean_relative_error: float
    per_decade: List[Tuple[float, float, float, int]] = field(default_factory=list)
    n: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scheme": self.scheme,
            "mean_relative_error": self.mean_relative_error,
            "n": self.n,
            "per_decade": [
                {"lo": lo, "hi": hi, "mean_relative_error": err, "count": count}
                for lo, hi, err, count in self.per_decade
            ],
        }


@dataclass
class FidelityReport:
    """Qualidade de um formato de armazenamento sobre um array"""

    storage: str
    mean_relative_error: float
    fraction_over_half: float
    zero_code_fraction: float
    n: int

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.__dict__)


def relative_error(x: np.ndarray, x_hat: np.ndarray, floor: float = RELATIVE_FLOOR) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    x_hat = np.asarray(x_hat, dtype=np.float64)
    return np.abs(x_hat - x) / np.maximum(np.abs(x), floor)


def sample_log_uniform(rng: RngStream, n: int, lo: float, hi: float) -> np.ndarray:
    """exp(U(ln lo, ln hi)) em float32"""
    if not (np.isfinite(lo) and np.isfinite(hi)) or lo <= 0:
        raise ParameterError(f"log-uniform sampling needs 0 < lo, got lo={lo}")
    if hi <= lo:
        raise ParameterError(f"need lo < hi, got lo={lo}, hi={hi}")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    return np.exp(rng.generator.uniform(np.log(lo), np.log(hi), size=int(n))).astype(np.float32)


def _decade_breakdown(x: np.ndarray, errors: np.ndarray) -> List[Tuple[float, float, float, int]]:
    exponents = np.floor(np.log10(x.astype(np.float64)))
    rows = []
    for e in range(int(exponents.min()), int(exponents.max()) + 1):
        mask = exponents == e
        count = int(mask.sum())
        mean = float(errors[mask].mean()) if count else 0.0
        rows.append((10.0 ** e, 10.0 ** (e + 1), mean, count))
    return rows


def _report(scheme: str, x: np.ndarray, x_hat: np.ndarray) -> PrecisionReport:
    errors = relative_error(x, x_hat)
    return PrecisionReport(
        scheme=scheme,
        mean_relative_error=float(errors.mean()),
        per_decade=_decade_breakdown(x, errors),
        n=int(x.size),
    )


def log_space_roundtrip(
    x: np.ndarray, block_size: int, rounding: Rounding, epsilon: float = DEFAULT_EPSILON
) -> np.ndarray:
    return dequantize_log(quantize_log(x, block_size, epsilon, rounding))


def dynamic_tree_roundtrip(x: np.ndarray) -> np.ndarray:
    codes, absmax = quantize_dynamic_tree(x)
    return dequantize_dynamic_tree(codes, absmax)


def precision_study(
    rng: RngStream,
    n: int = 3000,
    lo: float = 1e-7,
    hi: float = 1.0,
    block_size: int = 64,
    rounding: Rounding = Rounding.FLOOR,
) -> Tuple[PrecisionReport, PrecisionReport]:
    """
    Amostrar n valores log-uniformes em [lo, hi] e medir os dois esquemas

    O quantizador log usa FLOOR por padrão, a mesma regra do estado
    armazenado; NEAREST está em precision_variants.

    Returns:
        (relatório log-space, relatório árvore dinâmica)
    """
    x = sample_log_uniform(rng, n, lo, hi)
    log_report = _report("log-space", x, log_space_roundtrip(x, block_size, Rounding(rounding)))
    tree_report = _report("dynamic-tree", x, dynamic_tree_roundtrip(x))
    logger.info(
        f"Precision study n={n} [{lo:g}, {hi:g}] B={block_size}: "
        f"log-space {100 * log_report.mean_relative_error:.2f}%, "
        f"dynamic-tree {100 * tree_report.mean_relative_error:.2f}%"
    )
    return log_report, tree_report


def precision_variants(
    rng: RngStream,
    n: int = 3000,
    lo: float = 1e-7,
    hi: float = 1.0,
    block_size: int = 64,
) -> List[PrecisionReport]:
    """Log-space com FLOOR/NEAREST e blocos de B vs. o array inteiro como um bloco"""
    x = sample_log_uniform(rng, n, lo, hi)
    reports = []
    for blocking, size in (("blockwise", block_size), ("whole-array", x.size)):
        for rounding in (Rounding.NEAREST, Rounding.FLOOR):
            name = f"log-space/{blocking}/{rounding}"
            reports.append(_report(name, x, log_space_roundtrip(x, size, rounding)))
    return reports


def storage_fidelity(
    values,
    storage: StateStorage,
    block_size: int = 64,
    floor: float = RELATIVE_FLOOR,
    epsilon: float = DEFAULT_EPSILON,
) -> FidelityReport:
    """
    Erro de guardar ``values`` num formato de estado do otimizador

    zero_code_fraction conta elementos reconstruídos como o mínimo do bloco
    (código 0), o que mostra quantos valores pequenos colapsam num só nível.
    """
    storage = StateStorage(storage)
    x = np.asarray(values, dtype=np.float32).ravel()
    x_hat = storage_roundtrip(x, storage, block_size, epsilon)
    errors = relative_error(x, x_hat, floor)

    if storage is StateStorage.LINEAR_INT8:
        codes = quantize_linear(x, block_size).codes()
        zero_fraction = float(np.mean(codes == 0))
    elif storage is StateStorage.LOG_INT8:
        codes = quantize_log(x, block_size, epsilon).codes()
        zero_fraction = float(np.mean(codes == 0))
    else:
        zero_fraction = 0.0

    return FidelityReport(
        storage=str(storage),
        mean_relative_error=float(errors.mean()),
        fraction_over_half=float(np.mean(errors > 0.5)),
        zero_code_fraction=zero_fraction,
        n=int(x.size),
    )

"""
Streams aleatórios determinísticos

Cada stream é um ``Generator`` do numpy sobre o gerador Philox (baseado em
contador) com chave ``(stream_id << 64) | seed``. ``fork(offset)`` coloca o
offset na palavra de 64 bits mais alta do contador de 256 bits: forks de um
mesmo stream não se sobrepõem na prática e não dependem de quanto o pai já
consumiu.
"""

from typing import Sequence, Union

import numpy as np

from fedquant.exceptions import ParameterError

_MASK64 = (1 << 64) - 1

# Stream ids used across the simulator
STREAM_DATA = 1
STREAM_TEST_DATA = 2
STREAM_PARTITION = 3
STREAM_MODEL_INIT = 4
STREAM_SAMPLING = 5
STREAM_ANALYSIS = 6
STREAM_CLIENT_BASE = 1000


class RngStream:
    """Stream identificado por (seed, stream_id, offset)"""

    def __init__(self, seed: int, stream_id: int = 0, offset: int = 0):
        for label, value in (("seed", seed), ("stream_id", stream_id), ("offset", offset)):
            if int(value) != value or not 0 <= int(value) <= _MASK64:
                raise ParameterError(f"{label} must be a 64-bit unsigned integer, got {value!r}")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.offset = int(offset)
        bit_generator = np.random.Philox(
            key=(self.stream_id << 64) | self.seed,
            counter=self.offset << 192,
        )
        self.generator = np.random.Generator(bit_generator)

    def child(self, stream_id: int) -> "RngStream":
        """Stream novo com a mesma seed e outro id"""
        return RngStream(self.seed, stream_id)

    def fork(self, offset: int) -> "RngStream":
        """Stream novo com o mesmo (seed, stream_id) no bloco de contador ``offset``"""
        return RngStream(self.seed, self.stream_id, offset)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, offset={self.offset})"


Size = Union[int, Sequence[int]]


def sample_gaussian(rng: RngStream, mean: float, std: float, n: Size) -> np.ndarray:
    """Amostras FP32 de N(mean, std²); ``n`` é uma contagem ou uma forma"""
    if not np.isfinite(std) or std < 0:
        raise ParameterError(f"std must be >= 0, got {std}")
    if not np.isfinite(mean):
        raise ParameterError(f"mean must be finite, got {mean}")
    draws = rng.generator.normal(loc=float(mean), scale=float(std), size=n)
    return draws.astype(np.float32)


def sample_dirichlet(rng: RngStream, alpha: float, n: int) -> np.ndarray:
    """
    Amostra de Dirichlet(alpha, ..., alpha) simétrica de tamanho ``n`` (float64)

    Gammas normalizadas. Para alpha < 1 as gammas são formadas em espaço log
    como Gamma(alpha + 1) * U**(1/alpha) e normalizadas com log-sum-exp; assim
    alphas minúsculos não viram um vetor todo zero.
    """
    if not np.isfinite(alpha) or alpha <= 0:
        raise ParameterError(f"alpha must be > 0, got {alpha}")
    if int(n) != n or n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    n = int(n)
    if n == 1:
        return np.ones(1, dtype=np.float64)

    gen = rng.generator
    if alpha >= 1.0:
        gammas = gen.standard_gamma(alpha, size=n)
        total = gammas.sum()
        if total > 0:
            return gammas / total

    log_g = np.log(gen.standard_gamma(alpha + 1.0, size=n)) + np.log(gen.random(n)) / alpha
    log_g -= log_g.max()
    weights = np.exp(log_g)
    return weights / weights.sum()

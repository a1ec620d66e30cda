"""
Sorteio de clientes: uniforme sem reposição dentro da rodada e independente
entre rodadas (a rodada ``t`` usa o stream de sorteio com fork em ``t``)
"""

from typing import Dict, List

import numpy as np

from fedquant.exceptions import ParameterError
from fedquant.ndcore import STREAM_SAMPLING, RngStream


def sample_clients(rng: RngStream, num_clients: int, clients_per_round: int) -> List[int]:
    """Ids ordenados dos clientes sorteados na rodada"""
    if num_clients < 1:
        raise ParameterError(f"num_clients must be >= 1, got {num_clients}")
    if not 1 <= clients_per_round <= num_clients:
        raise ParameterError(
            f"clients_per_round must lie in [1, {num_clients}], got {clients_per_round}"
        )
    if clients_per_round == num_clients:
        return list(range(num_clients))
    chosen = rng.generator.choice(num_clients, size=clients_per_round, replace=False)
    return sorted(int(c) for c in chosen)


def round_sampler(seed: int) -> RngStream:
    return RngStream(seed, STREAM_SAMPLING)


def selection_counts(seed: int, num_clients: int, clients_per_round: int, rounds: int) -> np.ndarray:
    """Quantas vezes cada cliente é sorteado em ``rounds`` rodadas com ``seed``"""
    sampler = round_sampler(seed)
    counts = np.zeros(num_clients, dtype=np.int64)
    for t in range(1, rounds + 1):
        counts[sample_clients(sampler.fork(t), num_clients, clients_per_round)] += 1
    return counts


def selection_stats(counts: np.ndarray) -> Dict[str, float]:
    counts = np.asarray(counts, dtype=np.float64)
    return {
        "mean": float(counts.mean()),
        "std": float(counts.std()),
        "min": float(counts.min()),
        "max": float(counts.max()),
    }

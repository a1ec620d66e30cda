"""
Particionamento não-IID por Dirichlet e estatísticas de heterogeneidade

Para cada classe sorteia-se p ~ Dir(alpha, ..., alpha) sobre K clientes e as
amostras embaralhadas da classe são cortadas nas proporções acumuladas.
alpha=None é a sentinela IID: cada classe é distribuída em round-robin.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from fedquant.data.dataset import Dataset
from fedquant.exceptions import ParameterError
from fedquant.ndcore import RngStream, sample_dirichlet
from fedquant.utils import get_logger, validate_alpha

logger = get_logger('data.partition')

MAX_REDRAWS = 100


@dataclass
class ClientPartition:
    """
    Amostras de um cliente

    Attributes:
        client_id: Índice do cliente
        sample_indices: Índices (ordenados) no dataset pai
        class_histogram: Contagem por classe
    """

    client_id: int
    sample_indices: np.ndarray
    class_histogram: np.ndarray

    def __len__(self) -> int:
        return int(self.sample_indices.size)

    @property
    def dominant(self) -> Tuple[int, float]:
        """(classe dominante, fração); empate vai para a menor classe"""
        total = int(self.class_histogram.sum())
        if total == 0:
            return (0, 0.0)
        cls = int(np.argmax(self.class_histogram))
        return (cls, float(self.class_histogram[cls]) / total)


@dataclass
class HeterogeneityStats:
    """
    Estatísticas de heterogeneidade

    Attributes:
        avg_dominant_pct: Média da fração da classe dominante (em [1/C, 1])
        per_client_dominant: (classe, fração) por cliente
        sample_std: Desvio padrão populacional das contagens
        sample_counts: Amostras por cliente
    """

    avg_dominant_pct: float
    per_client_dominant: List[Tuple[int, float]] = field(default_factory=list)
    sample_std: float = 0.0
    sample_counts: List[int] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "avg_dominant_pct": self.avg_dominant_pct,
            "per_client_dominant": [list(d) for d in self.per_client_dominant],
            "sample_std": self.sample_std,
            "sample_counts": list(self.sample_counts),
        }


def _split_iid(labels: np.ndarray, num_clients: int, num_classes: int) -> List[List[np.ndarray]]:
    shards: List[List[np.ndarray]] = [[] for _ in range(num_clients)]
    cursor = 0
    for c in range(num_classes):
        members = np.flatnonzero(labels == c)
        owners = (cursor + np.arange(members.size)) % num_clients
        for k in range(num_clients):
            shards[k].append(members[owners == k])
        cursor += members.size
    return shards


def _split_dirichlet(
    rng: RngStream, labels: np.ndarray, num_clients: int, num_classes: int, alpha: float
) -> List[List[np.ndarray]]:
    shards: List[List[np.ndarray]] = [[] for _ in range(num_clients)]
    for c in range(num_classes):
        members = np.flatnonzero(labels == c)
        proportions = sample_dirichlet(rng, alpha, num_clients)
        members = rng.generator.permutation(members)
        cuts = np.floor(np.cumsum(proportions)[:-1] * members.size).astype(np.int64)
        for k, piece in enumerate(np.split(members, cuts)):
            shards[k].append(piece)
    return shards


def partition_dirichlet(
    rng: RngStream,
    dataset: Dataset,
    num_clients: int,
    alpha: Optional[float],
) -> List[ClientPartition]:
    """
    Particionar o dataset entre K clientes

    Args:
        rng: Stream de particionamento
        dataset: Dataset pai (só os rótulos são usados)
        num_clients: K >= 1
        alpha: Concentração > 0, ou None para IID

    Returns:
        list[ClientPartition] disjuntos que cobrem o dataset

    Raises:
        ParameterError: K > n, alpha inválido, ou nenhum sorteio em
            MAX_REDRAWS deixa todos os clientes com amostras
    """
    if isinstance(num_clients, bool) or int(num_clients) != num_clients or num_clients < 1:
        raise ParameterError(f"num_clients must be >= 1, got {num_clients}")
    if num_clients > len(dataset):
        raise ParameterError(f"num_clients={num_clients} exceeds dataset size {len(dataset)}")
    if not validate_alpha(alpha):
        raise ParameterError(f"alpha must be > 0 or iid, got {alpha}")

    labels = dataset.y
    C = dataset.num_classes

    if alpha is None:
        shards = _split_iid(labels, num_clients, C)
    else:
        for attempt in range(1, MAX_REDRAWS + 1):
            shards = _split_dirichlet(rng, labels, num_clients, C, float(alpha))
            if all(sum(p.size for p in pieces) > 0 for pieces in shards):
                break
            logger.debug(f"Empty client in draw {attempt}, redrawing partition")
        else:
            raise ParameterError(
                f"no partition with nonempty clients after {MAX_REDRAWS} draws "
                f"(K={num_clients}, alpha={alpha})"
            )

    partitions = []
    for k, pieces in enumerate(shards):
        indices = np.sort(np.concatenate(pieces)) if pieces else np.zeros(0, np.int64)
        partitions.append(
            ClientPartition(
                client_id=k,
                sample_indices=indices.astype(np.int64),
                class_histogram=np.bincount(labels[indices], minlength=C).astype(np.int64),
            )
        )

    sizes = [len(p) for p in partitions]
    logger.debug(f"Partitioned {len(dataset)} samples over {num_clients} clients: {sizes}")
    return partitions


def heterogeneity_stats(partitions: List[ClientPartition], dataset: Dataset) -> HeterogeneityStats:
    """
    Fração dominante por cliente (denominador = amostras do próprio cliente),
    sua média, e desvio padrão populacional das contagens
    """
    dominant = [p.dominant for p in partitions]
    counts = [len(p) for p in partitions]
    nonempty = [pct for (_, pct), n in zip(dominant, counts) if n > 0]
    return HeterogeneityStats(
        avg_dominant_pct=float(np.mean(nonempty)) if nonempty else 0.0,
        per_client_dominant=dominant,
        sample_std=float(np.std(np.asarray(counts, dtype=np.float64))),
        sample_counts=counts,
    )

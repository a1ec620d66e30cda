"""
FedAvg: média ponderada por |D_k|, acumulada em float64
"""

from typing import List, Optional, Sequence

import numpy as np

from fedquant.exceptions import DimensionError, ParameterError


def aggregation_weights(client_sizes: Sequence[int]) -> np.ndarray:
    """|D_k| / sum_j |D_j| (float64)"""
    sizes = np.asarray(client_sizes, dtype=np.float64)
    if sizes.size == 0:
        raise ParameterError("aggregate needs at least one client")
    if np.any(sizes <= 0):
        raise ParameterError(f"client sizes must be > 0, got {list(client_sizes)}")
    return sizes / sizes.sum()


def aggregate(
    client_params: Sequence[Sequence[np.ndarray]],
    client_sizes: Sequence[int],
    client_ids: Optional[Sequence[int]] = None,
) -> List[np.ndarray]:
    """
    theta = sum_k (|D_k| / sum_j |D_j|) · theta_k

    Args:
        client_params: Lista de tensores por cliente
        client_sizes: |D_k| por cliente
        client_ids: Se dado, a soma segue a ordem crescente de id, independente
            da ordem de chegada

    Returns:
        Tensores agregados (float32)
    """
    if len(client_params) != len(client_sizes):
        raise DimensionError(
            f"{len(client_params)} client models but {len(client_sizes)} sizes"
        )
    weights = aggregation_weights(client_sizes)

    order = range(len(client_params))
    if client_ids is not None:
        if len(client_ids) != len(client_params):
            raise DimensionError(f"{len(client_ids)} ids for {len(client_params)} clients")
        order = sorted(order, key=lambda k: client_ids[k])

    reference = client_params[0]
    for k, params in enumerate(client_params):
        if len(params) != len(reference):
            raise DimensionError(f"client {k} has {len(params)} tensors, expected {len(reference)}")
        for i, (p, r) in enumerate(zip(params, reference)):
            if np.shape(p) != np.shape(r):
                raise DimensionError(f"client {k} tensor {i}: shape {np.shape(p)} != {np.shape(r)}")

    result = []
    for i in range(len(reference)):
        acc = np.zeros(np.shape(reference[i]), dtype=np.float64)
        for k in order:
            acc += weights[k] * np.asarray(client_params[k][i], dtype=np.float64)
        result.append(acc.astype(np.float32))
    return result

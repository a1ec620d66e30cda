"""
Atualização FedAdam no servidor

Só a conta de referência: o simulador agrega com FedAvg simples. Serve de
oráculo para a variante com otimizador adaptativo no servidor.
"""

from typing import Sequence, Tuple

import numpy as np

from fedquant.exceptions import DimensionError, ParameterError
from fedquant.optim.adam import AdamHyper


def fedadam_server_step(
    theta: np.ndarray,
    m: np.ndarray,
    v: np.ndarray,
    client_deltas: Sequence[np.ndarray],
    hyper: AdamHyper = AdamHyper(),
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    delta = mean(client_deltas)
    m <- beta1*m + (1-beta1)*delta;  v <- beta2*v + (1-beta2)*delta**2
    theta <- theta - lr * m / (sqrt(v) + eps)

    Calculado em float64; sem correção de viés no servidor.
    """
    if len(client_deltas) == 0:
        raise ParameterError("fedadam_server_step needs at least one client delta")

    theta = np.asarray(theta, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    deltas = [np.asarray(d, dtype=np.float64) for d in client_deltas]
    for name, arr in [("m", m), ("v", v)] + [(f"delta[{i}]", d) for i, d in enumerate(deltas)]:
        if arr.shape != theta.shape:
            raise DimensionError(f"{name} has shape {arr.shape}, expected {theta.shape}")

    delta = np.mean(np.stack(deltas), axis=0)
    m = hyper.beta1 * m + (1.0 - hyper.beta1) * delta
    v = hyper.beta2 * v + (1.0 - hyper.beta2) * delta * delta
    theta = theta - hyper.lr * m / (np.sqrt(v) + hyper.eps)
    return theta, m, v

"""Laço federado: sorteio, treino local, FedAvg e o simulador"""

from .sampling import sample_clients, selection_counts, selection_stats
from .client import client_stream, local_steps, local_train
from .aggregation import aggregate, aggregation_weights
from .simulator import FederatedResult, FederatedSimulator, run_federated

__all__ = [
    'sample_clients',
    'selection_counts',
    'selection_stats',
    'client_stream',
    'local_steps',
    'local_train',
    'aggregate',
    'aggregation_weights',
    'FederatedResult',
    'FederatedSimulator',
    'run_federated',
]

"""
Treino local de um cliente

O cliente copia o modelo global, começa com estado de Adam zerado (o estado
não sobrevive entre rodadas) e roda E épocas de mini-batches embaralhados,
mantendo o último batch curto.
"""

from typing import Optional, Tuple

from fedquant.data import ClientPartition, Dataset
from fedquant.exceptions import ConfigurationError
from fedquant.models.config import FederatedConfig
from fedquant.ndcore import STREAM_CLIENT_BASE, RngStream
from fedquant.nn import MlpModel, loss_and_grads
from fedquant.optim import AdamState, adam_step, init_state
from fedquant.utils import get_logger

logger = get_logger('fed.client')


def client_stream(seed: int, client_id: int, round_index: int) -> RngStream:
    """Stream do cliente k na rodada t"""
    return RngStream(seed, STREAM_CLIENT_BASE + client_id).fork(round_index)


def local_steps(num_samples: int, config: FederatedConfig) -> int:
    """E · ceil(|D_k| / batch)"""
    return config.local_epochs * -(-num_samples // config.batch_size)


def local_train(
    global_model: MlpModel,
    partition: ClientPartition,
    dataset: Dataset,
    config: FederatedConfig,
    rng: Optional[RngStream] = None,
) -> Tuple[MlpModel, AdamState, int]:
    """
    Treinar localmente a partir do modelo global

    Args:
        global_model: Modelo transmitido pelo servidor (não é modificado)
        partition: Amostras do cliente
        dataset: Dataset de treino pai
        config: Configuração da execução
        rng: Stream de embaralhamento (padrão: stream do cliente na rodada 0)

    Returns:
        (modelo treinado, estado final do otimizador, número de passos)
    """
    if len(partition) == 0:
        raise ConfigurationError("partition", f"client {partition.client_id} has no samples")
    if rng is None:
        rng = client_stream(config.seed, partition.client_id, 0)

    model = global_model.clone()
    state = init_state(model.param_shapes(), config.mode, config.hyper, config.block_size)
    params = model.params()

    for epoch in range(config.local_epochs):
        order = rng.generator.permutation(partition.sample_indices)
        for start in range(0, order.size, config.batch_size):
            batch = order[start:start + config.batch_size]
            _, grads = loss_and_grads(model, dataset.x[batch], dataset.y[batch])
            params, state = adam_step(state, params, grads, config.mode)
            model = model.with_params(params)

    logger.debug(
        f"Client {partition.client_id}: {state.step} steps on {len(partition)} samples"
    )
    return model, state, state.step

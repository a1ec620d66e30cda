"""
Simulação federada: sortear -> transmitir -> treino local paralelo -> agregar -> avaliar

Resultados dependem só de config + seed: cada cliente tem seu próprio stream
(seed, 1000 + k) deslocado pela rodada, e a agregação soma em ordem de id.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

from fedquant.data import ClientPartition, Dataset, heterogeneity_stats, partition_dirichlet
from fedquant.exceptions import DimensionError, ParameterError
from fedquant.fed.aggregation import aggregate
from fedquant.fed.client import client_stream, local_train
from fedquant.fed.sampling import round_sampler, sample_clients
from fedquant.models import FederatedConfig, RoundMetrics
from fedquant.ndcore import STREAM_MODEL_INIT, STREAM_PARTITION, RngStream
from fedquant.nn import MlpModel, create_mlp, evaluate_with_loss
from fedquant.optim import AdamState, init_state, state_memory_bytes
from fedquant.quant import MemoryReport
from fedquant.utils import get_logger

logger = get_logger('fed.simulator')

RoundCallback = Callable[[RoundMetrics], None]


@dataclass
class FederatedResult:
    """
    Resultado de uma execução

    Attributes:
        rounds: Métricas por rodada
        model: Modelo global final
        state_memory: Memória do estado de um cliente (igual para todos)
        num_params: N
        first_round_state: Estado de Adam do cliente de menor id na rodada 1
    """

    rounds: List[RoundMetrics]
    model: MlpModel
    state_memory: MemoryReport
    num_params: int
    first_round_state: Optional[AdamState] = None

    @property
    def best_round(self) -> RoundMetrics:
        # Primeira rodada com a melhor acurácia
        return max(self.rounds, key=lambda r: (r.test_accuracy, -r.round))

    @property
    def final_round(self) -> RoundMetrics:
        return self.rounds[-1]

    def summary(self) -> Dict[str, Any]:
        """Resumo final (um registro)"""
        best = self.best_round
        return {
            "rounds": len(self.rounds),
            "best_accuracy": best.test_accuracy,
            "best_round": best.round,
            "final_accuracy": self.final_round.test_accuracy,
            "final_loss": self.final_round.test_loss,
            "num_params": self.num_params,
            "state_bytes": self.state_memory.total_bytes,
            "fp32_state_bytes": self.state_memory.fp32_equivalent_bytes,
            "metadata_bytes": self.state_memory.metadata_bytes,
            "padding_bytes": self.state_memory.padding_bytes,
            "compression_ratio": self.state_memory.compression_ratio,
        }


@dataclass
class _ClientOutcome:
    client_id: int
    model: MlpModel
    state: AdamState
    steps: int
    num_samples: int


class FederatedSimulator:
    """Orquestrador de uma execução federada"""

    def __init__(
        self,
        config: FederatedConfig,
        train: Dataset,
        test: Dataset,
        threads: int = 1,
    ):
        if threads < 1:
            raise ParameterError(f"threads must be >= 1, got {threads}")
        if train.num_features != test.num_features or train.num_classes != test.num_classes:
            raise DimensionError(
                f"train ({train.num_features} features, {train.num_classes} classes) and test "
                f"({test.num_features} features, {test.num_classes} classes) do not match"
            )
        logger.info(
            f"Initializing FederatedSimulator: mode={config.mode}, K={config.num_clients}, "
            f"{config.clients_per_round}/round, T={config.rounds}, threads={threads}"
        )
        self.config = config
        self.train = train
        self.test = test
        self.threads = threads
        self.partitions: List[ClientPartition] = []
        self.model: Optional[MlpModel] = None
        self.history: List[RoundMetrics] = []
        self.first_round_state: Optional[AdamState] = None
        self._executor: Optional[ThreadPoolExecutor] = None

    # ===== Ciclo de vida =====

    def setup(self) -> "FederatedSimulator":
        """Particiona os dados e inicializa o modelo global"""
        cfg = self.config
        self.partitions = partition_dirichlet(
            RngStream(cfg.seed, STREAM_PARTITION), self.train, cfg.num_clients, cfg.alpha
        )
        self.model = create_mlp(
            RngStream(cfg.seed, STREAM_MODEL_INIT),
            self.train.num_features,
            self.train.num_classes,
            cfg.hidden,
        )
        self.history = []
        self.first_round_state = None
        self._print_setup_summary()
        return self

    def start(self) -> None:
        if self.threads > 1 and self._executor is None:
            self._executor = ThreadPoolExecutor(
                max_workers=self.threads, thread_name_prefix="fedquant-client"
            )

    def stop(self) -> None:
        if self._executor is not None:
            self._executor.shutdown(wait=True)
            self._executor = None
            logger.debug("Client worker pool stopped")

    def __enter__(self) -> "FederatedSimulator":
        self.start()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.stop()

    # ===== Rodadas =====

    def _train_client(self, client_id: int, round_index: int) -> _ClientOutcome:
        partition = self.partitions[client_id]
        model, state, steps = local_train(
            self.model,
            partition,
            self.train,
            self.config,
            client_stream(self.config.seed, client_id, round_index),
        )
        return _ClientOutcome(client_id, model, state, steps, len(partition))

    def _run_clients(self, selected: List[int], round_index: int) -> List[_ClientOutcome]:
        if self._executor is None:
            return [self._train_client(k, round_index) for k in selected]
        futures = [self._executor.submit(self._train_client, k, round_index) for k in selected]
        return [f.result() for f in futures]

    def run_round(self, round_index: int) -> RoundMetrics:
        """Executa a rodada t (a partir de 1)"""
        if self.model is None:
            self.setup()
        cfg = self.config
        started = time.perf_counter()

        selected = sample_clients(
            round_sampler(cfg.seed).fork(round_index), cfg.num_clients, cfg.clients_per_round
        )
        outcomes = self._run_clients(selected, round_index)

        new_params = aggregate(
            [o.model.params() for o in outcomes],
            [o.num_samples for o in outcomes],
            client_ids=[o.client_id for o in outcomes],
        )
        self.model = self.model.with_params(new_params)
        accuracy, loss = evaluate_with_loss(self.model, self.test.x, self.test.y)

        by_id = sorted(outcomes, key=lambda o: o.client_id)
        if round_index == 1:
            self.first_round_state = by_id[0].state
        metrics = RoundMetrics(
            round=round_index,
            test_accuracy=accuracy,
            test_loss=loss,
            selected_clients=[o.client_id for o in by_id],
            per_client_state_bytes=[state_memory_bytes(o.state).total_bytes for o in by_id],
            per_client_steps=[o.steps for o in by_id],
            wall_ms=(time.perf_counter() - started) * 1000.0,
        )
        self.history.append(metrics)
        logger.info(
            f"Round {round_index}/{cfg.rounds}: acc={accuracy:.4f} loss={loss:.4f} "
            f"clients={metrics.selected_clients} ({metrics.wall_ms:.0f} ms)"
        )
        return metrics

    def run(self, on_round: Optional[RoundCallback] = None) -> FederatedResult:
        """Executa todas as rodadas"""
        if self.model is None:
            self.setup()
        owns_pool = self._executor is None
        self.start()
        try:
            for t in range(1, self.config.rounds + 1):
                metrics = self.run_round(t)
                if on_round is not None:
                    on_round(metrics)
        finally:
            if owns_pool:
                self.stop()

        result = FederatedResult(
            rounds=list(self.history),
            model=self.model,
            state_memory=self.state_memory(),
            num_params=self.model.num_params,
            first_round_state=self.first_round_state,
        )
        self._print_result_summary(result)
        return result

    def state_memory(self) -> MemoryReport:
        """Memória do estado de um cliente para este modo/modelo/B"""
        state = init_state(
            self.model.param_shapes(), self.config.mode, self.config.hyper, self.config.block_size
        )
        return state_memory_bytes(state)

    # ===== Relatórios =====

    def _print_setup_summary(self) -> None:
        stats = heterogeneity_stats(self.partitions, self.train)
        logger.info("=" * 60)
        logger.info("FEDERATED SETUP")
        logger.info("=" * 60)
        logger.info(f"Clients: {len(self.partitions)}  alpha: {self.config.alpha or 'iid'}")
        logger.info(f"Samples per client: {stats.sample_counts} (std {stats.sample_std:.1f})")
        logger.info(f"Avg dominant class: {100 * stats.avg_dominant_pct:.1f}%")
        logger.info(f"Model: {self.model.layer_sizes} ({self.model.num_params} params)")
        logger.info("=" * 60)

    def _print_result_summary(self, result: FederatedResult) -> None:
        summary = result.summary()
        logger.info("=" * 60)
        logger.info("✅ FEDERATED RUN COMPLETE")
        logger.info(
            f"Best acc {summary['best_accuracy']:.4f} (round {summary['best_round']}), "
            f"final {summary['final_accuracy']:.4f}"
        )
        logger.info(
            f"Optimizer state per client: {summary['state_bytes']} bytes "
            f"(fp32 {summary['fp32_state_bytes']}, ratio {summary['compression_ratio']:.3f}x)"
        )
        logger.info("=" * 60)


def run_federated(
    config: FederatedConfig,
    dataset: Dataset,
    test_set: Dataset,
    threads: int = 1,
    on_round: Optional[RoundCallback] = None,
) -> FederatedResult:
    """Executa uma simulação completa"""
    with FederatedSimulator(config, dataset, test_set, threads=threads) as simulator:
        return simulator.setup().run(on_round=on_round)

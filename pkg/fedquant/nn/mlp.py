"""
Classificador MLP com forward/backward escritos à mão

Camadas são (W[out×in], b[out]) com ReLU entre elas e saída linear; a loss
é a entropia cruzada do softmax, média sobre o lote.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fedquant.exceptions import DataError, DimensionError, ParameterError
from fedquant.ndcore import DTYPE, RngStream, matmul, sample_gaussian
from fedquant.utils import get_logger

logger = get_logger('nn.mlp')

DEFAULT_HIDDEN = (128, 64)
EVAL_CHUNK = 4096


@dataclass
class MlpModel:
    """
    Perceptron multicamada

    Attributes:
        weights: W[out×in] por camada
        biases: b[out] por camada
    """

    weights: List[np.ndarray]
    biases: List[np.ndarray]

    def __post_init__(self):
        self._validate()

    def _validate(self) -> None:
        if not self.weights or len(self.weights) != len(self.biases):
            raise DimensionError(
                f"need one bias per weight, got {len(self.weights)} weights and {len(self.biases)} biases"
            )
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[0],):
                raise DimensionError(f"layer {i}: weight {w.shape} and bias {b.shape} do not match")
            if i > 0 and w.shape[1] != self.weights[i - 1].shape[0]:
                raise DimensionError(
                    f"layer {i} expects {w.shape[1]} inputs, previous layer emits {self.weights[i - 1].shape[0]}"
                )

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[1]

    @property
    def num_classes(self) -> int:
        return self.weights[-1].shape[0]

    @property
    def layer_sizes(self) -> List[int]:
        return [self.input_dim] + [w.shape[0] for w in self.weights]

    @property
    def num_params(self) -> int:
        return int(sum(w.size + b.size for w, b in zip(self.weights, self.biases)))

    def params(self) -> List[np.ndarray]:
        """[W0, b0, W1, b1, ...]"""
        out: List[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def param_shapes(self) -> List[Tuple[int, ...]]:
        return [p.shape for p in self.params()]

    def with_params(self, params: Sequence[np.ndarray]) -> "MlpModel":
        """Novo modelo com os tensores dados, na ordem de params()"""
        if len(params) != 2 * len(self.weights):
            raise DimensionError(f"expected {2 * len(self.weights)} tensors, got {len(params)}")
        return MlpModel(weights=list(params[0::2]), biases=list(params[1::2]))

    def clone(self) -> "MlpModel":
        return MlpModel(
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
        )

    def astype(self, dtype) -> "MlpModel":
        return MlpModel(
            weights=[w.astype(dtype) for w in self.weights],
            biases=[b.astype(dtype) for b in self.biases],
        )


def create_mlp(
    rng: RngStream,
    input_dim: int,
    num_classes: int,
    hidden: Sequence[int] = DEFAULT_HIDDEN,
) -> MlpModel:
    """
    He-init MLP: W ~ N(0, 2/in), b = 0

    Args:
        rng: Stream de inicialização
        input_dim: Número de features
        num_classes: Número de classes
        hidden: Larguras das camadas ocultas

    Returns:
        MlpModel
    """
    sizes = [int(input_dim)] + [int(h) for h in hidden] + [int(num_classes)]
    if any(s < 1 for s in sizes):
        raise ParameterError(f"layer sizes must be >= 1, got {sizes}")

    weights, biases = [], []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        std = float(np.sqrt(2.0 / fan_in))
        weights.append(sample_gaussian(rng, 0.0, std, (fan_out, fan_in)))
        biases.append(np.zeros(fan_out, dtype=DTYPE))

    model = MlpModel(weights=weights, biases=biases)
    logger.debug(f"Created MLP {sizes} with {model.num_params} parameters")
    return model


def _check_input(model: MlpModel, batch_x: np.ndarray) -> None:
    if batch_x.ndim != 2 or batch_x.shape[1] != model.input_dim:
        raise DimensionError(
            f"model expects [batch×{model.input_dim}] input, got {list(batch_x.shape)}"
        )


def _forward_cache(model: MlpModel, batch_x: np.ndarray) -> Tuple[np.ndarray, List[np.ndarray]]:
    """Logits e as ativações de entrada de cada camada"""
    activations = [batch_x]
    h = batch_x
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = matmul(h, w.T) + b
        if i < last:
            h = np.maximum(z, 0)
            activations.append(h)
        else:
            h = z
    return h, activations


def forward(model: MlpModel, batch_x: np.ndarray) -> np.ndarray:
    """Logits [batch×classes]"""
    _check_input(model, batch_x)
    logits, _ = _forward_cache(model, batch_x)
    return logits


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits.astype(np.float64) - logits.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def _check_labels(model: MlpModel, batch_y: np.ndarray, n: int) -> np.ndarray:
    labels = np.asarray(batch_y)
    if labels.shape != (n,):
        raise DimensionError(f"expected {n} labels, got shape {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= model.num_classes):
        raise DataError(f"labels must lie in [0, {model.num_classes})")
    return labels.astype(np.int64)


def loss_and_grads(
    model: MlpModel, batch_x: np.ndarray, batch_y: np.ndarray
) -> Tuple[float, List[np.ndarray]]:
    """
    Entropia cruzada média e gradientes

    Returns:
        (loss, gradientes alinhados com model.params())
    """
    _check_input(model, batch_x)
    n = batch_x.shape[0]
    if n == 0:
        raise ParameterError("loss_and_grads needs a nonempty batch")
    labels = _check_labels(model, batch_y, n)

    logits, activations = _forward_cache(model, batch_x)
    log_probs = _log_softmax(logits)
    rows = np.arange(n)
    loss = float(-log_probs[rows, labels].mean())

    dz = np.exp(log_probs)
    dz[rows, labels] -= 1.0
    dz = (dz / n).astype(logits.dtype)

    grads: List[np.ndarray] = [None] * (2 * len(model.weights))  # type: ignore[list-item]
    for i in range(len(model.weights) - 1, -1, -1):
        a_prev = activations[i]
        grads[2 * i] = matmul(dz.T, a_prev)
        grads[2 * i + 1] = dz.sum(axis=0, dtype=np.float64).astype(dz.dtype)
        if i > 0:
            dz = matmul(dz, model.weights[i]) * (a_prev > 0)
    return loss, grads


def evaluate_with_loss(model: MlpModel, x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    """(acurácia, loss média) no conjunto inteiro, em blocos de EVAL_CHUNK"""
    n = x.shape[0]
    if n == 0:
        raise ParameterError("cannot evaluate on an empty set")
    labels = _check_labels(model, y, n)
    _check_input(model, x)

    correct = 0
    loss_sum = 0.0
    for start in range(0, n, EVAL_CHUNK):
        chunk = slice(start, start + EVAL_CHUNK)
        logits, _ = _forward_cache(model, x[chunk])
        # np.argmax devolve o primeiro máximo: empate vai para a menor classe
        correct += int(np.sum(np.argmax(logits, axis=1) == labels[chunk]))
        log_probs = _log_softmax(logits)
        loss_sum += float(-log_probs[np.arange(logits.shape[0]), labels[chunk]].sum())
    return correct / n, loss_sum / n


def evaluate(model: MlpModel, x: np.ndarray, y: Optional[np.ndarray] = None) -> float:
    """
    Acurácia em [0, 1]

    Aceita (model, dataset) ou (model, x, y). Empates no argmax vão para o
    menor índice de classe.
    """
    if y is None:
        x, y = x.x, x.y
    return evaluate_with_loss(model, x, y)[0]

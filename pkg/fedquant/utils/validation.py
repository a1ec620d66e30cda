"""
Validação de parâmetros para fedquant

Funções retornam bool (ou (bool, erros)) e registram o veredito no log;
quem chama decide qual exceção levantar.
"""

import math
from numbers import Integral, Real
from typing import Any, Dict, List, Tuple

from fedquant.utils.logging import get_logger

logger = get_logger('validation')


def validate_positive_int(value: Any, name: str = "value", minimum: int = 1) -> bool:
    """
    Validar inteiro >= minimum

    Args:
        value: Valor a verificar
        name: Nome usado no log
        minimum: Limite inferior inclusivo

    Returns:
        bool: Valor válido
    """
    if isinstance(value, bool) or not isinstance(value, Integral):
        logger.error(f"❌ {name} must be an integer, got {type(value).__name__}")
        return False
    if value < minimum:
        logger.error(f"❌ {name} out of range: {value} < {minimum}")
        return False
    logger.debug(f"✅ Valid {name}: {value}")
    return True


def validate_finite(value: Any, name: str = "value") -> bool:
    """Validar escalar real finito"""
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
        logger.error(f"❌ {name} must be a finite number, got {value!r}")
        return False
    return True


def validate_positive(value: Any, name: str = "value") -> bool:
    """Validar escalar real finito e > 0"""
    if not validate_finite(value, name):
        return False
    if value <= 0:
        logger.error(f"❌ {name} must be > 0, got {value}")
        return False
    return True


def validate_probability(value: Any, name: str = "value") -> bool:
    """Validar escalar em [0, 1)"""
    if not validate_finite(value, name):
        return False
    if not 0.0 <= value < 1.0:
        logger.error(f"❌ {name} must lie in [0, 1), got {value}")
        return False
    return True


def validate_alpha(alpha: Any) -> bool:
    """
    Validar concentração de Dirichlet

    Args:
        alpha: float > 0 ou None (sentinela IID)

    Returns:
        bool: alpha válido
    """
    if alpha is None:
        logger.debug("✅ Valid alpha: iid")
        return True
    return validate_positive(alpha, "alpha")


def validate_federated_config(params: Dict[str, Any]) -> Tuple[bool, List[str]]:
    """
    Validar configuração federada completa

    Args:
        params: Dicionário com os campos de FederatedConfig

    Returns:
        tuple: (bool, lista de erros no formato 'campo: mensagem')
    """
    errors: List[str] = []

    for key in ("rounds", "num_clients", "clients_per_round", "local_epochs",
                "batch_size", "block_size"):
        if not validate_positive_int(params.get(key), key):
            errors.append(f"{key}: must be an integer >= 1")

    per_round = params.get("clients_per_round")
    clients = params.get("num_clients")
    if isinstance(per_round, Integral) and isinstance(clients, Integral) and per_round > clients:
        errors.append(
            f"clients_per_round: {params['clients_per_round']} exceeds "
            f"num_clients {params['num_clients']}"
        )

    if not validate_positive(params.get("lr"), "lr"):
        errors.append("lr: must be > 0")
    for key in ("beta1", "beta2"):
        if not validate_probability(params.get(key), key):
            errors.append(f"{key}: must lie in [0, 1)")
    if not validate_positive(params.get("eps"), "eps"):
        errors.append("eps: must be > 0")
    if not validate_alpha(params.get("alpha")):
        errors.append("alpha: must be > 0 or 'iid'")
    if not validate_positive_int(params.get("seed"), "seed", minimum=0):
        errors.append("seed: must be a nonnegative integer")
    elif params["seed"] >= 2 ** 64:
        errors.append("seed: must fit in 64 bits")

    if errors:
        logger.error("❌ Config validation failed:")
        for error in errors:
            logger.error(f"   - {error}")
        return (False, errors)

    logger.debug("✅ Valid federated config")
    return (True, [])

# tests/fixtures/config_fixtures.py

"""
Fixtures de configuração federada
"""

import pytest

from fedquant.models import FederatedConfig


@pytest.fixture
def tiny_config():
    """Execução curta: 2 rodadas, 4 clientes, 2 por rodada, 1 época"""
    return FederatedConfig(
        rounds=2,
        num_clients=4,
        clients_per_round=2,
        local_epochs=1,
        batch_size=32,
        hidden=(16,),
        alpha=0.5,
        seed=3,
    )


@pytest.fixture
def config_yaml(tmp_path):
    """Arquivo YAML com seção 'hyper' e chaves com hífen"""
    path = tmp_path / "run.yaml"
    path.write_text(
        "rounds: 3\n"
        "block-size: 32\n"
        "mode: fp32\n"
        "alpha: iid\n"
        "hyper:\n"
        "  lr: 0.0005\n"
        "  beta1: 0.8\n",
        encoding="utf-8",
    )
    return path

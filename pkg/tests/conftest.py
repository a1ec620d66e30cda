# tests/conftest.py

"""
Configuração global de testes do projeto fedquant
"""

import sys
from pathlib import Path
import pytest

# Adiciona raiz do projeto ao PYTHONPATH
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from tests.fixtures import *  # noqa: E402,F401,F403


def pytest_configure(config):
    """Configuração executada antes dos testes"""
    config.addinivalue_line(
        "markers", "integration: end-to-end federated runs and CLI invocations"
    )
    config.addinivalue_line(
        "markers", "unit: mark test as unit test"
    )
    config.addinivalue_line(
        "markers", "slow: desk-scale experiments (needs --run-slow)"
    )


def pytest_addoption(parser):
    """Adiciona opções customizadas ao pytest"""
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run desk-scale experiments (minutes of CPU)"
    )


def pytest_collection_modifyitems(config, items):
    """Pula testes lentos sem --run-slow"""
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)

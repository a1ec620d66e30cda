"""
Fixtures para testes unitários do fedquant
"""

import numpy as np
import pytest

from fedquant.ndcore import RngStream


@pytest.fixture
def rng():
    """Stream de teste reprodutível"""
    return RngStream(1234, 99)


@pytest.fixture
def np_rng():
    """Gerador numpy para dados de teste arbitrários"""
    return np.random.default_rng(2024)


@pytest.fixture
def log_uniform_factory(np_rng):
    """Factory de arrays log-uniformes em [lo, hi]"""
    def _make(n: int, lo: float, hi: float) -> np.ndarray:
        return np.exp(np_rng.uniform(np.log(lo), np.log(hi), size=n)).astype(np.float32)
    return _make

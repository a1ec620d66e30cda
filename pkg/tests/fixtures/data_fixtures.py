# tests/fixtures/data_fixtures.py

"""
Fixtures de dados: datasets sintéticos pequenos e arquivos de dataset
"""

import numpy as np
import pytest

from fedquant.data import Dataset, generate_synthetic_split, save_flat_file


@pytest.fixture
def small_split():
    """(treino, teste) sintéticos: 600/200 amostras, 16 features, 4 classes"""
    return generate_synthetic_split(7, n_train=600, n_test=200, features=16, classes=4, class_sep=3.0)


@pytest.fixture
def small_train(small_split):
    return small_split[0]


@pytest.fixture
def small_test(small_split):
    return small_split[1]


@pytest.fixture
def balanced_dataset():
    """Dataset balanceado de 10 classes, 1000 amostras (features constantes)"""
    y = np.arange(1000, dtype=np.int64) % 10
    x = np.zeros((1000, 2), dtype=np.float32)
    return Dataset(x=x, y=y, num_classes=10)


@pytest.fixture
def flat_file(tmp_path, small_train):
    """Arquivo texto com o dataset de treino pequeno"""
    return save_flat_file(small_train, tmp_path / "train.txt")

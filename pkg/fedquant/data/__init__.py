"""Datasets, geração sintética, partição de Dirichlet e arquivos de dataset"""

from .dataset import Dataset
from .synthetic import class_directions, generate_synthetic, generate_synthetic_split
from .partition import (
    MAX_REDRAWS,
    ClientPartition,
    HeterogeneityStats,
    heterogeneity_stats,
    partition_dirichlet,
)
from .flatfile import load_flat_file, save_flat_file

__all__ = [
    'Dataset',
    'class_directions',
    'generate_synthetic',
    'generate_synthetic_split',
    'MAX_REDRAWS',
    'ClientPartition',
    'HeterogeneityStats',
    'heterogeneity_stats',
    'partition_dirichlet',
    'load_flat_file',
    'save_flat_file',
]

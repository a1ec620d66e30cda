"""Interface de linha de comando: experimentos, sweeps, estudos e replay"""

from .runner import (
    dataset_descriptor,
    load_datasets,
    replay,
    run_analysis,
    run_experiment,
    run_partition,
    run_sweep,
)

__all__ = [
    'dataset_descriptor',
    'load_datasets',
    'replay',
    'run_analysis',
    'run_experiment',
    'run_partition',
    'run_sweep',
]

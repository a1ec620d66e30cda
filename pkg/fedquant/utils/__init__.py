# fedquant/utils/__init__.py

"""
Utilities para fedquant
"""

from .logging import setup_logging, get_logger, logger
from .validation import (
    validate_positive_int,
    validate_finite,
    validate_positive,
    validate_probability,
    validate_alpha,
    validate_federated_config,
)

__all__ = [
    # Logging
    'setup_logging',
    'get_logger',
    'logger',

    # Validation
    'validate_positive_int',
    'validate_finite',
    'validate_positive',
    'validate_probability',
    'validate_alpha',
    'validate_federated_config',
]

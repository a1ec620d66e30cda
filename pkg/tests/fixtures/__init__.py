# tests/fixtures/__init__.py

"""
Fixtures para testes do fedquant
"""

from tests.fixtures.data_fixtures import *  # noqa: F401,F403
from tests.fixtures.config_fixtures import *  # noqa: F401,F403

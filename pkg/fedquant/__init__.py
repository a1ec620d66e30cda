from .__version__ import __version__
from .models import FederatedConfig
from .fed import FederatedSimulator, run_federated

__all__ = ["FederatedConfig", "FederatedSimulator", "run_federated", "__version__"]

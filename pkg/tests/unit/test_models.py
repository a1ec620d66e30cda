# tests/unit/test_models.py

"""
Testes unitários dos modelos de dados (FederatedConfig, RoundMetrics, RunManifest)
"""

import json

import pytest

from fedquant.__version__ import __version__
from fedquant.exceptions import ConfigurationError, DataError
from fedquant.models import RECORD_KEYS, FederatedConfig, RoundMetrics, RunManifest, default_config_dict
from fedquant.optim import AdamHyper, OptimizerMode


# ==================== Testes: FederatedConfig ====================

@pytest.mark.unit
class TestFederatedConfig:
    """Testes para FederatedConfig"""

    def test_defaults(self):
        config = FederatedConfig()
        assert config.rounds == 30
        assert config.num_clients == 10
        assert config.clients_per_round == 5
        assert config.local_epochs == 2
        assert config.batch_size == 64
        assert config.block_size == 64
        assert config.mode is OptimizerMode.Q_LOCAL_ADAM
        assert config.alpha == 0.1
        assert config.seed == 42
        assert config.hidden == (128, 64)
        assert config.hyper == AdamHyper()

    def test_normalizes_strings(self):
        config = FederatedConfig(mode="naive-int8", alpha="iid", lr="0.01", hidden=[32])
        assert config.mode is OptimizerMode.NAIVE_INT8
        assert config.alpha is None
        assert config.lr == 0.01
        assert config.hidden == (32,)

    @pytest.mark.parametrize(
        "changes,field",
        [
            ({"rounds": 0}, "rounds"),
            ({"num_clients": 3, "clients_per_round": 4}, "clients_per_round"),
            ({"beta2": 1.0}, "beta2"),
            ({"alpha": 0.0}, "alpha"),
            ({"alpha": "lots"}, "alpha"),
            ({"mode": "adamw"}, "mode"),
            ({"hidden": [0]}, "hidden"),
            ({"seed": -1}, "seed"),
            ({"lr": "fast"}, "lr"),
        ],
    )
    def test_invalid_fields(self, changes, field):
        with pytest.raises(ConfigurationError) as exc:
            FederatedConfig(**changes)
        assert exc.value.field == field

    def test_to_dict_roundtrip(self):
        config = FederatedConfig(alpha=None, mode="m-only", seed=7)
        data = config.to_dict()
        assert data["alpha"] == "iid"
        assert data["mode"] == "m-only"
        assert data["hidden"] == [128, 64]
        assert json.loads(json.dumps(data)) == data
        assert FederatedConfig.from_dict(data) == config

    def test_from_dict_rejects_unknown(self):
        with pytest.raises(ConfigurationError) as exc:
            FederatedConfig.from_dict({"rounds": 3, "momentum": 0.9})
        assert exc.value.field == "momentum"

    def test_replace(self):
        config = FederatedConfig()
        changed = config.replace(block_size=128, mode="fp32")
        assert changed.block_size == 128 and changed.mode is OptimizerMode.FP32
        assert config.block_size == 64

    def test_default_config_dict(self):
        assert default_config_dict() == FederatedConfig().to_dict()


# ==================== Testes: RoundMetrics ====================

@pytest.mark.unit
class TestRoundMetrics:
    """Testes para RoundMetrics"""

    def _metrics(self, **changes):
        data = dict(
            round=1,
            test_accuracy=0.5,
            test_loss=1.2,
            selected_clients=[0, 3],
            per_client_state_bytes=[144, 144],
            per_client_steps=[10, 12],
            wall_ms=12.5,
        )
        data.update(changes)
        return RoundMetrics(**data)

    def test_record_excludes_wall_time(self):
        record = self._metrics().to_record()
        assert tuple(record) == RECORD_KEYS
        assert "wall_ms" not in record
        assert self._metrics().to_dict()["wall_ms"] == 12.5

    def test_roundtrip(self):
        metrics = self._metrics()
        assert RoundMetrics.from_dict(metrics.to_dict()) == metrics

    def test_invalid(self):
        with pytest.raises(DataError):
            self._metrics(test_accuracy=1.5)
        with pytest.raises(DataError):
            self._metrics(per_client_steps=[10])


# ==================== Testes: RunManifest ====================

@pytest.mark.unit
class TestRunManifest:
    """Testes para RunManifest"""

    def test_save_and_load(self, tmp_path, tiny_config):
        manifest = RunManifest(config=tiny_config, dataset={"kind": "synthetic", "seed": 3})
        path = manifest.save(tmp_path / "out" / "manifest.json")
        assert path.exists()

        loaded = RunManifest.load(path)
        assert loaded.config == tiny_config
        assert loaded.dataset == {"kind": "synthetic", "seed": 3}
        assert loaded.version == __version__
        assert loaded.started_at == manifest.started_at

    def test_dataset_kind_checked(self, tiny_config):
        with pytest.raises(ConfigurationError):
            RunManifest(config=tiny_config, dataset={"kind": "imagenet"})
        with pytest.raises(ConfigurationError):
            RunManifest(config=tiny_config, dataset={"kind": "file"})

    def test_version_mismatch_warns(self, tmp_path, tiny_config, mocker):
        path = RunManifest(config=tiny_config, dataset={"kind": "synthetic"}).save(tmp_path / "m.json")
        data = json.loads(path.read_text())
        data["version"] = "0.0.0"
        path.write_text(json.dumps(data))

        warning = mocker.patch("fedquant.models.manifest.logger.warning")
        loaded = RunManifest.load(path)
        assert loaded.version == "0.0.0"
        warning.assert_called_once()

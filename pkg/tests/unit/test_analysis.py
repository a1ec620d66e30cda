# tests/unit/test_analysis.py

"""
Testes unitários dos estudos: precisão, fidelidade de armazenamento,
histogramas de estado e projeção de memória
"""

import numpy as np
import pytest

from fedquant.analysis import (
    Histogram,
    ScalingRow,
    linear_histogram,
    log10_histogram,
    precision_study,
    precision_variants,
    relative_error,
    sample_log_uniform,
    scaling_projection,
    state_histograms,
    storage_fidelity,
)
from fedquant.data import generate_synthetic
from fedquant.exceptions import ParameterError
from fedquant.ndcore import STREAM_ANALYSIS, STREAM_DATA, STREAM_MODEL_INIT, RngStream
from fedquant.nn import create_mlp, loss_and_grads
from fedquant.optim import OptimizerMode, StateStorage, adam_step, init_state, state_memory_bytes
from fedquant.quant import MIB, Rounding
from fedquant.utils import setup_logging, get_logger

setup_logging(level="DEBUG")
logger = get_logger('test_analysis')


# ==================== Testes: precisão ====================

@pytest.mark.unit
class TestPrecisionStudy:
    """Testes para precision_study / precision_variants"""

    def test_log_space_beats_dynamic_tree(self):
        """3000 valores em [1e-7, 1] com FLOOR: log-space <= 3%, e >= 10x melhor"""
        logger.info("=" * 60)
        logger.info("TEST: precision study")
        logger.info("=" * 60)
        log_report, tree_report = precision_study(RngStream(42, STREAM_ANALYSIS), rounding=Rounding.FLOOR)
        logger.info(
            f"log-space {100 * log_report.mean_relative_error:.2f}% vs "
            f"dynamic-tree {100 * tree_report.mean_relative_error:.2f}%"
        )
        assert log_report.n == tree_report.n == 3000
        assert log_report.mean_relative_error <= 0.03
        assert tree_report.mean_relative_error >= 10 * log_report.mean_relative_error

    def test_per_decade_breakdown(self):
        log_report, tree_report = precision_study(RngStream(1, STREAM_ANALYSIS), n=2000)
        for report in (log_report, tree_report):
            assert sum(row[3] for row in report.per_decade) == 2000
            assert all(hi == pytest.approx(10 * lo) for lo, hi, _, _ in report.per_decade)
        # a árvore dinâmica perde precisão nas décadas baixas
        populated = [row for row in tree_report.per_decade if row[3] > 0]
        assert populated[0][2] > 10 * populated[-1][2]
        data = tree_report.to_dict()
        assert data["scheme"] == "dynamic-tree"
        assert len(data["per_decade"]) == len(tree_report.per_decade)

    def test_variants(self):
        reports = precision_variants(RngStream(42, STREAM_ANALYSIS), n=3000)
        by_name = {r.scheme: r.mean_relative_error for r in reports}
        assert set(by_name) == {
            "log-space/blockwise/nearest",
            "log-space/blockwise/floor",
            "log-space/whole-array/nearest",
            "log-space/whole-array/floor",
        }
        for blocking in ("blockwise", "whole-array"):
            assert by_name[f"log-space/{blocking}/nearest"] < by_name[f"log-space/{blocking}/floor"]

    def test_floor_rounding_option(self):
        nearest, _ = precision_study(RngStream(5, STREAM_ANALYSIS), rounding=Rounding.NEAREST)
        floor, _ = precision_study(RngStream(5, STREAM_ANALYSIS), rounding="floor")
        default, _ = precision_study(RngStream(5, STREAM_ANALYSIS))
        assert nearest.mean_relative_error < floor.mean_relative_error
        assert default.mean_relative_error == floor.mean_relative_error

    def test_sampling_errors(self, rng):
        with pytest.raises(ParameterError):
            sample_log_uniform(rng, 10, 0.0, 1.0)
        with pytest.raises(ParameterError):
            sample_log_uniform(rng, 10, 1.0, 1e-3)
        with pytest.raises(ParameterError):
            sample_log_uniform(rng, 0, 1e-3, 1.0)

    def test_sampling_range(self, rng):
        x = sample_log_uniform(rng, 5000, 1e-6, 1e-2)
        assert x.dtype == np.float32
        assert x.min() >= np.float32(1e-6) * (1 - 1e-6) and x.max() <= np.float32(1e-2) * (1 + 1e-6)

    def test_relative_error_floor(self):
        errors = relative_error([0.0, 2.0], [1e-40, 1.0])
        assert errors[0] == pytest.approx(1e-10)
        assert errors[1] == 0.5


# ==================== Testes: fidelidade ====================

@pytest.mark.unit
class TestStorageFidelity:
    """Testes para storage_fidelity: por que INT8 linear falha em v"""

    def test_linear_collapses_small_values(self, log_uniform_factory):
        x = log_uniform_factory(4096, 1e-12, 1e-3)
        linear = storage_fidelity(x, StateStorage.LINEAR_INT8)
        log = storage_fidelity(x, StateStorage.LOG_INT8, floor=1e-8)
        logger.info(f"linear: {linear.to_dict()}")
        logger.info(f"log:    {log.to_dict()}")
        assert linear.zero_code_fraction > 0.6
        assert linear.fraction_over_half > 0.5
        assert linear.mean_relative_error > 0.5
        assert log.mean_relative_error <= 0.03
        assert log.fraction_over_half == 0.0

    def test_fp32_is_exact(self, log_uniform_factory):
        report = storage_fidelity(log_uniform_factory(100, 1e-9, 1.0), "fp32")
        assert report.mean_relative_error == 0.0
        assert report.zero_code_fraction == 0.0
        assert report.n == 100
        assert report.to_dict()["storage"] == "fp32"


# ==================== Testes: histogramas ====================

@pytest.mark.unit
class TestHistograms:
    """Testes para linear_histogram / log10_histogram / state_histograms"""

    def test_linear_conserves_total(self, np_rng):
        values = np_rng.normal(size=1234)
        hist = linear_histogram(values)
        assert hist.counts.size == 100
        assert int(hist.counts.sum()) == hist.total == 1234
        assert hist.edges[0] == values.min() and hist.edges[-1] == values.max()

    def test_linear_degenerate_range(self):
        hist = linear_histogram(np.full(10, 0.25), bins=4)
        assert hist.edges[0] == -0.25 and hist.edges[-1] == 0.75
        assert int(hist.counts.sum()) == 10

    def test_log10_quarter_decades(self, log_uniform_factory):
        values = np.concatenate([log_uniform_factory(1000, 1e-9, 1e-2), np.zeros(25, np.float32)])
        hist = log10_histogram(values)
        assert hist.scale == "log10"
        assert hist.underflow == 25
        assert int(hist.counts.sum()) + hist.underflow == hist.total == 1025
        np.testing.assert_allclose(np.diff(hist.edges), 0.25)
        assert hist.edges[0] <= np.log10(hist.data_min) and hist.edges[-1] >= np.log10(hist.data_max)
        assert 6.5 < hist.decades_spanned <= 7.0

    def test_log10_all_zero(self):
        hist = log10_histogram(np.zeros(7))
        assert hist.underflow == 7 and hist.total == 7
        assert hist.decades_spanned == 0.0

    def test_rows_and_dict(self):
        hist = linear_histogram([0.0, 1.0, 1.0], bins=2)
        assert hist.to_rows() == [(0.0, 0.5, 1), (0.5, 1.0, 2)]
        assert hist.to_dict()["counts"] == [1, 2]

    def test_invalid_histogram(self):
        with pytest.raises(ValueError):
            Histogram(np.array([0.0, 1.0]), np.array([3]), total=2, data_min=0.0, data_max=1.0)
        with pytest.raises(ValueError):
            Histogram(np.array([1.0, 0.0]), np.array([1]), total=1, data_min=0.0, data_max=1.0)

    def test_state_histograms(self, np_rng):
        shapes = [(6, 5), (6,)]
        state = init_state(shapes, OptimizerMode.Q_LOCAL_ADAM, block_size=16)
        params = [np_rng.normal(size=s).astype(np.float32) for s in shapes]
        for _ in range(3):
            grads = [np_rng.normal(size=s).astype(np.float32) for s in shapes]
            params, state = adam_step(state, params, grads, OptimizerMode.Q_LOCAL_ADAM)
        m_hist, v_hist = state_histograms(state)
        assert m_hist.total == v_hist.total == 36
        assert v_hist.scale == "log10"
        assert int(v_hist.counts.sum()) + v_hist.underflow == 36

    def test_warmup_state_is_heavy_tailed(self):
        """50 passos de Adam FP32: v cobre >= 4 décadas, |m| limitado pelos gradientes"""
        data = generate_synthetic(RngStream(8, STREAM_DATA), 50 * 64, 64, 10, 3.0)
        model = create_mlp(RngStream(8, STREAM_MODEL_INIT), 64, 10)
        state = init_state(model.param_shapes(), OptimizerMode.FP32)
        params = model.params()
        max_grad = 0.0
        for step in range(50):
            rows = slice(64 * step, 64 * (step + 1))
            _, grads = loss_and_grads(model.with_params(params), data.x[rows], data.y[rows])
            max_grad = max(max_grad, max(float(np.abs(g).max()) for g in grads))
            params, state = adam_step(state, params, grads, OptimizerMode.FP32)

        m_hist, v_hist = state_histograms(state)
        logger.info(f"v spans {v_hist.decades_spanned:.1f} decades")
        assert v_hist.decades_spanned >= 4
        assert max(abs(m_hist.data_min), abs(m_hist.data_max)) < 10 * max_grad


# ==================== Testes: projeção de memória ====================

@pytest.mark.unit
class TestScaling:
    """Testes para scaling_projection"""

    def test_reference_rows(self):
        """10M / 100M / 1B parâmetros com B=64"""
        rows = scaling_projection([10_000_000, 100_000_000, 1_000_000_000])
        expected = [(76.29, 21.46), (762.94, 214.58), (7629.39, 2145.77)]
        for row, (fp32_mib, q_mib) in zip(rows, expected):
            assert round(row.fp32_mib, 2) == fp32_mib
            assert round(row.quantized_mib, 2) == q_mib
            assert row.ratio == pytest.approx(32 / 9)
            assert row.metadata_overhead == pytest.approx(1 / 9)

    @pytest.mark.parametrize("n", [64, 65, 10_000])
    def test_exact_bytes_match_state(self, n):
        row = ScalingRow(n, 64)
        state = init_state([(n,)], OptimizerMode.Q_LOCAL_ADAM, block_size=64)
        assert row.exact_bytes == state_memory_bytes(state).total_bytes
        assert row.exact_bytes >= row.quantized_bytes

    def test_formula_exact_when_block_divides(self):
        row = ScalingRow(6400, 64)
        assert row.exact_bytes == row.quantized_bytes == 14_400
        assert row.fp32_bytes / MIB == row.fp32_mib

    def test_errors(self):
        with pytest.raises(ParameterError):
            scaling_projection([1000], block_size=0)
        with pytest.raises(ParameterError):
            scaling_projection([0])
        with pytest.raises(ParameterError):
            scaling_projection([10.5])

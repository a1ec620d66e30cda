# tests/unit/test_quant_formats.py

"""
Testes unitários de contabilidade de memória, serialização binária e
do código de árvore dinâmica
"""

import struct

import numpy as np
import pytest

from fedquant.exceptions import SerializationError
from fedquant.quant import (
    HEADER_BYTES,
    MIB,
    MemoryReport,
    QuantMode,
    dequantize_dynamic_tree,
    dynamic_tree_table,
    fp32_report,
    from_bytes,
    memory_report,
    quantize_dynamic_tree,
    quantize_linear,
    quantize_log,
    quantized_bytes,
    read_tensor,
    to_bytes,
)


# ==================== Testes: MemoryReport ====================

@pytest.mark.unit
class TestMemoryReport:
    """Testes para memory_report e derivados"""

    def test_single_block(self):
        """N=64, B=64 → 72 bytes, fp32 256, razão 256/72"""
        report = memory_report(quantize_linear(np.zeros(64, np.float32), 64))
        assert report.payload_bytes == 64
        assert report.metadata_bytes == 8
        assert report.total_bytes == 72
        assert report.fp32_equivalent_bytes == 256
        assert report.compression_ratio == 256 / 72
        assert round(report.compression_ratio, 4) == 3.5556

    def test_padding(self):
        """N=65, B=64 → 2 blocos, payload 128 com 63 de preenchimento"""
        report = memory_report(quantize_log(np.ones(65, np.float32), 64))
        assert report.payload_bytes == 128
        assert report.padding_bytes == 63
        assert report.metadata_bytes == 16
        assert report.total_bytes == 144

    def test_metadata_overhead(self):
        """16N/B ÷ (2N + 16N/B) = 1/9 para B=64, somando dois estados"""
        m = memory_report(quantize_linear(np.zeros(6400, np.float32), 64))
        v = memory_report(quantize_log(np.zeros(6400, np.float32), 64))
        total = m + v
        assert total.metadata_fraction == 1 / 9
        assert total.total_bytes == 2 * 6400 + 16 * 6400 // 64

    def test_ten_million_element_states(self):
        """Dois estados de 10M elementos: 22.5M bytes = 21.46 MiB contra 76.29 MiB"""
        per_state = quantized_bytes(10_000_000, 64)
        assert 2 * per_state == 22_500_000
        assert round(2 * per_state / MIB, 2) == 21.46
        assert round(fp32_report(20_000_000).total_bytes / MIB, 2) == 76.29

    def test_quantized_bytes_matches_materialized(self):
        for n in (1, 63, 64, 65, 10_000):
            qt = quantize_linear(np.arange(n, dtype=np.float32), 64)
            assert quantized_bytes(n, 64) == memory_report(qt).total_bytes

    def test_empty_report(self):
        report = MemoryReport()
        assert report.total_bytes == 0
        assert report.compression_ratio == 1.0
        assert report.metadata_fraction == 0.0

    def test_to_dict(self):
        data = fp32_report(10).to_dict()
        assert data["total_bytes"] == 40
        assert data["compression_ratio"] == 1.0


# ==================== Testes: serialização ====================

@pytest.mark.unit
class TestSerialization:
    """Testes para o formato binário 'QLAQ'"""

    def test_layout_size(self):
        """Cabeçalho de 20 bytes + 72 bytes por bloco"""
        qt = quantize_linear(np.linspace(-1, 1, 64), 64)
        data = to_bytes(qt)
        assert HEADER_BYTES == 20
        assert len(data) == 20 + 72
        assert data[:4] == b"QLAQ"
        magic, version, mode, _, block_size, n = struct.unpack_from("<4sHBBIQ", data)
        assert (version, mode, block_size, n) == (1, 0, 64, 64)

    def test_roundtrip(self, np_rng):
        x = np.abs(np_rng.normal(size=130)).astype(np.float32)
        for qt in (quantize_linear(x, 32), quantize_log(x, 64)):
            restored = from_bytes(to_bytes(qt))
            assert restored == qt

    def test_read_tensor_offset(self):
        a = to_bytes(quantize_linear([1.0, 2.0], 4))
        b = to_bytes(quantize_log([3.0], 2))
        first, end = read_tensor(a + b)
        second, end2 = read_tensor(a + b, end)
        assert first.mode is QuantMode.LINEAR and second.mode is QuantMode.LOG
        assert end2 == len(a) + len(b)

    def test_bad_magic(self):
        data = bytearray(to_bytes(quantize_linear([1.0], 1)))
        data[:4] = b"XXXX"
        with pytest.raises(SerializationError):
            from_bytes(bytes(data))

    def test_truncated(self):
        data = to_bytes(quantize_linear(np.ones(10, np.float32), 4))
        with pytest.raises(SerializationError):
            from_bytes(data[:10])
        with pytest.raises(SerializationError):
            from_bytes(data[:-1])

    def test_trailing_bytes(self):
        with pytest.raises(SerializationError):
            from_bytes(to_bytes(quantize_linear([1.0], 1)) + b"\x00")

    def test_unknown_mode_and_version(self):
        data = bytearray(to_bytes(quantize_linear([1.0], 1)))
        data[6] = 9
        with pytest.raises(SerializationError):
            from_bytes(bytes(data))
        data = bytearray(to_bytes(quantize_linear([1.0], 1)))
        data[4] = 2
        with pytest.raises(SerializationError):
            from_bytes(bytes(data))

    def test_log_epsilon_must_be_default(self):
        qt = quantize_log([1.0, 2.0], 2, epsilon=1e-6)
        with pytest.raises(SerializationError):
            to_bytes(qt)
        assert len(to_bytes(qt, strict_epsilon=False)) == 20 + 2 + 8


# ==================== Testes: árvore dinâmica ====================

@pytest.mark.unit
class TestDynamicTree:
    """Testes para o código de prefixo usado como baseline"""

    def test_table(self):
        table = dynamic_tree_table()
        assert table.shape == (256,)
        assert table[0] == 0.0 and table[0x80] == 0.0
        assert table[0x3F] == 1.0 and table[0xBF] == -1.0
        positive = np.sort(table[1:0x80])
        assert np.all(np.diff(positive) > 0)
        assert positive[0] == 2.0 ** -7

    def test_bit_layout(self):
        """s | e uns | 0 | 6-e bits de fração"""
        table = dynamic_tree_table()
        assert table[0b0_0_000001] == 0.5 + 2 / 128
        assert table[0b0_10_11111] == 0.5
        assert table[0b0_10_00000] == 0.5 * (0.5 + 1 / 64)
        assert table[0b0_110_1111] == 0.25
        assert table[0b0_111110_0] == 2.0 ** -5 * 0.75
        assert table[0b0_1111110] == 2.0 ** -6
        assert table[0b0_1111111] == 2.0 ** -7
        assert table[0b1_10_11111] == -0.5

    def test_fraction_bits_shrink_with_exponent(self):
        """Cada faixa (2^-(e+1), 2^-e] tem 2^(6-e) valores"""
        magnitudes = dynamic_tree_table()[1:0x80]
        for e in range(7):
            band = (magnitudes > 2.0 ** -(e + 1)) & (magnitudes <= 2.0 ** -e)
            expected = 2 ** (6 - e) - (1 if e == 0 else 0)
            assert int(band.sum()) == expected, f"e={e}"

    def test_zero_input(self):
        codes, absmax = quantize_dynamic_tree(np.zeros(5, np.float32))
        assert absmax == 0.0
        assert not codes.any()
        assert not dequantize_dynamic_tree(codes, absmax).any()

    def test_absmax_decodes_exactly(self):
        codes, absmax = quantize_dynamic_tree([0.25, -3.0, 1.5])
        assert absmax == 3.0
        x_hat = dequantize_dynamic_tree(codes, absmax)
        assert codes[1] == 0xBF
        assert x_hat[1] == -3.0
        assert abs(abs(x_hat[1]) - 3.0) <= 3.0 / 2 ** 6

    def test_table_values_roundtrip(self):
        """Todo valor representável volta a si mesmo"""
        table = dynamic_tree_table()
        values = table[1:0x80].astype(np.float32)
        codes, absmax = quantize_dynamic_tree(values)
        assert absmax == 1.0
        assert np.array_equal(dequantize_dynamic_tree(codes, absmax), values)

    def test_sign_preserved(self, np_rng):
        x = np_rng.normal(size=200).astype(np.float32)
        codes, absmax = quantize_dynamic_tree(x)
        x_hat = dequantize_dynamic_tree(codes, absmax)
        nonzero = x_hat != 0
        assert np.all(np.sign(x_hat[nonzero]) == np.sign(x[nonzero]))

    def test_values_below_smallest_band_vanish(self):
        """Abaixo de 2^-8 do absmax o código é zero"""
        x = np.array([1.0, 2.0 ** -7, 1.2 * 2.0 ** -8, 0.9 * 2.0 ** -8, 1e-4, 1e-7], np.float32)
        codes, absmax = quantize_dynamic_tree(x)
        x_hat = dequantize_dynamic_tree(codes, absmax)
        assert x_hat[1] == np.float32(2.0 ** -7)
        assert x_hat[2] == np.float32(2.0 ** -7)
        assert not x_hat[3:].any()
        assert not codes[3:].any()

    def test_small_values_lose_precision(self, log_uniform_factory):
        """Valores pequenos ficam com poucos bits de fração ou somem"""
        x = log_uniform_factory(3000, 1e-7, 1.0)
        codes, absmax = quantize_dynamic_tree(x)
        x_hat = dequantize_dynamic_tree(codes, absmax).astype(np.float64)
        rel = np.abs(x_hat - x) / x
        large = x > 0.1
        small = x < 1e-4
        assert rel[large].mean() < 0.02
        assert np.all(rel[small] == 1.0)
        assert rel.mean() > 0.5

# fedquant/cli/runner.py

"""
Execução de experimentos, sweeps, estudos de análise e replay

Layout de saída de uma execução::

    <out>/manifest.json   configuração resolvida (gravada antes do treino)
    <out>/metrics.jsonl   um registro por rodada, chaves em ordem fixa
    <out>/timings.jsonl   wall_ms por rodada (fora do registro determinístico)
    <out>/summary.json    registro final
    <out>/state_checkpoint.qlas
                          estado de Adam do primeiro cliente da rodada 1
"""

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from fedquant.analysis import (
    precision_study,
    precision_variants,
    sample_log_uniform,
    scaling_projection,
    state_histograms,
    storage_fidelity,
)
from fedquant.data import (
    Dataset,
    generate_synthetic,
    generate_synthetic_split,
    heterogeneity_stats,
    load_flat_file,
    partition_dirichlet,
)
from fedquant.exceptions import UsageError
from fedquant.fed import FederatedResult, local_train, run_federated, selection_counts, selection_stats
from fedquant.models import FederatedConfig, RoundMetrics, RunManifest
from fedquant.ndcore import STREAM_ANALYSIS, STREAM_DATA, STREAM_MODEL_INIT, STREAM_PARTITION, RngStream
from fedquant.nn import create_mlp
from fedquant.optim import OptimizerMode, StateStorage, save_checkpoint
from fedquant.quant import Rounding
from fedquant.utils import get_logger
from fedquant.utils.parser import dumps_record, format_alpha, parse_alpha, read_jsonl

logger = get_logger('runner')

PathLike = Union[str, Path]

SYNTHETIC_DEFAULTS: Dict[str, Any] = {
    "n_train": 5000,
    "n_test": 1000,
    "features": 64,
    "classes": 10,
    "class_sep": 3.0,
}
DEFAULT_TEST_FRACTION = 0.2

SWEEP_AXES = ("mode", "alpha", "block_size", "lr", "seed")
STUDIES = ("precision", "histograms", "scaling", "fidelity")


# ==== Datasets ====

def dataset_descriptor(
    kind: str,
    seed: int,
    path: Optional[str] = None,
    test_path: Optional[str] = None,
    test_fraction: float = DEFAULT_TEST_FRACTION,
    **synthetic: Any,
) -> Dict[str, Any]:
    """Descritor completo (gravado no manifesto) para um dataset"""
    if kind == "synthetic":
        params = dict(SYNTHETIC_DEFAULTS)
        params.update({k: v for k, v in synthetic.items() if v is not None})
        unknown = sorted(set(params) - set(SYNTHETIC_DEFAULTS))
        if unknown:
            raise UsageError(f"Unknown synthetic dataset option: {unknown[0]}")
        return {"kind": "synthetic", "seed": int(seed), **params}
    if kind == "file":
        if not path:
            raise UsageError("file dataset needs a path")
        if not 0.0 < test_fraction < 1.0:
            raise UsageError(f"test fraction must lie in (0, 1), got {test_fraction}")
        return {
            "kind": "file",
            "path": str(path),
            "test_path": str(test_path) if test_path else None,
            "test_fraction": float(test_fraction),
            "seed": int(seed),
        }
    raise UsageError(f"Unknown dataset kind: {kind!r}")


def load_datasets(descriptor: Dict[str, Any]) -> Tuple[Dataset, Dataset]:
    """(treino, teste) a partir de um descritor"""
    if descriptor["kind"] == "synthetic":
        return generate_synthetic_split(
            descriptor["seed"],
            descriptor["n_train"],
            descriptor["n_test"],
            descriptor["features"],
            descriptor["classes"],
            descriptor["class_sep"],
        )

    data = load_flat_file(descriptor["path"])
    if descriptor.get("test_path"):
        return data, load_flat_file(descriptor["test_path"])

    # Divisão embaralhada com o stream de dados
    n = len(data)
    n_test = int(round(n * descriptor["test_fraction"]))
    if n_test < 1 or n_test >= n:
        raise UsageError(f"cannot split {n} samples with test fraction {descriptor['test_fraction']}")
    order = RngStream(descriptor["seed"], STREAM_DATA).generator.permutation(n)
    return data.subset(np.sort(order[n_test:])), data.subset(np.sort(order[:n_test]))


def _with_seed(descriptor: Dict[str, Any], seed: int) -> Dict[str, Any]:
    updated = dict(descriptor)
    updated["seed"] = int(seed)
    return updated


# ==== Execução única ====

def _write_json(path: Path, data: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, allow_nan=False) + "\n", encoding="utf-8")
    return path


def _summary_record(config: FederatedConfig, result: FederatedResult) -> Dict[str, Any]:
    record = {"mode": str(config.mode), "alpha": format_alpha(config.alpha), "seed": config.seed,
              "block_size": config.block_size, "lr": config.lr}
    record.update(result.summary())
    return record


def run_experiment(
    config: FederatedConfig,
    dataset: Dict[str, Any],
    out_dir: PathLike,
    threads: int = 1,
) -> FederatedResult:
    """
    Executar um experimento e gravar manifesto, métricas e resumo

    Args:
        config: Configuração resolvida
        dataset: Descritor do dataset (ver dataset_descriptor)
        out_dir: Diretório de saída (criado se necessário)
        threads: Workers para os clientes de uma rodada

    Returns:
        FederatedResult
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = {
        "metrics": "metrics.jsonl",
        "timings": "timings.jsonl",
        "summary": "summary.json",
        "checkpoint": "state_checkpoint.qlas",
    }
    manifest = RunManifest(config=config, dataset=dict(dataset), outputs=outputs)
    manifest.save(out / "manifest.json")

    train, test = load_datasets(dataset)
    logger.info(f"Running {config.mode} (alpha={format_alpha(config.alpha)}, seed={config.seed}) -> {out}")

    with open(out / outputs["metrics"], "w", encoding="utf-8") as metrics_file, \
            open(out / outputs["timings"], "w", encoding="utf-8") as timings_file:

        def on_round(metrics: RoundMetrics) -> None:
            metrics_file.write(dumps_record(metrics.to_record()) + "\n")
            metrics_file.flush()
            timings_file.write(dumps_record({"round": metrics.round, "wall_ms": metrics.wall_ms}) + "\n")

        result = run_federated(config, train, test, threads=threads, on_round=on_round)

    _write_json(out / outputs["summary"], _summary_record(config, result))
    if result.first_round_state is not None:
        checkpoint = save_checkpoint(result.first_round_state)
        (out / outputs["checkpoint"]).write_bytes(checkpoint)
        logger.debug(f"Round-1 optimizer checkpoint: {len(checkpoint)} bytes")
    logger.info(f"✅ Run written to {out}")
    return result


@dataclass
class ReplayOutcome:
    original: Path
    replayed: Path
    identical: bool


def replay(manifest_path: PathLike, out_dir: Optional[PathLike] = None, threads: int = 1) -> ReplayOutcome:
    """
    Reexecutar uma execução a partir do manifesto e comparar metrics.jsonl

    Args:
        manifest_path: manifest.json de uma execução anterior
        out_dir: Destino (padrão: <dir do manifesto>/replay)
        threads: Workers (o resultado não depende disso)
    """
    manifest_path = Path(manifest_path)
    manifest = RunManifest.load(manifest_path)
    source_dir = manifest_path.parent
    target = Path(out_dir) if out_dir is not None else source_dir / "replay"

    run_experiment(manifest.config, manifest.dataset, target, threads=threads)

    metrics_name = manifest.outputs.get("metrics", "metrics.jsonl")
    original = source_dir / metrics_name
    replayed = target / "metrics.jsonl"
    if not original.exists():
        logger.warning(f"⚠️  No original metrics at {original}; nothing to compare")
        return ReplayOutcome(original, replayed, False)

    identical = original.read_bytes() == replayed.read_bytes()
    if identical:
        logger.info(f"✅ Replay reproduced {original} byte-for-byte")
    else:
        logger.error(f"❌ Replay diverged from {original}")
    return ReplayOutcome(original, replayed, identical)


# ==== Sweeps ====

def parse_axis_values(axis: str, values: Iterable[Any]) -> List[Any]:
    """Converter valores de um eixo; lista vazia é erro de uso"""
    if axis not in SWEEP_AXES:
        raise UsageError(f"Unknown sweep axis {axis!r} (expected one of {', '.join(SWEEP_AXES)})")
    items = [v.strip() if isinstance(v, str) else v for v in values]
    items = [v for v in items if v != ""]
    if not items:
        raise UsageError(f"Sweep over {axis} needs at least one value")

    try:
        if axis == "mode":
            return [OptimizerMode.parse(v) for v in items]
        if axis == "alpha":
            return [parse_alpha(v) for v in items]
        if axis == "lr":
            return [float(v) for v in items]
        return [int(v) for v in items]
    except ValueError as e:
        raise UsageError(f"Invalid {axis} value: {e}")


def _mean_std(values: Sequence[float]) -> Tuple[float, float]:
    arr = np.asarray(values, dtype=np.float64)
    return float(arr.mean()), float(arr.std())


def _axis_label(axis: str, value: Any) -> str:
    if axis == "alpha":
        return format_alpha(value)
    return str(value)


def run_sweep(
    base: FederatedConfig,
    axis: str,
    values: Iterable[Any],
    dataset: Dict[str, Any],
    out_dir: PathLike,
    seeds: Optional[Sequence[int]] = None,
    threads: int = 1,
) -> List[Dict[str, Any]]:
    """
    Uma execução por valor do eixo (vezes cada seed) e tabela agregada

    O eixo seed agrupa todas as seeds numa linha; nos outros eixos a seed
    fica fixa em base.seed, a menos que ``seeds`` seja dado.

    Returns:
        Linhas com média ± desvio de best/final accuracy por valor
    """
    parsed = parse_axis_values(axis, values)
    out = Path(out_dir)

    if axis == "seed":
        groups: List[Tuple[Any, FederatedConfig, List[int]]] = [(str(base.mode), base, list(parsed))]
    else:
        run_seeds = [int(s) for s in seeds] if seeds else [base.seed]
        groups = [(value, base.replace(**{axis: value}), run_seeds) for value in parsed]

    rows: List[Dict[str, Any]] = []
    for value, config, group_seeds in groups:
        runs = []
        for seed in group_seeds:
            run_config = config.replace(seed=seed)
            run_dir = out / f"{axis}={_axis_label(axis, value)}" / f"seed={seed}"
            result = run_experiment(run_config, _with_seed(dataset, seed), run_dir, threads=threads)
            runs.append(_summary_record(run_config, result))

        best_mean, best_std = _mean_std([r["best_accuracy"] for r in runs])
        final_mean, final_std = _mean_std([r["final_accuracy"] for r in runs])
        rows.append({
            "axis": axis,
            "value": _axis_label(axis, value) if axis != "seed" else ",".join(map(str, group_seeds)),
            "mode": runs[0]["mode"],
            "seeds": group_seeds,
            "best_accuracy_mean": best_mean,
            "best_accuracy_std": best_std,
            "final_accuracy_mean": final_mean,
            "final_accuracy_std": final_std,
            "state_bytes": runs[0]["state_bytes"],
            "compression_ratio": runs[0]["compression_ratio"],
        })

    with open(out / "sweep.jsonl", "w", encoding="utf-8") as f:
        for row in rows:
            f.write(dumps_record(row) + "\n")
    _write_table(
        out / "sweep.tsv",
        ["value", "mode", "best_acc", "final_acc", "state_bytes", "ratio"],
        [
            [
                row["value"],
                row["mode"],
                f"{100 * row['best_accuracy_mean']:.2f}±{100 * row['best_accuracy_std']:.2f}",
                f"{100 * row['final_accuracy_mean']:.2f}±{100 * row['final_accuracy_std']:.2f}",
                row["state_bytes"],
                f"{row['compression_ratio']:.3f}",
            ]
            for row in rows
        ],
    )
    logger.info(f"✅ Sweep over {axis}: {len(rows)} row(s) written to {out}")
    return rows


# ==== Estudos de análise ====

def _write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, delimiter="\t", lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _study_precision(out: Path, params: Dict[str, Any]) -> List[Path]:
    seed = int(params.get("seed", 42))
    n = int(params.get("n", 3000))
    lo = float(params.get("lo", 1e-7))
    hi = float(params.get("hi", 1.0))
    block_size = int(params.get("block_size", 64))
    rounding = Rounding(params.get("rounding", Rounding.FLOOR.value))

    log_report, tree_report = precision_study(
        RngStream(seed, STREAM_ANALYSIS), n, lo, hi, block_size, rounding
    )
    variants = precision_variants(RngStream(seed, STREAM_ANALYSIS), n, lo, hi, block_size)
    reports = [log_report, tree_report] + variants

    json_path = _write_json(out / "precision.json", {
        "n": n, "lo": lo, "hi": hi, "block_size": block_size, "seed": seed,
        "rounding": str(rounding),
        "error_ratio": tree_report.mean_relative_error / log_report.mean_relative_error,
        "reports": [r.to_dict() for r in reports],
    })
    tsv_path = _write_table(
        out / "precision.tsv",
        ["scheme", "decade_lo", "decade_hi", "mean_relative_error", "count"],
        [
            [r.scheme, f"{d_lo:g}", f"{d_hi:g}", f"{err:.6g}", count]
            for r in reports
            for d_lo, d_hi, err, count in r.per_decade
        ],
    )
    return [json_path, tsv_path]


def _study_histograms(out: Path, params: Dict[str, Any]) -> List[Path]:
    seed = int(params.get("seed", 42))
    steps = int(params.get("steps", 50))
    batch = int(params.get("batch_size", 64))
    mode = OptimizerMode.parse(params.get("mode", "fp32"))
    if steps < 1 or batch < 1:
        raise UsageError("histogram warmup needs steps >= 1 and batch_size >= 1")

    # Aquecimento: um cliente, uma época de exatamente `steps` mini-batches
    rng = RngStream(seed, STREAM_ANALYSIS)
    data = generate_synthetic(
        rng, steps * batch, SYNTHETIC_DEFAULTS["features"], SYNTHETIC_DEFAULTS["classes"],
        SYNTHETIC_DEFAULTS["class_sep"],
    )
    config = FederatedConfig(
        num_clients=1, clients_per_round=1, local_epochs=1, batch_size=batch, mode=mode,
        block_size=int(params.get("block_size", 64)), seed=seed, alpha="iid",
    )
    model = create_mlp(RngStream(seed, STREAM_MODEL_INIT), data.num_features, data.num_classes, config.hidden)
    partition = partition_dirichlet(RngStream(seed, STREAM_PARTITION), data, 1, None)[0]
    _, state, done = local_train(model, partition, data, config, rng.child(STREAM_DATA))
    logger.info(f"Histogram warmup: {done} steps in mode {mode}")

    m_hist, v_hist = state_histograms(state)
    json_path = _write_json(out / "histograms.json", {
        "steps": done, "mode": str(mode), "seed": seed,
        "m": m_hist.to_dict(), "v": v_hist.to_dict(),
        "v_decades_spanned": v_hist.decades_spanned,
    })
    m_path = _write_table(out / "histogram_m.tsv", ["bin_lo", "bin_hi", "count"], m_hist.to_rows())
    v_path = _write_table(out / "histogram_v.tsv", ["log10_lo", "log10_hi", "count"], v_hist.to_rows())
    return [json_path, m_path, v_path]


def _study_scaling(out: Path, params: Dict[str, Any]) -> List[Path]:
    counts = params.get("params", [10_000_000, 100_000_000, 1_000_000_000, 10_000_000_000])
    rows = scaling_projection(counts, int(params.get("block_size", 64)))
    json_path = _write_json(out / "scaling.json", [r.to_dict() for r in rows])
    tsv_path = _write_table(
        out / "scaling.tsv",
        ["num_params", "fp32_mib", "quantized_mib", "ratio", "exact_bytes"],
        [
            [r.num_params, f"{r.fp32_mib:.2f}", f"{r.quantized_mib:.2f}", f"{r.ratio:.2f}", r.exact_bytes]
            for r in rows
        ],
    )
    return [json_path, tsv_path]


def _study_fidelity(out: Path, params: Dict[str, Any]) -> List[Path]:
    seed = int(params.get("seed", 42))
    n = int(params.get("n", 4096))
    lo = float(params.get("lo", 1e-12))
    hi = float(params.get("hi", 1e-3))
    block_size = int(params.get("block_size", 64))
    values = sample_log_uniform(RngStream(seed, STREAM_ANALYSIS), n, lo, hi)

    reports = [storage_fidelity(values, storage, block_size) for storage in StateStorage]
    json_path = _write_json(out / "fidelity.json", {
        "n": n, "lo": lo, "hi": hi, "block_size": block_size, "seed": seed,
        "reports": [r.to_dict() for r in reports],
    })
    tsv_path = _write_table(
        out / "fidelity.tsv",
        ["storage", "mean_relative_error", "fraction_over_half", "zero_code_fraction"],
        [
            [r.storage, f"{r.mean_relative_error:.6g}", f"{r.fraction_over_half:.4f}",
             f"{r.zero_code_fraction:.4f}"]
            for r in reports
        ],
    )
    return [json_path, tsv_path]


_STUDIES: Dict[str, Callable[[Path, Dict[str, Any]], List[Path]]] = {
    "precision": _study_precision,
    "histograms": _study_histograms,
    "scaling": _study_scaling,
    "fidelity": _study_fidelity,
}


def run_analysis(study: str, params: Optional[Dict[str, Any]], out_dir: PathLike) -> List[Path]:
    """
    Executar um estudo e gravar seus relatórios

    Args:
        study: precision | histograms | scaling | fidelity
        params: Parâmetros do estudo (ausentes usam os padrões)
        out_dir: Diretório de saída

    Returns:
        Caminhos dos arquivos gravados

    Raises:
        UsageError: estudo desconhecido
    """
    runner = _STUDIES.get(study)
    if runner is None:
        raise UsageError(f"Unknown study {study!r} (expected one of {', '.join(STUDIES)})")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = runner(out, {k: v for k, v in (params or {}).items() if v is not None})
    logger.info(f"✅ Study {study}: wrote {', '.join(p.name for p in paths)}")
    return paths


# ==== Particionamento ====

def partition_table(
    dataset: Dataset,
    alphas: Sequence[Optional[float]],
    num_clients: int,
    seed: int,
) -> List[Dict[str, Any]]:
    """Uma linha por alpha: dominância média, desvio das contagens e detalhe por cliente"""
    rows = []
    for alpha in alphas:
        partitions = partition_dirichlet(RngStream(seed, STREAM_PARTITION), dataset, num_clients, alpha)
        stats = heterogeneity_stats(partitions, dataset)
        rows.append({
            "alpha": format_alpha(alpha),
            **stats.to_dict(),
        })
        logger.info(
            f"alpha={format_alpha(alpha)}: dominant {100 * stats.avg_dominant_pct:.1f}%, "
            f"sample std {stats.sample_std:.1f}"
        )
    return rows


def run_partition(
    dataset: Dataset,
    alphas: Sequence[Optional[float]],
    num_clients: int,
    seed: int,
    out_dir: PathLike,
    clients_per_round: Optional[int] = None,
    rounds: Optional[int] = None,
) -> List[Path]:
    """Gravar tabela de heterogeneidade (e estatísticas de sorteio, se rounds dado)"""
    out = Path(out_dir)
    rows = partition_table(dataset, alphas, num_clients, seed)
    report: Dict[str, Any] = {"num_clients": num_clients, "seed": seed, "alphas": rows}

    if rounds is not None and clients_per_round is not None:
        counts = selection_counts(seed, num_clients, clients_per_round, rounds)
        report["selection"] = {
            "rounds": rounds,
            "clients_per_round": clients_per_round,
            "counts": [int(c) for c in counts],
            **selection_stats(counts),
        }

    json_path = _write_json(out / "partition.json", report)
    tsv_path = _write_table(
        out / "partition.tsv",
        ["alpha", "client", "samples", "dominant_class", "dominant_pct"],
        [
            [row["alpha"], k, count, cls, f"{100 * pct:.1f}"]
            for row in rows
            for k, (count, (cls, pct)) in enumerate(zip(row["sample_counts"], row["per_client_dominant"]))
        ],
    )
    return [json_path, tsv_path]


def load_metrics(path: PathLike) -> List[RoundMetrics]:
    """Ler metrics.jsonl (linha final truncada é descartada)"""
    return [RoundMetrics.from_dict(record) for record in read_jsonl(str(path))]

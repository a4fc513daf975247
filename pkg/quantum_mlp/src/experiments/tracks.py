"""Các nhánh thí nghiệm: classical1 (MLP + lan truyền ngược), classical2 (EBM + Gibbs),
quantum-sim (EBM + ủ mô phỏng trên BQM/Ising), equivalence và bench.

Mỗi lượt (trial) dùng seed = seed gốc + chỉ số lượt; lượt lỗi được đánh dấu và bỏ qua.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ...config.settings import RunConfig
from ..core.exceptions import ExperimentError
from ..core.params import NetworkParameters
from ..core.rng import draw_seed, make_rng, trial_seed
from ..core.trace import TrainingTrace
from ..ebm.model import EbmModel
from ..ebm.training import train_ebm
from ..equivalence.experiment import run_equivalence_experiment
from ..etl.extract import has_mnist_files, load_mnist_split
from ..etl.load import init_schema, load_trial
from ..etl.transform import FASHION_MNIST_CLASSES, Dataset, make_binary_task, synthetic_task
from ..mlp.model import MlpModel
from ..mlp.training import train_mlp
from ..sampling.bqm import build_conditional_bqm, save_bqm
from ..sampling.ising import bqm_to_ising, clamp_to_hardware
from ..sampling.samplers import GibbsSampler, Sampler, SimAnnealSampler
from ..sampling.temperature import estimate_effective_beta
from .bench import bench_runtime
from .summary import SummaryRow, TrialSummary, summarize, summarize_trial, write_summary

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class RawData:
    train_images: np.ndarray
    train_labels: np.ndarray
    test_images: np.ndarray
    test_labels: np.ndarray


@dataclass(eq=False)
class TrackResult:
    track: str
    output_dir: Path
    traces: List[Optional[TrainingTrace]] = field(default_factory=list)
    trials: List[TrialSummary] = field(default_factory=list)
    row: Optional[SummaryRow] = None
    table: Optional[pd.DataFrame] = None


def load_raw_data(config: RunConfig) -> Optional[RawData]:
    """Đọc MNIST/Fashion-MNIST một lần cho cả lượt chạy; None với dữ liệu tổng hợp."""
    if config.dataset == "synthetic":
        return None
    if not has_mnist_files(config.data_dir):
        raise FileNotFoundError(f"Không tìm thấy file IDX của {config.dataset} trong {config.data_dir}")
    train_images, train_labels = load_mnist_split(config.data_dir, "train")
    test_images, test_labels = load_mnist_split(config.data_dir, "test")
    return RawData(train_images, train_labels, test_images, test_labels)


def build_task(config: RunConfig, raw: Optional[RawData], seed: int) -> Tuple[Dataset, Dataset]:
    if raw is None:
        full = synthetic_task(config.synthetic_inputs, config.synthetic_samples, seed=config.seed)
        n_train = config.train_count or len(full) // 2
        if n_train >= len(full):
            raise ValueError(f"train_count ({n_train}) phải nhỏ hơn synthetic_samples ({len(full)})")
        return full.subset(np.arange(n_train)), full.subset(np.arange(n_train, len(full)))
    names = None
    if config.dataset == "fashion-mnist":
        names = tuple(FASHION_MNIST_CLASSES[c] for c in sorted((config.class_a, config.class_b)))
    return make_binary_task(raw.train_images, raw.train_labels, raw.test_images, raw.test_labels,
                            config.class_a, config.class_b, config.train_count, seed, names)


def build_model(config: RunConfig, cls, n_inputs: int, rng: np.random.Generator) -> NetworkParameters:
    if config.init == "fan_in":
        return cls.fan_in_uniform(n_inputs, config.n_hidden, config.n_outputs, rng=rng)
    return cls.gaussian(n_inputs, config.n_hidden, config.n_outputs, std=config.init_std, rng=rng)


def make_sampler(config: RunConfig) -> Optional[Sampler]:
    if config.track == "classical2":
        return GibbsSampler()
    if config.track == "quantum-sim":
        return SimAnnealSampler()
    if config.track == "equivalence" and config.equivalence_sampler == "gibbs":
        return GibbsSampler()
    return None


def run_trial(config: RunConfig, raw: Optional[RawData], trial_index: int,
              output_dir: Optional[Path] = None) -> Tuple[TrainingTrace, TrialSummary]:
    seed = trial_seed(config.seed, trial_index)
    rng = make_rng(seed)
    train, test = build_task(config, raw, seed)
    adam = config.adam_config()

    if config.track == "classical1":
        model = build_model(config, MlpModel, train.n_inputs, rng)
        trace = train_mlp(model, train, test, adam, config.steps, config.batch_size,
                          seed=draw_seed(rng), track=config.track)
    elif config.track in ("classical2", "quantum-sim"):
        model = build_model(config, EbmModel, train.n_inputs, rng)
        trace = train_ebm(model, train, test, make_sampler(config), adam, config.steps,
                          config.batch_size, sampler_config=config.sampler_config(),
                          seed=draw_seed(rng), estimator=config.estimator, track=config.track)
    elif config.track == "equivalence":
        report = run_equivalence_experiment(
            train, test, config.n_hidden, adam, config.steps, config.batch_size,
            seed=draw_seed(rng), sampler=make_sampler(config),
            sampler_config=config.sampler_config(), init_std=config.init_std,
            n_outputs=config.n_outputs, estimator=config.estimator,
        )
        if output_dir is not None:
            report.to_csv(output_dir / f"equivalence_{trial_index}.csv")
            report.to_json(output_dir / f"equivalence_{trial_index}.json")
        trace = report.to_trace()
    else:
        raise ValueError(f"Nhánh {config.track!r} không có lượt huấn luyện")

    trace.seed = seed
    return trace, summarize_trial(trace, trial_index, config.track)


def export_bqm(config: RunConfig, raw: Optional[RawData], output_dir: Path, index: int = 0) -> Path:
    """Ghi BQM của ảnh train thứ `index` với trọng số khởi tạo của lượt 0.

    Cùng thư mục có ising_dump.txt (Ising sau khi kẹp, đúng hệ số nạp cho sampler). Với nhánh
    quantum-sim, ảnh đó còn được lấy mẫu bằng ủ mô phỏng và β hiệu dụng ước lượng từ mẫu
    được ghi vào beta_estimate.json.
    """
    seed = trial_seed(config.seed, 0)
    train, _ = build_task(config, raw, seed)
    if not 0 <= index < len(train):
        raise ValueError(f"index {index} nằm ngoài tập train ({len(train)} ảnh)")
    model = build_model(config, EbmModel, train.n_inputs, make_rng(seed))
    x = train.inputs[index]
    bqm = build_conditional_bqm(model, x, config.beta_eff)
    path = save_bqm(bqm, output_dir / "bqm_dump.txt")

    ising = bqm_to_ising(bqm)
    if config.clamp_to_hardware:
        ising, _ = clamp_to_hardware(ising)
    (output_dir / "ising_dump.txt").write_text(ising.to_text(), encoding="utf-8")

    if config.track == "quantum-sim":
        samples = SimAnnealSampler().sample(model, x, config.sampler_config(seed=seed))
        beta_estimate = estimate_effective_beta(ising, samples)
        logger.info(f"β ước lượng từ mẫu ủ: {beta_estimate:.4g} (β_sim = {samples.metadata['beta_sim']:g})")
        payload = {"beta_estimate": beta_estimate, "beta_sim": samples.metadata["beta_sim"],
                   "beta_eff": config.beta_eff, "reads": samples.total_reads}
        (output_dir / "beta_estimate.json").write_text(json.dumps(payload, indent=2), encoding="utf-8")
    return path


def run_track(config: RunConfig, output_dir: Optional[Path] = None) -> TrackResult:
    """Chạy `trials` lượt độc lập và ghi trace_<lượt>.csv cùng summary.json.

    Args:
        config: cấu hình đã kiểm tra.
        output_dir: thư mục kết quả; mặc định output_dir/<track> của cấu hình.

    Returns:
        TrackResult gồm trace, tóm tắt từng lượt và dòng tổng hợp.
    """
    output_dir = Path(output_dir) if output_dir is not None else config.output_dir / config.track
    output_dir.mkdir(parents=True, exist_ok=True)
    result = TrackResult(track=config.track, output_dir=output_dir)

    if config.track == "bench":
        result.table = bench_runtime(config.sizes, repeats=config.repeats, batch=config.bench_batch,
                                     seed=config.seed, output_path=output_dir / "bench.csv")
        return result

    try:
        raw = load_raw_data(config)
    except (OSError, ValueError) as e:
        raise ExperimentError(f"Đọc dữ liệu thất bại: {e}") from e
    if config.dump_bqm:
        export_bqm(config, raw, output_dir)
    if config.store_db:
        init_schema()

    for trial_index in range(config.trials):
        seed = trial_seed(config.seed, trial_index)
        logger.info(f"Đang chạy {config.track} lượt {trial_index + 1}/{config.trials} (seed {seed})")
        try:
            trace, summary = run_trial(config, raw, trial_index, output_dir)
            trace.to_csv(output_dir / f"trace_{trial_index}.csv")
        except Exception as e:
            logger.error(f"❌ Lượt {trial_index} thất bại: {str(e)}")
            trace, summary = None, TrialSummary.failure(config.track, trial_index, seed, str(e))
        result.traces.append(trace)
        result.trials.append(summary)
        if config.store_db:
            load_trial(summary, trace, run_name=output_dir.name)

    if all(t.failed for t in result.trials):
        logger.warning(f"⚠️ Mọi lượt của nhánh {config.track} đều thất bại")
    result.row = summarize(result.trials)
    write_summary(output_dir / "summary.json", result.trials, settings=config.describe())
    logger.info(f"✅ {config.track}: {result.row.successful}/{result.row.trials} lượt thành công")
    return result


def grid_beta(config: RunConfig, betas: Sequence[float], output_dir: Optional[Path] = None) -> pd.DataFrame:
    """Chạy nhánh quantum-sim với từng β_eff trong lưới và gộp các dòng tổng hợp."""
    if config.track != "quantum-sim":
        raise ValueError("Lưới β_eff chỉ áp dụng cho nhánh quantum-sim")
    base_dir = Path(output_dir) if output_dir is not None else config.output_dir / config.track
    rows = []
    for beta in betas:
        beta_config = config.model_copy(update={"beta_eff": float(beta), "beta_grid": None})
        result = run_track(beta_config, base_dir / f"beta_{beta:g}")
        rows.append({"beta_eff": float(beta), **result.row.to_dict()})
    table = pd.DataFrame(rows)
    base_dir.mkdir(parents=True, exist_ok=True)
    table.to_csv(base_dir / "beta_grid.csv", index=False)
    return table

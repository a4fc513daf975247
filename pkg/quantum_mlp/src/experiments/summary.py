"""Tổng hợp kết quả các lượt chạy: độ chính xác, số bước tới 70%, tỉ lệ thành công."""
import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..core.trace import TrainingTrace

logger = logging.getLogger(__name__)

ACCURACY_THRESHOLD = 0.70
SUCCESS_WINDOW = 5
SUCCESS_MIN_ACCURACY = 0.65
SUCCESS_MIN_GAIN = 0.10
_TOL = 1e-12

SUMMARY_COLUMNS = ["track", "trials", "successful", "mean_accuracy", "median_steps_to_70", "success_rate"]


@dataclass
class TrialSummary:
    track: str
    trial_index: int
    seed: Optional[int]
    final_accuracy: float
    steps_to_70: Optional[int]      # None: chưa vượt 70%
    successful: bool
    failed: bool = False
    error: Optional[str] = None

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict) -> "TrialSummary":
        return cls(**data)

    @classmethod
    def failure(cls, track: str, trial_index: int, seed: Optional[int], error: str) -> "TrialSummary":
        return cls(track, trial_index, seed, float("nan"), None, False, True, error)


def steps_to_threshold(accuracies: Sequence[float], steps: Optional[Sequence[int]] = None,
                       threshold: float = ACCURACY_THRESHOLD) -> Optional[int]:
    """Bước đầu tiên có độ chính xác test > threshold, None nếu không có."""
    accuracies = np.asarray(accuracies, dtype=np.float64)
    steps = np.arange(len(accuracies)) if steps is None else np.asarray(steps)
    hits = np.flatnonzero(accuracies > threshold)
    return int(steps[hits[0]]) if hits.size else None


def is_successful(accuracies: Sequence[float], window: int = SUCCESS_WINDOW,
                  min_accuracy: float = SUCCESS_MIN_ACCURACY, min_gain: float = SUCCESS_MIN_GAIN) -> bool:
    """Thành công khi trung bình `window` bước cuối >= min_accuracy và cao hơn bước 0 ít nhất min_gain."""
    accuracies = np.asarray(accuracies, dtype=np.float64)
    if accuracies.size < 2 or np.any(np.isnan(accuracies)):
        return False
    tail = accuracies[1:][-window:].mean()
    return bool(tail >= min_accuracy - _TOL and tail - accuracies[0] >= min_gain - _TOL)


def summarize_trial(trace: TrainingTrace, trial_index: int, track: Optional[str] = None) -> TrialSummary:
    accuracies = trace.accuracies
    return TrialSummary(
        track=track or trace.track,
        trial_index=int(trial_index),
        seed=trace.seed,
        final_accuracy=float(accuracies[-1]) if accuracies.size else float("nan"),
        steps_to_70=steps_to_threshold(accuracies, trace.steps),
        successful=is_successful(accuracies),
    )


@dataclass
class SummaryRow:
    track: str
    trials: int
    successful: int
    mean_accuracy: Optional[float]
    median_steps_to_70: Optional[float]
    success_rate: float             # phần trăm

    def to_dict(self) -> Dict:
        return asdict(self)


def summarize(trials: Sequence[TrialSummary]) -> SummaryRow:
    """Một dòng bảng tổng hợp: độ chính xác trung bình và số bước trung vị của các lượt thành công."""
    if not trials:
        raise ValueError("Cần ít nhất một lượt chạy để tổng hợp")
    good = [t for t in trials if t.successful and not t.failed]
    reached = [t.steps_to_70 for t in good if t.steps_to_70 is not None]
    return SummaryRow(
        track=trials[0].track,
        trials=len(trials),
        successful=len(good),
        mean_accuracy=float(np.mean([t.final_accuracy for t in good])) if good else None,
        median_steps_to_70=float(np.median(reached)) if reached else None,
        success_rate=100.0 * len(good) / len(trials),
    )


def write_summary(path, trials: Sequence[TrialSummary], settings: Optional[Dict] = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "summary": summarize(trials).to_dict(),
        "trials": [t.to_dict() for t in trials],
        "settings": settings or {},
    }
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=2, allow_nan=True), encoding="utf-8")
    return path


def read_trials(directory) -> List[TrialSummary]:
    """Đọc summary.json nếu có, không thì tính lại từ các file trace_<trial>.csv."""
    directory = Path(directory)
    summary_file = directory / "summary.json"
    if summary_file.is_file():
        payload = json.loads(summary_file.read_text(encoding="utf-8"))
        return [TrialSummary.from_dict(t) for t in payload["trials"]]
    trials = []
    for path in sorted(directory.glob("trace_*.csv")):
        index = int(path.stem.split("_", 1)[1])
        trials.append(summarize_trial(TrainingTrace.from_csv(path), index))
    return trials


def summarize_dir(directory) -> pd.DataFrame:
    """Bảng tổng hợp cho một thư mục kết quả (quét cả các thư mục con)."""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"Không tìm thấy thư mục kết quả: {directory}")
    rows = []
    candidates = [directory] + sorted(p for p in directory.rglob("*") if p.is_dir())
    for candidate in candidates:
        trials = read_trials(candidate)
        if not trials:
            continue
        by_track: Dict[str, List[TrialSummary]] = {}
        for trial in trials:
            by_track.setdefault(trial.track, []).append(trial)
        for track_trials in by_track.values():
            rows.append(summarize(track_trials).to_dict())
    if not rows:
        raise ValueError(f"Không có kết quả nào trong {directory}")
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)

from .summary import (TrialSummary, SummaryRow, steps_to_threshold, is_successful, summarize_trial,
                      summarize, summarize_dir, read_trials, write_summary, ACCURACY_THRESHOLD)
from .bench import bench_runtime, median_runtime, BENCH_COLUMNS
from .tracks import (RawData, TrackResult, run_track, run_trial, grid_beta, export_bqm,
                     load_raw_data, build_task, make_sampler)
from .cli import main, run, parse_overrides

__all__ = [
    "TrialSummary", "SummaryRow", "steps_to_threshold", "is_successful", "summarize_trial",
    "summarize", "summarize_dir", "read_trials", "write_summary", "ACCURACY_THRESHOLD",
    "bench_runtime", "median_runtime", "BENCH_COLUMNS",
    "RawData", "TrackResult", "run_track", "run_trial", "grid_beta", "export_bqm",
    "load_raw_data", "build_task", "make_sampler",
    "main", "run", "parse_overrides",
]

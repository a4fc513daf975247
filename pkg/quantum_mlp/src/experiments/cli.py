"""Giao diện dòng lệnh.

    train --track <t> --config <file> [--khoá giá_trị ...]
    equivalence --config <file> [--khoá giá_trị ...]
    bench --sizes a,b,c
    summarize <thư mục>

Lỗi được in ra stderr dưới dạng một dòng JSON {"error": ..., "type": ...};
mã thoát 2 với cấu hình sai, 1 với các lỗi khác.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from ...config.settings import LOG_LEVEL, load_run_config
from ..core.exceptions import ConfigError
from .summary import summarize_dir
from .tracks import grid_beta, run_track

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


class CliArgumentError(ConfigError):
    """Tham số dòng lệnh không hợp lệ."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliArgumentError(message)


def parse_overrides(tokens: List[str]) -> Dict[str, str]:
    """Chuyển ['--learning_rate', '0.1', '--store_db'] thành {'learning_rate': '0.1', 'store_db': 'true'}."""
    overrides: Dict[str, str] = {}
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if not token.startswith("--") or len(token) == 2:
            raise CliArgumentError(f"Tham số không hợp lệ: {token}")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        elif i + 1 < len(tokens) and not tokens[i + 1].startswith("--"):
            value = tokens[i + 1]
            i += 2
        else:
            value = "true"
            i += 1
        overrides[key.replace("-", "_")] = value
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quantum_mlp", description="Huấn luyện MLP qua lấy mẫu EBM", allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="Chạy một nhánh thí nghiệm", allow_abbrev=False)
    train.add_argument("--track", choices=["classical1", "classical2", "quantum-sim", "equivalence", "bench"])
    train.add_argument("--config", type=str, default=None, help="File cấu hình INI")

    equivalence = sub.add_parser("equivalence", help="Thí nghiệm tương đương MLP/EBM", allow_abbrev=False)
    equivalence.add_argument("--config", type=str, default=None, help="File cấu hình INI")

    bench = sub.add_parser("bench", help="Đo thời gian theo số nút vào", allow_abbrev=False)
    bench.add_argument("--sizes", type=str, default=None, help="Ví dụ: 10,100,1000")
    bench.add_argument("--config", type=str, default=None)

    summary = sub.add_parser("summarize", help="Bảng tổng hợp từ thư mục kết quả", allow_abbrev=False)
    summary.add_argument("directory", type=str)
    return parser


def _emit_error(error: Exception) -> None:
    print(json.dumps({"error": str(error), "type": type(error).__name__}, ensure_ascii=False), file=sys.stderr)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)

    if args.command == "summarize":
        if extra:
            raise CliArgumentError(f"Tham số thừa: {' '.join(extra)}")
        table = summarize_dir(args.directory)
        table.to_csv(Path(args.directory) / "summary_table.csv", index=False)
        print(table.to_string(index=False))
        return EXIT_OK

    overrides = parse_overrides(extra)
    if args.command == "train" and args.track:
        overrides["track"] = args.track
    elif args.command == "equivalence":
        overrides["track"] = "equivalence"
    elif args.command == "bench":
        overrides["track"] = "bench"
        if args.sizes:
            overrides["sizes"] = args.sizes
    config = load_run_config(args.config, overrides)
    logger.info(f"Cấu hình: {config.describe()}")

    if config.beta_grid:
        table = grid_beta(config, config.beta_grid)
        print(table.to_string(index=False))
        return EXIT_OK

    result = run_track(config)
    if result.table is not None:
        print(result.table.to_string(index=False))
    else:
        print(json.dumps(result.row.to_dict(), ensure_ascii=False))
    print(f"✅ Kết quả đã ghi vào {result.output_dir}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=getattr(logging, LOG_LEVEL, logging.INFO),
                        format="%(asctime)s - %(levelname)s - %(message)s")
    try:
        return run(argv)
    except ConfigError as e:
        _emit_error(e)
        return EXIT_CONFIG
    except Exception as e:
        logger.error(f"❌ Lỗi: {str(e)}")
        _emit_error(e)
        return EXIT_FAILURE

"""Cấu hình chạy: biến môi trường (.env), file INI và tham số dòng lệnh.

File cấu hình là INI với các mục [run], [data], [network], [training], [sampler];
tên mục chỉ để dễ đọc, mọi khoá được gộp phẳng và có thể ghi đè bằng `--khoá giá_trị`.
"""
import configparser
import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Mapping, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..src.core.exceptions import ConfigError
from ..src.core.optimizer import AdamConfig
from ..src.sampling.config import SamplerConfig

load_dotenv()

DATA_DIR = Path(os.getenv("QMLP_DATA_DIR", "data"))
OUTPUT_DIR = Path(os.getenv("QMLP_OUTPUT_DIR", "outputs"))
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

TRACKS = ("classical1", "classical2", "quantum-sim", "equivalence", "bench")
CONFIG_SECTIONS = ("run", "data", "network", "training", "sampler")
NONE_VALUES = {"", "none", "null"}


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    # [run]
    track: Literal["classical1", "classical2", "quantum-sim", "equivalence", "bench"] = "classical1"
    trials: int = Field(5, ge=1)
    seed: int = Field(0, ge=0)
    output_dir: Path = OUTPUT_DIR
    store_db: bool = False
    dump_bqm: bool = False

    # [data]
    data_dir: Path = DATA_DIR
    dataset: Literal["mnist", "fashion-mnist", "synthetic"] = "mnist"
    class_a: int = Field(0, ge=0, le=9)
    class_b: int = Field(1, ge=0, le=9)
    train_count: Optional[int] = Field(20, ge=2)
    synthetic_inputs: int = Field(16, ge=1)
    synthetic_samples: int = Field(200, ge=2)

    # [network]
    n_hidden: int = Field(32, ge=1)
    n_outputs: int = Field(1, ge=1)
    init: Literal["gaussian", "fan_in"] = "gaussian"
    init_std: float = Field(0.01, gt=0)

    # [training]
    steps: int = Field(20, ge=0)
    batch_size: int = Field(5, ge=1)
    learning_rate: float = Field(0.1, ge=0)
    estimator: Literal["recompute", "sampled_k"] = "recompute"

    # [sampler]
    beta_eff: float = Field(16.0, gt=0)
    reads: int = Field(1000, ge=1)
    burn_in: int = Field(100, ge=0)
    thin: int = Field(1, ge=1)
    chains: Optional[int] = Field(None, ge=1)
    num_sweeps: int = Field(1000, ge=1)
    beta_start: float = Field(0.1, gt=0)
    beta_sim: Optional[float] = Field(None, gt=0)
    clamp_to_hardware: bool = True
    equivalence_sampler: Literal["gibbs", "exact"] = "gibbs"
    beta_grid: Optional[List[float]] = None

    # bench
    sizes: List[int] = Field(default_factory=lambda: [10, 100, 1000, 10000])
    repeats: int = Field(21, ge=1)
    bench_batch: int = Field(1000, ge=1)

    @field_validator("sizes", "beta_grid", mode="before")
    @classmethod
    def _split_list(cls, value):
        if isinstance(value, str):
            return [part.strip() for part in value.split(",") if part.strip()]
        return value

    @field_validator("sizes")
    @classmethod
    def _check_sizes(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("sizes không được rỗng")
        if any(size < 1 for size in value):
            raise ValueError("Mọi kích thước trong sizes phải >= 1")
        return value

    @field_validator("beta_grid")
    @classmethod
    def _check_grid(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None and (not value or any(beta <= 0 for beta in value)):
            raise ValueError("beta_grid phải gồm các giá trị dương")
        return value

    @model_validator(mode="after")
    def _check_track(self):
        if self.train_count is not None and self.train_count % 2:
            raise ValueError("train_count phải là số chẵn")
        if self.class_a == self.class_b:
            raise ValueError("class_a và class_b phải khác nhau")
        if self.track == "equivalence" and self.n_outputs != 1:
            raise ValueError("Nhánh equivalence chỉ hỗ trợ n_outputs = 1")
        if self.beta_grid is not None and self.track != "quantum-sim":
            raise ValueError("beta_grid chỉ dùng cho nhánh quantum-sim")
        # kiểm tra sớm cấu hình sampler
        self.sampler_config()
        return self

    def sampler_config(self, seed: Optional[int] = None) -> SamplerConfig:
        return SamplerConfig(
            beta_eff=self.beta_eff, reads=self.reads, seed=seed, burn_in=self.burn_in,
            thin=self.thin, chains=self.chains, num_sweeps=self.num_sweeps,
            beta_start=self.beta_start, beta_sim=self.beta_sim,
            clamp_to_hardware=self.clamp_to_hardware,
        )

    def adam_config(self) -> AdamConfig:
        return AdamConfig(learning_rate=self.learning_rate)

    def describe(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")


def read_config_file(path) -> Dict[str, str]:
    """Đọc file INI và gộp phẳng mọi khoá; khoá trùng giữa các mục là lỗi."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Không tìm thấy file cấu hình: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as e:
        raise ConfigError(f"File cấu hình lỗi cú pháp: {e}") from e
    values: Dict[str, str] = {}
    for section in parser.sections():
        if section not in CONFIG_SECTIONS:
            raise ConfigError(f"Mục [{section}] không hợp lệ, chọn một trong {CONFIG_SECTIONS}")
        for key, value in parser.items(section):
            if key in values:
                raise ConfigError(f"Khoá '{key}' xuất hiện nhiều lần")
            values[key] = value
    return values


def _clean(values: Mapping[str, Any]) -> Dict[str, Any]:
    cleaned = {}
    for key, value in values.items():
        if isinstance(value, str) and value.strip().lower() in NONE_VALUES:
            value = None
        cleaned[key] = value
    return cleaned


def load_run_config(path=None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Tạo RunConfig từ file (nếu có) rồi áp các giá trị ghi đè.

    Args:
        path: đường dẫn file INI hoặc None.
        overrides: các cặp khoá/giá trị từ dòng lệnh; giá trị None bị bỏ qua.

    Returns:
        RunConfig đã kiểm tra.
    """
    values: Dict[str, Any] = read_config_file(path) if path else {}
    values.update({key: value for key, value in (overrides or {}).items() if value is not None})
    try:
        return RunConfig(**_clean(values))
    except ValidationError as e:
        raise ConfigError(f"Cấu hình không hợp lệ: {e}") from e

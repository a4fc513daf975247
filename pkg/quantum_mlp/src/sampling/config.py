from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SamplerConfig(BaseModel):
    """Tham số chung cho các sampler.

    beta_eff là nghịch đảo nhiệt độ hiệu dụng mà QUBO được chia cho; beta_sim là
    nghịch đảo nhiệt độ cuối của annealer (mặc định bằng beta_eff).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    beta_eff: float = Field(16.0, gt=0)
    reads: int = Field(1000, ge=1)
    seed: Optional[int] = None

    # Gibbs
    burn_in: int = Field(100, ge=0)
    thin: int = Field(1, ge=1)
    chains: Optional[int] = Field(None, ge=1)

    # Simulated annealing
    num_sweeps: int = Field(1000, ge=1)
    beta_start: float = Field(0.1, gt=0)
    beta_sim: Optional[float] = Field(None, gt=0)
    clamp_to_hardware: bool = True

    @model_validator(mode="after")
    def _check_schedule(self):
        if self.beta_sim is not None and self.beta_sim < self.beta_start:
            raise ValueError("beta_sim phải >= beta_start")
        return self

    @property
    def final_beta(self) -> float:
        return self.beta_sim if self.beta_sim is not None else self.beta_eff

    @property
    def num_chains(self) -> int:
        # mặc định mỗi lần đọc là một chuỗi riêng
        return min(self.chains or self.reads, self.reads)

    def with_seed(self, seed: Optional[int]) -> "SamplerConfig":
        return self.model_copy(update={"seed": seed})

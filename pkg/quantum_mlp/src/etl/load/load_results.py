import logging
import math
from typing import TYPE_CHECKING, Optional

from sqlalchemy.orm import sessionmaker

from ....config.database import Base, SQLALCHEMY_DATABASE_URL, SessionLocal, engine, ensure_sqlite_directory
from ...core.trace import TrainingTrace
from ...models import DimTrial, FactTrainingStep

if TYPE_CHECKING:
    from ...experiments.summary import TrialSummary

logger = logging.getLogger(__name__)


def _optional(value) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return None if math.isnan(value) else value


def init_schema(bind=None) -> None:
    """Tạo các bảng Dim_Trial, Fact_TrainingStep nếu chưa có."""
    if bind is None:
        ensure_sqlite_directory(SQLALCHEMY_DATABASE_URL)
        bind = engine
    Base.metadata.create_all(bind=bind)


def load_trial(summary: "TrialSummary", trace: Optional[TrainingTrace], run_name: str = "",
               session_factory: sessionmaker = SessionLocal) -> int:
    """Ghi một dòng DimTrial và mỗi bước của trace một dòng FactTrainingStep.

    Returns:
        TrialKey của dòng vừa ghi.
    """
    with session_factory() as session:
        trial = DimTrial(
            RunName=run_name,
            Track=summary.track,
            TrialIndex=summary.trial_index,
            Seed=summary.seed,
            FinalAccuracy=_optional(summary.final_accuracy),
            StepsTo70=summary.steps_to_70,
            Successful=summary.successful,
            Failed=summary.failed,
            ErrorMessage=(summary.error or None) and summary.error[:500],
        )
        session.add(trial)
        session.flush()
        for record in (trace.records if trace is not None else []):
            session.add(FactTrainingStep(
                TrialKey=trial.TrialKey,
                Step=record["step"],
                TrainLoss=_optional(record["train_loss"]),
                EbmLoglikEstimate=_optional(record["ebm_loglik_estimate"]),
                TestAccuracy=_optional(record["test_accuracy"]),
                KlNats=_optional(record["kl_nats"]),
                MaxAbsWeight=_optional(record["max_abs_weight"]),
            ))
        session.commit()
        logger.info(f"✅ Đã lưu lượt {summary.trial_index} ({summary.track}) vào kho kết quả")
        return trial.TrialKey

from sqlalchemy import Boolean, Column, DateTime, Float, Integer, String, func
from ...config.database import Base

class DimTrial(Base):
    __tablename__ = 'Dim_Trial'

    TrialKey = Column(Integer, primary_key=True, autoincrement=True)
    RunName = Column(String(100))
    Track = Column(String(20))
    TrialIndex = Column(Integer)
    Seed = Column(Integer)
    FinalAccuracy = Column(Float)
    StepsTo70 = Column(Integer, nullable=True)
    Successful = Column(Boolean)
    Failed = Column(Boolean, default=False)
    ErrorMessage = Column(String(500), nullable=True)
    CreatedAt = Column(DateTime, server_default=func.now())

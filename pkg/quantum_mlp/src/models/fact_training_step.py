from sqlalchemy import Column, Float, ForeignKey, Integer
from sqlalchemy.orm import relationship
from ...config.database import Base

class FactTrainingStep(Base):
    __tablename__ = 'Fact_TrainingStep'

    TrialKey = Column(Integer, ForeignKey('Dim_Trial.TrialKey'), primary_key=True)
    Step = Column(Integer, primary_key=True)
    TrainLoss = Column(Float)
    EbmLoglikEstimate = Column(Float, nullable=True)
    TestAccuracy = Column(Float)
    KlNats = Column(Float, nullable=True)
    MaxAbsWeight = Column(Float, nullable=True)

    # Relationships (tùy chọn, hỗ trợ truy vấn ORM)
    trial = relationship("DimTrial", backref="training_steps")

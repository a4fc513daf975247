import os
from pathlib import Path

from dotenv import load_dotenv
from sqlalchemy import create_engine, make_url
from sqlalchemy.orm import declarative_base, sessionmaker

load_dotenv()

# Kho kết quả thí nghiệm; mặc định là file SQLite cục bộ
SQLALCHEMY_DATABASE_URL = os.getenv("QMLP_RESULTS_DB_URL", "sqlite:///outputs/qmlp_results.db")


def ensure_sqlite_directory(url: str) -> None:
    """Tạo thư mục chứa file SQLite nếu cần."""
    parsed = make_url(url)
    if parsed.get_backend_name() == "sqlite" and parsed.database not in (None, "", ":memory:"):
        Path(parsed.database).parent.mkdir(parents=True, exist_ok=True)


# Tạo sync engine
engine = create_engine(
    SQLALCHEMY_DATABASE_URL,
    echo=os.getenv("QMLP_DB_ECHO", "false").lower() == "true",
    future=True,
)

# Tạo sessionmaker thông thường
SessionLocal = sessionmaker(
    bind=engine,
    expire_on_commit=False
)

Base = declarative_base()

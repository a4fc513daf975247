class QuantumMlpError(Exception):
    """Lỗi gốc của thư viện."""


class ShapeMismatchError(QuantumMlpError, ValueError):
    """Kích thước ma trận/vector không khớp nhau."""


class EnumerationLimitError(QuantumMlpError, ValueError):
    """Số trạng thái cần liệt kê vượt quá giới hạn cho phép."""


class IdxFormatError(QuantumMlpError, ValueError):
    """File IDX sai định dạng."""


class SamplerError(QuantumMlpError, RuntimeError):
    """Bộ lấy mẫu không sinh được mẫu hợp lệ."""


class ExperimentError(QuantumMlpError):
    """Một bước của thí nghiệm thất bại (bọc lỗi gốc)."""


class ConfigError(QuantumMlpError, ValueError):
    """Cấu hình chạy không hợp lệ."""

"""Huấn luyện MLP một lớp ẩn thông qua lấy mẫu từ EBM tương đương."""
__version__ = "0.1.0"

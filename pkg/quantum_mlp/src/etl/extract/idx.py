"""Đọc file IDX (định dạng phân phối của MNIST / Fashion-MNIST).

Cấu trúc file (big endian):
    i32    | magic: 0x0000 | kiểu phần tử (0x08 = ubyte) | số chiều
    i32[d] | kích thước từng chiều
    u8[]   | dữ liệu theo thứ tự row-major
"""
import gzip
import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from ...core.exceptions import IdxFormatError

logger = logging.getLogger(__name__)

IDX_UBYTE = 0x08
IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
# Giới hạn an toàn cho tích các chiều
MAX_ELEMENTS = 1 << 31

MNIST_FILES = {
    "train": ("train-images-idx3-ubyte", "train-labels-idx1-ubyte"),
    "test": ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"),
}


@dataclass(frozen=True)
class IdxFile:
    magic: int
    dims: Tuple[int, ...]
    payload: bytes

    @property
    def ndim(self) -> int:
        return len(self.dims)

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.payload, dtype=np.uint8).reshape(self.dims)

    def to_bytes(self) -> bytes:
        header = struct.pack(">I", self.magic) + struct.pack(f">{self.ndim}I", *self.dims)
        return header + self.payload


def parse_idx(data: bytes) -> IdxFile:
    """Giải mã header big-endian và kiểm tra kích thước payload."""
    if len(data) < 4:
        raise IdxFormatError("File IDX quá ngắn, thiếu magic")
    magic, = struct.unpack(">I", data[:4])
    if magic >> 16 != 0:
        raise IdxFormatError(f"Magic không hợp lệ: {magic:#010x}")
    element_type = (magic >> 8) & 0xFF
    if element_type != IDX_UBYTE:
        raise IdxFormatError(f"unsupported element type {element_type:#04x}")
    ndim = magic & 0xFF
    if ndim == 0:
        raise IdxFormatError("File IDX phải có ít nhất một chiều")

    header_len = 4 + 4 * ndim
    if len(data) < header_len:
        raise IdxFormatError("Header IDX bị cắt cụt")
    dims = struct.unpack(f">{ndim}I", data[4:header_len])

    count = 1
    for size in dims:
        count *= size
        if count > MAX_ELEMENTS:
            raise IdxFormatError(f"Kích thước vượt giới hạn: {dims}")

    payload = data[header_len:]
    if len(payload) < count:
        raise IdxFormatError(f"Payload bị cắt cụt: cần {count} byte, có {len(payload)} byte")
    if len(payload) > count:
        raise IdxFormatError(f"Payload thừa {len(payload) - count} byte")
    return IdxFile(magic=magic, dims=tuple(dims), payload=bytes(payload))


def read_idx_file(path) -> IdxFile:
    """Đọc file IDX, tự giải nén nếu là gzip."""
    raw = Path(path).read_bytes()
    if raw[:2] == b"\x1f\x8b":
        raw = gzip.decompress(raw)
    return parse_idx(raw)


def _find_file(directory: Path, stem: str) -> Path:
    for candidate in (stem, stem + ".gz", stem.replace("-idx", ".idx"), stem.replace("-idx", ".idx") + ".gz"):
        path = directory / candidate
        if path.exists():
            return path
    raise FileNotFoundError(f"Không tìm thấy {stem}[.gz] trong {directory}")


def load_mnist_split(directory, split: str = "train") -> Tuple[np.ndarray, np.ndarray]:
    """Trả về (ảnh uint8 L×28×28, nhãn uint8 L) của tập train/test."""
    if split not in MNIST_FILES:
        raise ValueError(f"split phải là 'train' hoặc 'test', nhận được {split!r}")
    directory = Path(directory)
    image_stem, label_stem = MNIST_FILES[split]

    images = read_idx_file(_find_file(directory, image_stem))
    labels = read_idx_file(_find_file(directory, label_stem))
    if images.magic != IMAGE_MAGIC:
        raise IdxFormatError(f"File ảnh có magic {images.magic:#010x}, cần {IMAGE_MAGIC:#010x}")
    if labels.magic != LABEL_MAGIC:
        raise IdxFormatError(f"File nhãn có magic {labels.magic:#010x}, cần {LABEL_MAGIC:#010x}")
    if images.dims[0] != labels.dims[0]:
        raise IdxFormatError(f"Số ảnh ({images.dims[0]}) khác số nhãn ({labels.dims[0]})")

    logger.info(f"Đã đọc {images.dims[0]} ảnh {split} từ {directory}")
    return images.to_array(), labels.to_array()


def has_mnist_files(directory: Optional[str]) -> bool:
    if not directory:
        return False
    try:
        for split in MNIST_FILES.values():
            for stem in split:
                _find_file(Path(directory), stem)
    except FileNotFoundError:
        return False
    return True

import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

FASHION_MNIST_CLASSES = (
    "T-shirt/top", "Trouser", "Pullover", "Dress", "Coat",
    "Sandal", "Shirt", "Sneaker", "Bag", "Ankle boot",
)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Ảnh đã chuẩn hoá về [0,1] cùng nhãn nhị phân. Bất biến sau khi tạo."""

    inputs: np.ndarray           # L×N
    labels: np.ndarray           # L, giá trị 0/1
    class_names: Tuple[str, str] = ("0", "1")

    def __post_init__(self):
        inputs = np.array(self.inputs, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64).reshape(-1)
        if inputs.ndim != 2:
            if inputs.size == 0:
                inputs = inputs.reshape(0, 0)
            else:
                raise ValueError(f"inputs phải là ma trận L×N, nhận được {inputs.shape}")
        if inputs.shape[0] != labels.shape[0]:
            raise ValueError(f"Số mẫu ({inputs.shape[0]}) khác số nhãn ({labels.shape[0]})")
        if inputs.size and (inputs.min() < 0.0 or inputs.max() > 1.0):
            raise ValueError("Giá trị đầu vào phải nằm trong [0, 1]")
        if labels.size and not np.all((labels == 0) | (labels == 1)):
            raise ValueError("Nhãn phải là 0 hoặc 1")
        inputs.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_names", tuple(str(n) for n in self.class_names))

    def __len__(self) -> int:
        return self.labels.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.inputs.shape[1]

    @property
    def targets(self) -> np.ndarray:
        """Nhãn dạng cột L×1 (M = 1)."""
        return self.labels.reshape(-1, 1).astype(np.float64)

    def subset(self, indices: Sequence[int]) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self.inputs[indices], self.labels[indices], self.class_names)


def normalize_pixels(images: np.ndarray) -> np.ndarray:
    """Làm phẳng ảnh uint8 và chia cho 255 (không nhị phân hoá)."""
    images = np.asarray(images)
    return images.reshape(images.shape[0], -1).astype(np.float64) / 255.0


def make_binary_task(train_images: np.ndarray, train_labels: np.ndarray,
                     test_images: np.ndarray, test_labels: np.ndarray,
                     class_a: int, class_b: int, train_count: Optional[int], seed: int,
                     class_names: Optional[Tuple[str, str]] = None) -> Tuple[Dataset, Dataset]:
    """Tạo bài toán phân loại nhị phân cân bằng từ hai lớp.

    Args:
        train_images, train_labels: tập train gốc (ảnh uint8, nhãn lớp gốc).
        test_images, test_labels: tập test gốc; toàn bộ ảnh của hai lớp được giữ lại.
        class_a, class_b: hai lớp gốc; lớp có mã nhỏ hơn nhận nhãn 0.
        train_count: số ảnh train (chẵn, chia đều hai lớp); None = lấy hết.
        seed: seed cho việc chọn ảnh.
        class_names: tên hiển thị của hai lớp theo thứ tự nhãn 0, 1.

    Returns:
        (train Dataset, test Dataset)
    """
    if class_a == class_b:
        raise ValueError("Hai lớp phải khác nhau")
    neg_class, pos_class = sorted((int(class_a), int(class_b)))
    names = tuple(class_names) if class_names else (str(neg_class), str(pos_class))
    train_labels = np.asarray(train_labels)
    test_labels = np.asarray(test_labels)

    idx_neg = np.flatnonzero(train_labels == neg_class)
    idx_pos = np.flatnonzero(train_labels == pos_class)
    if idx_neg.size == 0 or idx_pos.size == 0:
        raise ValueError(f"Tập train không có ảnh của lớp {neg_class if idx_neg.size == 0 else pos_class}")

    rng = np.random.default_rng(seed)
    if train_count is None:
        selected = np.concatenate([idx_neg, idx_pos])
    else:
        if train_count <= 0 or train_count % 2 != 0:
            raise ValueError(f"train_count phải là số chẵn dương, nhận được {train_count}")
        half = train_count // 2
        for cls, idx in ((neg_class, idx_neg), (pos_class, idx_pos)):
            if idx.size < half:
                raise ValueError(f"Lớp {cls} chỉ có {idx.size} ảnh, cần {half}")
        selected = np.concatenate([
            rng.choice(idx_neg, size=half, replace=False),
            rng.choice(idx_pos, size=half, replace=False),
        ])
    selected = rng.permutation(selected)

    train = Dataset(
        inputs=normalize_pixels(np.asarray(train_images)[selected]),
        labels=(train_labels[selected] == pos_class).astype(np.int64),
        class_names=names,
    )
    test_mask = (test_labels == neg_class) | (test_labels == pos_class)
    test = Dataset(
        inputs=normalize_pixels(np.asarray(test_images)[test_mask]),
        labels=(test_labels[test_mask] == pos_class).astype(np.int64),
        class_names=names,
    )
    logger.info(f"Bài toán {names[0]}-{names[1]}: {len(train)} ảnh train, {len(test)} ảnh test")
    return train, test


def synthetic_task(n_inputs: int, n_samples: int, seed: int, margin: float = 0.1) -> Dataset:
    """Điểm ngẫu nhiên trong [0,1]^N, tách tuyến tính bởi một siêu phẳng ẩn qua tâm khối.

    Các điểm nằm gần siêu phẳng hơn `margin` bị loại để bài toán có lề rõ ràng.
    """
    if n_inputs < 1:
        raise ValueError("n_inputs phải >= 1")
    if n_samples < 0:
        raise ValueError("n_samples không được âm")
    rng = np.random.default_rng(seed)
    normal = rng.normal(size=n_inputs)
    normal /= np.linalg.norm(normal)

    kept = []
    total = 0
    while total < n_samples:
        points = rng.uniform(0.0, 1.0, size=(max(2 * n_samples, 16), n_inputs))
        distance = (points - 0.5) @ normal
        points = points[np.abs(distance) >= margin]
        kept.append(points)
        total += points.shape[0]

    inputs = np.concatenate(kept)[:n_samples] if kept else np.zeros((0, n_inputs))
    labels = ((inputs - 0.5) @ normal > 0).astype(np.int64)
    return Dataset(inputs=inputs.reshape(n_samples, n_inputs), labels=labels, class_names=("neg", "pos"))


def iterate_batches(dataset: Dataset, batch_size: int,
                    rng: np.random.Generator) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Sinh vô hạn các batch (X, Y) kích thước cố định, xáo trộn lại sau mỗi epoch."""
    if len(dataset) == 0:
        raise ValueError("Dataset rỗng")
    if batch_size < 1:
        raise ValueError("batch_size phải >= 1")
    size = min(batch_size, len(dataset))
    queue = np.empty(0, dtype=np.int64)
    while True:
        while queue.size < size:
            queue = np.concatenate([queue, rng.permutation(len(dataset))])
        idx, queue = queue[:size], queue[size:]
        yield dataset.inputs[idx], dataset.targets[idx]

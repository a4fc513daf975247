import gzip

import numpy as np
import pytest

from quantum_mlp.src.core import AdamConfig, IdxFormatError
from quantum_mlp.src.etl.extract import (IMAGE_MAGIC, LABEL_MAGIC, has_mnist_files, load_mnist_split,
                                         parse_idx, read_idx_file)
from quantum_mlp.src.etl.transform import Dataset, iterate_batches, make_binary_task, synthetic_task
from quantum_mlp.src.mlp import MlpModel, train_mlp
from tests.conftest import MNIST_DIR, idx_bytes, requires_mnist


def test_parse_label_file():
    data = idx_bytes(LABEL_MAGIC, (2,), bytes([7, 3]))
    assert data[:4] == b"\x00\x00\x08\x01"
    parsed = parse_idx(data)
    assert parsed.dims == (2,)
    assert parsed.to_array().tolist() == [7, 3]
    assert parsed.to_bytes() == data


def test_parse_rejects_unsupported_element_type():
    with pytest.raises(IdxFormatError, match="unsupported element type"):
        parse_idx(idx_bytes(0x00000805, (2,), bytes([7, 3])))


@pytest.mark.parametrize("payload", [bytes([1]), bytes([1, 2, 3])])
def test_parse_rejects_wrong_payload_length(payload):
    with pytest.raises(IdxFormatError):
        parse_idx(idx_bytes(LABEL_MAGIC, (2,), payload))


def test_parse_rejects_short_header():
    with pytest.raises(IdxFormatError):
        parse_idx(b"\x00\x00\x08")
    with pytest.raises(IdxFormatError):
        parse_idx(b"\x00\x00\x08\x03\x00\x00\x00\x01")


def _write_split(directory, prefix, images, labels, compress=False):
    image_data = idx_bytes(IMAGE_MAGIC, images.shape, images.astype(np.uint8).tobytes())
    label_data = idx_bytes(LABEL_MAGIC, labels.shape, labels.astype(np.uint8).tobytes())
    suffix = ".gz" if compress else ""
    opener = gzip.compress if compress else (lambda b: b)
    (directory / f"{prefix}-images-idx3-ubyte{suffix}").write_bytes(opener(image_data))
    (directory / f"{prefix}-labels-idx1-ubyte{suffix}").write_bytes(opener(label_data))


def test_read_gzip_file(tmp_path):
    data = idx_bytes(LABEL_MAGIC, (3,), bytes([1, 2, 9]))
    path = tmp_path / "labels.gz"
    path.write_bytes(gzip.compress(data))
    assert read_idx_file(path).to_array().tolist() == [1, 2, 9]


def test_load_mnist_split(tmp_path):
    rng = np.random.default_rng(0)
    images = rng.integers(0, 256, size=(6, 2, 2))
    labels = np.array([0, 1, 2, 0, 1, 2])
    _write_split(tmp_path, "train", images, labels, compress=True)
    _write_split(tmp_path, "t10k", images[:3], labels[:3])
    assert has_mnist_files(tmp_path)
    loaded_images, loaded_labels = load_mnist_split(tmp_path, "train")
    assert np.array_equal(loaded_images, images)
    assert np.array_equal(loaded_labels, labels)
    assert load_mnist_split(tmp_path, "test")[0].shape == (3, 2, 2)


def test_load_mnist_split_count_mismatch(tmp_path):
    _write_split(tmp_path, "train", np.zeros((3, 2, 2)), np.zeros(2))
    with pytest.raises(IdxFormatError):
        load_mnist_split(tmp_path, "train")


def test_missing_files(tmp_path):
    assert not has_mnist_files(tmp_path)
    assert not has_mnist_files(None)
    with pytest.raises(FileNotFoundError):
        load_mnist_split(tmp_path, "train")


def _toy_images():
    # lớp 3: toàn 255, lớp 5: toàn 0, lớp 7: 128
    labels = np.array([3] * 12 + [5] * 12 + [7] * 12)
    fill = {3: 255, 5: 0, 7: 128}
    images = np.stack([np.full((2, 2), fill[label], dtype=np.uint8) for label in labels])
    return images, labels


def test_make_binary_task_balance_and_scaling():
    images, labels = _toy_images()
    train, test = make_binary_task(images, labels, images, labels, 5, 3, 20, seed=1)
    assert len(train) == 20
    assert int(train.labels.sum()) == 10
    # lớp 3 nhận nhãn 0 (mã nhỏ hơn): pixel 255 -> 1.0
    assert np.all(train.inputs[train.labels == 0] == 1.0)
    assert np.all(train.inputs[train.labels == 1] == 0.0)
    assert len(test) == 24
    assert train.class_names == ("3", "5")


def test_make_binary_task_is_seeded():
    images, labels = _toy_images()
    first, _ = make_binary_task(images, labels, images, labels, 3, 5, 10, seed=9)
    second, _ = make_binary_task(images, labels, images, labels, 3, 5, 10, seed=9)
    assert np.array_equal(first.inputs, second.inputs)
    assert np.array_equal(first.labels, second.labels)


def test_make_binary_task_errors():
    images, labels = _toy_images()
    with pytest.raises(ValueError):
        make_binary_task(images, labels, images, labels, 3, 5, 7, seed=0)
    with pytest.raises(ValueError):
        make_binary_task(images, labels, images, labels, 3, 5, 30, seed=0)
    with pytest.raises(ValueError):
        make_binary_task(images, labels, images, labels, 3, 3, 10, seed=0)
    with pytest.raises(ValueError):
        make_binary_task(images, labels, images, labels, 3, 9, 10, seed=0)


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset(inputs=np.full((2, 2), 2.0), labels=[0, 1])
    with pytest.raises(ValueError):
        Dataset(inputs=np.zeros((2, 2)), labels=[0, 2])
    with pytest.raises(ValueError):
        Dataset(inputs=np.zeros((3, 2)), labels=[0, 1])


def test_synthetic_task_empty_and_seeded():
    empty = synthetic_task(3, 0, seed=0)
    assert len(empty) == 0
    first = synthetic_task(5, 50, seed=4)
    second = synthetic_task(5, 50, seed=4)
    assert first.inputs.shape == (50, 5)
    assert np.array_equal(first.inputs, second.inputs)
    assert np.array_equal(first.labels, second.labels)
    assert 0 < first.labels.sum() < 50


def test_synthetic_task_is_learnable():
    data = synthetic_task(2, 40, seed=0)
    model = MlpModel.fan_in_uniform(2, 8, 1, rng=np.random.default_rng(0))
    trace = train_mlp(model, data, data, AdamConfig(learning_rate=0.1), steps=50, batch_size=40, seed=0)
    assert trace.accuracies.max() == 1.0


def test_iterate_batches_covers_each_epoch():
    data = synthetic_task(2, 10, seed=1)
    batches = iterate_batches(data, 5, np.random.default_rng(0))
    seen = np.concatenate([next(batches)[0] for _ in range(2)])
    assert seen.shape == (10, 2)
    assert len({tuple(row) for row in seen}) == 10


@pytest.mark.slow
@requires_mnist
def test_real_mnist_labels():
    images, labels = load_mnist_split(MNIST_DIR, "train")
    assert images.shape == (60000, 28, 28)
    assert labels.min() == 0 and labels.max() == 9

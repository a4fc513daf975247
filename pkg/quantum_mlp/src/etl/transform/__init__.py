from .tasks import (Dataset, normalize_pixels, make_binary_task, synthetic_task, iterate_batches,
                    FASHION_MNIST_CLASSES)

__all__ = ["Dataset", "normalize_pixels", "make_binary_task", "synthetic_task", "iterate_batches",
           "FASHION_MNIST_CLASSES"]

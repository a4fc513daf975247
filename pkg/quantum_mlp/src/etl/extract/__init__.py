from .idx import (IdxFile, parse_idx, read_idx_file, load_mnist_split, has_mnist_files,
                  IMAGE_MAGIC, LABEL_MAGIC)

__all__ = ["IdxFile", "parse_idx", "read_idx_file", "load_mnist_split", "has_mnist_files",
           "IMAGE_MAGIC", "LABEL_MAGIC"]

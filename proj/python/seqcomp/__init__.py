"""Sequence labeling with compositional label embeddings.

The heavy lifting lives in the C++ extension; this package re-exports the
main operations: schema construction, corpus I/O, the synthetic corpus
generator, training, evaluation, and embedding projection.
"""

from seqcomp._core import (
    DataError,
    LabelSchema,
    Model,
    NumericError,
    UsageError,
    decode_spans,
    evaluate,
    generate_synthetic,
    load_model,
    pca_project,
    read_conll,
    silhouette,
    train,
    write_conll,
)

__all__ = [
    "DataError",
    "LabelSchema",
    "Model",
    "NumericError",
    "UsageError",
    "decode_spans",
    "evaluate",
    "generate_synthetic",
    "load_model",
    "pca_project",
    "read_conll",
    "silhouette",
    "train",
    "write_conll",
]

"""Numpy fallback for the split-count and partition kernels."""
import numpy as np


def node_counts(X, y, idx):
    """Per-feature bit counts over the rows selected by ``idx``.

    Returns ``(n_true, pos_true, pos)``: for each feature j, ``n_true[j]``
    counts selected rows with bit j set and ``pos_true[j]`` counts label-1
    rows with bit j set; ``pos`` is the number of label-1 rows.
    """
    sub = X[idx]
    n_true = sub.sum(axis=0, dtype=np.int64)
    mask = y[idx] != 0
    pos_true = sub[mask].sum(axis=0, dtype=np.int64)
    return n_true, pos_true, int(np.count_nonzero(mask))


def partition(X, idx, feature, n_true):
    """Order-preserving split of ``idx`` by one bit: (bit clear, bit set).

    ``n_true`` is the known number of set bits; the fallback recomputes it
    implicitly and only keeps the argument for signature parity.
    """
    mask = X[idx, feature] != 0
    return idx[~mask], idx[mask]

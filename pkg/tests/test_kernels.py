import numpy as np
import pytest

from pamper import _kernels
from pamper._kernels import pure

compiled = pytest.importorskip(
    "pamper._kernels._ct", reason="compiled kernel extension not built"
)


def _case(rng, n_max=80, f_max=12):
    n = int(rng.integers(1, n_max + 1))
    f = int(rng.integers(1, f_max + 1))
    X = np.ascontiguousarray((rng.random((n, f)) < rng.uniform(0.1, 0.9)), dtype=np.uint8)
    y = np.ascontiguousarray((rng.random(n) < 0.5), dtype=np.uint8)
    size = int(rng.integers(0, n + 1))
    idx = np.ascontiguousarray(
        np.sort(rng.choice(n, size=size, replace=False)), dtype=np.int64
    )
    return X, y, idx


def _assert_counts_equal(a, b):
    an, ap, at = a
    bn, bp, bt = b
    assert np.array_equal(np.asarray(an), np.asarray(bn))
    assert np.array_equal(np.asarray(ap), np.asarray(bp))
    assert at == bt


def test_backends_agree_on_random_inputs():
    rng = np.random.default_rng(17)
    for _ in range(150):
        X, y, idx = _case(rng)
        _assert_counts_equal(
            pure.node_counts(X, y, idx), compiled.node_counts(X, y, idx)
        )
        if idx.size:
            n_true = np.asarray(pure.node_counts(X, y, idx)[0])
            feature = int(rng.integers(0, X.shape[1]))
            pf, pt = pure.partition(X, idx, feature, int(n_true[feature]))
            cf, ct = compiled.partition(X, idx, feature, int(n_true[feature]))
            assert np.array_equal(np.asarray(pf), np.asarray(cf))
            assert np.array_equal(np.asarray(pt), np.asarray(ct))


def test_backends_agree_on_edges():
    X = np.array([[1, 0, 1], [1, 0, 0], [1, 0, 1]], dtype=np.uint8)
    y = np.array([1, 0, 1], dtype=np.uint8)
    cases = [
        np.array([], dtype=np.int64),
        np.array([0], dtype=np.int64),
        np.array([0, 1, 2], dtype=np.int64),
    ]
    for idx in cases:
        _assert_counts_equal(
            pure.node_counts(X, y, idx), compiled.node_counts(X, y, idx)
        )
    idx = np.array([0, 1, 2], dtype=np.int64)
    for feature in range(3):
        n_true = int(np.asarray(pure.node_counts(X, y, idx)[0])[feature])
        pf, pt = pure.partition(X, idx, feature, n_true)
        cf, ct = compiled.partition(X, idx, feature, n_true)
        assert np.asarray(pf).tolist() == np.asarray(cf).tolist()
        assert np.asarray(pt).tolist() == np.asarray(ct).tolist()
    # all-set column keeps order, all-clear column empties the true side
    assert np.asarray(pure.partition(X, idx, 0, 3)[1]).tolist() == [0, 1, 2]
    assert np.asarray(compiled.partition(X, idx, 1, 0)[1]).tolist() == []


def test_partition_preserves_order():
    rng = np.random.default_rng(19)
    for _ in range(50):
        X, y, idx = _case(rng)
        if not idx.size:
            continue
        feature = int(rng.integers(0, X.shape[1]))
        n_true = int(np.asarray(compiled.node_counts(X, y, idx)[0])[feature])
        side_false, side_true = compiled.partition(X, idx, feature, n_true)
        merged = sorted(np.asarray(side_false).tolist() + np.asarray(side_true).tolist())
        assert merged == idx.tolist()
        bits = X[np.asarray(side_true), feature]
        assert bits.all() or bits.size == 0


def test_kernels_accept_readonly_arrays():
    X = np.array([[1, 0], [0, 1]], dtype=np.uint8)
    y = np.array([1, 0], dtype=np.uint8)
    idx = np.array([0, 1], dtype=np.int64)
    X.setflags(write=False)
    y.setflags(write=False)
    idx.setflags(write=False)
    _assert_counts_equal(
        pure.node_counts(X, y, idx), compiled.node_counts(X, y, idx)
    )


def test_select_rebinding(kernel_backend):
    kernel_backend.select("pure")
    assert kernel_backend.backend_name == "pure"
    assert kernel_backend.node_counts is pure.node_counts
    kernel_backend.select("compiled")
    assert kernel_backend.backend_name == "compiled"
    assert kernel_backend.node_counts is compiled.node_counts
    with pytest.raises(ValueError):
        kernel_backend.select("gpu")


def test_available_backends_lists_both():
    assert _kernels.available_backends() == ["pure", "compiled"]


def test_trees_identical_across_backends(kernel_backend):
    from pamper.corpus import Corpus
    from pamper.trees import model_to_text, train

    rng = np.random.default_rng(29)
    X = (rng.random((400, 9)) < 0.4).astype(np.uint8)
    names = tuple(
        np.asarray(["simp", "auto", "blast"], dtype=object)[
            rng.integers(0, 3, 400)
        ].tolist()
    )
    corpus = Corpus(names, X, 9)
    kernel_backend.select("pure")
    pure_model = train(corpus)
    kernel_backend.select("compiled")
    compiled_model = train(corpus)
    assert model_to_text(pure_model) == model_to_text(compiled_model)

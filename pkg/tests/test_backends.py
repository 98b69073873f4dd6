import numpy as np
import pytest

from sabeam.learn import available_backends, get_kernels

pytestmark = pytest.mark.skipif("cython" not in available_backends(),
                                reason="compiled kernel not built")


@pytest.mark.parametrize("trial", range(12))
def test_backends_build_identical_trees(trial):
    rng = np.random.default_rng(trial)
    n, d = int(rng.integers(20, 400)), int(rng.integers(1, 12))
    X = rng.normal(size=(n, d))
    X[:, 0] = np.round(X[:, 0], 1)  # force ties
    n_classes = 0 if trial % 2 == 0 else int(rng.integers(2, 7))
    y = rng.normal(size=n) if n_classes == 0 else rng.integers(0, n_classes, n).astype(float)
    depth = -1 if trial % 3 else 5
    args = (X, y, depth, int(rng.integers(1, 4)), max(1, d // 2), trial * 977, n_classes)
    a = get_kernels("cython").build_tree(*args)
    b = get_kernels("python").build_tree(*args)
    for u, v in zip(a, b):
        assert np.array_equal(np.asarray(u), np.asarray(v))
    Xq = rng.normal(size=(50, d))
    pa = get_kernels("cython").predict_tree(Xq, *a)
    pb = get_kernels("python").predict_tree(Xq, *b)
    assert np.array_equal(pa, pb)


def test_unknown_backend():
    with pytest.raises(ValueError):
        get_kernels("fortran")

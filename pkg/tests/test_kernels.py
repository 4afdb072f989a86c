"""Both kernel backends must agree bit for bit."""

import numpy as np
import pytest

from conftest import random_dataset, random_record
from ddeba import kernels

BACKENDS = kernels.backends()


def test_backend_selected():
    assert kernels.BACKEND in BACKENDS


@pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")
def test_pairwise_backends_identical(rng):
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    for _ in range(40):
        ds = random_dataset(rng, int(rng.integers(2, 30)), p_missing=0.3)
        a = py.gower_pairwise(ds.encoded, ds.kinds, ds.scales)
        b = cy.gower_pairwise(ds.encoded, ds.kinds, ds.scales)
        assert a[1] == b[1] and tuple(a[2]) == tuple(b[2])
        assert np.array_equal(a[0], b[0])


@pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")
def test_query_backends_identical(rng):
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    ds = random_dataset(rng, 25, p_missing=0.3)
    for _ in range(100):
        q = ds.encode(random_record(rng, p_missing=0.4))
        a = py.gower_to_query(q, ds.encoded, ds.kinds, ds.scales)
        b = cy.gower_to_query(q, ds.encoded, ds.kinds, ds.scales)
        assert a[1] == b[1] and tuple(a[2]) == tuple(b[2])
        if a[0] is not None:
            assert np.array_equal(a[0], b[0])


@pytest.mark.skipif("cython" not in BACKENDS, reason="extension not built")
def test_error_status_identical():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    nan = np.nan
    X = np.array([[1.0, nan], [nan, 2.0], [1.0, 3.0]])
    kinds = np.array([0, 1], dtype=np.intc)
    scales = np.array([0.0, 1.0])
    assert py.gower_pairwise(X, kinds, scales)[1:] == cy.gower_pairwise(X, kinds, scales)[1:]
    X = np.array([[1.0, 4.0], [1.0, 4.0], [2.0, 5.0]])
    scales = np.array([0.0, 0.0])
    a, b = py.gower_pairwise(X, kinds, scales), cy.gower_pairwise(X, kinds, scales)
    assert a[1] == b[1] == kernels.STATUS_DEGENERATE
    assert tuple(a[2]) == tuple(b[2]) == (0, 2, 1)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_ks_backends(name, rng):
    k = BACKENDS[name]
    for _ in range(200):
        a = np.sort(rng.integers(0, 6, size=rng.integers(1, 30)).astype(float))
        b = np.sort(rng.integers(0, 6, size=rng.integers(1, 30)).astype(float))
        assert k.ks_sorted(a, b) == BACKENDS["python"].ks_sorted(a, b)
    rows = np.sort(rng.random((8, 7)), axis=1)
    q = np.sort(rng.random(8))
    assert np.array_equal(k.ks_rows(rows, q), [k.ks_sorted(r, q) for r in rows])


def test_benchmark_script_runs(tmp_path, capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).parent.parent / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    bench = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(bench)
    out = tmp_path / "bench.json"
    assert bench.main(["--sizes", "6", "--repeat", "1", "--out", str(out)]) == 0
    assert out.read_text().startswith("{")

import pytest

from hinwalk import SearchConfig
from hinwalk.bench import BenchConfig, run_benchmark


def test_g1_bundle_all_cells_fast(g1):
    graph, _ = g1
    config = BenchConfig(
        lengths=(1, 2), example_sizes=(1,), repeats=3, search=SearchConfig(max_paths=2, max_depth=3)
    )
    report = run_benchmark(graph, [("p1", "p2")], config)
    methods = [r["method"] for r in report.rows]
    assert methods == ["tree-search", "enumerate-l1", "enumerate-l2"]
    for row in report.rows:
        assert row["median_s"] < 1.0
        assert not row["censored"]
        assert len(row["runs_s"]) == 3
    # the two-step enumeration realizes the founders round trip
    assert report.rows[2]["paths"] >= 1
    assert "tree-search" in report.table()


def test_zero_lengths_rejected():
    with pytest.raises(ValueError, match="lengths"):
        BenchConfig(lengths=())


def test_zero_sizes_rejected():
    with pytest.raises(ValueError, match="example_sizes"):
        BenchConfig(example_sizes=())


def test_timeout_censors_cell(g2):
    graph, _ = g2
    config = BenchConfig(lengths=(4,), example_sizes=(1,), repeats=2, timeout_s=0.0)
    report = run_benchmark(graph, [("v1", "v2")], config)
    enum_row = report.rows[1]
    assert enum_row["censored"]
    assert enum_row["median_s"] == 0.0
    assert len(enum_row["runs_s"]) == 1  # censored cells are not rerun


def test_empty_subset_rejected(g1):
    graph, _ = g1
    with pytest.raises(ValueError, match="no pairs"):
        run_benchmark(graph, [], BenchConfig(example_sizes=(5,)))

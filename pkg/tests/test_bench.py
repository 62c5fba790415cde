import pytest

from waypoint_routing import bench


def test_pathpower_envelope():
    rows = bench.run_bench("pathpower", [40], widths=[1, 2, 3, 4], repeat=1)
    assert [r.n for r in rows] == [40] * 4
    widths = [r.width for r in rows]
    assert widths == sorted(widths)
    for r in rows:
        assert r.max_row_entries <= 2 ** r.width
        assert r.peak_entries <= 0.5 * 5 ** (r.width + 1), r


def test_caterpillar_rows():
    rows = bench.run_bench("caterpillar", [50, 100], repeat=1)
    assert [r.n for r in rows] == [50, 100]
    assert all(r.runtime > 0 and r.width <= 3 for r in rows)
    csv = bench.to_csv(rows)
    assert csv.count("\n") == 3 and csv.splitlines()[1].startswith("caterpillar,50,")


@pytest.mark.parametrize("args", [("caterpillar", []), ("caterpillar", [0]), ("ring", [10])])
def test_bad_arguments(args):
    with pytest.raises(ValueError):
        bench.run_bench(*args)

import io
import json

import pytest

from conftest import TRIANGLE_TEXT
from waypoint_routing.cli import main
from waypoint_routing.instance import parse_instance
from waypoint_routing.pipeline import RunReport


def run_cli(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p
    return write


def test_solve_triangle_walk(files):
    code, text = run_cli("solve", files("t.wrp", TRIANGLE_TEXT), "--walk")
    assert code == 0
    assert "cost 3\n" in text
    walk_line = [line for line in text.splitlines() if line.startswith("walk")][0]
    assert sorted(map(int, walk_line.split()[1:-1])) == [0, 1, 2]


def test_solve_cost_only(files):
    code, text = run_cli("solve", files("t.wrp", TRIANGLE_TEXT))
    assert code == 0 and "cost 3" in text and "walk" not in text


def test_solve_infeasible(files):
    f = files("d.wrp", "wrp 4 2\ne 0 1 1 1\ne 2 3 1 1\ns 0\nt 1\nw 3\n")
    code, text = run_cli("solve", f)
    assert code == 2
    assert text.strip().endswith("infeasible: waypoint unreachable (vertex 3)")


def test_solve_capacity_infeasible(files):
    code, text = run_cli("solve", files("p.wrp", "wrp 3 2\ne 0 1 1 1\ne 1 2 1 1\ns 0\nt 0\nw 2\n"))
    assert code == 2 and "infeasible" in text


def test_solve_json_round_trip(files):
    code, text = run_cli("solve", files("t.wrp", TRIANGLE_TEXT), "--walk", "--json")
    assert code == 0
    data = json.loads(text)
    assert data["cost"] == 3 and data["feasible"] and len(data["walk"]) == 4
    assert RunReport.from_dict(data).to_dict() == data
    assert set(data["tables"]) == {"max_row_entries", "total_entries", "peak_node_entries"}


def test_solve_with_td(files):
    inst = files("t.wrp", TRIANGLE_TEXT)
    good = files("good.td", "s td 1 3 3\nb 1 1 2 3\n")
    assert run_cli("solve", inst, "--td", good)[0] == 0
    bad = files("bad.td", "s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n")
    code, text = run_cli("solve", inst, "--td", bad)
    assert code == 1 and text == ""


def test_solve_td_message(files, capsys):
    inst = files("t.wrp", TRIANGLE_TEXT)
    bad = files("bad.td", "s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n")
    main(["solve", str(inst), "--td", str(bad)], io.StringIO())
    assert "property" in capsys.readouterr().err


def test_solve_td_with_gadget(files):
    inst = files("p.wrp", "wrp 3 2\ne 0 1 1 1\ne 1 2 1 1\ns 0\nt 2\nw 1\n")
    td = files("p.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n")
    code, text = run_cli("solve", inst, "--td", td, "--walk")
    assert code == 0 and "cost 2\nwalk 0 1 2\n" in text


def test_solve_threads(files):
    inst = files("t.wrp", TRIANGLE_TEXT)
    assert run_cli("solve", inst, "--threads", 4)[0] == 0
    assert run_cli("solve", inst, "--threads", 0)[0] == 1


def test_missing_and_malformed_files(files, tmp_path):
    assert run_cli("solve", tmp_path / "nope.wrp")[0] == 1
    assert run_cli("solve", files("bad.wrp", "wrp 2 1\ne 0 0 1 1\ns 0\nt 0\n"))[0] == 1


def test_oracle(files):
    assert run_cli("oracle", files("t.wrp", TRIANGLE_TEXT)) == (0, "cost 3\n")
    assert run_cli("oracle", files("one.wrp", "wrp 1 0\ns 0\nt 0\nw 0\n")) == (0, "cost 0\n")
    assert run_cli("oracle", files("p.wrp", "wrp 3 2\ne 0 1 1 1\ne 1 2 1 1\ns 0\nt 2\nw 1\n")) == (0, "cost 2\n")
    code, text = run_cli("oracle", files("p.wrp", "wrp 3 2\ne 0 1 1 1\ne 1 2 1 1\ns 0\nt 0\nw 2\n"))
    assert code == 2


def test_oracle_over_budget(files):
    edges = "".join(f"e {a} {b} 2 1\n" for a in range(10) for b in range(a + 1, 10))
    code, _ = run_cli("oracle", files("big.wrp", f"wrp 10 45\n{edges}s 0\nt 0\nw 0\n"))
    assert code == 1


def test_verify(files):
    inst = files("t.wrp", TRIANGLE_TEXT)
    assert run_cli("verify", inst, "--walk-file", files("ok.walk", "cost 3\nwalk 0 1 2 0\n")) == (0, "ok\n")
    code, text = run_cli("verify", inst, "--walk-file", files("cap.walk", "cost 4\nwalk 0 1 0 2 0\n"))
    assert code == 2 and "violation: capacity exceeded on edge 0-1" in text
    assert run_cli("verify", inst, "--walk-file", files("junk.walk", "walk x\n"))[0] == 1


def test_gen(files):
    args = ("gen", "--n", 6, "--p", 0.5, "--caps", "1:2", "--weights", "1:5", "--waypoints", 3, "--seed", 7)
    code, text = run_cli(*args)
    assert code == 0 and run_cli(*args)[1] == text
    inst = parse_instance(text)
    assert inst.n == 6 and len(inst.waypoints) == 3
    code, text = run_cli("gen", "--n", 1)
    assert code == 0 and parse_instance(text).n == 1
    assert run_cli("gen", "--n", 3, "--waypoints", 5)[0] == 1
    assert run_cli("gen", "--n", 3, "--caps", "oops")[0] == 1
    assert run_cli("gen", "--n", 4, "--distinct-terminals", "--seed", 1)[0] == 0


def test_gen_then_solve_then_verify(files):
    _, text = run_cli("gen", "--n", 7, "--p", 0.6, "--caps", "2:2", "--waypoints", 4, "--seed", 3)
    inst = files("g.wrp", text)
    code, out = run_cli("solve", inst, "--walk")
    assert code == 0
    walk = files("g.walk", "".join(line + "\n" for line in out.splitlines() if line.startswith(("cost", "walk"))))
    assert run_cli("verify", inst, "--walk-file", walk) == (0, "ok\n")


def test_bench():
    code, text = run_cli("bench", "--family", "caterpillar", "--sizes", "20,40", "--repeat", 1)
    lines = text.splitlines()
    assert code == 0 and lines[0] == "family,n,width,runtime,peak_entries,max_row_entries"
    assert [line.split(",")[1] for line in lines[1:]] == ["20", "40"]
    code, text = run_cli("bench", "--family", "pathpower", "--sizes", "12", "--widths", "1,2", "--repeat", 1)
    assert code == 0 and len(text.splitlines()) == 3
    assert run_cli("bench", "--sizes", "")[0] == 1
    assert run_cli("bench", "--sizes", "a,b")[0] == 1
    assert run_cli("bench", "--family", "nope", "--sizes", "10")[0] == 1


def test_usage_errors():
    assert run_cli()[0] == 1
    assert run_cli("frobnicate")[0] == 1
    assert run_cli("verify", "x.wrp")[0] == 1

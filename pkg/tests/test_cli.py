import csv
import io

import pytest

from graphtsp.cli import EXIT_OK, EXIT_SOLVE, EXIT_USAGE, run


DIAMOND = "# diamond\n4 5\n0 1\n1 2\n2 3\n0 3\n0 2\n"
C4 = "4 4\n0 1\n1 2\n2 3\n0 3\n"


def call(*argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def diamond_file(tmp_path):
    path = tmp_path / "diamond.txt"
    path.write_text(DIAMOND)
    return str(path)


def test_solve(diamond_file):
    code, out, err = call("solve", diamond_file)
    assert code == EXIT_OK and err == ""
    lines = out.splitlines()
    assert lines[0] == "tour 4"
    assert "olp=4/1" in lines


def test_solve_from_stdin():
    code, out, _ = call("solve", "-", stdin=C4)
    assert code == EXIT_OK
    assert out.startswith("tour 4\n")


@pytest.mark.parametrize("k", [1, 4, 8])
def test_gen_piped_into_solve(k):
    code, graph, _ = call("gen", "gap-tour", str(k))
    assert code == EXIT_OK
    assert graph.startswith(f"# gap_tour({k})\n{3 * (k + 1)} {3 * k + 6}\n")
    code, out, _ = call("solve", "-", stdin=graph)
    assert code == EXIT_OK
    edges = int(out.splitlines()[0].split()[1])
    n = 3 * (k + 1)
    assert n <= edges <= (4 * n - 2) // 3


def test_gen_path_family_names_its_endpoints():
    code, out, _ = call("gen", "gap_path", "2")
    assert code == EXIT_OK
    assert out.splitlines()[:2] == ["# gap_path(2)", "# s=1 t=4"]


def test_path(diamond_file):
    code, out, _ = call("path", diamond_file, "--s", "1", "--t", "3")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "path 1 3 3"


def test_lp(diamond_file):
    code, out, _ = call("lp", diamond_file, "--support")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "4/1"
    assert lines[1].startswith("cuts ")
    assert lines[2:] == ["0 1 1/1", "1 2 1/1", "2 3 1/1", "0 3 1/1"]


def test_lp_prints_the_bare_value():
    code, out, _ = call("lp", "-", stdin="3 3\n0 1\n1 2\n0 2\n")
    assert code == EXIT_OK
    assert out == "3/1\n"


def test_lp_path_mode():
    code, out, _ = call("lp", "-", "--path", "0", "2", stdin="3 2\n0 1\n1 2\n")
    assert code == EXIT_OK
    assert out == "2/1\n"


def test_oracle(diamond_file):
    assert call("oracle", diamond_file)[1] == "4\n"
    assert call("oracle", "-", "--path", "0", "2", stdin=C4)[1] == "4\n"


def test_oracle_cutoff_is_a_solve_error(diamond_file):
    code, _, err = call("oracle", diamond_file, "--cutoff", "3")
    assert code == EXIT_SOLVE
    assert err.startswith("error: OracleCutoffError")


def test_bench(tmp_path):
    specs = tmp_path / "specs.txt"
    specs.write_text("# corpus\ngap_tour 1\ngrid 2 2\n")
    out_file = tmp_path / "out.csv"
    code, out, _ = call("bench", str(specs), "--out", str(out_file))
    assert code == EXIT_OK and out == ""
    rows = list(csv.DictReader(io.StringIO(out_file.read_text())))
    assert [r["instance"] for r in rows] == ["gap_tour(1)", "grid(2,2)"]
    assert rows[1]["best_edges"] == "4"


def test_bench_to_stdout(tmp_path):
    specs = tmp_path / "specs.txt"
    specs.write_text("grid 1 2\n")
    code, out, _ = call("bench", str(specs), "--cutoff", "8")
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("instance,family,n,")
    assert len(out.splitlines()) == 2


def test_selftest():
    code, out, _ = call("selftest")
    lines = out.splitlines()
    assert code == EXIT_OK, out
    assert all(line.startswith("ok   ") for line in lines[:-1])
    assert lines[-1] == "22/22 passed"


@pytest.mark.parametrize(
    "argv",
    [
        (),
        ("solve",),
        ("frobnicate",),
        ("path", "-", "--s", "0"),
        ("lp", "-", "--path", "0"),
        ("solve", "/nonexistent/graph.txt"),
    ],
)
def test_usage_errors(argv):
    code, out, err = call(*argv, stdin=C4)
    assert code == EXIT_USAGE
    assert err.startswith("usage error: ")
    assert out == ""


def test_invalid_vertex_is_a_usage_error():
    code, _, err = call("path", "-", "--s", "0", "--t", "9", stdin=C4)
    assert code == EXIT_USAGE
    assert "9" in err


@pytest.mark.parametrize(
    "text, error",
    [
        ("4 2\n0 1\n2 3\n", "DisconnectedGraphError"),
        ("3 3\n0 1\n1 2\n", "EdgeCountError"),
        ("3 1\n0 0\n", "SelfLoopError"),
        ("x y\n", "MalformedHeaderError"),
    ],
)
def test_solve_errors(text, error):
    code, _, err = call("solve", "-", stdin=text)
    assert code == EXIT_SOLVE
    assert err.startswith(f"error: {error}")


def test_gen_unknown_family():
    code, _, err = call("gen", "tsplib", "3")
    assert code == EXIT_SOLVE
    assert "InstanceError" in err


def test_invalid_utf8_in_a_graph_file_is_rejected(tmp_path):
    path = tmp_path / "latin1.txt"
    path.write_bytes(b"# caf\xe9\n3 3\n0 1\n1 2\n0 2\n")
    code, out, err = call("solve", str(path))
    assert code == EXIT_SOLVE
    assert err.startswith("error: MalformedHeaderError")
    assert out == ""


def test_invalid_utf8_in_a_bench_file_is_a_usage_error(tmp_path):
    path = tmp_path / "specs.txt"
    path.write_bytes(b"# caf\xe9\ngap_tour 1\n")
    code, _, err = call("bench", str(path))
    assert code == EXIT_USAGE
    assert "not UTF-8" in err

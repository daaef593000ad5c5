import json
import subprocess
import sys
from fractions import Fraction

import pytest

from cutvor import io
from cutvor.cli import run
from cutvor.divisors import Divisor, Subdivision
from cutvor.graph import Multigraph
from cutvor.tiling import MixedTiling


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


@pytest.fixture
def k3_file(tmp_path):
    return write(tmp_path, "k3.json", {"vertices": 3, "edges": [[0, 1], [0, 2], [1, 2]]})


@pytest.fixture
def mixed_file(tmp_path):
    return write(tmp_path, "mixed.json", {"vertices": 3, "edges": [[0, 1], [0, 2], [1, 2]], "lengths": [1, 1, 2]})


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestAnalyze:
    def test_k3(self, capsys, k3_file):
        code, out, _ = invoke(capsys, "analyze", k3_file)
        assert code == 0
        report = json.loads(out)
        assert report["spanning_trees"] == 3
        assert len(report["bonds"]) == 6
        # q(e_1 - e_0) on K3 is 2/3
        assert report["q_gram"][0][0] == "2/3"

    def test_output_flag(self, capsys, k3_file, tmp_path):
        target = tmp_path / "out.json"
        code, out, _ = invoke(capsys, "analyze", k3_file, "-o", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["vertices"] == 3

    def test_deterministic(self, capsys, k3_file):
        first = invoke(capsys, "analyze", k3_file)[1]
        second = invoke(capsys, "analyze", k3_file)[1]
        assert first == second


class TestFaces:
    def test_k3_report(self, capsys, k3_file):
        code, out, _ = invoke(capsys, "faces", k3_file)
        assert code == 0
        report = json.loads(out)
        assert report["faces"] == 13 and report["cac"] == 13 and report["isomorphic"] is True
        assert report["f_vector"] == [6, 6, 1]

    def test_dot(self, capsys, k3_file):
        code, out, _ = invoke(capsys, "faces", k3_file, "--format", "dot")
        assert code == 0 and out.startswith("digraph")
        assert out.count("->") == 12 + 6

    def test_svg_is_a_usage_error(self, capsys, k3_file):
        assert invoke(capsys, "faces", k3_file, "--format", "svg")[0] == 2


class TestAdmissible:
    def divisor(self, tmp_path, name, data):
        return write(tmp_path, name, data)

    def test_same_divisor(self, capsys, tmp_path, k3_file):
        D = self.divisor(tmp_path, "d.json", {"on_G": {"0": 1}})
        code, out, _ = invoke(capsys, "admissible", k3_file, D, D)
        assert code == 0
        report = json.loads(out)
        assert report["equivalent"] is True and report["firing_sequence"] == []

    def test_fired_vertex(self, capsys, tmp_path, k3_file):
        D1 = self.divisor(tmp_path, "a.json", {"on_G": {"0": 2}})
        D2 = self.divisor(tmp_path, "b.json", {"on_G": {"1": 1, "2": 1}})
        code, out, _ = invoke(capsys, "admissible", k3_file, D1, D2)
        assert code == 0
        report = json.loads(out)
        assert report["equivalent"] is True
        assert len(report["firing_sequence"]) >= 1

    def test_inequivalent(self, capsys, tmp_path, k3_file):
        D1 = self.divisor(tmp_path, "a.json", {"on_G": {"0": 1}})
        D2 = self.divisor(tmp_path, "b.json", {"on_G": {"1": 1}})
        report = json.loads(invoke(capsys, "admissible", k3_file, D1, D2)[1])
        assert report["equivalent"] is False and report["f"] is None

    def test_interior_points(self, capsys, tmp_path):
        g = write(tmp_path, "e.json", {"vertices": 2, "edges": [[0, 1]], "lengths": [3]})
        D = self.divisor(tmp_path, "d.json", {"interior": [{"edge": 0, "j": 1, "coeff": 1}]})
        bad = self.divisor(tmp_path, "x.json", {"interior": [{"edge": 0, "j": 1, "coeff": 2}]})
        code, _, err = invoke(capsys, "admissible", g, D, bad)
        assert code == 1 and "admissible" in err
        report = json.loads(invoke(capsys, "admissible", g, D, bad.replace("x.json", "d.json"))[1])
        assert report["admissible"] == [True, True]
        assert json.loads(invoke(capsys, "admissible", g, bad)[1])["admissible"] == [False]

    def test_bad_interior_index(self, capsys, tmp_path):
        g = write(tmp_path, "e.json", {"vertices": 2, "edges": [[0, 1]], "lengths": [3]})
        D = self.divisor(tmp_path, "d.json", {"interior": [{"edge": 0, "j": 3, "coeff": 1}]})
        assert invoke(capsys, "admissible", g, D)[0] == 2


class TestTiles:
    def test_json_and_round_trip(self, capsys, mixed_file):
        code, out, _ = invoke(capsys, "tiles", mixed_file)
        assert code == 0
        data = json.loads(out)
        assert data["period"] == 2 and len(data["tiles"]) == 4
        tiling = io.tiling_from_json(data)
        fresh = MixedTiling(Multigraph(3, ((0, 1), (0, 2), (1, 2))), (1, 1, 2)).enumerate_tiling()
        assert tiling.tiles == fresh.tiles
        assert tiling.adjacency == fresh.adjacency
        assert io.dumps(io.tiling_to_json(tiling)) == out

    def test_coverage_flag(self, capsys, mixed_file):
        code, out, _ = invoke(capsys, "tiles", mixed_file, "--samples", "20", "--seed", "7")
        report = json.loads(out)["coverage"]
        assert code == 0 and report == {"samples": 20, "seed": 7, "covered": 20, "overlaps": 0}

    def test_dot(self, capsys, k3_file):
        code, out, _ = invoke(capsys, "tiles", k3_file, "--format", "dot")
        # six bonds seen from one tile collapse to three undirected edges
        assert code == 0 and out.startswith("graph") and out.count(" -- ") == 3


class TestLocate:
    def test_center_is_interior(self, capsys, tmp_path, mixed_file):
        pts = write(tmp_path, "p.json", {"points": [[0, 0, 0], ["1/3", "-1/3", 0]]})
        code, out, _ = invoke(capsys, "locate", mixed_file, pts)
        assert code == 0
        results = json.loads(out)["results"]
        assert results[0]["tiles"] == [{"key": "0,0,0", "shift": [0, 0, 0], "interior": True}]
        assert len(results[1]["tiles"]) >= 1

    def test_nonzero_sum(self, capsys, tmp_path, mixed_file):
        pts = write(tmp_path, "p.json", {"points": [[1, 0, 0]]})
        assert invoke(capsys, "locate", mixed_file, pts)[0] == 1

    def test_malformed_points(self, capsys, tmp_path, mixed_file):
        pts = write(tmp_path, "p.json", {"points": [[1, 0]]})
        assert invoke(capsys, "locate", mixed_file, pts)[0] == 2


class TestRender:
    def test_svg(self, capsys, mixed_file):
        code, out, _ = invoke(capsys, "render", mixed_file)
        assert code == 0 and out.startswith("<svg") and out.count("<polygon") >= 4 * 9

    def test_needs_three_vertices(self, capsys, tmp_path):
        g = write(tmp_path, "e.json", {"vertices": 2, "edges": [[0, 1]]})
        code, _, err = invoke(capsys, "render", g)
        assert code == 1 and "3" in err


class TestErrors:
    def test_disconnected(self, capsys, tmp_path):
        g = write(tmp_path, "d.json", {"vertices": 3, "edges": [[0, 1]]})
        code, _, err = invoke(capsys, "analyze", g)
        assert code == 1 and "disconnected" in err

    def test_loop(self, capsys, tmp_path):
        g = write(tmp_path, "l.json", {"vertices": 2, "edges": [[0, 1], [1, 1]]})
        code, _, err = invoke(capsys, "analyze", g)
        assert code == 1 and "loop" in err

    def test_malformed_json(self, capsys, tmp_path):
        g = write(tmp_path, "m.json", "{not json")
        assert invoke(capsys, "analyze", g)[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert invoke(capsys, "analyze", str(tmp_path / "nope.json"))[0] == 2

    def test_no_subcommand(self, capsys):
        assert invoke(capsys)[0] == 2

    def test_module_entry_point(self, k3_file):
        proc = subprocess.run([sys.executable, "-m", "cutvor", "analyze", k3_file], capture_output=True, text=True)
        assert proc.returncode == 0 and json.loads(proc.stdout)["spanning_trees"] == 3


class TestSerialization:
    def test_rationals(self):
        assert io.rational_to_json(Fraction(6, -4)) == "-3/2"
        assert io.rational_to_json(Fraction(4, 2)) == 2
        assert io.parse_rational("-3/2") == Fraction(-3, 2)
        assert io.parse_rational(5) == 5
        for bad in ("1.5", "1/0", 1.5, True, None):
            with pytest.raises(io.ParseError):
                io.parse_rational(bad)

    def test_graph_round_trip(self):
        g = Multigraph(3, ((0, 1), (0, 1), (1, 2)))
        data = io.graph_to_json(g, (1, 2, 3), (0, -1, 1))
        assert io.graph_from_json(json.loads(io.dumps(data))) == (g, (1, 2, 3), (0, -1, 1))

    def test_divisor_round_trip(self):
        host = Subdivision(Multigraph(3, ((0, 1), (0, 2), (1, 2))), (2, 3, 1))
        coeffs = [0] * host.size
        coeffs[1] = -2
        coeffs[host.point((1, 1), 2)] = 1
        D = Divisor(host, tuple(coeffs))
        assert io.divisor_from_json(host, json.loads(io.dumps(io.divisor_to_json(D)))) == D

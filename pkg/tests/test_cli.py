"""Command-line interface tests: outputs, JSON, files, exit codes."""

import json
import math

import numpy as np
import pytest

from triproject.cli import main
from triproject.meshfile import load_mesh, mesh_from_dict, mesh_to_dict, save_mesh
from triproject.pbd import make_mesh


class TestProject:
    def test_colocated_routes_to_degenerate_branch(self, capsys):
        code = main(["project", "--tri", "0,0,0,0,0,0", "--area", "0.5",
                     "--orientation", "1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "chosen case: II" in out
        assert "1.07456" in out  # sqrt(cost) ~ 1.075

    def test_feasible_input_identity(self, capsys):
        code = main(["project", "--tri", "0,0,1,0,0,1", "--area", "0.5",
                     "--orientation", "1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "chosen case: I" in out

    def test_unsigned_picks_cheaper_orientation(self, capsys):
        code = main(["project", "--tri",
                     "0.827,-0.100,0.327,0.766,-1.155,-0.667",
                     "--area", "0.5", "--unsigned", "--json"])
        out = capsys.readouterr().out
        assert code == 0
        doc = json.loads(out)
        assert doc["orientation"] == 1
        assert doc["sqrt_cost"] == pytest.approx(0.345, abs=0.005)

    def test_json_contains_every_outcome_field(self, capsys):
        main(["project", "--tri", "0,0,1,0,0,1", "--area", "0.7", "--json"])
        doc = json.loads(capsys.readouterr().out)
        for field in ("optimal", "cost", "sqrt_cost", "signed_area",
                      "chosen_case", "orientation", "case1", "case2"):
            assert field in doc
        for field in ("triangle", "basis", "translation", "scale", "branch",
                      "cost", "signed_area", "feasible"):
            assert field in doc["case2"]
        assert set(doc["case1"]) == {"solutions", "rejected"}
        assert len(doc["case1"]["solutions"]) + len(doc["case1"]["rejected"]) == 4

    def test_fixed_vertex_option(self, capsys):
        code = main(["project", "--tri", "1,0,0,1,0,0", "--area", "0.125",
                     "--orientation", "1", "--fixed", "c", "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["optimal"][4:] == [0.0, 0.0]
        assert doc["signed_area"] == pytest.approx(0.125, rel=1e-9)

    def test_two_fixed_option(self, capsys):
        code = main(["project", "--tri", "0.5,1,0,0,1,0", "--area", "0.25",
                     "--orientation", "1", "--fixed", "bc", "--json"])
        doc = json.loads(capsys.readouterr().out)
        assert code == 0
        assert doc["optimal"] == pytest.approx([0.5, 0.5, 0, 0, 1, 0])

    def test_bad_area_exits_2(self):
        assert main(["project", "--tri", "0,0,1,0,0,1", "--area", "-2"]) == 2

    def test_bad_triangle_exits_2(self):
        assert main(["project", "--tri", "0,0,1,0", "--area", "1"]) == 2

    def test_unsigned_with_fixed_rejected(self):
        assert main(["project", "--tri", "0,0,1,0,0,1", "--area", "1",
                     "--unsigned", "--fixed", "c"]) == 2


class TestToy:
    def test_default_blocks_and_headline_numbers(self, capsys):
        code = main(["toy"])
        out = capsys.readouterr().out
        assert code == 0
        lines = out.splitlines()
        assert "# opt" in lines and "# lin" in lines
        assert lines.count("iter,cost,area_residual") == 2
        opt_rows = lines[lines.index("# opt") + 2: lines.index("# lin")]
        lin_rows = lines[lines.index("# lin") + 2:]
        opt = [tuple(float(x) for x in row.split(",")) for row in opt_rows]
        lin = [tuple(float(x) for x in row.split(",")) for row in lin_rows]
        # first opt iteration nails the area; cost constant afterwards
        assert opt[0][2] <= 1e-9
        costs = [row[1] for row in opt]
        assert max(costs) - min(costs) <= 1e-12 * max(costs)
        # lin residual decreases monotonically and lands in the band
        residuals = [row[2] for row in lin]
        assert all(a >= b for a, b in zip(residuals, residuals[1:]))
        assert 1e-9 <= residuals[-1] <= 1e-4

    def test_iters_flag(self, capsys):
        main(["toy", "--iters", "5"])
        out = capsys.readouterr().out
        assert out.count("\n5,") == 2
        assert "\n6," not in out


class TestMeshGen:
    def test_roundtrip(self, tmp_path, capsys):
        path = tmp_path / "m.json"
        code = main(["mesh-gen", "--shape", "square", "--class", "coarse",
                     "--out", str(path)])
        assert code == 0
        mesh = load_mesh(path)
        mesh.validate()
        assert abs(len(mesh.triangles) - 100) <= 30
        doc = json.loads(path.read_text())
        for field in ("vertices", "triangles", "prescribed_areas",
                      "orientations", "pinned", "boundary_groups"):
            assert field in doc

    def test_unwritable_path_exits_3(self):
        assert main(["mesh-gen", "--shape", "disk", "--class", "coarse",
                     "--out", "/nonexistent-dir/m.json"]) == 3


class TestBench:
    def test_deterministic_csv(self, tmp_path):
        args = ["bench", "--shapes", "disk", "--deform", "0.1", "--runs", "2",
                "--stop", "300", "--seed", "7"]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(p1)]) == 0
        assert main(args + ["--out", str(p2)]) == 0
        # identical except the wall-clock column
        strip = lambda text: [",".join(line.split(",")[:-1]) for line in text.splitlines()]
        assert strip(p1.read_text()) == strip(p2.read_text())

    def test_records_for_both_methods(self, tmp_path):
        path = tmp_path / "r.csv"
        main(["bench", "--shapes", "disk", "--deform", "0.1", "--runs", "1",
              "--stop", "300", "--seed", "0", "--out", str(path)])
        body = path.read_text().splitlines()[1:]
        methods = {line.split(",")[2] for line in body}
        assert methods == {"opt", "lin"}

    def test_config_file(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "shapes": ["disk"], "deform_fractions": [0.1], "runs_per_mesh": 1,
            "stopping_time": 200, "seed": 3}))
        path = tmp_path / "r.csv"
        assert main(["bench", "--config", str(cfg), "--out", str(path)]) == 0
        assert path.exists()

    def test_invalid_config_exits_2(self, tmp_path):
        path = tmp_path / "r.csv"
        assert main(["bench", "--shapes", "not-a-shape", "--runs", "1",
                     "--out", str(path)]) == 2
        assert main(["bench", "--shapes", "disk", "--deform", "2.0",
                     "--runs", "1", "--out", str(path)]) == 2


class TestMeshFile:
    def test_dict_roundtrip_identity(self):
        mesh = make_mesh([[0, 0], [1, 0], [1, 1], [0, 1]], [[0, 1, 2], [0, 2, 3]],
                         boundary_groups=[[0, 1], [2, 3]])
        mesh.pinned[1] = True
        again = mesh_from_dict(mesh_to_dict(mesh))
        assert np.array_equal(again.vertices, mesh.vertices)
        assert np.array_equal(again.triangles, mesh.triangles)
        assert np.array_equal(again.pinned, mesh.pinned)
        assert again.boundary_groups == mesh.boundary_groups

    def test_defaults_applied(self):
        doc = {"vertices": [[0, 0], [1, 0], [0, 1]], "triangles": [[0, 2, 1]]}
        mesh = mesh_from_dict(doc)
        assert mesh.orientations[0] == -1  # from shoelace sign
        assert mesh.prescribed_areas[0] == pytest.approx(0.5)
        assert not mesh.pinned.any()

    def test_missing_fields_rejected(self):
        with pytest.raises(ValueError):
            mesh_from_dict({"vertices": [[0, 0]]})

    def test_save_load_roundtrip(self, tmp_path):
        mesh = make_mesh([[0, 0], [2, 0], [0, 2]], [[0, 1, 2]])
        path = tmp_path / "mesh.json"
        save_mesh(mesh, path)
        again = load_mesh(path)
        assert np.array_equal(again.vertices, mesh.vertices)
        assert np.array_equal(again.prescribed_areas, mesh.prescribed_areas)

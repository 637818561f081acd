"""End-to-end command tests through the click runner."""

import dataclasses
import json
from pathlib import Path

from click.testing import CliRunner

import wedgesurf.cli as cli
from wedgesurf.cli import main
from wedgesurf.projection import certify_surface


def invoke(args, env=None):
    return CliRunner().invoke(main, args, env=env, catch_exceptions=False)


def test_build_summary_line():
    result = invoke(["build", "--p", "5"])
    assert result.exit_code == 0
    assert "dim 7, facets 10, vertices 40" in result.output


def test_build_writes_json(tmp_path):
    out = tmp_path / "wp.json"
    result = invoke(["build", "--p", "3", "--out", str(out)])
    assert result.exit_code == 0
    data = json.loads(out.read_text())
    assert data["dim"] == 5
    assert len(data["facets"]) == 6
    assert len(data["vertices"]) == 6
    assert data["facets"][0]["label"][0] in ("pair",)


def test_build_rejects_degenerate_polygon():
    result = invoke(["build", "--p", "2"])
    assert result.exit_code == 2
    assert "p must be at least 3" in result.output


def test_surface_report_torus():
    result = invoke(["surface", "--p", "4"])
    assert result.exit_code == 0
    assert "f=(16,32,16)" in result.output
    assert "genus=1" in result.output
    assert "regular=yes" in result.output
    assert "manifold=yes connected=yes orientable=yes" in result.output


def test_surface_octahedron_note():
    result = invoke(["surface", "--p", "3"])
    assert result.exit_code == 0
    assert "octahedron, genus 0" in result.output
    assert "flags=48" in result.output


def test_surface_flag_guard_notice(monkeypatch):
    monkeypatch.setattr("wedgesurf.surface.FLAG_GUARD", 10)
    result = invoke(["surface", "--p", "4"])
    assert result.exit_code == 0
    assert "f=(16,32,16)" in result.output
    assert "notice:" in result.output
    assert "exceeds guard" in result.output
    assert "regular" not in result.output.split("notice:")[0].splitlines()[0]


def test_realize_writes_mesh_certificates_figure(tmp_path):
    out = tmp_path / "s.off"
    result = invoke(["realize", "--p", "4", "--out", str(out)])
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "OFF"
    assert lines[1] == "16 16 32"
    certs = json.loads(out.with_suffix(".certificates.json").read_text())
    assert certs["certificates"]["ok"] is True
    assert certs["config"]["eps"] == "1/10"
    png = out.with_suffix(".png").read_bytes()
    assert png[:8] == b"\x89PNG\r\n\x1a\n"
    assert "certificates: ok" in result.output


def test_realize_obj_output(tmp_path):
    out = tmp_path / "s.obj"
    result = invoke(["realize", "--p", "4", "--out", str(out)])
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert sum(1 for ln in lines if ln.startswith("v ")) == 16
    assert sum(1 for ln in lines if ln.startswith("f ")) == 16


def test_realize_target4_json_only(tmp_path):
    out = tmp_path / "s4.json"
    result = invoke(
        ["realize", "--p", "4", "--target", "4", "--out", str(out)]
    )
    assert result.exit_code == 0
    data = json.loads(out.read_text())
    assert data["mesh"]["dim"] == 4
    assert len(data["mesh"]["vertices"]) == 16
    assert not out.with_suffix(".off").exists()


def test_realize_is_deterministic(tmp_path):
    outs = []
    for name in ("a", "b"):
        folder = tmp_path / name
        folder.mkdir()
        out = folder / "s.off"
        result = invoke(
            ["realize", "--p", "4", "--out", str(out), "--precision", "12"]
        )
        assert result.exit_code == 0
        outs.append(out)
    a, b = outs
    assert a.read_bytes() == b.read_bytes()
    assert (
        a.with_suffix(".certificates.json").read_bytes()
        == b.with_suffix(".certificates.json").read_bytes()
    )
    assert a.with_suffix(".png").read_bytes() == b.with_suffix(".png").read_bytes()


def test_realize_eps_zero_is_usage_error(tmp_path):
    result = invoke(["realize", "--p", "4", "--eps", "0"])
    assert result.exit_code == 2
    assert "eps must be" in result.output


def test_realize_failing_certificate_exits_nonzero(tmp_path, monkeypatch):
    def broken(D, k=4):
        report = certify_surface(D, k)
        first = report.certificates[0]
        sabotaged = dataclasses.replace(
            first, lower=dataclasses.replace(first.lower, on_lower_hull=False)
        )
        return dataclasses.replace(
            report, certificates=(sabotaged,) + report.certificates[1:]
        )

    monkeypatch.setattr(cli, "certify_surface", broken)
    out = tmp_path / "s.off"
    result = invoke(["realize", "--p", "4", "--out", str(out)])
    assert result.exit_code == 1
    assert not out.exists()


def test_dual_pipeline_outputs(tmp_path):
    out = tmp_path / "d.off"
    result = invoke(["dual", "--p", "4", "--out", str(out)])
    assert result.exit_code == 0
    assert "dual surface: 16 vertices, 16 quads" in result.output
    assert "poset copies: ok" in result.output
    lines = out.read_text().splitlines()
    assert lines[0] == "OFF"
    assert lines[1] == "16 16 32"
    assert out.with_suffix(".prism.off").exists()
    assert out.with_suffix(".png").exists()
    assert out.with_suffix(".prism.png").exists()
    report = json.loads(out.with_suffix(".report.json").read_text())
    assert report["poset_copies"]["ok"] is True
    assert report["prism_certificates"]["ok"] is True
    assert report["projected_polytope"]["vertices"] == 32
    assert len(report["dual_coords_r4"]) == 16


def test_dual_rejects_triangle():
    result = invoke(["dual", "--p", "3"])
    assert result.exit_code == 2


def test_moduli_table_lines():
    result = invoke(["moduli", "--p", "5", "--no-verify"])
    assert result.exit_code == 0
    assert "support set       : 10 vertices" in result.output
    assert "support-set bound : 30" in result.output
    assert "naive estimate    : 41" in result.output


def test_moduli_vacuous_estimate():
    result = invoke(["moduli", "--p", "12", "--no-verify"])
    assert result.exit_code == 0
    assert "-15 (vacuous)" in result.output
    assert "support-set bound : 72" in result.output


def test_moduli_verified_small_p():
    result = invoke(["moduli", "--p", "3"])
    assert result.exit_code == 0
    assert "pass" in result.output


def test_wedge_log_env_validation():
    result = invoke(["build", "--p", "4"], env={"WEDGE_LOG": "noisy"})
    assert result.exit_code == 2
    assert "WEDGE_LOG" in result.output
    ok = invoke(["build", "--p", "4"], env={"WEDGE_LOG": "debug"})
    assert ok.exit_code == 0

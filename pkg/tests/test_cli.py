"""Command-line interface: subcommands, manifests, determinism, exit codes."""

import hashlib
import json

import pytest

from rollwave.cli import main

JX_CONFIG = {
    "model": {"kind": "jin_xin", "cs": 1.0, "p": 0.5},
    "wave": {"c": 1.0, "q": 2.0},
}


def _write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _run(command, config_path, out_dir):
    return main([command, "--config", config_path, "--out", str(out_dir)])


class TestSubcommands:
    def test_equilibria(self, tmp_path):
        cfg = _write_config(tmp_path, JX_CONFIG)
        assert _run("equilibria", cfg, tmp_path / "out") == 0
        lines = (tmp_path / "out" / "equilibria.csv").read_text().strip().split("\n")
        assert lines[0] == "tau0,u0,cs,dfstar,classification"
        assert any("SaddlePoint" in line for line in lines[1:])

    def test_profile_then_reuse(self, tmp_path):
        cfg = _write_config(tmp_path, JX_CONFIG)
        assert _run("profile", cfg, tmp_path / "p") == 0
        summary = json.loads((tmp_path / "p" / "profile_summary.json").read_text())
        assert summary["c"] == pytest.approx(1.0, abs=1e-9)
        # persisted profile feeds a scan without re-solving
        scan_cfg = _write_config(
            tmp_path,
            {"profile_path": str(tmp_path / "p" / "profile.json"), "interval": [0.2, 0.6]},
            name="scan.json",
        )
        assert _run("evans-real", scan_cfg, tmp_path / "scan") == 0
        roots = json.loads((tmp_path / "scan" / "real_roots.json").read_text())["roots"]
        assert len(roots) == 1
        assert roots[0] == pytest.approx(0.3921, abs=1e-3)

    def test_speed_search_config(self, tmp_path):
        cfg = _write_config(
            tmp_path,
            {
                "model": {"kind": "st_venant", "F": 0.222, "nu": 20.0, "r": 1.0, "s": 1.0},
                "speed_search": {"bracket": [3.0, 3.4], "q_rule": {"const": 1.0, "slope": 1.0}},
            },
        )
        assert _run("profile", cfg, tmp_path / "out") == 0
        summary = json.loads((tmp_path / "out" / "profile_summary.json").read_text())
        assert summary["c"] == pytest.approx(3.1869, abs=0.02)

    def test_winding(self, tmp_path):
        cfg = _write_config(tmp_path, {**JX_CONFIG, "contour": {"R": 1.0, "r_in": 1e-3}})
        assert _run("winding", cfg, tmp_path / "out") == 0
        result = json.loads((tmp_path / "out" / "winding.json").read_text())
        assert result["winding"] == 1
        assert result["max_rel_step"] <= 0.2

    def test_index(self, tmp_path):
        cfg = _write_config(tmp_path, JX_CONFIG)
        assert _run("index", cfg, tmp_path / "out") == 0
        report = json.loads((tmp_path / "out" / "index.json").read_text())
        assert report["d_prime_zero_sign"] == -1
        assert report["separation_speed_derivative"] > 0.0
        assert report["parity"] == "OddUnstableCount"
        assert report["sign_relation_consistent"] is True

    def test_essential(self, tmp_path):
        cfg = _write_config(tmp_path, {**JX_CONFIG, "k_grid": {"min": -5.0, "max": 5.0, "n": 101}})
        assert _run("essential", cfg, tmp_path / "out") == 0
        verdict = json.loads((tmp_path / "out" / "essential.json").read_text())
        assert verdict["stable"] is True

    def test_manifest_contents(self, tmp_path):
        cfg = _write_config(tmp_path, JX_CONFIG)
        assert _run("equilibria", cfg, tmp_path / "out") == 0
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["command"] == "equilibria"
        assert manifest["config"] == JX_CONFIG
        assert manifest["outputs"] == ["equilibria.csv"]
        assert "rollwave" in manifest["versions"]


class TestDeterminism:
    def test_identical_configs_identical_outputs(self, tmp_path):
        cfg = _write_config(tmp_path, {**JX_CONFIG, "interval": [0.2, 0.6]})
        digests = []
        for run in ("a", "b"):
            out = tmp_path / run
            assert _run("evans-real", cfg, out) == 0
            blob = b"".join(
                (out / name).read_bytes() for name in ("real_roots.csv", "real_roots.json")
            )
            digests.append(hashlib.sha256(blob).hexdigest())
        assert digests[0] == digests[1]


class TestExitCodes:
    def test_missing_config(self, tmp_path):
        assert _run("equilibria", str(tmp_path / "nope.json"), tmp_path / "out") == 2

    def test_invalid_model(self, tmp_path):
        cfg = _write_config(tmp_path, {"model": {"kind": "bogus"}, "wave": {"c": 1.0, "q": 2.0}})
        assert _run("equilibria", cfg, tmp_path / "out") == 2

    def test_numerical_failure(self, tmp_path):
        cfg = _write_config(
            tmp_path, {"model": JX_CONFIG["model"], "wave": {"c": 0.6, "q": 2.0}}
        )
        assert _run("profile", cfg, tmp_path / "out") == 3

    def test_unreliable_winding(self, tmp_path):
        cfg = _write_config(
            tmp_path,
            {**JX_CONFIG, "contour": {"R": 1.0, "r_in": 1e-3}, "max_points": 150},
        )
        assert _run("winding", cfg, tmp_path / "out") == 4

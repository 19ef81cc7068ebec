import io
import json

import pytest

from src.config.constants import EXIT_CODES
from src.config.settings import ComputationConfig
from src.main import build_parser, run_command
from tests.conftest import DATA_DIR


def _run(capsys, *argv):
    code = run_command(list(argv), config=ComputationConfig())
    return code, json.loads(capsys.readouterr().out)


def _data(name: str) -> str:
    return str(DATA_DIR / f"{name}.json")


def test_verify_line(capsys):
    code, envelope = _run(capsys, "verify", _data("line"))
    assert code == EXIT_CODES["ok"]
    assert envelope["command"] == "verify"
    assert envelope["input_digest"].startswith("sha256:")
    report = envelope["outputs"]["report"]
    assert (report["chi"], report["sigma"]) == (-3, -3)
    assert report["verdict"] == "pass"
    assert envelope["verdicts"] == {"theorem": True}


def test_verify_compactified_two_lines(capsys):
    code, envelope = _run(capsys, "verify", "--compact", _data("two_lines"))
    assert code == EXIT_CODES["ok"]
    assert envelope["outputs"]["report"]["compact"] == {"chi": 1, "sigma": 1, "equal": True}


def test_bernstein_two_lines(capsys):
    code, envelope = _run(capsys, "bernstein", _data("two_lines"))
    assert code == EXIT_CODES["ok"]
    assert envelope["outputs"] == {"stable_intersection_total": 1}


def test_degenerate_support_is_a_finding(capsys):
    code, envelope = _run(capsys, "nondegenerate", _data("degenerate_tetrahedron"))
    assert code == EXIT_CODES["ok"]
    assert envelope["outputs"]["nondegenerate"] is False
    assert envelope["outputs"]["nonsingular"] == [False]


def test_oracles_agree(capsys):
    code, envelope = _run(capsys, "--oracle", "subdivide", _data("two_lines"))
    assert code == EXIT_CODES["ok"]
    assert envelope["verdicts"] == {"direct_construction_agrees": True}
    assert envelope["outputs"]["pure"] is True

    code, envelope = _run(capsys, "--oracle", "--seed", "3", "weights", _data("two_lines"))
    assert code == EXIT_CODES["ok"]
    assert envelope["verdicts"] == {"perturbation_agrees": True}
    assert all(
        entry["perturbation_weight"] == entry["weight"]["weight"]
        for entry in envelope["outputs"]["cells"]
    )


def test_patchwork_line(capsys):
    code, envelope = _run(capsys, "--oracle", "patchwork", "--compact", "--cells", _data("line"))
    assert code == EXIT_CODES["ok"]
    torus = envelope["outputs"]["torus"]
    assert torus["counts"] == [0, 3] and torus["euler"] == -3
    assert len(torus["cells"]) == 3
    assert envelope["outputs"]["compactified_euler"] == 0
    assert envelope["verdicts"] == {"hypersurface_counts_agree": True}


def test_signature_line(capsys):
    code, envelope = _run(capsys, "--oracle", "signature", "--compact", _data("line"))
    assert code == EXIT_CODES["ok"]
    outputs = envelope["outputs"]
    assert outputs["sigma"] == outputs["sigma_hypersurface"] == -3
    assert outputs["ehrhart"] == [1, "3/2", "1/2"]
    assert outputs["phi"] == [-2, 1]
    assert outputs["nb_formula"] == [0, 0, 1]
    assert outputs["compactified_sigma"] == 0
    assert all(envelope["verdicts"].values())


def test_identities(capsys):
    code, envelope = _run(capsys, "identities", "--max-n", "4")
    assert code == EXIT_CODES["ok"]
    assert envelope["verdicts"] == {"identities": True}
    assert envelope["outputs"]["table"]["S"][2] == [4, -2, 0]


def test_reads_standard_input(capsys, monkeypatch):
    text = (DATA_DIR / "line_conic.json").read_text(encoding="utf-8")
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    code, envelope = _run(capsys, "bernstein")
    assert code == EXIT_CODES["ok"]
    assert envelope["outputs"]["stable_intersection_total"] == 2


def test_invalid_input_exits_with_validation_failure(capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    code, envelope = _run(capsys, "verify", str(broken))
    assert code == EXIT_CODES["validation_failure"]
    assert "invalid JSON" in envelope["error"]

    code, envelope = _run(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == EXIT_CODES["validation_failure"]


def test_plot_is_byte_identical(capsys, tmp_path):
    first, second = tmp_path / "a.svg", tmp_path / "b.svg"
    code, envelope = _run(capsys, "plot", _data("line_conic"), "--output", str(first), "--dual")
    assert code == EXIT_CODES["ok"]
    _run(capsys, "plot", _data("line_conic"), "--output", str(second), "--dual")
    assert first.read_bytes() == second.read_bytes()
    assert envelope["outputs"]["svg_digest"].startswith("sha256:")


def test_plot_needs_the_plane(capsys, tmp_path):
    code, envelope = _run(
        capsys, "plot", _data("degenerate_tetrahedron"), "--output", str(tmp_path / "x.svg")
    )
    assert code == EXIT_CODES["validation_failure"]
    assert "n = 2" in envelope["error"]


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])

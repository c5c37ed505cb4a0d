import json
import subprocess
import sys

import pytest

from threatcorr.cli import main
from threatcorr.scenario import bundled_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_run_figure2_table(capsys):
    code, out, _ = run(capsys, "run", "figure2")
    assert code == 0
    assert "Conflict (mass assigned to null set) = 0.409" in out
    assert "Pass II: test ecm/ecm-survey" in out
    assert "Bel({D}) = 0.140    Pl({D}) = 0.398" in out
    assert "Selected route: south-detour" in out


def test_scenario_option_and_threshold(capsys):
    code, out, _ = run(capsys, "run", "--scenario", str(bundled_path("figure2")), "--threshold", "0.5")
    assert code == 0
    assert "Pass II" not in out and "Threshold: 0.500" in out


def test_structured_output(capsys):
    code, out, _ = run(capsys, "run", "figure2", "--format", "structured")
    doc = json.loads(out)
    assert doc["schema"] == "threatcorr-report/1"
    assert round(doc["initial"]["conflict"], 6) == 0.409374
    assert doc["routes"]["selected"] == "south-detour"


def test_trace_lists_conflict_types(capsys):
    _, out, _ = run(capsys, "run", "figure2", "--trace")
    assert "conflict by type:" in out and "(6) 0.252" in out


def test_no_tests_uses_global_discount(capsys):
    code, out, _ = run(capsys, "run", "figure2", "--no-tests", "--no-routes")
    assert code == 0
    assert "Pass III" in out and "Selected route" not in out


def test_output_is_deterministic(capsys):
    a = run(capsys, "run", "figure2", "--format", "structured", "--seed", "1")[1]
    b = run(capsys, "run", "figure2", "--format", "structured", "--seed", "2")[1]
    assert a == b


def test_figures_written(capsys, tmp_path):
    code, out, _ = run(capsys, "run", "figure2", "--figures", str(tmp_path))
    assert code == 0
    for suffix in ("beliefs", "conflict"):
        p = tmp_path / f"figure2-{suffix}.png"
        assert p.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
        assert f"Figure written: {p}" in out


def test_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.scenario"
    bad.write_text("format = = 1\n")
    code, _, err = run(capsys, "run", str(bad))
    assert code == 2 and "line 1" in err


def test_missing_scenario_argument(capsys):
    assert run(capsys, "run")[0] == 2


def test_validation_error_exit(capsys, tmp_path):
    text = bundled_path("figure2").read_text().replace("same_mass = 0.7", "same_mass = 1.7")
    p = tmp_path / "v.scenario"
    p.write_text(text)
    code, _, err = run(capsys, "run", str(p))
    assert code == 3 and "coverage" in err


def test_bad_threshold_exit(capsys):
    assert run(capsys, "run", "figure2", "--threshold", "1.0")[0] == 3


def test_total_conflict_exit(capsys, tmp_path):
    text = bundled_path("figure2").read_text()
    # point localizations 85 apart with a certain zero-move belief
    for old in ("[4.5, 9.5, 15.0, 22.0, 33.0, 60.0]", "[9.0, 18.0, 30.0, 45.0, 70.0, 120.0]"):
        text = text.replace(f"radius = {old}\nmass = [0.18, 0.18, 0.18, 0.18, 0.18, 0.1]", "radius = [1.0]\nmass = [1.0]")
    text = text.replace("diagonal_mass = 0.3\nlower = [10.0, 9.0, 7.5, 6.0, 0.0]\nupper = [13.0, 15.0, 18.0, 22.0, inf]\nmass = [0.15, 0.15, 0.15, 0.15, 0.1]",
                        "diagonal_mass = 1.0\nlower = []\nupper = []\nmass = []")
    text = text.replace("same_mass = 0.7", "same_mass = 1.0")
    p = tmp_path / "k.scenario"
    p.write_text(text)
    code, _, err = run(capsys, "run", str(p))
    assert code == 4 and "total conflict" in err


def test_list_and_show(capsys):
    code, out, _ = run(capsys, "list")
    assert out.split() == ["figure2", "variant-close", "variant-lowcoverage"]
    code, out, _ = run(capsys, "show", "variant-close")
    assert code == 0 and "center = [50.0, 60.0]" in out


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "threatcorr", "list"], capture_output=True, text=True)
    assert r.returncode == 0 and "figure2" in r.stdout

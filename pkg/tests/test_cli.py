from __future__ import annotations

import json
import subprocess
import sys

import pytest

from localchern import chern
from localchern.cli import main, parse_input_file, run
from localchern.errors import InputFileError, RouteDisagreement

GOLDEN = """\
ring x, y, z;
variety: y^2 - x^3;
dim 2;
normalization (t, z) -> (t^2, t^3, z);
collection k=1: (0, x^3, z^2), (z^3, 0, x^2);
collection k=1: (y^2, z^3, 0), (0, y^3, z^2);
"""


def write(tmp_path, text, name="p.chern"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_parse_golden_file():
    spec = parse_input_file(GOLDEN)
    assert spec.variety.dim == 2
    assert spec.collection.s == 2
    assert spec.collection.partition == (1, 1)
    assert spec.variety.normalization.source.variables == ("t", "z")


def test_statements_may_span_lines_and_carry_comments():
    text = GOLDEN.replace("collection k=1: (0, x^3, z^2),", "# first pair\ncollection k=1: (0, x^3, z^2),\n  ")
    assert parse_input_file(text).collection == parse_input_file(GOLDEN).collection


@pytest.mark.parametrize("text, line, fragment", [
    (GOLDEN.replace("(z^3, 0, x^2);", "(z^3, 0, x^2), (1, 0, 0);"), 5, "expected d-k_i+1 = 2"),
    (GOLDEN.replace("(t, z) -> (t^2, t^3, z)", "(t) -> (t^2, t^3, t)"), 4, "normalization arity"),
    (GOLDEN.replace("collection k=1: (y^2, z^3, 0), (0, y^3, z^2);\n", ""), 5, "partition"),
    (GOLDEN.replace("(t^2, t^3, z)", "(t^2, t^3)"), 4, "normalization arity"),
    (GOLDEN.replace("y^2 - x^3", "y^2 - w^3"), 2, "unknown variable"),
    (GOLDEN.replace("dim 2;", "dim 2"), 3, "';' missing"),
    (GOLDEN.replace("(0, y^3, z^2)", "(0, y^3)"), 6, "entries"),
    (GOLDEN.replace("variety:", "varity:"), 2, "unrecognized"),
])
def test_parse_errors_name_the_line(text, line, fragment):
    with pytest.raises(InputFileError) as info:
        parse_input_file(text)
    assert info.value.line == line
    assert fragment in str(info.value)
    assert f"line {line}" in str(info.value)


def test_compute_golden_both_routes(tmp_path):
    text, code = run(["compute", write(tmp_path, GOLDEN), "--seed", "7", "--route", "both"])
    assert code == 0
    assert text.rstrip().endswith("final: 47")
    assert "seed 7" in text and "surface-both" in text
    assert "ring x, y, z" in text


def test_json_report_schema(tmp_path):
    text, code = run(["compute", write(tmp_path, GOLDEN), "--format", "json"])
    assert code == 0
    data = json.loads(text)
    assert list(data) == ["method", "terms", "geometry", "final", "seeds", "warnings"]
    assert list(data["geometry"]) == ["prefix_dims", "expected_dims", "isolated"]
    assert all(list(t) == ["label", "value", "seed"] for t in data["terms"])
    assert data["final"] == 47


def test_reports_are_byte_identical(tmp_path):
    path = write(tmp_path, GOLDEN)
    first = run(["compute", path, "--seed", "3", "--route", "both"])
    second = run(["compute", path, "--seed", "3", "--route", "both"])
    assert first == second


def test_printed_seed_reproduces_term(tmp_path, problems):
    text, _ = run(["compute", str(problems / "milnor_d4.chern"), "--seed", "5"])
    assert "ind(l) = 0  (seed 6)" in text
    again, _ = run(["compute", str(problems / "milnor_d4.chern"), "--seed", "6", "--trials", "1"])
    assert "ind(l) = 0  (seed 6)" in again


def test_non_isolated_exit_code(problems):
    text, code = run(["compute", str(problems / "a1_nonisolated.chern")])
    assert code == 2
    assert "dimension 1" in text


def test_parse_error_exit_code(tmp_path):
    text, code = run(["compute", write(tmp_path, GOLDEN.replace("x^3;", "x^3 +;"))])
    assert code == 3
    assert "line 2" in text
    assert run(["compute", str(tmp_path / "missing.chern")])[1] == 3
    assert run(["frobnicate"])[1] == 3


def test_cap_exit_code(tmp_path):
    text, code = run(["compute", write(tmp_path, GOLDEN), "--cap", "3"])
    assert code == 4


def test_route_disagreement_exit_code(tmp_path, monkeypatch):
    def boom(*args, **kwargs):
        raise RouteDisagreement("routes disagree: {'colength': 1, 'normalization': 2}")
    monkeypatch.setattr(chern, "chern_surface", boom)
    text, code = run(["compute", write(tmp_path, GOLDEN), "--route", "both"])
    assert code == 5 and "disagree" in text


def test_icis_on_non_complete_intersection(tmp_path):
    text = "ring x, y, z; variety: x*y; variety: x*z; variety: y*z; dim 1; collection k=1: (1, 2, 3);"
    assert run(["compute", write(tmp_path, text)])[1] == 2


def test_imult_command():
    text, code = run(["imult", "--vars", "t,z", "z^2*(2t^5+3z^3)", "-3t^11+2z^5"])
    assert (text, code) == ("imult: 47\n", 0)
    text, code = run(["imult", "--vars", "t,z", "t", "z", "--oracle", "--format", "json"])
    assert json.loads(text) == {"imult": 1, "resultant": 1}
    assert run(["imult", "--vars", "t,z", "t"])[1] == 3


def test_ideal_commands():
    assert run(["colength", "--vars", "x,y", "x^2", "y^2"]) == ("colength (local): 4\n", 0)
    assert run(["colength", "--vars", "x", "x^2-x^3", "--global"])[0] == "colength (global): 3\n"
    assert run(["colength", "--vars", "x,y", "x*y"])[0] == "colength (local): inf\n"
    assert run(["dim", "--vars", "x,y,z", "y^2-x^3", "--global"])[0] == "dim (global): 2\n"
    text, code = run(["gb", "--vars", "x,y,z", "y^2-x^3", "2y", "-3x^2"])
    assert code == 0 and set(text.split()) == {"x^2", "y"}
    assert run(["gb", "--vars", "x,y", "x+w"])[1] == 3


def test_ind_and_check_commands(problems):
    text, code = run(["ind", str(problems / "milnor_d4.chern")])
    assert code == 0 and text.endswith("ind: 4\n")
    text, code = run(["check", str(problems / "cusp_surface.chern"), "--format", "json"])
    data = json.loads(text)
    assert data["prefix_dims"] == [1, -1] and data["isolated"] is True


def test_selftest():
    text, code = run(["selftest"])
    assert code == 0 and text.endswith("selftest: ok\n")
    text, code = run(["selftest", "--cap", "3"])
    assert code == 4 and "NOT STABILIZED" in text


def test_main_streams(capsys, problems):
    assert main(["imult", "--vars", "t,z", "t", "z"]) == 0
    assert capsys.readouterr().out == "imult: 1\n"
    assert main(["compute", str(problems / "a1_nonisolated.chern")]) == 2
    assert "error:" in capsys.readouterr().err


def test_module_entry_point(problems):
    proc = subprocess.run([sys.executable, "-m", "localchern", "compute",
                           str(problems / "cusp_surface.chern"), "--seed", "7", "--route", "both"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.rstrip().endswith("final: 47")

import json
import subprocess
import sys

import pytest

from jacobijets.cli import dump_space, load_space, main, parse_space_text, SpaceParseError

from conftest import space


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def machine(capsys, *argv):
    code, out, err = run(capsys, "--format", "machine", *argv)
    assert code == 0, err
    return json.loads(out)


def test_catalog_listing(capsys):
    rep = machine(capsys, "catalog")
    ids = [r["id"] for r in rep["catalog"]]
    assert ids[:4] == ["m6", "v1", "v3", "kaplan-n6"]
    v3 = rep["catalog"][2]
    assert v3["params"] == {"c": "3/2"}


def test_singer_m6(capsys):
    rep = machine(capsys, "singer", "m6")
    assert rep["stabilizer"]["singer"] == 1 and rep["stabilizer"]["dims"] == [3, 2, 2]


def test_singer_flat_torus(capsys):
    rep = machine(capsys, "singer", "flat-torus-4")
    assert rep["stabilizer"]["dims"] == [6, 6]


def test_jacobi_scan_m6(capsys):
    rep = machine(capsys, "jacobi", "m6", "--scan", "5")
    j = rep["jacobi"]
    assert j["minimal_order"] == 4
    assert j["relation"]["coefficients"] == {"1": "-1/16", "3": "-5/8"}
    assert j["relation"]["root_ratio"] == "4"
    assert j["relation"]["osculating_witness"] is True


def test_jacobi_order_zero_flat(capsys):
    code, out, _ = run(capsys, "jacobi", "flat-torus-3", "--order", "0")
    assert code == 0 and "jacobi.relation.equation: R^(1) = 0" in out


def test_metric_scale(capsys):
    a = machine(capsys, "jacobi", "v3", "--order", "2")
    b = machine(capsys, "jacobi", "v3", "--order", "2", "--metric-scale", "2")
    assert a["jacobi"]["relation"]["coefficients"]["1"] == "-1/30"
    assert b["jacobi"]["relation"]["coefficients"]["1"] == "-1/60"


def test_text_report_is_line_oriented(capsys):
    code, out, _ = run(capsys, "singer", "v1")
    assert code == 0
    assert "stabilizer.singer: 0" in out.splitlines()
    assert all(": " in line for line in out.splitlines())


def test_reports_are_deterministic(capsys):
    first = run(capsys, "--format", "machine", "report", "v1")[1]
    second = run(capsys, "--format", "machine", "report", "v1")[1]
    assert first == second and "timing" not in first


def test_timing_is_opt_in(capsys):
    rep = machine(capsys, "--timing", "singer", "v1")
    assert "timing_seconds" in rep


@pytest.mark.parametrize("name,dim,d", [("m6", 8, 2), ("kaplan-n6", 6, 1)])
def test_export(tmp_path, capsys, name, dim, d):
    path = tmp_path / f"{name}.space"
    code, _, _ = run(capsys, "export", name, str(path))
    assert code == 0
    text = path.read_text()
    assert f"dim: {dim}\n" in text and f"field: {d}\n" in text
    s = load_space(path)
    assert dump_space(s) == text
    assert s.alg.c == space(name).alg.c and s.metric == space(name).metric


def test_export_to_stdout(capsys):
    code, out, _ = run(capsys, "export", "kaplan-n6", "-")
    assert code == 0 and out.startswith("name: kaplan-n6\n") and "\nh:\n" in out


def test_validate_catalog(capsys):
    code, out, _ = run(capsys, "validate", "m6")
    assert code == 0 and "validation.ok: yes" in out


def _edited(tmp_path, name, old, new):
    text = dump_space(space(name))
    assert old in text
    path = tmp_path / "edited.space"
    path.write_text(text.replace(old, new, 1))
    return str(path)


def test_validate_broken_jacobi(tmp_path, capsys):
    path = _edited(tmp_path, "kaplan-n6", "3 4 5 1\n", "3 4 5 1\n5 6 1 1\n")
    code, out, _ = run(capsys, "validate", path)
    assert code == 1
    assert "lie-algebra: fail: jacobi violation at (" in out


def test_validate_non_invariant_metric(tmp_path, capsys):
    text = dump_space(space("v1"))
    lines = text.splitlines()
    lines[-1] = " ".join(lines[-1].split()[:-1] + ["5"])
    path = tmp_path / "v1.space"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 1 and "validation.checks.ad-invariance: fail" in out


def test_parse_error_is_located(tmp_path, capsys):
    path = _edited(tmp_path, "kaplan-n6", "field: 1", "field: one")
    code, _, err = run(capsys, "singer", path)
    assert code == 2 and ":2: [field]" in err


def test_parse_errors():
    with pytest.raises(SpaceParseError) as info:
        parse_space_text("name: x\nfield: 1\ndim: 2\nconstants:\n1 2 1\n", "f")
    assert info.value.line == 5 and info.value.field == "constants"
    with pytest.raises(SpaceParseError):
        parse_space_text("name: x\nfield: 1\ndim: 1\nconstants:\nh:\nm: 1\nmetric:\n1 2\n")
    with pytest.raises(SpaceParseError):
        parse_space_text("")


def test_comments_and_blank_lines():
    text = "# torus\nname: t\n\nfield: 1\ndim: 2\nconstants:\nh:\nm: 1 2  # all of it\nmetric:\n1\n0 1\n"
    s = parse_space_text(text).space()
    assert s.n == 2 and s.name == "t"


def test_validation_error_exit_code(tmp_path, capsys):
    path = _edited(tmp_path, "kaplan-n6", "3 4 5 1\n", "3 4 5 1\n5 6 1 1\n")
    code, _, err = run(capsys, "singer", path)
    assert code == 1 and "jacobi violation" in err


def test_unknown_space_and_bad_flags(capsys):
    assert run(capsys, "singer", "nowhere")[0] == 2
    assert run(capsys, "jacobi", "m6")[0] == 2
    assert run(capsys, "jacobi", "m6", "--order", "-1")[0] == 2
    assert run(capsys, "singer", "m6", "--metric-scale", "-2")[0] == 2


def test_internal_error_exit_code(capsys):
    assert run(capsys, "singer", "m6", "--max-order", "0")[0] == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "jacobijets", "singer", "v3"], capture_output=True, text=True)
    assert res.returncode == 0 and "stabilizer.dims: [4,4]" in res.stdout

import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kahler_algebroid import presets
from kahler_algebroid.cli import main, render_table
from kahler_algebroid.errors import ParseError
from kahler_algebroid.modelfile import model_hash, model_to_dict, parse_model, serialize_model


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None, err


def write_model(tmp_path, doc, name="model.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def test_validate_abelian(capsys):
    code, rep, _ = run_json(capsys, "validate", "abelian-2m", "--m", "1")
    assert code == 0 and rep["exit_code"] == 0
    assert all(v["ok"] for v in rep["validation"].values())
    assert rep["schema_version"] == 1


def test_validate_kt(capsys):
    code, rep, _ = run_json(capsys, "validate", "kt")
    assert code == 1
    assert rep["validation"]["jacobi"]["ok"]
    assert not rep["validation"]["kahler"]["ok"]


def test_validate_corrupted_witness(capsys):
    code, rep, _ = run_json(capsys, "validate", "kt-corrupted")
    assert code == 1
    assert rep["validation"]["jacobi"]["witness"]["triple"] == [1, 2, 3]


def test_cohomology_examples(capsys):
    assert run_json(capsys, "cohomology", "kt")[1]["dims"] == [1, 3, 4, 3, 1]
    assert run_json(capsys, "cohomology", "affine-2")[1]["dims"] == [1, 1, 0]
    code, rep, _ = run_json(capsys, "cohomology", "abelian-2m", "--m", "2", "--bigraded")
    assert code == 0
    assert rep["bigraded"] == {f"{p},{q}": [1, 2, 1][p] * [1, 2, 1][q] for p in range(3) for q in range(3)}


def test_cohomology_bigraded_without_j(capsys):
    code, out, err = run(capsys, "cohomology", "kt", "--bigraded")
    assert code == 1 and "J" in err and not out


def test_cohomology_kunneth(capsys):
    code, rep, _ = run_json(capsys, "cohomology", "abelian-2m", "--kunneth", "cp1-ring")
    assert code == 0
    assert rep["kunneth"]["dims"] == [1, 2, 2, 2, 1]
    assert rep["kunneth"]["hard_lefschetz"]


def test_harmonic_bases(capsys):
    code, rep, _ = run_json(capsys, "cohomology", "e2xr", "--harmonic")
    assert code == 0
    assert [len(rep["harmonic"][str(k)]) for k in range(5)] == rep["dims"]


def test_theorems_kt(capsys):
    code, rep, _ = run_json(capsys, "theorems", "kt", "--all")
    assert code == 1
    assert not rep["hard_lefschetz"]["ok"] and not rep["ddstar"]["ok"]
    assert rep["equivalence"]["consistent"]
    assert rep["identities"] == {"ok": False, "missing": ["metric", "J"]}
    failing = [e for e in rep["hard_lefschetz"]["entries"] if not e["iso"]]
    assert failing[0]["witness"] == "[e1]"


def test_theorems_abelian(capsys):
    code, rep, _ = run_json(capsys, "theorems", "abelian-2m", "--m", "2", "--all")
    assert rep["hard_lefschetz"]["ok"] and rep["ddstar"]["ok"]
    assert rep["symplectic_harmonic"]["verdict"]["ok"]
    assert rep["betti_evenness"]["all_even"]
    assert rep["equivalence"]["consistent"] and rep["equivalence"]["hard_lefschetz"]
    failed = sorted(n for n, r in rep["identities"]["results"].items() if r["status"] != "pass")
    # the only identity that does not hold on flat C^2 is the literal L2 = g - i ω decomposition
    assert failed == ["l2_equals_g_minus_i_omega"]
    assert code == 1


def test_theorems_selected_flag(capsys):
    code, rep, _ = run_json(capsys, "theorems", "abelian-2m", "--hard-lefschetz")
    assert code == 0
    assert set(rep) >= {"hard_lefschetz"} and "ddstar" not in rep


def test_theorems_missing_omega(capsys):
    code, out, err = run(capsys, "theorems", "kt-corrupted")
    assert code == 1 and "omega" in err


def test_routing_hint(capsys):
    code, out, err = run(capsys, "theorems", "b-sphere")
    assert code == 1
    assert "hint: try: bgeometry b-sphere" in err


def test_bgeometry(capsys):
    code, rep, _ = run_json(capsys, "bgeometry", "b-sphere", "--m", "1")
    assert code == 1
    assert rep["dims"] == [1, 1, 2]
    assert rep["hard_lefschetz"]["verdict"] == "impossible"
    assert rep["hard_lefschetz"]["entries"][1]["verdict"] == "impossible"


def test_bgeometry_file(capsys, tmp_path):
    path = write_model(tmp_path, {"bM": [1, 0, 1]}, "spec.json")
    code, rep, _ = run_json(capsys, "bgeometry", path)
    assert code == 0 and rep["hard_lefschetz"]["verdict"] == "inconclusive"


def test_list_presets(capsys):
    code, rep, _ = run_json(capsys, "list-presets")
    assert code == 0
    assert "kt" in rep["models"] and "b-sphere" in rep["bgeometry"] and "cp1-ring" in rep["rings"]


def test_table_output(capsys):
    code, out, _ = run(capsys, "cohomology", "kt", "--table")
    assert code == 0
    assert "dims: (1, 3, 4, 3, 1)" in out


def test_render_table_nested():
    text = render_table({"a": {"b": [1, 2]}, "c": True, "d": None})
    assert text.splitlines() == ["a:", "  b: (1, 2)", "c: yes", "d: -"]


@pytest.mark.parametrize("verb", [["validate", "e2xr"], ["cohomology", "kt", "--bigraded"], ["theorems", "kt", "--all"]])
def test_deterministic(capsys, verb):
    first = run(capsys, *verb)
    second = run(capsys, *verb)
    assert first == second


def test_timing_flag(capsys):
    _, rep, _ = run_json(capsys, "cohomology", "kt", "--timing")
    assert rep["runtime_seconds"] >= 0
    _, rep, _ = run_json(capsys, "cohomology", "kt")
    assert "runtime_seconds" not in rep


# --- model files ---


def kt_doc():
    return model_to_dict(presets.kodaira_thurston())


def test_model_file_round_trip(capsys, tmp_path):
    path = write_model(tmp_path, kt_doc())
    code, rep, _ = run_json(capsys, "cohomology", path)
    assert code == 0 and rep["dims"] == [1, 3, 4, 3, 1]
    assert rep["model"]["sha256"] == model_hash(presets.kodaira_thurston())


@pytest.mark.parametrize("name", sorted(presets.MODEL_PRESETS))
def test_serialize_parse_round_trip(name):
    p = presets.model_preset(name)
    q = parse_model(serialize_model(p))
    assert serialize_model(q) == serialize_model(p)
    assert model_hash(q) == model_hash(p)


@pytest.mark.parametrize(
    "mutate, where",
    [
        (lambda d: d["structure"][0].__setitem__("i", 0), "$.structure[0].i"),
        (lambda d: d["structure"][0].__setitem__("i", 3), "$.structure[0].j"),
        (lambda d: d["omega"][0].__setitem__("c", "x"), "$.omega[0].c"),
        (lambda d: d.__setitem__("bogus", 1), "$"),
        (lambda d: d.__setitem__("rank", "4"), "$.rank"),
        (lambda d: d.__setitem__("metric", [[1]]), "$.metric"),
    ],
)
def test_semantic_errors_have_paths(capsys, tmp_path, mutate, where):
    doc = kt_doc()
    mutate(doc)
    with pytest.raises(ParseError) as exc:
        parse_model(json.dumps(doc))
    assert exc.value.location == where
    code, out, err = run(capsys, "validate", write_model(tmp_path, doc))
    assert code == 2 and where in err and not out


def test_syntax_error_has_line_and_column(capsys, tmp_path):
    path = write_model(tmp_path, '{\n  "rank": 4,\n  "structure": [\n}')
    code, _, err = run(capsys, "validate", path)
    assert code == 2
    assert "line 4, column 1" in err


def test_float_rejected(capsys, tmp_path):
    path = write_model(tmp_path, '{"rank": 2, "eta": 0.5}')
    code, _, err = run(capsys, "validate", path)
    assert code == 2 and "0.5" in err


def test_unknown_model(capsys):
    assert run(capsys, "validate", "no-such-thing")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "validate", "kt", "--m", "2")[0] == 2


@settings(max_examples=40, deadline=None)
@given(st.recursive(st.none() | st.booleans() | st.integers() | st.text(max_size=5),
                    lambda c: st.lists(c, max_size=3) | st.dictionaries(st.text(max_size=4), c, max_size=3),
                    max_leaves=8))
def test_parse_is_total(doc):
    # every input yields a model or a located ParseError, never another exception
    try:
        parse_model(json.dumps(doc))
    except ParseError as exc:
        assert exc.location is not None


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "kahler_algebroid.cli", "cohomology", "kt"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["dims"] == [1, 3, 4, 3, 1]

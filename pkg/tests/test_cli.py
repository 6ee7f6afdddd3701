import json

import pytest

from roleforge.cli import main

from conftest import FRAMES_DIR

GOLDEN = str(FRAMES_DIR / "nonmonotonic.frame")
COUNTING = str(FRAMES_DIR / "nontransitive.frame")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", GOLDEN)
    assert code == 0
    assert "mode = set" in out and "window = 16" in out and "containment = True" in out


def test_validate_json_schema(capsys):
    code, out, _ = run(capsys, "validate", GOLDEN, "--format", "json")
    payload = json.loads(out)
    assert payload["kind"] == "check"
    assert set(payload) == {"kind", "frame", "result", "witnesses", "meta"}
    assert {"versions", "seed", "cap"} <= set(payload["meta"])


def test_positions_order(capsys):
    code, out, _ = run(capsys, "positions", GOLDEN)
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 16
    assert lines[0] == "|-" and lines[1] == "a |-" and lines[2] == "b |-"


def test_rsr_command(capsys):
    code, out, _ = run(capsys, "rsr", GOLDEN, "a |-")
    assert code == 0
    rendered = {p.strip() for p in out.strip().strip("{}").split(";")}
    excluded = {"|-", "a |-", "|- b", "a |- b"}
    assert rendered.isdisjoint(excluded)
    assert len(rendered) == 12 and "a |- a" in rendered


def test_rsr_cap_stability(capsys):
    code, out, _ = run(capsys, "rsr", COUNTING, "|- x", "--cap-stability")
    assert code == 0
    assert "no changes" in out


def test_lattice_plain_and_determinism(capsys):
    code, out1, _ = run(capsys, "lattice", GOLDEN)
    code2, out2, _ = run(capsys, "lattice", GOLDEN)
    assert code == code2 == 0
    assert out1 == out2
    assert "6 roles" in out1 and "join" in out1 and "tensor" in out1


def test_lattice_markdown_csv_json_dot(capsys):
    _, md, _ = run(capsys, "lattice", GOLDEN, "--format", "markdown")
    assert "| join |" in md
    _, csv_text, _ = run(capsys, "lattice", GOLDEN, "--format", "csv")
    assert csv_text.splitlines()[-1].count(",") == 6
    _, js, _ = run(capsys, "lattice", GOLDEN, "--format", "json")
    payload = json.loads(js)
    assert len(payload["result"]["roles"]) == 6
    assert payload["result"]["unit"] != payload["result"]["dualizer"]
    _, dot, _ = run(capsys, "lattice", GOLDEN, "--format", "dot")
    assert dot.startswith("digraph") and "->" in dot


def test_lattice_labels(capsys, tmp_path):
    # alias the dualizer role by its extension
    _, js, _ = run(capsys, "lattice", GOLDEN, "--format", "json")
    payload = json.loads(js)
    dualizer_alias = payload["result"]["dualizer"]
    extension = next(
        r["positions"] for r in payload["result"]["roles"] if r["alias"] == dualizer_alias
    )
    labels = tmp_path / "labels.json"
    labels.write_text(json.dumps({"Incoherent": extension}))
    _, out, _ = run(capsys, "lattice", GOLDEN, "--labels", str(labels), "--format", "json")
    relabeled = json.loads(out)
    assert relabeled["result"]["dualizer"] == "Incoherent"
    # relabeling never changes table structure
    assert [
        [cell == dualizer_alias for cell in row] for row in payload["result"]["tensor_table"]
    ] == [
        [cell == "Incoherent" for cell in row] for row in relabeled["result"]["tensor_table"]
    ]


def test_interp_and_eval(capsys):
    code, out, _ = run(capsys, "interp", GOLDEN, "a")
    assert code == 0 and "premisory" in out and "conclusory" in out
    code, out, _ = run(capsys, "eval", GOLDEN, "a /\\ b")
    assert code == 0
    code, out, _ = run(capsys, "eval", COUNTING, "~x | x", "--clauses", "linear", "--cap-stability")
    assert code == 0 and "no changes" in out


def test_entails_exit_codes(capsys):
    assert run(capsys, "entails", GOLDEN, "a |- a, b")[0] == 0
    assert run(capsys, "entails", GOLDEN, "b |- a")[0] == 1
    assert run(capsys, "entails", GOLDEN, "")[0] == 1  # unit not below dualizer
    assert run(capsys, "entails", COUNTING, "x, ~x | x |- x", "--clauses", "linear")[0] == 0


def test_nmms_and_trace(capsys):
    assert run(capsys, "nmms", GOLDEN, "a, b |- a /\\ b")[0] == 0
    assert run(capsys, "nmms", GOLDEN, "b |- a")[0] == 1
    code, out, _ = run(capsys, "trace", GOLDEN, "a, b |- a /\\ b", "--format", "json")
    payload = json.loads(out)
    assert payload["result"]["rule"] == "andRc"
    code, out, _ = run(capsys, "trace", GOLDEN, "~(a /\\ b) |-")
    assert code == 1 and "negL" in out


def test_check_commands(capsys):
    assert run(capsys, "check", GOLDEN, "reflexive")[0] == 0
    assert run(capsys, "check", GOLDEN, "containment")[0] == 0
    assert run(capsys, "check", GOLDEN, "gq-laws")[0] == 0
    assert run(capsys, "check", GOLDEN, "conservativity")[0] == 0
    assert run(capsys, "check", GOLDEN, "clause-agreement")[0] == 0
    assert run(capsys, "check", COUNTING, "cap-stability")[0] == 0
    code, out, _ = run(capsys, "check", GOLDEN, "supraclassical", "--samples", "300")
    assert code == 0
    code, out, _ = run(capsys, "check", GOLDEN, "supralinear", "--samples", "150", "--depth", "1")
    assert code == 0


def test_check_failure_exit_code(capsys, tmp_path):
    bare = tmp_path / "bare.frame"
    bare.write_text("atoms = a\nmode = set\nincoherent { }\n")
    code, out, _ = run(capsys, "check", str(bare), "containment")
    assert code == 3
    assert "not containment" in out


def test_compare(capsys, tmp_path):
    one = tmp_path / "one.frame"
    one.write_text("atoms = a\nmode = set\ngenerators { containment }\nincoherent { }\n")
    code, out, _ = run(capsys, "compare", str(one), "--depth", "1")
    assert code == 0
    assert "checked 961" in out


def test_compare_depth_zero_atomic(capsys):
    code, out, _ = run(capsys, "compare", GOLDEN, "--depth", "0")
    assert code == 0
    assert "checked 49" in out  # (1 + 2 + 4)^2 atomic sequents


def test_compare_rejects_linear_clauses(capsys):
    code, _, err = run(capsys, "compare", GOLDEN, "--clauses", "linear")
    assert code == 2
    assert "linear" in err


def test_morphism_command(capsys, tmp_path):
    one = tmp_path / "one.frame"
    one.write_text(
        "atoms = a\nmode = set\nincoherent {\n  |- a\n  a |- a\n}\n"
    )
    code, out, _ = run(capsys, "morphism", GOLDEN, str(one), "a->a,b->a")
    assert code == 1
    assert "not conservative" in out
    code, out, _ = run(capsys, "morphism", GOLDEN, GOLDEN, "a->a,b->b")
    assert code == 0
    assert "conservative" in out and "continuous" in out


def test_usage_errors(capsys):
    assert run(capsys, "entails", "/nonexistent.frame", "a |- a")[0] == 2
    with pytest.raises(SystemExit) as exit_info:
        main(["definitely-not-a-command"])
    assert exit_info.value.code == 2


def test_parse_error_is_usage_error(capsys, tmp_path):
    broken = tmp_path / "broken.frame"
    broken.write_text("atoms = a\nmode = set\nincoherent {\n a |- q\n}\n")
    code, _, err = run(capsys, "validate", str(broken))
    assert code == 2
    assert "unknown atom" in err


def test_entails_formula_error(capsys):
    code, _, err = run(capsys, "entails", GOLDEN, "a |- (b")
    assert code == 2

from __future__ import annotations

import json
from pathlib import Path

import pytest

from wizardmerge import extract_source, save_metadata
from wizardmerge.cli import main

DELDEF_BASE = "int a = 1;\nint pad = 2;\nint f() {\n  return a + pad;\n}\n"
DELDEF_OURS = "int pad = 2;\nint f() {\n  return a + pad;\n}\n"
DELDEF_THEIRS = "int a = 1;\nint pad = 2;\nint f() {\n  return a * 2;\n}\n"


def write_tree(root: Path, files: dict[str, str]) -> Path:
    for rel, text in files.items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return root


@pytest.fixture
def deldef_trees(tmp_path):
    base = write_tree(tmp_path / "base", {"vars.c": DELDEF_BASE})
    ours = write_tree(tmp_path / "ours", {"vars.c": DELDEF_OURS})
    theirs = write_tree(tmp_path / "theirs", {"vars.c": DELDEF_THEIRS})
    return base, ours, theirs


def analyze_args(base, ours, theirs, out, *extra: str) -> list[str]:
    return ["analyze", "--base", str(base), "--ours", str(ours),
            "--theirs", str(theirs), "--out", str(out), "--quiet",
            "--extract", *extra]


def test_identical_trees_exit_zero_and_empty_report(tmp_path):
    files = {"a.c": "int x;\n", "sub/b.c": "int y;\n"}
    base = write_tree(tmp_path / "base", files)
    ours = write_tree(tmp_path / "ours", files)
    theirs = write_tree(tmp_path / "theirs", files)
    out = tmp_path / "out"
    assert main(analyze_args(base, ours, theirs, out)) == 0
    assert (out / "report.txt").read_text() == "@@ WizardMerge Result\n"
    assert (out / "merged" / "a.c").read_text() == "int x;\n"
    assert (out / "merged" / "sub" / "b.c").read_text() == "int y;\n"


def test_deleted_definition_scenario_exits_one(deldef_trees, tmp_path, capsys):
    base, ours, theirs = deldef_trees
    out = tmp_path / "out"
    code = main(analyze_args(base, ours, theirs, out, "--format", "both"))
    assert code == 1
    report = (out / "report.txt").read_text()
    assert "C--" not in report
    assert "A-- f vars.c 3-3" in report
    assert "B-- (applied) f vars.c 4-4" in report
    doc = json.loads((out / "report.json").read_text())
    kinds = [entry["kind"] for group in doc["groups"]
             for bucket in group["buckets"] for entry in bucket]
    assert sorted(kinds) == ["A", "B", "B"]


def test_analyze_with_metadata_files(deldef_trees, tmp_path):
    base, ours, theirs = deldef_trees
    meta_a = tmp_path / "a.json"
    meta_b = tmp_path / "b.json"
    save_metadata(extract_source([("vars.c", DELDEF_OURS)], "A"), meta_a)
    save_metadata(extract_source([("vars.c", DELDEF_THEIRS)], "B"), meta_b)
    out = tmp_path / "out"
    code = main(["analyze", "--base", str(base), "--ours", str(ours),
                 "--theirs", str(theirs), "--out", str(out), "--quiet",
                 "--meta-a", str(meta_a), "--meta-b", str(meta_b)])
    assert code == 1
    assert "A-- f" in (out / "report.txt").read_text()


def test_extract_subcommand_round_trips(deldef_trees, tmp_path):
    _, ours, _ = deldef_trees
    out_file = tmp_path / "meta.json"
    assert main(["extract", "--in", str(ours), "--out", str(out_file),
                 "--variant", "A"]) == 0
    doc = json.loads(out_file.read_text())
    assert doc["variant"] == "A"
    assert {d["name"] for d in doc["definitions"]} == {"pad", "f"}


def test_merge_subcommand(tmp_path, capsys):
    (tmp_path / "base.c").write_text("a\nx\nb\n")
    (tmp_path / "ours.c").write_text("a\ny\nb\n")
    (tmp_path / "theirs.c").write_text("a\nz\nb\n")
    code = main(["merge", "--base", str(tmp_path / "base.c"),
                 "--ours", str(tmp_path / "ours.c"),
                 "--theirs", str(tmp_path / "theirs.c")])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.out == "a\n<<<<<<< A\ny\n=======\nz\n>>>>>>> B\nb\n"

    code = main(["merge", "--base", str(tmp_path / "base.c"),
                 "--ours", str(tmp_path / "ours.c"),
                 "--theirs", str(tmp_path / "base.c")])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == "a\ny\nb\n"


def test_missing_tree_exits_two(tmp_path, capsys):
    code = main(["analyze", "--base", str(tmp_path / "nope"),
                 "--ours", str(tmp_path / "nope"),
                 "--theirs", str(tmp_path / "nope"),
                 "--extract", "--quiet"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_malformed_metadata_exits_two(deldef_trees, tmp_path, capsys):
    base, ours, theirs = deldef_trees
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code = main(["analyze", "--base", str(base), "--ours", str(ours),
                 "--theirs", str(theirs), "--meta-a", str(bad),
                 "--meta-b", str(bad), "--quiet"])
    assert code == 2


def test_metadata_source_is_exclusive(deldef_trees, tmp_path):
    base, ours, theirs = deldef_trees
    meta = tmp_path / "m.json"
    save_metadata(extract_source([("vars.c", DELDEF_OURS)], "A"), meta)
    code = main(["analyze", "--base", str(base), "--ours", str(ours),
                 "--theirs", str(theirs), "--meta-a", str(meta),
                 "--meta-b", str(meta), "--extract", "--quiet"])
    assert code == 2


def test_dump_flags_write_artifacts(deldef_trees, tmp_path):
    base, ours, theirs = deldef_trees
    out = tmp_path / "out"
    code = main(analyze_args(base, ours, theirs, out, "--dump-odg",
                             "--dump-sdg", "--dump-verdicts"))
    assert code == 1
    odg = json.loads((out / "odg.json").read_text())
    assert {n["name"] for n in odg["b"]["nodes"]} == {"a", "pad", "f"}
    sdg = json.loads((out / "sdg.json").read_text())
    assert sdg["a"]["nodes"] and sdg["b"]["nodes"]
    assert any(link["matched"] is False for link in sdg["mirrors"])
    verdicts = json.loads((out / "verdicts.json").read_text())
    assert any(v["scenario"] == 5 and not v["safe"] for v in verdicts)


def test_plot_writes_group_figures(deldef_trees, tmp_path):
    base, ours, theirs = deldef_trees
    out = tmp_path / "out"
    code = main(analyze_args(base, ours, theirs, out, "--plot"))
    assert code == 1
    plots = sorted((out / "plots").glob("group_*.png"))
    assert plots == [out / "plots" / "group_0.png"]
    assert plots[0].stat().st_size > 0


def test_legacy_header_flag(deldef_trees, tmp_path):
    base, ours, theirs = deldef_trees
    out = tmp_path / "out"
    main(analyze_args(base, ours, theirs, out, "--legacy-header"))
    assert (out / "report.txt").read_text().startswith("@@ MergeGuardian Result")


def test_match_policy_name_only_relaxes_applied_flagging(tmp_path):
    # both sides change the same function differently enough to conflict on
    # one line while another applied line depends on it
    base = write_tree(tmp_path / "base", {"m.c": (
        "int dep() {\n  return 1;\n}\n"
        "int use() {\n  return dep();\n}\n")})
    ours = write_tree(tmp_path / "ours", {"m.c": (
        "int dep() {\n  return 10;\n}\n"
        "int use() {\n  return dep();\n}\n")})
    theirs = write_tree(tmp_path / "theirs", {"m.c": (
        "int dep() {\n  return 20;\n}\n"
        "int use() {\n  return dep() + 1;\n}\n")})
    strict_out = tmp_path / "strict"
    relaxed_out = tmp_path / "relaxed"
    assert main(analyze_args(base, ours, theirs, strict_out)) == 1
    assert main(analyze_args(base, ours, theirs, relaxed_out,
                             "--match-policy", "name-only")) == 1
    strict_report = (strict_out / "report.txt").read_text()
    relaxed_report = (relaxed_out / "report.txt").read_text()
    # the applied use() body is flagged only under the strict policy
    assert "B-- (applied) use" in strict_report
    assert "B-- (applied) use" not in relaxed_report
    assert "C-- dep" in relaxed_report


def test_analyze_is_deterministic(deldef_trees, tmp_path):
    base, ours, theirs = deldef_trees
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    args1 = analyze_args(base, ours, theirs, out1, "--format", "both")
    args2 = analyze_args(base, ours, theirs, out2, "--format", "both")
    assert main(args1) == main(args2)
    for rel in ("report.txt", "report.json", "merged/vars.c"):
        assert (out1 / rel).read_bytes() == (out2 / rel).read_bytes()


def test_analyze_accepts_single_files(tmp_path):
    (tmp_path / "base.c").write_text(DELDEF_BASE)
    (tmp_path / "mine.c").write_text(DELDEF_OURS)
    (tmp_path / "other.c").write_text(DELDEF_THEIRS)
    out = tmp_path / "out"
    code = main(["analyze", "--base", str(tmp_path / "base.c"),
                 "--ours", str(tmp_path / "mine.c"),
                 "--theirs", str(tmp_path / "other.c"),
                 "--out", str(out), "--extract", "--quiet"])
    assert code == 1
    # merged under the ours-file's name
    assert (out / "merged" / "mine.c").exists()
    assert "A-- f mine.c" in (out / "report.txt").read_text()

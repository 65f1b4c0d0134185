import json

import pytest

from cyltile.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_info_square4(capsys):
    code, out, _ = run(capsys, "info", "--disk", "square4", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1 and data["plugs"] == 12870 and data["loops"] == 36


def test_info_thin3(capsys):
    code, out, _ = run(capsys, "info", "--disk", "rect:3x2", "--format", "json")
    data = json.loads(out)
    assert (data["plugs"], data["loops"]) == (20, 3)


def test_info_unbalanced(capsys):
    code, out, _ = run(capsys, "info", "--disk", "rect:3x1", "--format", "json")
    data = json.loads(out)
    assert data["balanced"] is False and data["loops"] == 0


def test_info_list(capsys):
    code, out, _ = run(capsys, "info", "--list")
    assert "square4" in out.split()


def test_disk_file(tmp_path, capsys):
    f = tmp_path / "d.txt"
    f.write_text("; a 2x2 square\n##\n##\n")
    code, out, _ = run(capsys, "count", "--disk", str(f), "--height", "2,3", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["height,tilings", "2,9", "3,32"]


def test_sample_needs_seed(capsys):
    with pytest.raises(SystemExit):
        main(["sample", "--disk", "thin3", "--height", "4"])


def test_sample_deterministic(capsys):
    _, a, _ = run(capsys, "sample", "--disk", "thin3", "--height", "4", "--seed", "3")
    _, b, _ = run(capsys, "sample", "--disk", "thin3", "--height", "4", "--seed", "3")
    assert a == b


def test_components_height1(capsys):
    code, out, _ = run(capsys, "components", "--disk", "square4", "--height", "1", "--format", "json")
    rep = json.loads(out)["reports"][0]
    assert rep["total"] == 36 and len(rep["components"]) == 1


def test_components_d3(capsys):
    code, out, _ = run(capsys, "components", "--disk", "thin3", "--height", "2,4", "--format", "json")
    reps = json.loads(out)["reports"]
    assert [r["total"] for r in reps] == [32, 1845]


def test_components_budget(capsys):
    code, _, err = run(capsys, "components", "--disk", "square4", "--height", "2", "--budget", "100")
    assert code == 2 and "budget" in err


def test_twist_histogram(capsys):
    code, out, _ = run(capsys, "twist-histogram", "--disk", "thin3", "--height", "4", "--format", "csv")
    rows = out.splitlines()[1:]
    assert sum(int(r.split(",")[2]) for r in rows) == 1845


def test_phi_boxed(capsys):
    code, out, _ = run(capsys, "phi", "--disk", "rect:5x2", "--boxed", "-2", "--format", "json")
    data = json.loads(out)
    assert data["normal_form"] == [[-2, 1]] and data["height"] == 6


def test_irregularity_ok(capsys):
    code, out, _ = run(capsys, "irregularity", "--disk", "dominodisc-thin3", "--height", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["anchors"][0]["scheme"] == "domino-cut-double"


def test_irregularity_none(capsys):
    code, out, _ = run(capsys, "irregularity", "--disk", "square4", "--height", "2")
    assert code == 0 and "no scheme applies" in out


def test_equivalent(capsys):
    code, out, _ = run(capsys, "equivalent", "isolated-1", "isolated-2", "--pad", "2", "--format", "json")
    data = json.loads(out)
    assert data["verdict"] == "equivalent" and data["pad"] == 2


def test_equivalent_pad0_not_found(capsys):
    code, out, _ = run(capsys, "equivalent", "isolated-1", "isolated-2", "--pad", "0")
    assert code == 0 and out.startswith("not-found")


def test_walks(capsys):
    code, out, _ = run(capsys, "walks", "--height", "6", "--s", "1/10", "--samples", "10", "--seed", "1")
    assert code == 0 and "interleaved dominance: 10/10" in out


def test_walks_rejects_bad_s(capsys):
    code, _, err = run(capsys, "walks", "--height", "3", "--s", "1/5")
    assert code == 2


def test_thm1_csv(capsys):
    code, out, _ = run(capsys, "thm1", "--disk", "thin3", "--height", "2", "--samples", "20", "--seed", "2", "--jobs", "1")
    lines = out.splitlines()
    assert lines[0].startswith("N,pairs,seed") and lines[1].startswith("2,20,2000")


def test_bad_disk(capsys):
    code, _, err = run(capsys, "info", "--disk", "no-such-disk")
    assert code == 2


def test_nonpositive_budget(capsys):
    code, _, _ = run(capsys, "info", "--disk", "thin3", "--budget", "0")
    assert code == 2

import csv
import io
import json
import subprocess
import sys

import pytest

from betatiling import cli
from betatiling.field import AlgebraicNumber, field_from_poly


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return out


def literals(obj):
    """Every {"exact": ..., "approx": ...} pair in a report."""
    if isinstance(obj, dict):
        if "exact" in obj and "approx" in obj and isinstance(obj["exact"], list):
            yield obj
        for v in obj.values():
            yield from literals(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from literals(v)


def test_analyze_fig1():
    rep = json.loads(ok("analyze", "fig1.subst.json"))
    assert rep["polynomial"]["coefficients"] == [-3, -1, 1]
    assert rep["pisot"] is False
    assert {k: h["exact"] for k, h in rep["heights"].items()} == {"l": ["0/1", "1/1"], "s": ["1/1", "0/1"]}


def test_orbit_escape():
    rep = json.loads(ok("orbit", "fig1.subst.json", "--point", "[-1/1, 1/1]", "--max-iter", "100"))
    assert rep["status"] == "provably_infinite" and rep["escape_iterate"] == 4
    eigen = json.loads(ok("orbit", "fig1.subst.json", "--point", "[-1/1, 1/1]", "--threshold", "eigen"))
    assert eigen["escape_iterate"] == 4 and eigen["threshold"]["label"] == "eigen:2"


def test_orbit_periodic():
    rep = json.loads(ok("orbit", "fib.subst.json", "--point", "[1/2, 0/1]"))
    assert (rep["status"], rep["preperiod"], rep["period"]) == ("eventually_periodic", 1, 3)


def test_classify_fibonacci():
    text = ok("classify", "fib.subst.json", "--random", "100", "--denominator", "50")
    table, summary = text.split("\n\n")
    rows = list(csv.DictReader(io.StringIO(table)))
    assert len(rows) == 100 and all(r["status"] == "eventually_periodic" for r in rows)
    assert summary.strip().splitlines() == ["status,count", "eventually_periodic,100"]


def test_classify_seed_file(tmp_path):
    seeds = tmp_path / "seeds.json"
    seeds.write_text(json.dumps([["-1/1", "1/1"], ["0/1", "0/1"]]))
    rep = json.loads(ok("classify", "fig1.subst.json", "--seeds", str(seeds), "--max-iter", "100", "--format", "json"))
    assert [r["status"] for r in rep["rows"]] == ["provably_infinite", "eventually_periodic"]


def test_classify_empty():
    code, out, _ = call("classify", "fib.subst.json", "--random", "0")
    assert code == 0
    assert out.splitlines()[0].startswith("index,point,status")
    assert len(list(csv.reader(io.StringIO(out.split("\n\n")[0])))) == 1


def test_byte_determinism(tmp_path):
    a = ok("classify", "fib.subst.json", "--random", "20", "--rng-seed", "7")
    b = ok("classify", "fib.subst.json", "--random", "20", "--rng-seed", "7")
    c = ok("classify", "fib.subst.json", "--random", "20", "--rng-seed", "8")
    assert a == b != c
    assert ok("census", "fig1.rule.json", "--level", "2") == ok("census", "fig1.rule.json", "--level", "2")


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze", "fig1.subst.json"),
        ("betamap", "fig1.subst.json", "--point", "[1/2, 1/3]"),
        ("offsets", "fib.subst.json"),
        ("offsets", "fib_product.rule.json"),
        ("misfit", "fig1.subst.json", "--levels", "6"),
    ],
)
def test_literal_round_trip(argv):
    rep = json.loads(ok(*argv))
    K = field_from_poly([-3, -1, 1] if "fig1" in argv[1] else [-1, -1, 1])
    found = list(literals(rep))
    assert found
    for item in found:
        v = AlgebraicNumber.from_literal(K, item["exact"])
        assert v.to_literal() == item["exact"]
        assert abs(float(v) - float(item["approx"])) < 1e-9 * max(1.0, abs(float(v)))


def test_misfit_tracking():
    rep = json.loads(ok("misfit", "fig1.rule.json", "--vertex", "[0,1]", "3", "--levels", "5"))
    assert rep["tracks"][0]["matches_map_orbit"] is True
    assert len(rep["misfits"]) == 2
    rep = json.loads(ok("misfit", "fig1.subst.json", "--levels", "20", "--max-iter", "100"))
    assert len(rep["offsets"]) == 21 and rep["pairwise_distinct"]
    assert rep["certificate"]["status"] == "provably_infinite"


def test_tile2d_svg(tmp_path):
    svg = tmp_path / "p.svg"
    rep = json.loads(ok("tile2d", "fig1.rule.json", "--level", "2", "--svg", str(svg), "--markers"))
    assert rep["valid"] is True
    assert svg.read_text().count("<rect") == 49


def test_census_levels():
    rep = json.loads(ok("census", "fig1.rule.json", "--level", "3", "--all-levels"))
    counts = [lv["distinct_classes"] for lv in rep["levels"]]
    assert counts == sorted(set(counts))


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze", "missing.json"),
        ("orbit", "fig1.subst.json", "--point", "[9/1, 0/1]"),
        ("orbit", "fig1.subst.json", "--point", "[1, 2, 3]"),
        ("orbit", "fig1.subst.json", "--point", "abc"),
        ("orbit", "fig1.subst.json", "--point", "0", "--max-iter", "-1"),
        ("misfit", "fig1.rule.json", "--vertex", "0", "0"),
        ("frobnicate",),
    ],
)
def test_validation_errors(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == ""
    if argv[0] != "frobnicate":
        diag = json.loads(err)
        assert diag["error"] == "validation"


def test_unknown_rule_field(tmp_path):
    bad = tmp_path / "bad.rule.json"
    with open(cli._resolve("fig1.rule.json"), encoding="utf-8") as fh:
        data = json.load(fh)
    data["extra"] = 1
    bad.write_text(json.dumps(data))
    code, _, err = call("tile2d", str(bad))
    assert code == 2 and "extra" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "betatiling", "orbit", "fib.subst.json", "--point", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["status"] == "eventually_periodic"

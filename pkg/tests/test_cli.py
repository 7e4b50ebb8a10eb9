import csv
import json

import pytest

from muldep.cli import main, parse_value
from muldep.quadratic import QuadNumber


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if code == 0 else out.err)


def test_count_rationals(capsys, tmp_path):
    out = tmp_path / "counts.csv"
    code, js = run(capsys, "count", "--field", "Q", "--n", "2", "--heights", "100,1000,10000", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 3
    ratios = [float(r["ratio"]) for r in rows]
    assert abs(ratios[2] - 1) < abs(ratios[0] - 1)
    assert {"config", "records", "wall_time", "version"} <= set(js)
    assert (tmp_path / "counts.ratio.dat").read_text().count("\n") == 3


def test_count_reproducible(capsys, tmp_path):
    outs = []
    for shards in ("1", "2"):
        p = tmp_path / f"c{shards}.csv"
        assert main(["count", "--field", "Q(i)", "--n", "3", "--heights", "2", "--shards", shards,
                     "--out", str(p)]) == 0
        outs.append([r[:-1] for r in csv.reader(p.open())])
    capsys.readouterr()
    assert outs[0] == outs[1]


def test_constants(capsys):
    code, js = run(capsys, "constants", "--field", "Q(sqrt(-1))")
    assert code == 0
    c1 = js["records"][0]["C1"]
    assert abs(float(c1["mid"]) - 3.141592653589793) < 1e-12


def test_verify_tuple(capsys):
    code, js = run(capsys, "verify-tuple", "6", "5", "10", "3")
    rec = js["records"][0]
    assert code == 0 and rec["dependent"] and rec["relation"] == [1, 1, -1, -1] and rec["rank"] == 3
    code, js = run(capsys, "verify-tuple", "1+i", "2", "--field", "Q(i)")
    assert js["records"][0]["relation"] == [8, -4]


def test_other_commands(capsys, tmp_path):
    code, js = run(capsys, "psi", "--x", "100", "--y", "5")
    assert js["records"][0]["psi"] == 34
    code, js = run(capsys, "product-count", "--k", "2", "--q", "2", "--T", "4")
    assert js["records"][0]["count"] == 6
    code, js = run(capsys, "lowerbound", "--n", "4", "--height", "100")
    assert js["records"][0]["count"] >= 1 and js["records"][0]["rank_failures"] == 0
    code, js = run(capsys, "fixed-coeffs", "--field", "Q(i)", "--u", "1", "--v", "2", "--height", "3")
    assert js["records"][0]["count"] == 4
    p = tmp_path / "e.jsonl"
    code, js = run(capsys, "enumerate", "--mode", "integers", "--field", "Q", "--height", "3", "--out", str(p))
    assert js["records"][0]["count"] == 6 and len(p.read_text().splitlines()) == 6


def test_exit_codes(capsys):
    assert main(["count", "--field", "Q(sqrt(4))", "--heights", "3"]) == 2
    assert main(["count", "--field", "Q(i)", "--n", "4", "--heights", "10", "--budget", "10"]) == 4
    assert main(["count", "--field-file", "x.json", "--heights", "3"]) == 3
    assert main(["constants", "--field", "Q", "--precision", "32"]) == 2
    capsys.readouterr()


def test_parse_value():
    assert parse_value("3/2") == QuadNumber.rational(__import__("fractions").Fraction(3, 2))
    z = parse_value("1+i")
    assert z.m == -1 and z.x == 1 and z.y == 1
    assert parse_value("2^(1/3)").degree == 3

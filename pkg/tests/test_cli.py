import json
from fractions import Fraction

import pytest

from screenoff.cli import main
from screenoff.demos import simpson_model
from screenoff.modelfile import ModelFileError, dumps_model, loads_model

PRODUCT = {
    "points": ["x", "a", "b"],
    "relations": [["x", "a"], ["x", "b"]],
    "outcomes": {"x": ["0", "1"], "a": ["0", "1"], "b": ["0", "1"]},
    "measure": {
        f"{x},{a},{b}": f"{(1 if x == '0' else 3) * (1 if a == '0' else 2)}/{4 * 3 * 2}"
        for x in "01" for a in "01" for b in "01"
    },
}

CORRELATED = {
    "points": ["x", "a", "b"],
    "relations": [["x", "a"], ["x", "b"]],
    "outcomes": ["HH", "HT", "TH", "TT"],
    "measure": {"HH": "1/2", "TT": "1/2"},
    "partitions": {"a": [["HH", "HT"], ["TH", "TT"]], "b": [["HH", "TH"], ["HT", "TT"]]},
}


@pytest.fixture
def write(tmp_path):
    def _write(data, name="model.json"):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data, indent=2))
        return str(path)
    return _write


def test_product_form_loads():
    m, _ = loads_model(json.dumps(PRODUCT))
    assert len(m.outcomes) == 8 and sum(m.weights) == 1
    assert m.measure["1,1,0"] == Fraction(6, 24)


def test_round_trip_general_form():
    m, ev = simpson_model()
    again, ev2 = loads_model(dumps_model(m, ev))
    assert again.outcomes == m.outcomes and again.weights == m.weights
    assert again.partitions == m.partitions and ev2 == ev


@pytest.mark.parametrize("text, line", [
    ('{"points": ["a"],\n "outcomes": ["H"],\n "measure": {"H": "1"},\n "colour": 1}', 4),
    ('{"points": ["a"],\n "outcomes": ["H"]\n "measure": {}}', 3),
    ('{"points": ["a"],\n "outcomes": ["H"],\n "measure": {"H": "one"}}', 3),
])
def test_file_errors_carry_lines(text, line):
    with pytest.raises(ModelFileError) as err:
        loads_model(text)
    assert err.value.line == line


def test_invalid_measure_rejected():
    bad = dict(CORRELATED, measure={"HH": "1/2", "TT": "1"})
    text = json.dumps(bad, indent=2)
    with pytest.raises(ModelFileError) as err:
        loads_model(text)
    assert "sums to 3/2" in str(err.value)
    assert err.value.line == text.splitlines().index('  "measure": {') + 1


def test_check_exit_codes(write, capsys):
    assert main(["check", write(PRODUCT), "--condition", "so1"]) == 0
    assert main(["check", write(CORRELATED), "--condition", "so2"]) == 1
    out = capsys.readouterr().out
    assert "VIOLATED" in out and "P(A&B|F)=1/2 vs P(A|F)P(B|F)=1/4" in out
    assert main(["check", write("{not json", "bad.json")]) == 2
    assert main(["check", "/nonexistent/model.json"]) == 2


def test_check_json(write, capsys):
    main(["check", write(CORRELATED), "--condition", "so1", "--json"])
    data = json.loads(capsys.readouterr().out)
    assert data["holds"] is False and data["violation_count"] == len(data["violations"])
    v = data["violations"][0]
    assert Fraction(v["p_joint"]) == Fraction(1, 2) and Fraction(v["p_product"]) == Fraction(1, 4)


def test_demo_counterexample(capsys):
    assert main(["demo", "counterexample"]) == 0
    out = capsys.readouterr().out
    assert "O'                = u<0 & v>0" in out
    assert "(O')'             = u>=0 & v<=0" in out
    assert "O is causally FINITE under the RSP definition" in out
    assert main(["demo", "counterexample", "--u-star", "2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["O'"] == "u<0 & v>0" and data["(O')'"] == "u>=0 & v<=0"
    assert main(["demo", "counterexample", "--u-star", "0"]) == 2


def test_demo_simpson(capsys):
    assert main(["demo", "simpson"]) == 0
    text = capsys.readouterr().out
    assert "correlation(A, B)     = 0/1" in text and "correlation(A, B | F) = 1/4" in text
    assert main(["demo", "simpson", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["correlation_unconditional"] == "0/1" and data["correlation_given_F"] == "1/4"
    assert main(["demo", "simpson", "--search", "--json"]) == 0
    found = json.loads(capsys.readouterr().out)
    assert Fraction(found["correlation_unconditional"]) == 0
    assert Fraction(found["correlation_given_spec"]) != 0


def test_sweep_command(tmp_path, capsys):
    args = ["sweep", "--max-points", "3", "--outcomes", "2", "--denominator", "2"]
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--output", str(first)]) == 0
    assert main(args + ["--output", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    assert json.loads(first.read_text())["discrepancy_count"] == 0
    assert main(["sweep", "--max-points", "9"]) == 2


@pytest.mark.parametrize("op, expr, expected", [
    ("complement", "u>=0 & v<=0 & u<=1", "u<0 & v>0"),
    ("closure", "u>=0 & v<=0 & u<=1", "u>=0 & v<=0"),
    ("past", "u>=0 & v<=0", "v<=0"),
    ("rsp-finite", "u>=0 & v<=0 & u<=1", "true"),
    ("rsp-finite", "u<=0 & v<=0", "false"),
])
def test_regions_command(capsys, op, expr, expected):
    assert main(["regions", "--op", op, expr]) == 0
    assert capsys.readouterr().out.strip() == expected


def test_regions_parse_error(capsys):
    assert main(["regions", "--op", "past", "u>=0 & & v<1"]) == 2
    assert "position 7" in capsys.readouterr().err

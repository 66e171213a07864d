import csv
import math
import io
import json
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endocomm.abelian import factorize
from endocomm.cli import EXIT_BOUND, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, main
from endocomm.errors import SpecError
from endocomm.io import action_to_spec, dumps, parse_spec, spec_to_action


def run(argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv, out)
    return code, out.getvalue()


def write_spec(tmp_path, obj, name="spec.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


# --- analyze -------------------------------------------------------------------

def test_analyze_z2z2(tmp_path):
    code, text = run(["analyze", write_spec(tmp_path, {"ring": "Z", "carrier": {"invariant_factors": [2, 2]}})])
    assert code == EXIT_OK
    r = json.loads(text)
    assert r["center"]["order"] == 1
    assert r["end_ring"]["order"] == 16
    assert r["tower"]["ecdim"] == 2
    assert r["tower"]["classification"] == "never"
    assert set(r["theorems"].values()) <= {"pass", "vacuous"}


def test_analyze_z6(tmp_path):
    code, text = run(["analyze", write_spec(tmp_path, {"ring": "Z", "carrier": {"invariant_factors": [6]}})])
    r = json.loads(text)
    assert code == EXIT_OK
    assert r["end_ring"]["commutative"] and r["tower"]["ecdim"] == 1
    assert r["classifier"]["multiplication"]


def test_analyze_z2z4(tmp_path):
    code, text = run(["analyze", write_spec(tmp_path, {"ring": "Z", "carrier": {"invariant_factors": [2, 4]}})])
    r = json.loads(text)
    assert r["center"]["order"] == 2 and r["tower"]["ecdim"] == 2
    assert r["classifier"]["endo_extendable"] is False


def test_analyze_is_deterministic(tmp_path):
    path = write_spec(tmp_path, {"ring": {"Zn": 8}, "carrier": {"presentation": [[2, 0], [0, 8]]}})
    outs = {run(["analyze", path])[1] for _ in range(3)}
    assert len(outs) == 1


def test_analyze_reads_stdin(monkeypatch):
    code, text = run(["analyze", "-"], '{"carrier": {"direct_sum": [{"invariant_factors": [2]}, '
                                       '{"invariant_factors": [3]}]}}', monkeypatch)
    assert code == EXIT_OK
    assert json.loads(text)["carrier"]["invariant_factors"] == [6]


def test_parse_errors_are_positioned(tmp_path, capsys):
    code, _ = run(["analyze", write_spec(tmp_path, '{"ring": "Z",\n "carrier": {"invariant_factors": [2, }}')])
    assert code == EXIT_USAGE
    assert "line 2" in capsys.readouterr().err
    with pytest.raises(SpecError) as exc:
        parse_spec('{"ring": "Z",\n  "carrier": {"invariant_factors": ["x"]}}')
    assert exc.value.line == 2 and exc.value.path == "$.carrier.invariant_factors"
    with pytest.raises(SpecError):
        parse_spec('{"ring": {"Zn": 4}, "carrier": {"invariant_factors": [8]}}')
    with pytest.raises(SpecError):
        parse_spec('{"carrier": {"presentation": [[2, 0], [0, 0]]}}')


def test_missing_file_and_bad_flags(tmp_path):
    assert run(["analyze", str(tmp_path / "nope.json")])[0] == EXIT_USAGE
    assert run(["survey", "--ring", "Q"])[0] == EXIT_USAGE
    assert run(["nonsense"])[0] == EXIT_USAGE


def test_bound_exceeded_exit(tmp_path):
    path = write_spec(tmp_path, {"carrier": {"invariant_factors": [2, 2, 2, 2, 2, 2, 2, 2, 2]}})
    assert run(["analyze", path])[0] == EXIT_BOUND
    assert run(["analyze", path, "--bound-carrier", "256"])[0] == EXIT_BOUND
    assert run(["survey", "--max-order", "5000"])[0] == EXIT_BOUND


# --- round trip -----------------------------------------------------------------

factor_lists = st.lists(st.sampled_from([2, 3, 4, 5, 6, 8, 9, 12]), min_size=0, max_size=3)


@settings(max_examples=60, deadline=None)
@given(factor_lists, st.sampled_from(["Z", "exp"]))
def test_spec_round_trip(factors, ring):
    spec = {"carrier": {"invariant_factors": factors}}
    if ring == "exp":
        e = math.lcm(*factors) if factors else 1
        if e >= 2:
            spec["ring"] = {"Zn": e * 2}
    a = parse_spec(json.dumps(spec))
    echo = action_to_spec(a)
    b = spec_to_action(json.loads(dumps(echo)))
    assert b == a
    assert action_to_spec(b) == echo


# --- survey -------------------------------------------------------------------

def abelian_group_count(n):
    """Product of partition numbers of the prime exponents, counted by a direct recursion."""
    def partitions(m, largest):
        if m == 0:
            return 1
        return sum(partitions(m - k, k) for k in range(1, min(m, largest) + 1))
    total = 1
    for e in factorize(n).values():
        total *= partitions(e, e)
    return total


def survey(max_order, *extra):
    code, text = run(["survey", "--max-order", str(max_order), *extra])
    lines = text.splitlines()
    body = [line for line in lines if not line.startswith("#")]
    return code, list(csv.DictReader(body)), [line for line in lines if line.startswith("#")]


def test_survey_small():
    code, rows, footer = survey(8)
    assert code == EXIT_OK
    assert [r["invariant_factors"] for r in rows] == ["", "2", "3", "4", "2;2", "5", "6", "7", "8", "2;4", "2;2;2"]
    assert all(r["ecdim"] == "1" for r in rows if ";" not in r["invariant_factors"])
    z2z2 = next(r for r in rows if r["invariant_factors"] == "2;2")
    assert (z2z2["ecdim"], z2z2["multiplication"], z2z2["self_generator"]) == ("2", "False", "True")
    assert footer == ["# rows: 11", "# ecdim3: none"]


def test_survey_row_counts():
    code, rows, _ = survey(64)
    assert code == EXIT_OK
    per_order = Counter(int(r["order"]) for r in rows)
    for n in range(1, 65):
        assert per_order[n] == abelian_group_count(n), n
    assert all(r["status"] == "ok" for r in rows)


def test_survey_over_zn(tmp_path):
    out = tmp_path / "s.csv"
    code, text = run(["survey", "--max-order", "16", "--ring", "Zn:4", "--out", str(out)])
    assert code == EXIT_OK and text == ""
    rows = [r for r in csv.DictReader(line for line in out.read_text().splitlines() if not line.startswith("#"))]
    # carriers annihilated by 4
    assert {r["invariant_factors"] for r in rows} == {"", "2", "4", "2;2", "2;4", "4;4", "2;2;2", "2;2;4", "2;2;2;2"}


# --- verify -------------------------------------------------------------------

def test_verify_small():
    code, text = run(["verify", "--max-order", "16"])
    assert code == EXIT_OK
    status = [line for line in text.splitlines() if line.startswith(("PASS", "FAIL"))]
    assert len(status) >= 17 and all(line.startswith("PASS") for line in status)


def test_verify_over_zn():
    assert run(["verify", "--max-order", "8", "--ring", "Zn:4"])[0] == EXIT_OK


def test_verify_mutant_reports_violation():
    code, text = run(["verify", "--max-order", "8", "--mutant"])
    assert code == EXIT_VIOLATION
    assert "FAIL" in text and "counterexample" in text

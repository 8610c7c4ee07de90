"""The ten acceptance criteria, each at its stated tolerance and time budget.

The suite is run twice through the command line entry point, exactly as
``wittlab suite`` would run it. Criteria 1 to 9 are read from the first
report. Criterion 10 compares the two report files byte for byte. One
PASS/FAIL line per criterion is written to the terminal.
"""
import json

import pytest

from wittlab.cli import main

NAMES = {
    1: "form axioms, rank <= 3, entries in [-2, 2]",
    2: "move set is unimodular and isometric",
    3: "reduction of unimodular vectors in H^2",
    4: "kernel restriction witnesses",
    5: "homology golden set",
    6: "Cohen-Macaulay suite",
    7: "truncated complex structure",
    8: "transitivity and cancellation",
    9: "Arf suite",
    10: "determinism of the suite report",
}


@pytest.fixture(scope="module")
def suite(tmp_path_factory, request):
    d = tmp_path_factory.mktemp("suite")
    paths = [d / "first.json", d / "second.json"]
    codes = [main(["suite", "--quiet", "--seed", "0", "--out", str(p)]) for p in paths]
    texts = [p.read_bytes() for p in paths]
    report = json.loads(texts[0])
    by_number = {c["criterion"]: c for c in report["criteria"]}
    verdicts = {n: bool(by_number[n]["passed"]) for n in range(1, 10)}
    verdicts[10] = texts[0] == texts[1] and bool(by_number[10]["passed"])

    tr = request.config.pluginmanager.get_plugin("terminalreporter")
    if tr is not None:
        tr.write_line("")
        for n in range(1, 11):
            c = by_number.get(n, {})
            budget = c.get("budget_s")
            limit = f" (budget {budget:g}s)" if budget else ""
            tr.write_line(f"acceptance {n:2d} {'PASS' if verdicts[n] else 'FAIL'}  {NAMES[n]}{limit}")
    return {"codes": codes, "texts": texts, "report": report, "by_number": by_number, "verdicts": verdicts}


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(suite, number):
    c = suite["by_number"][number]
    assert c["checks_passed"], json.dumps(c["details"], indent=1)[:2000]
    assert c["within_budget"], f"criterion {number} exceeded its {c['budget_s']} s budget"
    assert suite["verdicts"][number]


def test_criterion_10_determinism(suite):
    assert suite["texts"][0] == suite["texts"][1]
    assert suite["by_number"][10]["passed"]


def test_suite_exit_code(suite):
    assert suite["codes"] == [0, 0]
    assert suite["report"]["passed"] is True

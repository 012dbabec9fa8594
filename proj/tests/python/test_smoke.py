import copy

import pytest

import concat_prover as cp


def test_sequences():
    assert cp.fib(10) == 55
    assert cp.lucas(10) == 123
    assert cp.fib(100) == 354224848179261915075
    assert cp.pisano_period(5) == 20
    assert cp.is_fibonacci(144) == [12]
    assert cp.is_fibonacci(1) == [1, 2]
    assert cp.is_fibonacci(cp.fib(500) + 1) == []


def test_eval_and_cfrac():
    lo, hi = cp.eval_interval("(div (log 10) (log alpha))", 128)
    assert float(lo) <= 4.784971966781666 <= float(hi)
    assert lo.startswith("4.78497196678166597135818975237")
    assert cp.continued_fraction("(div (log alpha) (log 10))", 5) == [0, 4, 1, 3, 1]


def test_search_values():
    assert cp.concatenation_values(1) == [1, 2, 3, 13, 21, 34]
    assert cp.concatenation_values(2) == [13, 21]
    rec = [r for r in cp.search(2, 10, 10) if r["value"] == 21]
    assert rec and rec[0]["n"] == 8


def test_bad_arguments():
    with pytest.raises(ValueError):
        cp.search(3, 10, 10)
    with pytest.raises(ValueError):
        cp.certify(5)


@pytest.mark.parametrize("theorem, values", [(1, ["1", "2", "3", "13", "21", "34"]), (2, ["13", "21"])])
def test_certify_and_check(theorem, values):
    cert = cp.certify(theorem)
    assert cert["conclusion"] == {"status": "Verified", "values": values}
    report = cp.check(cert)
    assert report["ok"], report["failures"]
    assert [str(v) for v in report["conclusion"]] == values

    forged = copy.deepcopy(cert)
    forged["conclusion"]["values"].append("55")
    assert not cp.check(forged)["ok"]

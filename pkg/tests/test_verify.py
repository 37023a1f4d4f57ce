import pytest

from pdcc import verify
from pdcc.verify import SUITES, run_suite


@pytest.mark.parametrize("suite", list(SUITES))
def test_suite_passes(suite):
    results = run_suite(suite)
    assert len(results) == len(SUITES[suite])
    failed = [(r.claim, r.detail) for r in results if not r.passed]
    assert failed == []


def test_unknown_suite():
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("everything")


def test_crashing_claim_is_reported_as_failure(monkeypatch):
    def boom():
        raise RuntimeError("kaput")

    monkeypatch.setitem(SUITES, "formulas", [("always crashes", "test", boom)])
    (result,) = verify.run_suite("formulas")
    assert not result.passed
    assert "kaput" in result.detail

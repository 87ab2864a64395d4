"""The ten acceptance criteria, each at its stated tolerance.

Each test prints one ``[PASS]``/``[FAIL]`` line with its metrics, bypassing
pytest's output capture so the lines appear in a normal ``pytest -v`` run.
"""
import pytest

from ellreflect.suite import CRITERIA


@pytest.mark.parametrize("cid", sorted(CRITERIA))
def test_criterion(cid, capsys):
    result = CRITERIA[cid]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()

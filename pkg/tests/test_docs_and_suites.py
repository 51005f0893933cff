import doctest
import importlib

import pytest

from permclass.checks import SUITES, run_suite

MODULES = ["permclass.perm", "permclass.patterns", "permclass.pseudo", "permclass.classes",
           "permclass.erdos", "permclass.harness"]


@pytest.mark.parametrize("name", MODULES)
def test_doctests(name):
    result = doctest.testmod(importlib.import_module(name))
    assert result.failed == 0


@pytest.mark.parametrize("suite", ["roundtrip", "parity", "symmetry", "prefix-chain", "certificates"])
def test_invariant_suite_passes(suite):
    results = run_suite(suite, seed=7)
    assert results and all(r.passed for r in results), [r for r in results if not r.passed]


def test_run_suite_rejects_unknown():
    with pytest.raises(KeyError):
        run_suite("nope")
    assert "pseudo-parity" in SUITES

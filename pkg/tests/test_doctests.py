"""Run the examples embedded in the module docstrings."""

import doctest
import importlib
import pkgutil

import pytest

import qgevrey

MODULES = sorted(m.name for m in pkgutil.iter_modules(qgevrey.__path__, "qgevrey."))


@pytest.mark.parametrize("name", MODULES)
def test_docstring_examples(name):
    module = importlib.import_module(name)
    result = doctest.testmod(module, optionflags=doctest.ELLIPSIS | doctest.NORMALIZE_WHITESPACE)
    assert result.failed == 0

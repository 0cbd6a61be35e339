import numpy as np
import pytest

from oracle_engine.evaluator import Budget
from oracle_engine.partiality import ret
from oracle_engine.tree_core import FnOracle, all_functional_tables


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def ample_budget():
    return Budget(questions=16, steps=64)


@pytest.fixture
def all_true():
    return FnOracle(lambda q: ret(True), label="all-true")


@pytest.fixture
def evens_oracle():
    return FnOracle(lambda q: ret(q % 2 == 0), label="evens")


@pytest.fixture
def boolean_tables():
    """Every functional boolean oracle on the questions 0..3."""
    return all_functional_tables(range(4), (True, False))

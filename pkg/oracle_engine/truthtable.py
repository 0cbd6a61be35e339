"""
Truth-table reductions, their Turing reductions, and the Turing reduction of
an enumerable predicate to its deficiency predicate.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from oracle_engine.errors import TruthTableError
from oracle_engine.partiality import ret
from oracle_engine.reducibility import TuringReduction
from oracle_engine.tree_core import Ask, Out, Tree


def table_index(answers: Sequence[bool]) -> int:
    """Reads answers as a big-endian bit string, head most significant, True = 1."""
    index = 0
    for answer in answers:
        index = 2 * index + (1 if answer else 0)
    return index


def tt_eval(answers: Sequence[bool], table: Sequence[bool]) -> bool:
    """
    Evaluates a truth table on an answer vector.
    Args:
        - answers: oracle answers, one per query
        - table: 2^len(answers) verdicts
    Returns:
        - table[index(answers)]
    Raises:
        - TruthTableError if the table has the wrong length
    """
    if len(table) != 2 ** len(answers):
        raise TruthTableError(f"Table of length {len(table)} does not fit {len(answers)} answers")
    return bool(table[table_index(answers)])


def forall2(rel: Callable[[Any, Any], bool], left: Sequence, right: Sequence) -> bool:
    return len(left) == len(right) and all(rel(a, b) for a, b in zip(left, right))


@dataclass(frozen=True)
class TruthTable:
    """For each x, the queries to ask and the table over their answers."""

    queries: Callable[[Any], Sequence]
    table: Callable[[Any], Sequence[bool]]

    def check(self, x) -> None:
        queries, table = self.queries(x), self.table(x)
        if len(table) != 2 ** len(queries):
            raise TruthTableError(f"At {x!r}: {len(queries)} queries need {2 ** len(queries)} rows, got {len(table)}")

    def verdict(self, x, answers: Sequence[bool], evaluate=tt_eval) -> bool:
        return evaluate(answers, self.table(x))


def tt_to_turing(t: TruthTable, evaluate: Callable[[Sequence[bool], Sequence[bool]], bool] = tt_eval) -> TuringReduction:
    """Asks the queries of x in order, then evaluates the table on the answers."""

    def apply(x, answers):
        queries = t.queries(x)
        if len(answers) < len(queries):
            return ret(Ask(queries[len(answers)]))
        return ret(Out(t.verdict(x, answers[: len(queries)], evaluate)))

    return TuringReduction(Tree(apply, label="tt"), name="tt")


@dataclass(frozen=True)
class Enumerator:
    """An injective enumeration e of the predicate I = range(e)."""

    e: Callable[[int], int]
    name: str = "enum"

    def __call__(self, n: int) -> int:
        return self.e(n)

    def is_injective_on(self, prefix: int) -> bool:
        values = [self.e(n) for n in range(prefix)]
        return len(set(values)) == len(values)


def deficiency(e: Enumerator, x: int, bound: int) -> bool:
    """
    Whether some x0 with x < x0 <= bound has e(x0) < e(x). False only means
    no witness up to `bound`.
    """
    target = e(x)
    return any(e(x0) < target for x0 in range(x + 1, bound + 1))


def window_membership(e: Enumerator, z: int, x: int) -> bool:
    return z in [e(k) for k in range(x + 2)]


def deficiency_reduction(e: Enumerator) -> TuringReduction:
    """
    I <=T H_I: asks 0, 1, 2, ... and stops at the least index x answered False
    with e(x) > z, where membership of z is decided by the window e(0..x+1).
    """

    def apply(z, answers):
        for x, answer in enumerate(answers):
            if not answer and e(x) > z:
                logging.debug(f"{e.name}: z={z} settled by x={x}")
                return ret(Out(window_membership(e, z, x)))
        return ret(Ask(len(answers)))

    return TuringReduction(Tree(apply, label=f"deficiency({e.name})"), name=f"deficiency({e.name})")

"""
Random generators and brute-force reference evaluators for property checks.

Every generator draws from a numpy Generator so that a seed fixes the corpus.
Finite trees are stored as node tables keyed by answer tuples, which makes
their behaviour enumerable and printable as counterexamples.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Sequence, Tuple

import numpy as np

from oracle_engine.combinators import Step, StallTree
from oracle_engine.partiality import PartialValue, bind, delayed, mu, ret, undef
from oracle_engine.tree_core import Ask, Oracle, Out, TableOracle, Tree, output_set

# Fuel generous enough for every generated fixture.
REFERENCE_FUEL = 256


# Partial-value expressions

@dataclass(frozen=True)
class Expr:
    """A small ret/bind/mu/undef/delay expression over natural numbers."""

    op: str
    value: int = 0
    children: Tuple["Expr", ...] = ()

    def build(self) -> PartialValue:
        if self.op == "ret":
            return ret(self.value)
        if self.op == "undef":
            return undef()
        if self.op == "delay":
            return delayed(self.value, self.value % 4)
        if self.op == "bind":
            head, = self.children
            offset = self.value
            return bind(head.build(), lambda v: ret(v + offset) if v % 3 else delayed(v * 2, 1))
        if self.op == "mu":
            bound = self.value
            return mu(lambda n: ret(n >= bound))
        raise ValueError(f"Unknown expression op {self.op}")

    def __str__(self):
        if self.children:
            return f"{self.op}({self.value}, {', '.join(map(str, self.children))})"
        return f"{self.op}({self.value})"


def random_expr(rng: np.random.Generator, depth: int = 5) -> Expr:
    ops = ["ret", "undef", "delay", "mu"] + (["bind"] * 3 if depth > 0 else [])
    op = ops[int(rng.integers(len(ops)))]
    value = int(rng.integers(0, 6))
    if op == "bind":
        return Expr(op, value, (random_expr(rng, depth - 1),))
    return Expr(op, value)


# Finite node tables

@dataclass
class TableTree:
    """
    A finite tree: nodes[(i, answers)] is ("ask", q, delay), ("out", o, delay)
    or ("undef",); paths missing from the table diverge.
    """

    nodes: Dict[Tuple[Any, Tuple], Tuple] = field(default_factory=dict)
    label: str = "table_tree"

    def node(self, i, answers: Tuple) -> PartialValue:
        entry = self.nodes.get((i, answers), ("undef",))
        if entry[0] == "ask":
            return delayed(Ask(entry[1]), entry[2])
        if entry[0] == "out":
            return delayed(Out(entry[1]), entry[2])
        return undef()

    def tree(self) -> Tree:
        return Tree(self.node, label=self.label)

    def __str__(self):
        return f"{self.label}{dict(sorted(self.nodes.items(), key=str))}"


def random_table_tree(
    rng: np.random.Generator,
    inputs: Sequence = (0,),
    questions: Sequence = range(4),
    answers: Sequence = range(4),
    outputs: Sequence = range(4),
    depth: int = 4,
    max_delay: int = 2,
    label: str = "random_tree",
) -> TableTree:
    """Random finite tree, asking questions from `questions` up to `depth` times per path."""
    table = TableTree(label=label)

    def grow(i, path: Tuple, level: int):
        roll = rng.random()
        delay = int(rng.integers(0, max_delay + 1))
        if level >= depth or roll < 0.3:
            table.nodes[(i, path)] = ("out", _pick(rng, outputs), delay)
        elif roll < 0.4:
            table.nodes[(i, path)] = ("undef",)
        else:
            table.nodes[(i, path)] = ("ask", _pick(rng, questions), delay)
            for answer in answers:
                grow(i, path + (answer,), level + 1)

    for i in inputs:
        grow(i, (), 0)
    return table


def _pick(rng: np.random.Generator, values: Sequence):
    values = list(values)
    return values[int(rng.integers(len(values)))]


def random_functional_table(rng: np.random.Generator, questions: Sequence, answers: Sequence, label="oracle") -> TableOracle:
    return TableOracle(((q, [_pick(rng, answers)]) for q in questions), label=label)


def random_relational_table(rng: np.random.Generator, questions: Sequence, answers: Sequence, label="relation") -> TableOracle:
    """Each question relates to a random subset of answers, possibly empty."""
    entries = []
    for q in questions:
        related = [a for a in answers if rng.random() < 0.5]
        entries.append((q, related))
    return TableOracle(entries, label=label)


# Stalling trees

@dataclass
class StallTable:
    """
    A finite stalling tree: after answers `path`, stall stalls[path] times,
    then perform actions[path]. The state counts stalls since the last question.
    """

    stalls: Dict[Tuple, int] = field(default_factory=dict)
    actions: Dict[Tuple, Tuple] = field(default_factory=dict)
    label: str = "stall_table"

    def stall_tree(self) -> StallTree:
        def apply(i, count, answers):
            if count < self.stalls.get(answers, 0):
                return ret(Step(count + 1))
            action = self.actions.get(answers, ("undef",))
            if action[0] == "ask":
                return ret(Step(0, action[1]))
            if action[0] == "out":
                return ret(Out(action[1]))
            return undef()

        return StallTree(apply, start=0, label=self.label)

    def __str__(self):
        return f"{self.label}(stalls={self.stalls}, actions={self.actions})"


def random_stall_table(
    rng: np.random.Generator,
    questions: Sequence = range(3),
    answers: Sequence = (0, 1),
    outputs: Sequence = range(3),
    depth: int = 3,
    max_stalls: int = 5,
) -> StallTable:
    table = StallTable()

    def grow(path: Tuple, level: int):
        table.stalls[path] = int(rng.integers(0, max_stalls + 1))
        roll = rng.random()
        if level >= depth or roll < 0.3:
            table.actions[path] = ("out", _pick(rng, outputs))
        elif roll < 0.38:
            table.actions[path] = ("undef",)
        else:
            table.actions[path] = ("ask", _pick(rng, questions))
            for answer in answers:
                grow(path + (answer,), level + 1)

    grow((), 0)
    return table


# Relational reference evaluators
#
# Each returns the output set of a functional applied to a finite relational
# oracle, computed from the functional's definition rather than from a tree.

def outputs_of(tau: Tree, oracle: Oracle, i, max_len: int = 8, fuel: int = REFERENCE_FUEL) -> FrozenSet:
    return output_set(tau.at(i), oracle, max_len, fuel)


def induced_oracle(tau: Tree, oracle: Oracle, domain: Sequence, max_len: int = 8) -> TableOracle:
    """The relation x ~ y iff tau's functional relates x to y under `oracle`."""
    return TableOracle(((x, sorted(outputs_of(tau, oracle, x, max_len), key=repr)) for x in domain), label=f"F({tau.label})")


def reference_precompose(g: Callable, tau: Tree, oracle: Oracle, i) -> FrozenSet:
    return outputs_of(tau, oracle, g(i))


def reference_partial_fn(f: Callable[[Any], PartialValue], i, fuel: int = REFERENCE_FUEL) -> FrozenSet:
    value = f(i).step(fuel)
    return frozenset() if value is None else frozenset([value])


def reference_ident(oracle: Oracle, q) -> FrozenSet:
    return frozenset(oracle.answers(q, REFERENCE_FUEL))


def reference_ite(f: Callable, tau1: Tree, tau2: Tree, oracle: Oracle, i) -> FrozenSet:
    return outputs_of(tau1 if f(i) else tau2, oracle, i)


def reference_bind(tau1: Tree, tau2: Tree, oracle: Oracle, i) -> FrozenSet:
    return frozenset(o for mid in outputs_of(tau1, oracle, i) for o in outputs_of(tau2, oracle, (i, mid)))


def reference_compose(inner: Tree, outer: Tree, oracle: Oracle, i, domain: Sequence) -> FrozenSet:
    return outputs_of(outer, induced_oracle(inner, oracle, domain), i)


def reference_search(oracle: Oracle, i, bound: int) -> FrozenSet:
    """n with True ~ (i, n) and False ~ (i, m) for every m < n."""
    found = set()
    for n in range(bound + 1):
        if True in oracle.answers((i, n)) and all(False in oracle.answers((i, m)) for m in range(n)):
            found.add(n)
    return frozenset(found)

"""
Combinators lowering functionals to computation trees.

Besides plain trees, two stateful forms are used as intermediate code:
extended trees (every question also updates a state) and stalling trees
(which may update the state without asking). Both elaborate back to plain trees.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, List, Sequence, Tuple

from oracle_engine.partiality import Continue, Done, PartialValue, bind, eval_steps, loop, ret, undef
from oracle_engine.tree_core import Ask, Oracle, Out, Transcript, TranscriptRun, Tree


@dataclass(frozen=True)
class AskWith:
    """Extended-tree question: continue in `state` after asking `question`."""

    state: Any
    question: Any


@dataclass(frozen=True)
class Step:
    """Stalling-tree move: go to `state`, asking `question` unless it is None (a stall)."""

    state: Any
    question: Any = None

    @property
    def stalls(self) -> bool:
        return self.question is None


@dataclass(frozen=True)
class ExtTree:
    """(input, state, answers) -> PartialValue of AskWith | Out, started in `start`."""

    apply_fn: Callable[[Any, Any, Tuple], PartialValue]
    start: Any = None
    label: str = "ext"

    def apply(self, i, state, answers: Sequence = ()) -> PartialValue:
        return self.apply_fn(i, state, tuple(answers))


@dataclass(frozen=True)
class StallTree:
    """(input, state, answers) -> PartialValue of Step | Out, started in `start`."""

    apply_fn: Callable[[Any, Any, Tuple], PartialValue]
    start: Any = None
    label: str = "stall"

    def apply(self, i, state, answers: Sequence = ()) -> PartialValue:
        return self.apply_fn(i, state, tuple(answers))


# Input transformations and oracle-free trees

def precompose(g: Callable[[Any], Any], tau: Tree) -> Tree:
    return Tree(lambda i, answers: tau.apply_fn(g(i), answers), label=f"{tau.label}.pre")


def of_partial_fn(f: Callable[[Any], PartialValue]) -> Tree:
    """A tree that never asks and outputs whatever f(i) converges to."""
    return Tree(lambda i, answers: bind(f(i), lambda o: ret(Out(o))), label="partial_fn")


def of_total(f: Callable[[Any], Any]) -> Tree:
    return of_partial_fn(lambda i: ret(f(i)))


def constant(value) -> Tree:
    return of_partial_fn(lambda i: ret(value))


def nowhere_defined() -> Tree:
    return of_partial_fn(lambda i: undef())


def ident() -> Tree:
    """Asks the input itself and outputs the first answer."""

    def apply(q, answers):
        if not answers:
            return ret(Ask(q))
        return ret(Out(answers[0]))

    return Tree(apply, label="ident")


def ite(f: Callable[[Any], bool], tau_true: Tree, tau_false: Tree) -> Tree:
    def apply(i, answers):
        if f(i):
            return tau_true.apply_fn(i, answers)
        return tau_false.apply_fn(i, answers)

    return Tree(apply, label=f"if({tau_true.label},{tau_false.label})")


def search() -> Tree:
    """
    Asks (i, 0), (i, 1), ... in order and outputs the least index answered True.
    """

    def apply(i, answers):
        for index, answer in enumerate(answers):
            if answer:
                return ret(Out(index))
        return ret(Ask((i, len(answers))))

    return Tree(apply, label="search")


# Translations between plain, extended and stalling trees

def plain_to_ext(tau: Tree, start=0) -> ExtTree:
    def apply(i, state, answers):
        def wrap(node):
            if isinstance(node, Ask):
                return ret(AskWith(state, node.question))
            return ret(node)

        return bind(tau.apply_fn(i, answers), wrap)

    return ExtTree(apply, start=start, label=f"ext({tau.label})")


def ext_to_plain(tau: ExtTree) -> Tree:
    """
    Replays the state from `start` over every answer prefix, then reports the
    node reached at the full answer list.
    """

    def replay(i, state, consumed: Tuple, rest: Tuple) -> PartialValue:
        def next_node(node):
            if isinstance(node, Out):
                return ret(node)
            if not rest:
                return ret(Ask(node.question))
            return replay(i, node.state, consumed + rest[:1], rest[1:])

        return bind(tau.apply_fn(i, state, consumed), next_node)

    return Tree(lambda i, answers: replay(i, tau.start, (), answers), label=f"plain({tau.label})")


def ext_to_stall(tau: ExtTree) -> StallTree:
    def apply(i, state, answers):
        def wrap(node):
            if isinstance(node, AskWith):
                return ret(Step(node.state, node.question))
            return ret(node)

        return bind(tau.apply_fn(i, state, answers), wrap)

    return StallTree(apply, start=tau.start, label=f"stall({tau.label})")


def stall_to_ext(tau: StallTree) -> ExtTree:
    """Eliminates stalls by iterating the state update until a question or an output appears."""

    def apply(i, state, answers):
        def move(current):
            def classify(node):
                if isinstance(node, Out):
                    return ret(Done(node))
                if node.stalls:
                    return ret(Continue(node.state))
                return ret(Done(AskWith(node.state, node.question)))

            return bind(tau.apply_fn(i, current, answers), classify)

        return loop(move, state)

    return ExtTree(apply, start=tau.start, label=f"ext({tau.label})")


def stall_to_plain(tau: StallTree) -> Tree:
    return ext_to_plain(stall_to_ext(tau))


# Sequencing, composition

def seq_bind(tau1: Tree, tau2: Tree) -> Tree:
    """
    Runs tau1 at i to an output o1, then tau2 at (i, o1). The state records o1
    and how many answers belong to tau1; tau2 sees only the answers after them.
    """

    def apply(i, state, answers):
        if state is None:
            def first(node):
                if isinstance(node, Ask):
                    return ret(Step(None, node.question))
                return ret(Step((node.output, len(answers))))

            return bind(tau1.apply_fn(i, answers), first)

        first_output, used = state

        def second(node):
            if isinstance(node, Ask):
                return ret(Step(state, node.question))
            return ret(node)

        return bind(tau2.apply_fn((i, first_output), answers[used:]), second)

    tree = stall_to_plain(StallTree(apply, start=None, label=f"bind({tau1.label},{tau2.label})"))
    return Tree(tree.apply_fn, label=f"bind({tau1.label},{tau2.label})")


def _last(answers: Tuple, n: int) -> Tuple:
    return answers[len(answers) - n:]


def compose_trees(inner: Tree, outer: Tree) -> Tree:
    """
    Runs `outer`; each of its questions x is answered by running `inner` at x
    against the real oracle. The state is (outer transcript, current inner run)
    where an inner run (x, n) owns the last n answers.
    """

    def apply(i, state, answers):
        history, running = state
        if running is None:
            def outer_node(node):
                if isinstance(node, Out):
                    return ret(node)
                return ret(Step((history, (node.question, 0))))

            return bind(outer.apply_fn(i, tuple(y for _, y in history)), outer_node)

        x, owned = running

        def inner_node(node):
            if isinstance(node, Ask):
                return ret(Step((history, (x, owned + 1)), node.question))
            return ret(Step((history + ((x, node.output),), None)))

        return bind(inner.apply_fn(x, _last(answers, owned)), inner_node)

    tree = stall_to_plain(StallTree(apply, start=((), None), label=f"comp({inner.label},{outer.label})"))
    return Tree(tree.apply_fn, label=f"comp({inner.label},{outer.label})")


# Brute-force stalling interrogations

def enumerate_stalling(
    tau: StallTree, i, oracle: Oracle, max_len: int, step_fuel: int, max_stalls: int = 64
) -> List[TranscriptRun]:
    """
    Lists the stalling interrogations of tau at i up to max_len questions,
    following at most max_stalls consecutive stalls per answer prefix.
    """
    runs: List[TranscriptRun] = []

    def visit(state, transcript: Transcript, stalls: int):
        node = eval_steps(tau.apply(i, state, transcript.ans), step_fuel)
        if isinstance(node, Out):
            runs.append(TranscriptRun(transcript, node.output))
            return
        if isinstance(node, Step) and node.stalls:
            if stalls < max_stalls:
                visit(node.state, transcript, stalls + 1)
            else:
                runs.append(TranscriptRun(transcript))
            return
        runs.append(TranscriptRun(transcript))
        if isinstance(node, Step) and len(transcript) < max_len:
            for answer in oracle.answers(node.question, step_fuel):
                visit(node.state, transcript.extend(node.question, answer), 0)

    visit(tau.start, Transcript(), 0)
    logging.debug(f"Enumerated {len(runs)} stalling transcripts of {tau.label} at {i!r}")
    return runs

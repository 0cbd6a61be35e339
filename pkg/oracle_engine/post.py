"""
Post's theorem, relativised: semi-deciders for p and its complement relative
to q combine into a Turing reduction p <=T q by dovetailing them in a
stalling tree.
"""

from dataclasses import dataclass
from typing import Any, Optional, Sequence, Tuple

from oracle_engine.combinators import StallTree, Step, stall_to_plain
from oracle_engine.partiality import eval_steps, ret
from oracle_engine.reducibility import OracleSemiDecider, TuringReduction
from oracle_engine.tree_core import Ask, Out, Tree


@dataclass(frozen=True)
class DovetailState:
    """
    pending: question of the second semi-decider still to be asked
    step_index: fuel given to both semi-deciders this round
    tags: owner of every question asked so far, True for the first semi-decider
    """

    pending: Optional[Any] = None
    step_index: int = 0
    tags: Tuple[Tuple[bool, Any], ...] = ()


def getas(which: bool, tags: Sequence[Tuple[bool, Any]], answers: Sequence) -> Tuple:
    """The answers to the questions owned by `which`."""
    return tuple(answer for (owner, _), answer in zip(tags, answers) if owner == which)


def pt_tree(tau1: Tree, tau2: Tree) -> StallTree:
    """
    Runs tau1 and tau2 side by side for step_index steps each round; outputs
    True if tau1 finishes and False if tau2 does. Case order matters: tau1
    wins ties.
    """

    def apply(x, state: DovetailState, answers):
        if state.pending is not None:
            question = state.pending
            flushed = DovetailState(None, state.step_index, state.tags + ((False, question),))
            return ret(Step(flushed, question))

        n = state.step_index
        first = eval_steps(tau1.apply(x, getas(True, state.tags, answers)), n)
        second = eval_steps(tau2.apply(x, getas(False, state.tags, answers)), n)

        if isinstance(first, Out):
            return ret(Out(True))
        if isinstance(second, Out):
            return ret(Out(False))
        if isinstance(first, Ask) and isinstance(second, Ask):
            asked = DovetailState(second.question, n + 1, state.tags + ((True, first.question),))
            return ret(Step(asked, first.question))
        if isinstance(first, Ask):
            return ret(Step(DovetailState(None, n + 1, state.tags + ((True, first.question),)), first.question))
        if isinstance(second, Ask):
            return ret(Step(DovetailState(None, n + 1, state.tags + ((False, second.question),)), second.question))
        return ret(Step(DovetailState(None, n + 1, state.tags)))

    return StallTree(apply, start=DovetailState(), label=f"pt({tau1.label},{tau2.label})")


def pt_reduce(s1: OracleSemiDecider, s2: OracleSemiDecider) -> TuringReduction:
    tree = stall_to_plain(pt_tree(s1.tree, s2.tree))
    return TuringReduction(Tree(tree.apply_fn, label="pt"), name=f"pt({s1.name},{s2.name})")

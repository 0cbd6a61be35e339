"""
Turing reductions and oracle semi-deciders as trees, with the operations that
build, compose and transport them.

A TuringReduction p <=T q is a tree asking q-questions and outputting a boolean
verdict for p; an OracleSemiDecider outputs STAR exactly on members of p.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterable, List, Sequence, Tuple

from oracle_engine.combinators import compose_trees, ident, of_partial_fn, of_total, precompose, seq_bind
from oracle_engine.errors import ReductionError
from oracle_engine.evaluator import Budget, run_core
from oracle_engine.partiality import STAR, PartialValue, bind, eval_steps, mu, ret, undef
from oracle_engine.tree_core import Ask, FnOracle, Out, TableOracle, Tree


class CharOracle(FnOracle):
    """The characteristic relation of a decidable predicate, as a functional oracle."""

    def __init__(self, pred: Callable[[Any], bool], label: str = "char"):
        self.pred = pred
        super().__init__(lambda x: ret(bool(pred(x))), label=label)

    def as_table(self, domain: Iterable) -> TableOracle:
        return TableOracle(((x, [bool(self.pred(x))]) for x in domain), label=self.label)


@dataclass(frozen=True)
class Inl:
    value: Any


@dataclass(frozen=True)
class Inr:
    value: Any


def sum_predicate(p: Callable[[Any], bool], q: Callable[[Any], bool]) -> Callable[[Any], bool]:
    """p + q on tagged inputs."""
    return lambda z: p(z.value) if isinstance(z, Inl) else q(z.value)


@dataclass(frozen=True)
class TuringReduction:
    tree: Tree
    name: str = "reduction"


@dataclass(frozen=True)
class OracleSemiDecider:
    tree: Tree
    name: str = "semi-decider"


class DecisionVerdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    TIMEOUT = "timeout"


# Preorder, join, embeddings

def reduce_refl() -> TuringReduction:
    return TuringReduction(ident(), name="refl")


def reduce_trans(first: TuringReduction, second: TuringReduction) -> TuringReduction:
    """
    Chains p <=T q (first) and q <=T r (second): every q-question of the first
    reduction is answered by running the second against the r-oracle.
    """
    return TuringReduction(compose_trees(second.tree, first.tree), name=f"{first.name};{second.name}")


def inject_left() -> TuringReduction:
    return TuringReduction(precompose(Inl, ident()), name="inl")


def inject_right() -> TuringReduction:
    return TuringReduction(precompose(Inr, ident()), name="inr")


def join(r_p: TuringReduction, r_q: TuringReduction) -> TuringReduction:
    """p + q <=T r from p <=T r and q <=T r, dispatching on the input tag."""

    def apply(z, answers):
        if isinstance(z, Inl):
            return r_p.tree.apply_fn(z.value, answers)
        return r_q.tree.apply_fn(z.value, answers)

    return TuringReduction(Tree(apply, label=f"join({r_p.name},{r_q.name})"), name=f"join({r_p.name},{r_q.name})")


def manyone_to_turing(f: Callable[[Any], Any]) -> TuringReduction:
    return TuringReduction(precompose(f, ident()), name="manyone")


def complement_reduction() -> TuringReduction:
    """Asks x and negates the answer; built as ident followed by negation."""
    tree = seq_bind(ident(), of_total(lambda pair: not pair[1]))
    return TuringReduction(tree, name="complement")


# Semi-deciders

def turing_to_sdec(r: TuringReduction) -> Tuple[OracleSemiDecider, OracleSemiDecider]:
    """Semi-deciders for p and its complement, accepting where r answers True resp. False."""

    def accepting(verdict: bool) -> Tree:
        def apply(x, answers):
            def filter_node(node):
                if isinstance(node, Ask):
                    return ret(node)
                return ret(Out(STAR)) if node.output == verdict else undef()

            return bind(r.tree.apply_fn(x, answers), filter_node)

        return Tree(apply, label=f"sdec({r.name},{verdict})")

    return (
        OracleSemiDecider(accepting(True), name=f"{r.name}+"),
        OracleSemiDecider(accepting(False), name=f"{r.name}-"),
    )


def sdec_from_plain(s: Callable[[Any], PartialValue]) -> OracleSemiDecider:
    """A plain semi-decider X -> partial unit, ignoring the oracle."""
    return OracleSemiDecider(of_partial_fn(s), name="plain")


def sdec_to_plain(s: OracleSemiDecider, g: Callable[[Any], bool]) -> Callable[[Any], PartialValue]:
    """Runs s against the oracle decided by g, giving an ordinary semi-decider."""
    oracle = lambda y: ret(bool(g(y)))
    return lambda x: run_core(s.tree, oracle, x)


def sdec_transport_turing(s: OracleSemiDecider, r: TuringReduction) -> OracleSemiDecider:
    return OracleSemiDecider(compose_trees(r.tree, s.tree), name=f"{s.name};{r.name}")


def sdec_transport_manyone(s: OracleSemiDecider, f: Callable[[Any], Any]) -> OracleSemiDecider:
    return OracleSemiDecider(precompose(f, s.tree), name=f"{s.name}.pre")


def step_indexed_to_partial(f: Callable[[Any, int], bool]) -> Callable[[Any], PartialValue]:
    """x -> partial STAR, converging once f(x, n) holds for some n."""
    return lambda x: bind(mu(lambda n: ret(bool(f(x, n)))), lambda n: ret(STAR))


def partial_to_step_indexed(s: Callable[[Any], PartialValue]) -> Callable[[Any, int], bool]:
    return lambda x, n: eval_steps(s(x), n) is not None


def bisemidec_to_turing(f: Callable[[Any, int], bool], g: Callable[[Any, int], bool]) -> TuringReduction:
    """
    Decides p from step-indexed semi-deciders f of p and g of its complement:
    finds the least n at which either fires and outputs f(x, n). Ignores the oracle.
    """

    def decide(x):
        fired = mu(lambda n: ret(bool(f(x, n)) or bool(g(x, n))))
        return bind(fired, lambda n: ret(bool(f(x, n))))

    return TuringReduction(of_partial_fn(decide), name="bisemidec")


# Decidability transport

def decide_via_reduction(
    r: TuringReduction, g: Callable[[Any], bool], xs: Sequence, budget: Budget
) -> List[Tuple[Any, DecisionVerdict]]:
    """
    Turns p <=T q and a decider g of q into verdicts for p.
    Args:
        - r: the reduction
        - g: decider of the oracle predicate
        - xs: inputs to decide
        - budget: run_core is evaluated at budget.steps fuel, asking at most budget.questions
    Returns:
        - list of (x, verdict) in input order; TIMEOUT where the budget was insufficient
    Raises:
        - ReductionError if r outputs something other than a boolean
    """
    oracle = lambda y: ret(bool(g(y)))
    decisions = []
    for x in xs:
        value = eval_steps(run_core(r.tree, oracle, x, question_cap=budget.questions), budget.steps)
        if value is None:
            decisions.append((x, DecisionVerdict.TIMEOUT))
        elif not isinstance(value, bool):
            raise ReductionError(f"{r.name} output {value!r} at {x!r}, not a boolean verdict")
        else:
            decisions.append((x, DecisionVerdict.TRUE if value else DecisionVerdict.FALSE))
    timeouts = sum(1 for _, verdict in decisions if verdict is DecisionVerdict.TIMEOUT)
    if timeouts:
        logging.warning(f"{r.name}: {timeouts} of {len(decisions)} inputs timed out at {budget}")
    return decisions

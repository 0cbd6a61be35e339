"""
The fuel-bounded evaluator: runs a tree against a partial-function oracle,
extracts the computational core of a tree, and reads off moduli of continuity.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional

from oracle_engine.errors import BudgetError
from oracle_engine.partiality import PartialValue, bind, eval_steps, mu, ret
from oracle_engine.tree_core import Out, Sigma, Transcript, Tree, subtree_at, to_jsonable


@dataclass(frozen=True)
class Budget:
    """question_fuel bounds oracle questions; step_fuel bounds every partial evaluation."""

    questions: int
    steps: int

    def __post_init__(self):
        if self.questions < 0 or self.steps < 0:
            raise BudgetError(f"Budget components must be non-negative, got {self}")

    def to_record(self) -> Dict[str, int]:
        return {"questions": self.questions, "steps": self.steps}


@dataclass(frozen=True)
class RunOutcome:
    transcript: Transcript

    kind = "outcome"

    def to_record(self, budget: Budget) -> Dict[str, Any]:
        return {
            "result": self.kind,
            "value": to_jsonable(self.payload),
            "qs": to_jsonable(self.transcript.qs),
            "ans": to_jsonable(self.transcript.ans),
            "budget": budget.to_record(),
        }

    @property
    def payload(self):
        return None


@dataclass(frozen=True)
class Output(RunOutcome):
    value: Any = None

    kind = "out"

    @property
    def payload(self):
        return self.value


@dataclass(frozen=True)
class NeedQuestion(RunOutcome):
    question: Any = None

    kind = "ask"

    @property
    def payload(self):
        return self.question


@dataclass(frozen=True)
class Timeout(RunOutcome):
    kind = "timeout"


def delta(sigma: Sigma, f: Callable[[Any], PartialValue], budget: Budget) -> RunOutcome:
    """
    Evaluates sigma against f for at most budget.questions questions.
    Args:
        - sigma: tree fixed at its input
        - f: oracle as a partial function (FnOracle or any callable)
        - budget: question and step fuel
    Returns:
        - Output at a leaf, NeedQuestion when the question fuel is spent,
          Timeout when a node or an answer does not converge within step fuel
    """
    transcript = Transcript()
    remaining = budget.questions
    while True:
        node = eval_steps(sigma(), budget.steps)
        if node is None:
            return Timeout(transcript)
        if isinstance(node, Out):
            return Output(transcript, node.output)
        if remaining == 0:
            return NeedQuestion(transcript, node.question)
        answer = eval_steps(f(node.question), budget.steps)
        if answer is None:
            return Timeout(transcript)
        transcript = transcript.extend(node.question, answer)
        sigma = subtree_at(sigma, (answer,))
        remaining -= 1


def diagonal_budget(n: int, question_cap: Optional[int] = None) -> Budget:
    """The n-th point of the combined fuel diagonal."""
    return Budget(n if question_cap is None else min(n, question_cap), n)


def run_core(tau: Tree, f: Callable[[Any], PartialValue], i, question_cap: Optional[int] = None) -> PartialValue:
    """
    The partial function computed by tau on oracle f at input i: mu-searches
    the least diagonal point n at which delta outputs, then returns that output.
    """
    sigma = tau.at(i)
    outcomes: Dict[int, RunOutcome] = {}

    def outcome(n):
        if n not in outcomes:
            outcomes[n] = delta(sigma, f, diagonal_budget(n, question_cap))
        return outcomes[n]

    found = mu(lambda n: ret(isinstance(outcome(n), Output)))
    return bind(found, lambda n: ret(outcome(n).value))


def extract_modulus(sigma: Sigma, f: Callable[[Any], PartialValue], budget: Budget) -> Optional[List]:
    """
    Questions of a converging run. Any oracle agreeing with f on them yields
    the same output.
    Returns:
        - the run's question list, or None if the run does not output within budget
    """
    outcome = delta(sigma, f, budget)
    if not isinstance(outcome, Output):
        logging.debug(f"No modulus for {sigma.label}: run ended with {outcome.kind}")
        return None
    return list(outcome.transcript.qs)

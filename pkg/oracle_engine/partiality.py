"""
Step-indexed partial values.

A PartialValue is observed through a monotone step function fuel -> value or
None. None always means "not converged at this fuel"; no payload may be None.
Every constructor in this module produces monotone, deterministic values.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Generic, Optional, Tuple, TypeVar

from oracle_engine.errors import PartialityError

T = TypeVar("T")
U = TypeVar("U")
S = TypeVar("S")

# The unit output of semi-deciders.
STAR = "*"


class PartialValue(Generic[T]):
    """
    A possibly diverging value.

    The step function is only ever consulted through `step`, which caches the
    largest fuel known to be absent and the smallest fuel known to be present.
    The cache is write-only bookkeeping; results do not depend on call order.
    """

    __slots__ = ("_run", "_low", "_hit")

    def __init__(self, run: Callable[[int], Optional[T]]):
        self._run = run
        self._low = -1
        self._hit: Optional[Tuple[int, T]] = None

    def step(self, fuel: int) -> Optional[T]:
        if fuel < 0:
            return None
        hit = self._hit
        if hit is not None and fuel >= hit[0]:
            return hit[1]
        if fuel <= self._low:
            return None
        value = self._run(fuel)
        if value is None:
            self._low = max(self._low, fuel)
        elif self._hit is None or fuel < self._hit[0]:
            self._hit = (fuel, value)
        return value

    def settle(self, fuel: int) -> Optional[Tuple[int, T]]:
        """
        Finds the least fuel at which this value is present.
        Args:
            - fuel: upper bound of the search
        Returns:
            - (least fuel, value) if present at `fuel`, else None
        """
        if self.step(fuel) is None:
            return None
        lo, hi = self._low + 1, self._hit[0]
        while lo < hi:
            mid = (lo + hi) // 2
            if self.step(mid) is None:
                lo = mid + 1
            else:
                hi = mid
        return self._hit

    def bind(self, f: Callable[[T], "PartialValue[U]"]) -> "PartialValue[U]":
        return bind(self, f)

    def map(self, f: Callable[[T], U]) -> "PartialValue[U]":
        return bind(self, lambda v: ret(f(v)))

    def __repr__(self):
        if self._hit is not None:
            return f"PartialValue(={self._hit[1]!r} from fuel {self._hit[0]})"
        return f"PartialValue(absent up to fuel {self._low})"


def ret(value: T) -> PartialValue[T]:
    """Always-defined value, present from fuel 0."""
    if value is None:
        raise PartialityError("None is reserved for divergence and cannot be returned")
    return PartialValue(lambda fuel: value)


def undef() -> PartialValue[Any]:
    return PartialValue(lambda fuel: None)


def delayed(value: T, fuel: int) -> PartialValue[T]:
    """Value that needs exactly `fuel` steps before it appears."""
    if value is None:
        raise PartialityError("None is reserved for divergence and cannot be returned")
    if fuel < 0:
        raise PartialityError(f"delay must be non-negative, got {fuel}")
    return PartialValue(lambda n: value if n >= fuel else None)


def bind(x: PartialValue[T], f: Callable[[T], PartialValue[U]]) -> PartialValue[U]:
    """
    Sequences x with f. The fuel of the result is split n = n1 + n2 where n1 is
    the least fuel at which x converges and n2 is spent on f(value).
    Args:
        - x: the first computation
        - f: continuation receiving x's value
    Returns:
        - PartialValue converging to y iff x converges to v and f(v) to y
    """
    continuation = []

    def run(fuel):
        hit = x.settle(fuel)
        if hit is None:
            return None
        spent, value = hit
        if not continuation:
            continuation.append(f(value))
        return continuation[0].step(fuel - spent)

    return PartialValue(run)


def mu(f: Callable[[int], PartialValue[bool]]) -> PartialValue[int]:
    """
    Unbounded search for the least n with f(n) converging to True, all smaller
    candidates converging to False. At fuel n the candidates 0..n-1 are probed,
    each with fuel n.
    """
    probes = {}

    def probe(k):
        if k not in probes:
            probes[k] = f(k)
        return probes[k]

    def run(fuel):
        for k in range(fuel):
            found = probe(k).step(fuel)
            if found is None:
                return None
            if found:
                return k
        return None

    return PartialValue(run)


def eval_steps(x: PartialValue[T], fuel: int) -> Optional[T]:
    """The value of x after `fuel` evaluation steps, or None if not yet converged."""
    return x.step(fuel)


def settle(x: PartialValue[T], fuel: int) -> Optional[Tuple[int, T]]:
    return x.settle(fuel)


def map_value(x: PartialValue[T], f: Callable[[T], U]) -> PartialValue[U]:
    return x.map(f)


def from_steps(g: Callable[[int], Optional[T]]) -> PartialValue[T]:
    """
    Monotonises an arbitrary step function: the result is present at fuel n
    with the first value g produced at some k <= n.
    """
    state = {"scanned": -1, "found": None}

    def run(fuel):
        found = state["found"]
        if found is not None:
            return found[1] if fuel >= found[0] else None
        if fuel <= state["scanned"]:
            return None
        for k in range(state["scanned"] + 1, fuel + 1):
            value = g(k)
            state["scanned"] = k
            if value is not None:
                state["found"] = (k, value)
                return value
        return None

    return PartialValue(run)


@dataclass(frozen=True)
class Continue(Generic[S]):
    state: S


@dataclass(frozen=True)
class Done(Generic[T]):
    value: T


def loop(step: Callable[[S], PartialValue[Any]], start: S) -> PartialValue[Any]:
    """
    Iterates `step` from `start` until it yields Done(value).

    The k-th stage is the k-fold bind of `step`; mu searches the least stage
    that is Done. Stages are shared between probes, so each is evaluated once
    per fuel.
    Args:
        - step: state -> PartialValue of Continue(next state) or Done(result)
        - start: initial state
    Returns:
        - PartialValue of the result, diverging if the iteration never ends
    """
    stages = [step(start)]

    def advance(outcome):
        if isinstance(outcome, Continue):
            return step(outcome.state)
        return ret(outcome)

    def stage(k):
        while len(stages) <= k:
            stages.append(bind(stages[-1], advance))
        return stages[k]

    index = mu(lambda k: stage(k).map(lambda outcome: isinstance(outcome, Done)))
    return bind(index, lambda k: stage(k).map(lambda outcome: outcome.value))


def converges_to(x: PartialValue[T], value: T, fuel: int) -> bool:
    return x.step(fuel) == value


def first_fuel(x: PartialValue[T], max_fuel: int) -> Optional[int]:
    """Least fuel <= max_fuel at which x converges; logs when it does not."""
    hit = x.settle(max_fuel)
    if hit is None:
        logging.debug(f"No value up to fuel {max_fuel}")
        return None
    return hit[0]

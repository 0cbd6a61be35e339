"""
Computation trees, oracles, transcripts and the interrogation relation.

A tree maps an input and the answers received so far to a partial node:
either the next question (Ask) or the final output (Out).
"""

import itertools
import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Generic, Iterable, List, Optional, Sequence, Tuple, TypeVar, Union

from oracle_engine.errors import OracleError, TranscriptError
from oracle_engine.partiality import PartialValue, eval_steps, ret, undef

I = TypeVar("I")
Q = TypeVar("Q")
A = TypeVar("A")
O = TypeVar("O")


@dataclass(frozen=True)
class Ask(Generic[Q]):
    question: Q


@dataclass(frozen=True)
class Out(Generic[O]):
    output: O


NodeResult = Union[Ask, Out]


class Verdict(str, Enum):
    VALID = "valid"
    INVALID = "invalid"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Sigma(Generic[Q, A, O]):
    """A tree with its input fixed: answers -> partial node."""

    node_fn: Callable[[Tuple], PartialValue]
    label: str = "sigma"

    def __call__(self, answers: Sequence = ()) -> PartialValue:
        return self.node_fn(tuple(answers))


@dataclass(frozen=True)
class Tree(Generic[I, Q, A, O]):
    """A computation tree: (input, answers) -> partial node."""

    apply_fn: Callable[[Any, Tuple], PartialValue]
    label: str = "tree"

    def apply(self, i, answers: Sequence = ()) -> PartialValue:
        return self.apply_fn(i, tuple(answers))

    def at(self, i) -> Sigma:
        return Sigma(lambda answers: self.apply_fn(i, answers), label=f"{self.label}@{i!r}")


def same_answer(a, b) -> bool:
    """Equality that keeps True and 1 apart."""
    return type(a) is type(b) and a == b


def subtree_at(sigma: Sigma, path: Sequence) -> Sigma:
    """The sub-tree of sigma starting at answer path `path`."""
    prefix = tuple(path)
    return Sigma(lambda rest: sigma.node_fn(prefix + rest), label=f"{sigma.label}/{list(prefix)}")


@dataclass(frozen=True)
class Transcript(Generic[Q, A]):
    qs: Tuple = ()
    ans: Tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "qs", tuple(self.qs))
        object.__setattr__(self, "ans", tuple(self.ans))
        if len(self.qs) != len(self.ans):
            raise TranscriptError(f"Transcript has {len(self.qs)} questions but {len(self.ans)} answers")

    def __len__(self):
        return len(self.qs)

    def __add__(self, other: "Transcript") -> "Transcript":
        return Transcript(self.qs + other.qs, self.ans + other.ans)

    def extend(self, question, answer) -> "Transcript":
        return Transcript(self.qs + (question,), self.ans + (answer,))

    def split(self, k: int) -> Tuple["Transcript", "Transcript"]:
        return Transcript(self.qs[:k], self.ans[:k]), Transcript(self.qs[k:], self.ans[k:])

    def is_prefix_of(self, other: "Transcript") -> bool:
        n = len(self)
        return n <= len(other) and other.qs[:n] == self.qs and other.ans[:n] == self.ans

    def to_record(self, out=None, verdict: Optional[Verdict] = None) -> Dict[str, Any]:
        record = {"qs": to_jsonable(self.qs), "ans": to_jsonable(self.ans), "out": to_jsonable(out)}
        if verdict is not None:
            record["verdict"] = verdict.value
        return record


def to_jsonable(value):
    """Tuples become lists, everything else is left to json."""
    if isinstance(value, (tuple, list)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    return value


def from_jsonable(value):
    """Inverse of to_jsonable for questions read from files: lists become tuples."""
    if isinstance(value, list):
        return tuple(from_jsonable(v) for v in value)
    return value


class FnOracle(Generic[Q, A]):
    """Functional oracle given by a partial function Q -> PartialValue[A]."""

    def __init__(self, fn: Callable[[Any], PartialValue], label: str = "fn"):
        self.fn = fn
        self.label = label

    def __call__(self, question) -> PartialValue:
        return self.fn(question)

    def answers(self, question, fuel: int) -> Tuple:
        value = eval_steps(self.fn(question), fuel)
        return () if value is None else (value,)

    def relates(self, question, answer, fuel: int) -> Verdict:
        value = eval_steps(self.fn(question), fuel)
        if value is None:
            return Verdict.UNKNOWN
        return Verdict.VALID if same_answer(value, answer) else Verdict.INVALID

    def __repr__(self):
        return f"FnOracle({self.label})"


class TableOracle(Generic[Q, A]):
    """
    Finite relational oracle: each question lists every related answer.
    Questions missing from the table relate to nothing.
    """

    def __init__(self, entries: Iterable[Tuple[Any, Sequence]], label: str = "table"):
        table: Dict[Any, list] = {}
        for question, answers in entries:
            known = table.setdefault(question, [])
            for a in answers:
                if not any(same_answer(a, b) for b in known):
                    known.append(a)
        self.entries: Dict[Any, Tuple] = {q: tuple(answers) for q, answers in table.items()}
        self.label = label

    def answers(self, question, fuel: int = 0) -> Tuple:
        return self.entries.get(question, ())

    def relates(self, question, answer, fuel: int = 0) -> Verdict:
        related = any(same_answer(answer, b) for b in self.entries.get(question, ()))
        return Verdict.VALID if related else Verdict.INVALID

    @property
    def is_functional(self) -> bool:
        return all(len(answers) <= 1 for answers in self.entries.values())

    def as_function(self) -> FnOracle:
        """
        Views a functional table as a partial function; unlisted questions diverge.
        Raises:
            - OracleError if some question has several answers
        """
        if not self.is_functional:
            raise OracleError(f"Table oracle '{self.label}' is not functional")
        table = self.entries

        def fn(question):
            answers = table.get(question, ())
            return ret(answers[0]) if answers else undef()

        return FnOracle(fn, label=self.label)

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "TableOracle":
        """
        Reads a JSON array of {"q": question, "a": [answers]} entries.
        Raises:
            - OracleError for unreadable or malformed files
        """
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise OracleError(f"Cannot read oracle table {path}: {e}") from e
        if not isinstance(raw, list):
            raise OracleError(f"Oracle table {path} must be a JSON array")
        entries = []
        for row in raw:
            if not isinstance(row, dict) or "q" not in row or not isinstance(row.get("a"), list):
                raise OracleError(f"Malformed oracle table entry in {path}: {row!r}")
            entries.append((from_jsonable(row["q"]), [from_jsonable(a) for a in row["a"]]))
        return cls(entries, label=str(path))

    def __repr__(self):
        return f"TableOracle({self.label}, {len(self.entries)} questions)"


Oracle = Union[FnOracle, TableOracle]


def all_functional_tables(questions: Sequence, answers: Sequence) -> List[TableOracle]:
    """Every total functional table over the given question and answer alphabets."""
    return [
        TableOracle(((q, [a]) for q, a in zip(questions, choice)), label=f"fn{list(choice)}")
        for choice in itertools.product(answers, repeat=len(questions))
    ]


def threshold_tree() -> Tree:
    """
    Asks 0, 1, ..., i-1 and outputs True once all answers were True; diverges
    as soon as some answer is False.
    """

    def apply(i, answers):
        if False in answers:
            return undef()
        if len(answers) < i:
            return ret(Ask(len(answers)))
        return ret(Out(True))

    return Tree(apply, label="threshold")


def check_transcript(sigma: Sigma, oracle: Oracle, transcript: Transcript, step_fuel: int) -> Verdict:
    """
    Checks the interrogation relation for one transcript.
    Args:
        - sigma: tree fixed at its input
        - oracle: FnOracle or TableOracle
        - transcript: question/answer lists to check
        - step_fuel: fuel for every node and oracle evaluation
    Returns:
        - VALID, INVALID if some step provably mismatches, UNKNOWN if fuel ran out first
    """
    unknown = False
    for k, (question, answer) in enumerate(zip(transcript.qs, transcript.ans)):
        node = eval_steps(sigma(transcript.ans[:k]), step_fuel)
        if node is None:
            unknown = True
            continue
        if not isinstance(node, Ask) or node.question != question:
            return Verdict.INVALID
        related = oracle.relates(question, answer, step_fuel)
        if related is Verdict.INVALID:
            return Verdict.INVALID
        unknown = unknown or related is Verdict.UNKNOWN
    return Verdict.UNKNOWN if unknown else Verdict.VALID


@dataclass(frozen=True)
class TranscriptRun:
    """One valid transcript and the output at its end, if any."""

    transcript: Transcript
    output: Any = None

    @property
    def has_output(self) -> bool:
        return self.output is not None

    def to_record(self) -> Dict[str, Any]:
        return self.transcript.to_record(self.output, Verdict.VALID)


def enumerate_transcripts(sigma: Sigma, oracle: Oracle, max_len: int, step_fuel: int) -> List[TranscriptRun]:
    """
    Lists every valid transcript of length at most max_len, depth first, each
    with the output sigma produces after it (None when it asks or has not
    converged within step_fuel).
    """
    runs: List[TranscriptRun] = []

    def visit(transcript: Transcript):
        node = eval_steps(sigma(transcript.ans), step_fuel)
        if isinstance(node, Out):
            runs.append(TranscriptRun(transcript, node.output))
            return
        runs.append(TranscriptRun(transcript))
        if isinstance(node, Ask) and len(transcript) < max_len:
            for answer in oracle.answers(node.question, step_fuel):
                visit(transcript.extend(node.question, answer))

    visit(Transcript())
    logging.debug(f"Enumerated {len(runs)} transcripts of {sigma.label} up to length {max_len}")
    return runs


def output_set(sigma: Sigma, oracle: Oracle, max_len: int, step_fuel: int) -> frozenset:
    """Outputs reachable by valid transcripts, as a set of values (1 and True coincide here)."""
    return frozenset(run.output for run in enumerate_transcripts(sigma, oracle, max_len, step_fuel) if run.has_output)

"""
Built-in trees, oracles, predicates, enumerators and reductions reachable by
name from the command line.
"""

import json
from pathlib import Path

from oracle_engine.combinators import ident, nowhere_defined, search
from oracle_engine.errors import OracleError, ReductionError, TruthTableError
from oracle_engine.partiality import ret
from oracle_engine.post import pt_reduce
from oracle_engine.reducibility import (
    complement_reduction,
    manyone_to_turing,
    reduce_refl,
    sdec_from_plain,
    step_indexed_to_partial,
    turing_to_sdec,
)
from oracle_engine.tree_core import FnOracle, TableOracle, threshold_tree
from oracle_engine.truthtable import Enumerator, TruthTable, deficiency, deficiency_reduction, tt_to_turing


def last_component(q):
    """Predicates read the last component of tuple questions, such as search's (i, n)."""
    return q[-1] if isinstance(q, tuple) else q


# Trees

TREES = {
    "threshold": threshold_tree,
    "ident": ident,
    "search": search,
    "complement": lambda: complement_reduction().tree,
    "never": nowhere_defined,
}


def builtin_tree(name):
    if name not in TREES:
        raise ReductionError(f"Unknown tree '{name}', expected one of {sorted(TREES)}")
    return TREES[name]()


# Oracles and predicates

PREDICATES = {
    "evens": lambda v: v % 2 == 0,
    "odds": lambda v: v % 2 == 1,
    "all-true": lambda v: True,
    "all-false": lambda v: False,
}

ORACLE_NAMES = sorted(PREDICATES) + ["parity-of"]


def oracle_predicate(name):
    """The decider of a boolean built-in oracle."""
    if name == "parity-of":
        raise OracleError("Oracle 'parity-of' answers 0/1, not a boolean predicate")
    if name not in PREDICATES:
        raise OracleError(f"Unknown oracle '{name}', expected one of {ORACLE_NAMES}")
    pred = PREDICATES[name]
    return lambda q: bool(pred(last_component(q)))


def builtin_oracle(name):
    if name == "parity-of":
        return FnOracle(lambda q: ret(last_component(q) % 2), label=name)
    pred = oracle_predicate(name)
    return FnOracle(lambda q: ret(pred(q)), label=name)


def resolve_oracle(spec):
    """
    A functional oracle from a built-in name or, failing that, a table file path.
    Raises:
        - OracleError for unreadable or non-functional tables
    """
    if spec in ORACLE_NAMES:
        return builtin_oracle(spec)
    return TableOracle.from_json(spec).as_function()


def oracle_decider(spec):
    """
    A boolean decider from a built-in name or a table file of boolean answers.
    Table deciders raise OracleError on questions the table does not list.
    """
    if spec in ORACLE_NAMES:
        return oracle_predicate(spec)
    table = TableOracle.from_json(spec)
    if not table.is_functional:
        raise OracleError(f"Table oracle '{spec}' is not functional")

    def decide(q):
        answers = table.answers(q)
        if not answers:
            raise OracleError(f"Table oracle '{spec}' has no answer for {q!r}")
        if not isinstance(answers[0], bool):
            raise OracleError(f"Table oracle '{spec}' answers {answers[0]!r} to {q!r}, not a boolean")
        return answers[0]

    return decide


# Enumerators, with the deficiency predicate they induce

ENUMERATORS = {
    "double": Enumerator(lambda n: 2 * n, name="double"),
    "xor1": Enumerator(lambda n: n ^ 1, name="xor1"),
}

# Members of the enumerated predicate, known in closed form.
ENUMERATED = {
    "double": lambda z: z % 2 == 0,
    "xor1": lambda z: True,
}

# Deficiency predicates, known in closed form.
DEFICIENT = {
    "double": lambda x: False,
    "xor1": lambda x: x % 2 == 0,
}


def builtin_enumerator(name):
    if name not in ENUMERATORS:
        raise ReductionError(f"Unknown enumerator '{name}', expected one of {sorted(ENUMERATORS)}")
    return ENUMERATORS[name]


def witness_bound(x):
    """Both built-in enumerators reveal a deficiency witness for x within x + 2, if there is one."""
    return x + 2


def deficiency_oracle(e):
    return lambda x: deficiency(e, x, witness_bound(x))


# Truth tables

def load_truth_table(path):
    """
    Reads {"offsets": [k1, ...], "table": [bools]}: x asks x+k1, ... and
    evaluates the same table everywhere.
    Raises:
        - TruthTableError for unreadable files or tables of the wrong length
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise TruthTableError(f"Cannot read truth table {path}: {e}") from e
    if not isinstance(raw, dict) or not isinstance(raw.get("offsets"), list) or not isinstance(raw.get("table"), list):
        raise TruthTableError(f"Truth table {path} needs 'offsets' and 'table' lists")
    return offset_table(raw["offsets"], raw["table"])


def offset_table(offsets, table):
    offsets = tuple(int(k) for k in offsets)
    table = tuple(bool(b) for b in table)
    if len(table) != 2 ** len(offsets):
        raise TruthTableError(f"{len(offsets)} offsets need {2 ** len(offsets)} table rows, got {len(table)}")
    return TruthTable(queries=lambda x: [x + k for k in offsets], table=lambda x: table)


# Many-one maps and semi-deciders for the dovetail

MANYONE_MAPS = {
    "id": lambda x: x,
    "succ": lambda x: x + 1,
    "double": lambda x: 2 * x,
}


def stepped_semidecider(pred, padding=0):
    """Accepts members x of pred after about x + padding steps, without asking."""
    return sdec_from_plain(step_indexed_to_partial(lambda x, n: bool(pred(x)) and n >= x + padding))


def pt_semideciders(p, padding=0):
    """
    Semi-deciders for p and its complement. p = "oracle" asks the input and
    accepts on the matching answer; other names use the built-in predicates
    and ignore the oracle, the complement side slowed down by `padding`.
    """
    if p == "oracle":
        return turing_to_sdec(reduce_refl())
    if p not in PREDICATES:
        raise ReductionError(f"Unknown predicate '{p}', expected 'oracle' or one of {sorted(PREDICATES)}")
    pred = PREDICATES[p]
    return stepped_semidecider(pred), stepped_semidecider(lambda x: not pred(x), padding)


REDUCTION_KINDS = ["refl", "manyone", "complement", "tt", "deficiency", "pt"]


def build_reduction(kind, table=None, enum=None, p=None, manyone_map="succ", padding=0):
    """
    Raises:
        - ReductionError when the parameters do not fit the kind
    """
    if kind == "refl":
        return reduce_refl()
    if kind == "manyone":
        if manyone_map not in MANYONE_MAPS:
            raise ReductionError(f"Unknown many-one map '{manyone_map}', expected one of {sorted(MANYONE_MAPS)}")
        return manyone_to_turing(MANYONE_MAPS[manyone_map])
    if kind == "complement":
        return complement_reduction()
    if kind == "tt":
        if table is None:
            raise ReductionError("Reduction 'tt' needs a truth table file")
        return tt_to_turing(load_truth_table(table))
    if kind == "deficiency":
        if enum is None:
            raise ReductionError("Reduction 'deficiency' needs an enumerator")
        return deficiency_reduction(builtin_enumerator(enum))
    if kind == "pt":
        if p is None:
            raise ReductionError("Reduction 'pt' needs a predicate")
        return pt_reduce(*pt_semideciders(p, padding))
    raise ReductionError(f"Unknown reduction '{kind}', expected one of {REDUCTION_KINDS}")

"""
Property suites checking the engine against brute-force semantics.

Each suite draws its corpus from its own seeded numpy Generator and reports
how many cases it checked, how many failed, and the shortest failing case.
The command line runs them at full scale; the tests run them small.
"""

import itertools
import logging
import time
from dataclasses import dataclass
from typing import Optional

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from oracle_engine.combinators import (
    compose_trees,
    enumerate_stalling,
    ext_to_plain,
    ext_to_stall,
    ident,
    ite,
    of_partial_fn,
    plain_to_ext,
    precompose,
    search,
    seq_bind,
    stall_to_ext,
    stall_to_plain,
)
from oracle_engine.evaluator import Budget, Output, delta, extract_modulus, run_core
from oracle_engine.fixtures import (
    REFERENCE_FUEL,
    outputs_of,
    random_expr,
    random_functional_table,
    random_relational_table,
    random_stall_table,
    random_table_tree,
    reference_bind,
    reference_compose,
    reference_ident,
    reference_ite,
    reference_partial_fn,
    reference_precompose,
    reference_search,
)
from oracle_engine.partiality import eval_steps, ret
from oracle_engine.post import pt_reduce
from oracle_engine.reducibility import (
    DecisionVerdict,
    complement_reduction,
    decide_via_reduction,
    manyone_to_turing,
    reduce_refl,
)
from oracle_engine.registry import (
    DEFICIENT,
    ENUMERATED,
    ENUMERATORS,
    PREDICATES,
    offset_table,
    pt_semideciders,
    stepped_semidecider,
    witness_bound,
)
from oracle_engine.tree_core import (
    FnOracle,
    Verdict,
    all_functional_tables,
    check_transcript,
    enumerate_transcripts,
    output_set,
    subtree_at,
    threshold_tree,
)
from oracle_engine.truthtable import deficiency, deficiency_reduction, forall2, tt_eval, tt_to_turing

# Step fuel for small generated trees: delays never exceed a few steps per node.
SMALL_FUEL = 16
# Budget under which every reduction in the decidability suite finishes on 0..100.
DECIDE_BUDGET = Budget(questions=16, steps=128)
PT_FUEL = 256
DECIDE_RANGE = range(101)


def tt_eval_little_endian(answers, table):
    """Deliberately wrong indexing, used as a negative control."""
    return tt_eval(list(reversed(answers)), table)


class Tally:
    """Counts checks and keeps the shortest failure description."""

    def __init__(self):
        self.cases = 0
        self.failures = 0
        self.counterexample = None

    def check(self, ok, describe):
        self.cases += 1
        if ok:
            return
        self.failures += 1
        text = describe()
        if self.counterexample is None or len(text) < len(self.counterexample):
            self.counterexample = text


@dataclass
class SuiteResult:
    suite: str
    cases: int
    failures: int
    seconds: float
    counterexample: Optional[str] = None

    @property
    def passed(self):
        return self.failures == 0


def tree_count(cases):
    """Random trees drawn by the suites that sweep every functional table: 500 at the default 200 cases."""
    return cases * 5 // 2


def _output_values(runs):
    return frozenset(run.output for run in runs if run.has_output)


# Suites over random finite trees

def suite_delta_equivalence(rng, cases, break_tt=False):
    """Outputs of delta over question fuel 0..4 equal the outputs of the interrogations."""
    tally = Tally()
    tables = all_functional_tables(range(4), range(4)) if cases else []
    functions = [table.as_function() for table in tables]
    for _ in range(tree_count(cases)):
        tree = random_table_tree(rng, questions=range(4), answers=range(4), outputs=range(4), depth=4)
        sigma = tree.tree().at(0)
        for table, f in zip(tables, functions):
            via_delta = set()
            for fuel in range(5):
                outcome = delta(sigma, f, Budget(fuel, SMALL_FUEL))
                if isinstance(outcome, Output):
                    via_delta.add(outcome.value)
            via_interrogation = output_set(sigma, table, 4, SMALL_FUEL)
            tally.check(
                via_delta == via_interrogation,
                lambda: f"{tree} under {table.label}: delta {sorted(via_delta)} vs interrogation {sorted(via_interrogation)}",
            )
    return tally


def suite_prefix_determinacy(rng, cases, break_tt=False):
    """Under a functional oracle the valid transcripts form a chain."""
    tally = Tally()
    tables = all_functional_tables(range(4), range(4)) if cases else []
    for _ in range(tree_count(cases)):
        tree = random_table_tree(rng, questions=range(4), answers=range(4), outputs=range(4), depth=4)
        sigma = tree.tree().at(0)
        for table in tables:
            runs = enumerate_transcripts(sigma, table, 4, SMALL_FUEL)
            transcripts = [run.transcript for run in runs]
            outputs = _output_values(runs)
            chained = all(a.is_prefix_of(b) or b.is_prefix_of(a) for a, b in itertools.combinations(transcripts, 2))
            tally.check(
                chained and len(outputs) <= 1,
                lambda: f"{tree} under {table.label}: transcripts {transcripts} outputs {sorted(outputs)}",
            )
    return tally


def suite_concatenation(rng, cases, break_tt=False):
    """A transcript is valid iff its prefix is valid and the rest is valid in the subtree."""
    tally = Tally()
    for _ in range(cases):
        tree = random_table_tree(rng, questions=range(4), answers=range(3), outputs=range(4), depth=3)
        oracle = random_relational_table(rng, range(4), range(3))
        sigma = tree.tree().at(0)
        transcripts = [run.transcript for run in enumerate_transcripts(sigma, oracle, 3, SMALL_FUEL)]
        corrupted = [t for t in transcripts if len(t)]
        corrupted = [t.split(len(t) - 1)[0].extend(t.qs[-1], 99) for t in corrupted]
        for transcript in transcripts + corrupted:
            whole = check_transcript(sigma, oracle, transcript, SMALL_FUEL) is Verdict.VALID
            for k in range(len(transcript) + 1):
                left, right = transcript.split(k)
                parts = (
                    check_transcript(sigma, oracle, left, SMALL_FUEL) is Verdict.VALID
                    and check_transcript(subtree_at(sigma, left.ans), oracle, right, SMALL_FUEL) is Verdict.VALID
                )
                tally.check(whole == parts, lambda: f"{tree} under {oracle.entries}: split {transcript} at {k}")
    return tally


def suite_combinators(rng, cases, break_tt=False):
    """Every combinator's tree agrees with the relational reference evaluator."""
    tally = Tally()
    domain = range(4)

    def agree(name, built, reference, i, context):
        tally.check(built == reference, lambda: f"{name} at {i!r} with {context}: tree {sorted(built, key=repr)} vs reference {sorted(reference, key=repr)}")

    for _ in range(cases):
        oracle = random_relational_table(rng, domain, range(3))

        tau = random_table_tree(rng, inputs=domain, questions=domain, answers=range(3), depth=3)
        shift = int(rng.integers(0, 4))
        g = lambda i: (i + shift) % 4
        for i in domain:
            agree("precompose", outputs_of(precompose(g, tau.tree()), oracle, i), reference_precompose(g, tau.tree(), oracle, i), i, tau)

        exprs = [random_expr(rng) for _ in domain]
        f = lambda i: exprs[i].build()
        for i in domain:
            agree("of_partial_fn", outputs_of(of_partial_fn(f), oracle, i), reference_partial_fn(f, i), i, exprs[i])

        for q in domain:
            agree("ident", outputs_of(ident(), oracle, q), reference_ident(oracle, q), q, oracle.entries)

        chosen = {i for i in domain if rng.random() < 0.5}
        tau1 = random_table_tree(rng, inputs=domain, questions=domain, answers=range(3), depth=2, label="then")
        tau2 = random_table_tree(rng, inputs=domain, questions=domain, answers=range(3), depth=2, label="else")
        branch = lambda i: i in chosen
        for i in domain:
            built = outputs_of(ite(branch, tau1.tree(), tau2.tree()), oracle, i)
            agree("ite", built, reference_ite(branch, tau1.tree(), tau2.tree(), oracle, i), i, (chosen, tau1, tau2))

        first = random_table_tree(rng, inputs=domain, questions=domain, answers=range(3), outputs=range(3), depth=2, max_delay=1, label="first")
        pairs = [(i, o) for i in domain for o in range(3)]
        second = random_table_tree(rng, inputs=pairs, questions=domain, answers=range(3), depth=2, max_delay=1, label="second")
        bound = seq_bind(first.tree(), second.tree())
        for i in domain:
            agree("seq_bind", outputs_of(bound, oracle, i), reference_bind(first.tree(), second.tree(), oracle, i), i, (first, second))

        inner = random_table_tree(rng, inputs=domain, questions=domain, answers=range(3), outputs=range(3), depth=2, max_delay=1, label="inner")
        outer = random_table_tree(rng, inputs=domain, questions=domain, answers=range(3), depth=2, max_delay=1, label="outer")
        composed = compose_trees(inner.tree(), outer.tree())
        for i in domain:
            built = outputs_of(composed, oracle, i)
            agree("compose_trees", built, reference_compose(inner.tree(), outer.tree(), oracle, i, domain), i, (inner, outer, oracle.entries))

        search_bound = 3
        flags = random_relational_table(rng, [(i, n) for i in domain for n in range(search_bound + 1)], (True, False))
        for i in domain:
            built = outputs_of(search(), flags, i, max_len=search_bound + 2)
            agree("search", built, reference_search(flags, i, search_bound), i, flags.entries)
    return tally


def suite_elaboration(rng, cases, break_tt=False):
    """Stall elimination and the tree translations preserve output sets."""
    tally = Tally()
    tables = all_functional_tables(range(3), (0, 1)) if cases else []
    for _ in range(cases):
        stall_table = random_stall_table(rng)
        stalling = stall_table.stall_tree()
        plain = stall_to_plain(stalling).at(0)
        tree = random_table_tree(rng, questions=range(3), answers=(0, 1), outputs=range(3), depth=3).tree()
        extended = plain_to_ext(tree)
        round_trips = {
            "ext": ext_to_plain(extended).at(0),
            "stall": stall_to_plain(ext_to_stall(extended)).at(0),
            "ext-stall-ext": ext_to_plain(stall_to_ext(ext_to_stall(extended))).at(0),
        }
        for table in tables:
            expected = _output_values(enumerate_stalling(stalling, 0, table, 4, REFERENCE_FUEL))
            got = output_set(plain, table, 4, REFERENCE_FUEL)
            tally.check(expected == got, lambda: f"{stall_table} under {table.label}: stalling {sorted(expected)} vs plain {sorted(got)}")

            original = output_set(tree.at(0), table, 4, REFERENCE_FUEL)
            for name, sigma in round_trips.items():
                translated = output_set(sigma, table, 4, REFERENCE_FUEL)
                tally.check(original == translated, lambda: f"{name} round trip of {tree.label} under {table.label}: {sorted(original)} vs {sorted(translated)}")
    return tally


# Reductions

def suite_post(rng, cases, break_tt=False):
    """The dovetail decides evens, passes the oracle through like refl, and is fair."""
    tally = Tally()
    if not cases:
        return tally
    trivial = FnOracle(lambda q: ret(False), label="all-false")

    evens = pt_reduce(*pt_semideciders("evens"))
    verdicts = {}
    for x in range(51):
        verdicts[x] = eval_steps(run_core(evens.tree, trivial, x), PT_FUEL)
        tally.check(verdicts[x] == (x % 2 == 0), lambda: f"pt evens at {x}: {verdicts[x]!r}")

    passthrough = pt_reduce(*pt_semideciders("oracle"))
    refl = reduce_refl()
    total = 2 ** 11
    count = min(total, cases * 16)
    chosen = range(total) if count == total else sorted(int(b) for b in rng.choice(total, size=count, replace=False))
    budget = Budget(4, 64)
    for bits in chosen:
        f = lambda q, bits=bits: ret(bool(bits >> q & 1))
        for x in range(11):
            via_pt = delta(passthrough.tree.at(x), f, budget)
            via_refl = delta(refl.tree.at(x), f, budget)
            same = isinstance(via_pt, Output) and isinstance(via_refl, Output) and via_pt.value == via_refl.value
            tally.check(same, lambda: f"passthrough vs refl at {x} under bits {bits:011b}: {via_pt} vs {via_refl}")

    even = PREDICATES["evens"]
    odd = PREDICATES["odds"]
    for padding in range(1, 6):
        slow_member = pt_reduce(stepped_semidecider(even, padding), stepped_semidecider(odd))
        slow_other = pt_reduce(stepped_semidecider(even), stepped_semidecider(odd, padding))
        for x in range(21):
            for name, reduction in (("member side", slow_member), ("complement side", slow_other)):
                value = eval_steps(run_core(reduction.tree, trivial, x), PT_FUEL)
                tally.check(value == verdicts[x], lambda: f"padding {padding} on the {name} changed the verdict at {x}: {value!r}")
    return tally


def suite_truth_tables(rng, cases, break_tt=False):
    """The Turing reduction of a truth table asks its queries and evaluates the table on the answers."""
    tally = Tally()
    evaluate = tt_eval_little_endian if break_tt else tt_eval
    for _ in range(5 * cases):
        k = int(rng.integers(0, 4))
        offsets = [int(o) for o in rng.integers(0, 6, size=k)]
        rows = [bool(b) for b in rng.random(2 ** k) < 0.5]
        h = rng.random(32) < 0.5
        table = offset_table(offsets, rows)
        tree = tt_to_turing(table, evaluate).tree
        f = lambda q: ret(bool(h[q]))
        for x in range(21):
            queries = table.queries(x)
            direct = [bool(h[q]) for q in queries]
            outcome = delta(tree.at(x), f, Budget(len(queries), SMALL_FUEL))
            ok = (
                isinstance(outcome, Output)
                and forall2(lambda a, b: a == b, outcome.transcript.qs, queries)
                and forall2(lambda a, b: a == b, outcome.transcript.ans, direct)
                and outcome.value == tt_eval(direct, rows)
            )
            tally.check(ok, lambda: f"offsets {offsets} table {rows} at {x}: answers {direct} gave {outcome}")
    return tally


def suite_hypersimple(rng, cases, break_tt=False):
    """The deficiency reduction recovers the enumerated predicate from its deficiency oracle."""
    tally = Tally()
    if not cases:
        return tally
    for name, e in ENUMERATORS.items():
        fixture = DEFICIENT[name]
        tally.check(e.is_injective_on(200), lambda: f"{name} is not injective")
        for x in range(61):
            brute = deficiency(e, x, witness_bound(x)), deficiency(e, x, 2 * x + 10)
            tally.check(brute == (fixture(x), fixture(x)), lambda: f"deficiency fixture of {name} at {x}: brute force {brute}")
        reduction = deficiency_reduction(e)
        oracle = lambda y, fixture=fixture: ret(fixture(y))
        for z in range(51):
            value = eval_steps(run_core(reduction.tree, oracle, z), PT_FUEL)
            tally.check(value == ENUMERATED[name](z), lambda: f"deficiency({name}) at {z}: {value!r}")
    return tally


def suite_modulus(rng, cases, break_tt=False):
    """Changing the oracle outside an extracted modulus never changes the output."""
    tally = Tally()
    runs = cases // 2
    all_true = lambda q: ret(True)
    for _ in range(runs):
        i = int(rng.integers(0, 8))
        sigma = threshold_tree().at(i)
        budget = Budget(16, SMALL_FUEL)
        modulus = extract_modulus(sigma, all_true, budget)
        tally.check(modulus == list(range(i)), lambda: f"threshold at {i}: modulus {modulus}")
        for q in range(i, i + 4):
            perturbed = lambda y, q=q: ret(False) if y == q else ret(True)
            outcome = delta(sigma, perturbed, budget)
            tally.check(isinstance(outcome, Output) and outcome.value is True, lambda: f"threshold at {i} flipped at {q}: {outcome}")

    found, attempts = 0, 0
    while found < runs and attempts < 20 * runs:
        attempts += 1
        tree = random_table_tree(rng, questions=range(4), answers=range(3), outputs=range(4), depth=3)
        table = random_functional_table(rng, range(4), range(3))
        sigma, f = tree.tree().at(0), table.as_function()
        budget = Budget(8, SMALL_FUEL)
        modulus = extract_modulus(sigma, f, budget)
        if modulus is None:
            continue
        found += 1
        expected = delta(sigma, f, budget).value
        for q in range(4):
            if q in modulus:
                continue
            for a in range(3):
                perturbed = lambda y, q=q, a=a: ret(a) if y == q else f(y)
                outcome = delta(sigma, perturbed, budget)
                tally.check(
                    isinstance(outcome, Output) and outcome.value == expected,
                    lambda: f"{tree} under {table.entries}: answering {a} to {q} outside {modulus} gave {outcome}",
                )
    return tally


def suite_decidability(rng, cases, break_tt=False):
    """Reductions to a decidable predicate decide without timeouts."""
    tally = Tally()
    if not cases:
        return tally
    evens = PREDICATES["evens"]
    xor_table = offset_table([0, 1], [False, True, True, False])
    reductions = [
        (reduce_refl(), evens),
        (manyone_to_turing(lambda x: x + 1), lambda x: evens(x + 1)),
        (complement_reduction(), lambda x: not evens(x)),
        (tt_to_turing(xor_table), lambda x: evens(x) != evens(x + 1)),
        (pt_reduce(*pt_semideciders("oracle")), evens),
    ]
    for reduction, expected in reductions:
        for x, verdict in decide_via_reduction(reduction, evens, DECIDE_RANGE, DECIDE_BUDGET):
            want = DecisionVerdict.TRUE if expected(x) else DecisionVerdict.FALSE
            tally.check(verdict is want, lambda: f"{reduction.name} at {x}: {verdict.value}, expected {want.value}")
    return tally


SUITES = [
    ("delta-equivalence", suite_delta_equivalence),
    ("prefix-determinacy", suite_prefix_determinacy),
    ("concatenation", suite_concatenation),
    ("combinators", suite_combinators),
    ("elaboration", suite_elaboration),
    ("post", suite_post),
    ("truth-tables", suite_truth_tables),
    ("hypersimple", suite_hypersimple),
    ("modulus", suite_modulus),
    ("decidability", suite_decidability),
]


def run_suites(seed, cases, break_tt=False, only=None):
    """
    Runs the property suites.
    Args:
        - seed: PRNG seed; suite k draws from default_rng([seed, k])
        - cases: corpus size per suite; 0 skips every check
        - break_tt: evaluate truth tables little-endian, which must make the suites fail
        - only: suite names to run, all when None
    Returns:
        - one SuiteResult per suite run, in order
    """
    results = []
    for index, (name, suite) in enumerate(SUITES):
        if only is not None and name not in only:
            continue
        logging.info(f"Running suite {name}...")
        started = time.perf_counter()
        tally = suite(np.random.default_rng([seed, index]), cases, break_tt)
        elapsed = time.perf_counter() - started
        if tally.failures:
            logging.error(f"Suite {name}: {tally.failures} of {tally.cases} cases failed")
        else:
            logging.info(f"Suite {name} Completed! {tally.cases} cases in {elapsed:.2f}s")
        results.append(SuiteResult(name, tally.cases, tally.failures, elapsed, tally.counterexample))
    return results


def summarize(results):
    return pd.DataFrame(
        [{"suite": r.suite, "cases": r.cases, "failures": r.failures, "seconds": round(r.seconds, 3)} for r in results],
        columns=["suite", "cases", "failures", "seconds"],
    )


def plot_summary(summary, path):
    """Bar chart of checked cases per suite, failing suites in red."""
    colors = ["red" if failures else "green" for failures in summary["failures"]]
    plt.figure(figsize=(10, 5))
    plt.bar(summary["suite"], summary["cases"], color=colors)
    plt.ylabel("Cases")
    plt.title("Property Suite Cases")
    plt.xticks(rotation=45, ha="right")
    plt.grid(axis="y")
    plt.tight_layout()
    plt.savefig(path)
    plt.close()

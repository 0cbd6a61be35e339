from oracle_engine.combinators import (
    StallTree,
    Step,
    compose_trees,
    constant,
    enumerate_stalling,
    ext_to_plain,
    ext_to_stall,
    ident,
    ite,
    nowhere_defined,
    of_partial_fn,
    of_total,
    plain_to_ext,
    precompose,
    search,
    seq_bind,
    stall_to_ext,
    stall_to_plain,
)
from oracle_engine.evaluator import Budget, NeedQuestion, Output, Timeout, delta
from oracle_engine.fixtures import (
    outputs_of,
    random_relational_table,
    random_stall_table,
    random_table_tree,
    reference_bind,
    reference_compose,
)
from oracle_engine.partiality import eval_steps, ret, undef
from oracle_engine.tree_core import Out, TableOracle, Transcript, all_functional_tables, enumerate_transcripts, output_set

BUDGET = Budget(8, 64)


def test_of_partial_fn_outputs_without_questions():
    outcome = delta(of_partial_fn(lambda i: ret(i * 2)).at(3), lambda q: undef(), BUDGET)
    assert outcome == Output(Transcript(), 6)


def test_nowhere_defined_always_times_out():
    for fuel in range(0, 60, 7):
        assert isinstance(delta(nowhere_defined().at(0), lambda q: ret(0), Budget(fuel, fuel)), Timeout)


def test_constant_and_total_lifts():
    assert delta(constant(True).at(12), lambda q: undef(), BUDGET).value is True
    assert delta(of_total(lambda i: i + 1).at(4), lambda q: undef(), BUDGET).value == 5


def test_precompose_changes_the_question():
    outcome = delta(precompose(lambda i: i + 1, ident()).at(4), lambda q: ret(q * 3), BUDGET)
    assert outcome == Output(Transcript((5,), (15,)), 15)


def test_ident_relays_the_answer():
    outcome = delta(ident().at(5), lambda q: ret(q + 1), BUDGET)
    assert outcome == Output(Transcript((5,), (6,)), 6)


def test_ident_against_empty_table_only_has_the_empty_transcript():
    runs = enumerate_transcripts(ident().at(3), TableOracle([]), 3, 10)
    assert [run.transcript for run in runs] == [Transcript()]
    assert not runs[0].has_output


def test_ite_picks_a_branch():
    even = lambda i: i % 2 == 0
    decide = ite(even, constant(True), constant(False))
    assert [delta(decide.at(i), lambda q: undef(), BUDGET).value for i in range(4)] == [True, False, True, False]
    mixed = ite(even, ident(), constant(False))
    assert delta(mixed.at(2), lambda q: ret(True), BUDGET) == Output(Transcript((2,), (True,)), True)


def test_seq_bind_feeds_first_output_to_second_tree():
    tree = seq_bind(constant(7), of_total(lambda pair: pair[1] + 1))
    assert delta(tree.at(0), lambda q: undef(), BUDGET) == Output(Transcript(), 8)


def test_seq_bind_passes_answers_through():
    tree = seq_bind(ident(), of_total(lambda pair: pair[1]))
    assert delta(tree.at(4), lambda q: ret(q * 10), BUDGET) == Output(Transcript((4,), (40,)), 40)


def test_seq_bind_of_diverging_first_tree_diverges():
    tree = seq_bind(nowhere_defined(), constant(1))
    assert isinstance(delta(tree.at(0), lambda q: ret(0), BUDGET), Timeout)


def test_seq_bind_second_tree_sees_only_its_own_answers():
    tree = seq_bind(ident(), ident())
    outcome = delta(tree.at(1), lambda q: ret(("answer", q)), BUDGET)
    assert outcome.transcript.qs == (1, (1, ("answer", 1)))
    assert outcome.value == ("answer", (1, ("answer", 1)))


def test_compose_ident_with_ident_is_ident(boolean_tables):
    composed = compose_trees(ident(), ident())
    for table in boolean_tables:
        for q in range(4):
            assert output_set(composed.at(q), table, 4, 64) == output_set(ident().at(q), table, 4, 64)


def test_compose_with_oracle_free_inner_tree_asks_nothing():
    composed = compose_trees(of_total(lambda x: x > 0), ident())
    assert delta(composed.at(5), lambda q: undef(), BUDGET) == Output(Transcript(), True)


def test_compose_with_outer_that_never_asks():
    composed = compose_trees(nowhere_defined(), constant("done"))
    assert delta(composed.at(0), lambda q: undef(), BUDGET) == Output(Transcript(), "done")


def test_compose_matches_reference_on_random_trees(rng):
    domain = range(3)
    for _ in range(25):
        inner = random_table_tree(rng, inputs=domain, questions=domain, answers=range(2), outputs=domain, depth=2, max_delay=1)
        outer = random_table_tree(rng, inputs=domain, questions=domain, answers=domain, depth=2, max_delay=1)
        oracle = random_relational_table(rng, domain, range(2))
        composed = compose_trees(inner.tree(), outer.tree())
        for i in domain:
            expected = reference_compose(inner.tree(), outer.tree(), oracle, i, domain)
            assert outputs_of(composed, oracle, i) == expected, f"{inner} {outer} {oracle.entries}"


def test_seq_bind_matches_reference_on_random_trees(rng):
    domain = range(3)
    for _ in range(25):
        first = random_table_tree(rng, inputs=domain, questions=domain, answers=range(2), outputs=range(2), depth=2, max_delay=1)
        pairs = [(i, o) for i in domain for o in range(2)]
        second = random_table_tree(rng, inputs=pairs, questions=domain, answers=range(2), depth=2, max_delay=1)
        oracle = random_relational_table(rng, domain, range(2))
        tree = seq_bind(first.tree(), second.tree())
        for i in domain:
            assert outputs_of(tree, oracle, i) == reference_bind(first.tree(), second.tree(), oracle, i)


def test_search_finds_least_true_index():
    outcome = delta(search().at(9), lambda q: ret(q[1] >= 4), BUDGET)
    assert outcome.value == 4
    assert outcome.transcript.qs == tuple((9, n) for n in range(5))


def test_search_with_all_false_oracle_never_outputs():
    outcome = delta(search().at(0), lambda q: ret(False), Budget(50, 64))
    assert isinstance(outcome, NeedQuestion)
    assert outcome.question == (0, 50)


def test_search_true_at_zero_asks_once():
    assert delta(search().at(3), lambda q: ret(True), BUDGET) == Output(Transcript(((3, 0),), (True,)), 0)


def stall_then_output(k, value):
    def apply(i, state, answers):
        if state < k:
            return ret(Step(state + 1))
        return ret(Out(value))

    return StallTree(apply, start=0, label="stalls")


def test_stalling_prefix_is_invisible_after_elaboration():
    plain = stall_to_plain(stall_then_output(3, "o"))
    assert delta(plain.at(0), lambda q: undef(), BUDGET) == Output(Transcript(), "o")


def test_endless_stalls_time_out():
    forever = StallTree(lambda i, state, answers: ret(Step(state + 1)), start=0)
    assert isinstance(delta(stall_to_plain(forever).at(0), lambda q: ret(0), BUDGET), Timeout)


def test_stall_to_ext_keeps_the_state_after_stalls():
    ext = stall_to_ext(stall_then_output(2, "x"))
    assert eval_steps(ext.apply(0, 0, ()), 64) == Out("x")


def test_enumerate_stalling_caps_stall_chains(all_true):
    runs = enumerate_stalling(stall_then_output(10, "late"), 0, all_true, 3, 16, max_stalls=5)
    assert [run.output for run in runs] == [None]
    runs = enumerate_stalling(stall_then_output(5, "ok"), 0, all_true, 3, 16, max_stalls=5)
    assert [run.output for run in runs] == ["ok"]


def test_elaboration_preserves_random_stalling_trees(rng):
    tables = [TableOracle([(q, [(bits >> q) & 1]) for q in range(3)]) for bits in range(8)]
    for _ in range(30):
        stall_table = random_stall_table(rng)
        plain = stall_to_plain(stall_table.stall_tree()).at(0)
        for table in tables:
            stalling = {run.output for run in enumerate_stalling(stall_table.stall_tree(), 0, table, 4, 256) if run.has_output}
            assert output_set(plain, table, 4, 256) == stalling, str(stall_table)


def test_translation_round_trips_preserve_outputs(rng):
    tables = [TableOracle([(q, [(bits >> q) & 1]) for q in range(3)]) for bits in range(8)]
    for _ in range(30):
        tree = random_table_tree(rng, questions=range(3), answers=(0, 1), outputs=range(3), depth=3).tree()
        extended = plain_to_ext(tree)
        for table in tables:
            original = output_set(tree.at(0), table, 4, 256)
            assert output_set(ext_to_plain(extended).at(0), table, 4, 256) == original
            assert output_set(stall_to_plain(ext_to_stall(extended)).at(0), table, 4, 256) == original


def test_compose_trees_is_associative(rng):
    domain = range(3)
    oracles = all_functional_tables(domain, (0, 1))
    for _ in range(15):
        first = random_table_tree(rng, inputs=domain, questions=domain, answers=(0, 1), outputs=domain, depth=2, max_delay=1, label="first")
        middle = random_table_tree(rng, inputs=domain, questions=domain, answers=domain, outputs=domain, depth=2, max_delay=1, label="middle")
        last = random_table_tree(rng, inputs=domain, questions=domain, answers=domain, outputs=domain, depth=2, max_delay=1, label="last")
        left = compose_trees(compose_trees(first.tree(), middle.tree()), last.tree())
        right = compose_trees(first.tree(), compose_trees(middle.tree(), last.tree()))
        for oracle in oracles:
            for i in domain:
                assert outputs_of(left, oracle, i) == outputs_of(right, oracle, i), f"{first} {middle} {last} {oracle.entries}"

import pytest

from oracle_engine.errors import TruthTableError
from oracle_engine.evaluator import Budget, delta, run_core
from oracle_engine.partiality import eval_steps, ret
from oracle_engine.reducibility import CharOracle, reduce_refl
from oracle_engine.registry import DEFICIENT, ENUMERATORS, offset_table
from oracle_engine.tree_core import Transcript
from oracle_engine.truthtable import (
    Enumerator,
    TruthTable,
    deficiency,
    deficiency_reduction,
    forall2,
    table_index,
    tt_eval,
    tt_to_turing,
    window_membership,
)

double = ENUMERATORS["double"]
xor1 = ENUMERATORS["xor1"]


def test_tt_eval_indexes_big_endian():
    assert tt_eval([], [True]) is True
    assert tt_eval([True], [False, True]) is True
    assert tt_eval([True, False], [False, False, True, False]) is True
    assert tt_eval([False, True], [False, False, True, False]) is False
    assert table_index([True, False]) == 2
    assert table_index([False, True, True]) == 3


def test_tt_eval_rejects_wrong_table_length():
    with pytest.raises(TruthTableError):
        tt_eval([True, True], [True, False])


def test_truth_table_check():
    bad = TruthTable(queries=lambda x: [x], table=lambda x: [True])
    with pytest.raises(TruthTableError):
        bad.check(0)
    TruthTable(queries=lambda x: [x], table=lambda x: [False, True]).check(0)


def test_forall2():
    assert forall2(lambda a, b: False, [], [])
    assert forall2(lambda a, b: a == b, [1, 2], [1, 2])
    assert not forall2(lambda a, b: True, [1], [])


def test_identity_table_behaves_like_refl():
    tt = tt_to_turing(TruthTable(queries=lambda x: [x], table=lambda x: [False, True]))
    budget = Budget(4, 16)
    for x in range(6):
        via_tt = delta(tt.tree.at(x), CharOracle(lambda y: y % 3 == 0), budget)
        via_refl = delta(reduce_refl().tree.at(x), CharOracle(lambda y: y % 3 == 0), budget)
        assert via_tt == via_refl


def test_empty_query_list_is_constant():
    tt = tt_to_turing(TruthTable(queries=lambda x: [], table=lambda x: [True]))
    outcome = delta(tt.tree.at(7), lambda q: ret(False), Budget(0, 4))
    assert outcome.value is True
    assert outcome.transcript == Transcript()


def test_xor_table_over_evens():
    tt = tt_to_turing(offset_table([0, 1], [False, True, True, False]))
    outcome = delta(tt.tree.at(2), CharOracle(lambda y: y % 2 == 0), Budget(4, 16))
    assert outcome.value is True
    assert outcome.transcript == Transcript((2, 3), (True, False))


def test_offset_table_rejects_wrong_length():
    with pytest.raises(TruthTableError):
        offset_table([0, 1], [True, False])


def test_random_tables_match_direct_evaluation(rng):
    for _ in range(100):
        k = int(rng.integers(0, 4))
        offsets = [int(o) for o in rng.integers(0, 6, size=k)]
        rows = [bool(b) for b in rng.random(2 ** k) < 0.5]
        h = rng.random(32) < 0.5
        tt = tt_to_turing(offset_table(offsets, rows))
        for x in range(21):
            direct = [bool(h[x + o]) for o in offsets]
            outcome = delta(tt.tree.at(x), lambda q: ret(bool(h[q])), Budget(k, 16))
            assert forall2(lambda a, b: a == b, outcome.transcript.ans, direct)
            assert outcome.value == tt_eval(direct, rows)


def test_deficiency_examples():
    assert not any(deficiency(double, x, 50) for x in range(20))
    assert deficiency(xor1, 0, 1)
    assert not deficiency(xor1, 1, 100)


def test_deficiency_fixtures_match_brute_force():
    for name, e in ENUMERATORS.items():
        for x in range(40):
            assert deficiency(e, x, 3 * x + 10) == DEFICIENT[name](x)


def test_window_membership():
    assert window_membership(double, 4, 3)
    assert not window_membership(double, 5, 3)
    assert all(window_membership(double, double(0), x) for x in range(5))


def test_enumerator_injectivity():
    assert double.is_injective_on(100)
    assert not Enumerator(lambda n: n // 2).is_injective_on(4)


def test_deficiency_reduction_recovers_evens():
    r = deficiency_reduction(double)
    no_deficiency = lambda y: ret(False)
    outcome = delta(r.tree.at(4), no_deficiency, Budget(10, 16))
    assert outcome.value is True
    assert outcome.transcript.qs == (0, 1, 2, 3)
    assert delta(r.tree.at(5), no_deficiency, Budget(10, 16)).value is False


def test_deficiency_reduction_for_xor1_accepts_everything():
    r = deficiency_reduction(xor1)
    evens_oracle = lambda y: ret(y % 2 == 0)
    assert eval_steps(run_core(r.tree, evens_oracle, 7), 128) is True
    assert all(eval_steps(run_core(r.tree, evens_oracle, z), 128) is True for z in range(21))


def test_window_membership_only_grows():
    for e in (double, Enumerator(lambda n: 3 * n + 1, name="triple")):
        for z in range(30):
            windows = [window_membership(e, z, x) for x in range(15)]
            assert windows == sorted(windows)


def test_truth_table_verdict_reads_its_table():
    t = offset_table([0, 1], [False, True, True, False])
    assert t.verdict(5, [True, False]) is True
    assert t.verdict(5, [True, True]) is False
    assert t.verdict(5, [True, False], evaluate=lambda answers, table: not table[0]) is True

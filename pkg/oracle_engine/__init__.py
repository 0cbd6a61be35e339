"""
Oracle computations as computation trees: a partial-value kernel, an
interrogation engine, a fuel-bounded evaluator and a combinator algebra,
with Turing, truth-table and semi-decision reductions built on top.
"""

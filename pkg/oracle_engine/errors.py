"""Exception hierarchy for the oracle engine.

Divergence is never an exception: it is an absent value, a Timeout outcome
or an "unknown" verdict. These errors signal contract violations only.
"""


class EngineError(Exception):
    """Base class for every error raised by the engine."""


class PartialityError(EngineError, ValueError):
    """Raised for malformed partial values (None payloads, negative fuel)."""


class TranscriptError(EngineError, ValueError):
    """Raised when question and answer lists differ in length."""


class BudgetError(EngineError, ValueError):
    """Raised for negative evaluation budgets."""


class OracleError(EngineError, ValueError):
    """Raised for unusable oracles: non-functional tables, unknown names, bad files."""


class TruthTableError(EngineError, ValueError):
    """Raised when a truth table does not have 2^k rows for k answers."""


class ReductionError(EngineError, ValueError):
    """Raised when reduction parameters are inconsistent."""

"""Satisfiability of hereditarily finite hybrid set formulas with cardinality."""

import json

from ._setcard import (
    ParseError,
    ScopeTooLarge,
    SetcardError,
    SortError,
    canonical,
    expected_verdict,
)
from . import _setcard

__all__ = [
    "ParseError",
    "ScopeTooLarge",
    "SetcardError",
    "SortError",
    "bench",
    "canonical",
    "check_unsat",
    "expected_verdict",
    "oracle_sat",
    "solve",
]


def solve(text, *, fix_size=False, timeout_ms=2000, max_solutions=0, infer_size=True):
    """Solve a script.

    Returns a dict {verdict, answers: [{bindings, residual, vertex?}], millis}.
    Bindings are [name, term] pairs in name order; terms are printed in the
    input syntax. max_solutions: 0 first answer, N up to N answers, -1 all.
    timeout_ms=0 disables the timeout.
    """
    if timeout_ms < 0:
        raise ValueError("timeout_ms must be >= 0")
    raw = json.loads(_setcard.solve_json(text, timeout_ms, fix_size, max_solutions, infer_size))
    for a in raw["answers"]:
        a["bindings"] = [(b["var"], b["value"]) for b in a["bindings"]]
    return raw


def check_unsat(text, *, timeout_ms=2000, infer_size=True):
    """True when the formula is unsatisfiable. Raises TimeoutError on timeout."""
    r = solve(text, timeout_ms=timeout_ms, infer_size=infer_size)
    if r["verdict"] == "timeout":
        raise TimeoutError(f"no verdict within {timeout_ms} ms")
    return r["verdict"] == "unsat"


def bench(directory, *, timeout_ms=2000, infer_size=True):
    """Run every .slog file below directory; returns {entries, collections}."""
    return json.loads(_setcard.bench_json(str(directory), timeout_ms, infer_size))


def oracle_sat(text, *, ur_universe=("a", "b", "c"), int_lo=-4, int_hi=4, max_width=3):
    """Bounded model search. A witness {var: value} or None when the scope has no model."""
    return _setcard.oracle_sat(text, list(ur_universe), int_lo, int_hi, max_width)

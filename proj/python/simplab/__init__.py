"""Cost-based expression simplification and exact permanents/determinants."""

from ._simplab import (
    EQUIVALENCE_PRIME,
    ConsistencyError,
    GuardError,
    ParseError,
    UnboundVariableError,
    bench,
    certify_locally_minimal,
    cost,
    dag_cost,
    default_rules,
    determinant,
    eval_recurrence,
    evaluate,
    fib,
    permanent,
    probably_equivalent,
    render,
    simplify,
)

__all__ = [
    "EQUIVALENCE_PRIME",
    "ConsistencyError",
    "GuardError",
    "ParseError",
    "UnboundVariableError",
    "bench",
    "certify_locally_minimal",
    "cost",
    "dag_cost",
    "default_rules",
    "determinant",
    "eval_recurrence",
    "evaluate",
    "fib",
    "permanent",
    "probably_equivalent",
    "render",
    "simplify",
]

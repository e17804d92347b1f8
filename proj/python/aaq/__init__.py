"""Decision procedure for the almost-all quantifier Q over the naturals.

Q x. phi means "phi holds for all sufficiently large x". The package
decides closed sentences built from polynomial (in)equalities under this
quantifier, computes quantifier-free equivalents, and cross-checks the
eliminator against independent oracles. Formulas are plain strings in the
surface syntax, e.g. ``decide("Q x. x^2 > 5*x + 6")``.
"""

from ._core import (
    CorpusInstance,
    CorpusReport,
    Error,
    EvalError,
    LimitError,
    ParseError,
    ShapeError,
    Verdict,
    cross_check,
    decide,
    desugar,
    eval_qf,
    free_vars,
    oracle_inner,
    oracle_window,
    parse,
    qe,
    zt_tail,
)

__all__ = [
    "CorpusInstance",
    "CorpusReport",
    "Error",
    "EvalError",
    "LimitError",
    "ParseError",
    "ShapeError",
    "Verdict",
    "cross_check",
    "decide",
    "desugar",
    "eval_qf",
    "free_vars",
    "oracle_inner",
    "oracle_window",
    "parse",
    "qe",
    "zt_tail",
]

"""E-values for testing exchangeability of binary sequences in batch mode."""

__version__ = "0.1.0"

from .numerics import LogValue, log_binomial, log_factorial, log_sum  # noqa: E402
from .seqtypes import (  # noqa: E402
    BinarySequence,
    ExchType,
    MarkovType,
    exch_type,
    markov_type,
    parse_sequence,
)
from .evalues import (  # noqa: E402
    EValueReport,
    check_bounds,
    elb,
    evaluate,
    lb,
    ub,
    umm,
    umm_alternative_logprob,
    umm_summary_mass,
)

__all__ = [
    "LogValue",
    "log_binomial",
    "log_factorial",
    "log_sum",
    "BinarySequence",
    "ExchType",
    "MarkovType",
    "exch_type",
    "markov_type",
    "parse_sequence",
    "EValueReport",
    "check_bounds",
    "elb",
    "evaluate",
    "lb",
    "ub",
    "umm",
    "umm_alternative_logprob",
    "umm_summary_mass",
]

"""Certified replay of the classification of c = F_n^(k) - 3^m with two
representations: exact search, Baker-bound evaluation, and Dujella-Petho
reductions over certified ball arithmetic."""

from pillai3._core import (
    CertifyError,
    KFibContext,
    RealBall,
    absolute_bounds,
    binet_error,
    certify_small_k,
    cf_expand,
    cutoff_k,
    dp_reduce,
    eval_expr,
    fib,
    fib_block,
    guzman_luca_bound,
    lemma_bd_bound,
    make_context,
    matveev_lower_bound,
    power2_gap_monotone,
    search,
    zeta_of,
)

__all__ = [
    "CertifyError",
    "KFibContext",
    "RealBall",
    "absolute_bounds",
    "binet_error",
    "certify_small_k",
    "cf_expand",
    "cutoff_k",
    "dp_reduce",
    "eval_expr",
    "fib",
    "fib_block",
    "guzman_luca_bound",
    "lemma_bd_bound",
    "make_context",
    "matveev_lower_bound",
    "power2_gap_monotone",
    "search",
    "zeta_of",
]

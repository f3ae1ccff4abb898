"""Fair-price statistics for tick data and an MRR market simulator."""

from ._fairprice import (
    Error,
    EventStream,
    GridSpec,
    delta,
    delta_side,
    load_session,
    mean_spread,
    response_curve,
    save_session,
    simulate_mrr,
    verify_mrr,
)

__all__ = [
    "Error",
    "EventStream",
    "GridSpec",
    "delta",
    "delta_side",
    "load_session",
    "mean_spread",
    "response_curve",
    "save_session",
    "simulate_mrr",
    "verify_mrr",
]

"""Stochastic dominance testing for right-censored survival data."""

import json

from . import _survdom
from ._survdom import DataError, NumericalError, km, mvn_upper_tail_sup, read_groups

__all__ = [
    "DataError",
    "NumericalError",
    "km",
    "mvn_upper_tail_sup",
    "read_groups",
    "dominance_test",
    "weighted_logrank",
    "rejection_table",
]


def dominance_test(t_times, t_events, u_times, u_events, **options):
    """Supremum test of H0: S_T <= S_U. Returns {"config": ..., "result": ...}."""
    return json.loads(
        _survdom.dominance_json(list(t_times), list(t_events), list(u_times), list(u_events), **options)
    )


def weighted_logrank(t1, e1, t2, e2, variant="log-rank"):
    return json.loads(_survdom.logrank_json(list(t1), list(e1), list(t2), list(e2), variant))


def rejection_table(cells, replications, seed, alphas=(0.05, 0.01), threads=0):
    # cells: (label, shapeT, scaleT, shapeU, scaleU, "P20"|"P50", n)
    return json.loads(_survdom.simulate_json(list(cells), replications, seed, list(alphas), threads))

"""Tail-index estimation for heavy-tailed data under random right censoring."""

from . import censoring, distributions, estimators, limit_oracle, montecarlo, selection, survival
from .censoring import CensoredSample, SortedSample, generate, load_csv, sort_with_concomitants
from .estimators import br, efg, hill, mns, na_tr, phat, trace, worms

__version__ = "0.1.0"

__all__ = [
    "censoring",
    "distributions",
    "estimators",
    "limit_oracle",
    "montecarlo",
    "selection",
    "survival",
    "CensoredSample",
    "SortedSample",
    "generate",
    "load_csv",
    "sort_with_concomitants",
    "hill",
    "phat",
    "efg",
    "worms",
    "br",
    "mns",
    "na_tr",
    "trace",
]

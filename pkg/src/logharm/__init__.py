"""Logharmonic mappings with typically real rotation: construction and checks."""

from .series import TaylorSeries
from .expr import FunctionSpec, parse, compile_series, pointwise_eval
from .logharmonic import (
    FactorPair,
    HerglotzFactor,
    LogharmonicMap,
    construct_g,
    construct_map,
    construct_q,
    construct_w,
    corollary1_transform,
    factorize,
    recover_dilatation,
)

__all__ = [
    "TaylorSeries",
    "FunctionSpec",
    "parse",
    "compile_series",
    "pointwise_eval",
    "LogharmonicMap",
    "HerglotzFactor",
    "FactorPair",
    "construct_g",
    "construct_map",
    "construct_q",
    "construct_w",
    "factorize",
    "corollary1_transform",
    "recover_dilatation",
]

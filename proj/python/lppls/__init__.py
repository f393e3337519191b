"""Python bindings for the LPPLS bubble-detection engine."""

from _lppls import (
    DataError,
    DomainError,
    FilterReport,
    IndicatorPoint,
    LinearParams,
    LpplsFit,
    NonlinearParams,
    PriceSeries,
    calibrate,
    confidence_at,
    lppls_eval,
    qualify,
    synthesize,
)

__all__ = [
    "DataError",
    "DomainError",
    "FilterReport",
    "IndicatorPoint",
    "LinearParams",
    "LpplsFit",
    "NonlinearParams",
    "PriceSeries",
    "calibrate",
    "confidence_at",
    "lppls_eval",
    "qualify",
    "synthesize",
]

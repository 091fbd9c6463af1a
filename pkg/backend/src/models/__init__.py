"""Pydantic models for data validation."""

from .diagram import ChordDiagram, ColoringRule
from .moments import MomentTable
from .partition import NCPartitionA, NCPartitionB
from .polynomial import IntPolynomial
from .report import (
    CheckResult,
    IdentityFailure,
    IdentityReport,
    SeriesMomentRecord,
    SeriesMomentReport,
    TraceComparison,
)
from .simulation import EllipticMatrixSample, HistogramResult, MomentEstimate, SpectrumSample
from .spectral import CauchyBatch, CauchyEvaluation, DensityCurve

__all__ = [
    "IntPolynomial",
    "MomentTable",
    "ChordDiagram",
    "ColoringRule",
    "NCPartitionA",
    "NCPartitionB",
    "IdentityFailure",
    "IdentityReport",
    "TraceComparison",
    "SeriesMomentRecord",
    "SeriesMomentReport",
    "CheckResult",
    "CauchyEvaluation",
    "CauchyBatch",
    "DensityCurve",
    "EllipticMatrixSample",
    "SpectrumSample",
    "MomentEstimate",
    "HistogramResult",
]

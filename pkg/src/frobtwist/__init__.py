"""Exact-arithmetic invariants of elliptic curves over F_q(t) and their
Frobenius twists: minimal models, supersingular defects, local kernel
orders, Selmer main terms, and Iwasawa-module layer counting."""

from .version import __version__

from .poly import make_field, factor
from .ratfunc import Rat
from .places import Place, LocalSeries, local_expand, valuation, unit_quotient_card
from .weierstrass import Transformation, WeierstrassModel, point_count
from .search import find_semistable_ordinary_examples
from .tate import (
    LocalReductionData,
    ReductionSurvey,
    minimal_model_at,
    reduction_type,
    semistable_ordinary_guard,
    survey,
)
from .formal import (
    FormalGroupLaw,
    VerschiebungData,
    formal_group_law,
    ker_jv_log,
    mult_series,
    supersingular_defect,
    verschiebung_data,
)
from .selmer import (
    EthClassification,
    SelmerReport,
    classify_eth,
    discrepancy_check,
    hbar,
    mu_shift,
    selmer_report,
    twist_check,
)
from .iwasawa import (
    LambdaModule,
    QuotientIdeal,
    quotient_log_size,
    recover_mu,
    specialize,
)
from .curvefile import CurveFile, parse
from .report import AnalyzeOptions, analyze, render_text, verify

__all__ = [
    "__version__",
    "make_field",
    "factor",
    "Rat",
    "Place",
    "LocalSeries",
    "local_expand",
    "valuation",
    "unit_quotient_card",
    "Transformation",
    "WeierstrassModel",
    "point_count",
    "find_semistable_ordinary_examples",
    "LocalReductionData",
    "ReductionSurvey",
    "minimal_model_at",
    "reduction_type",
    "semistable_ordinary_guard",
    "survey",
    "FormalGroupLaw",
    "VerschiebungData",
    "formal_group_law",
    "ker_jv_log",
    "mult_series",
    "supersingular_defect",
    "verschiebung_data",
    "EthClassification",
    "SelmerReport",
    "classify_eth",
    "discrepancy_check",
    "hbar",
    "mu_shift",
    "selmer_report",
    "twist_check",
    "LambdaModule",
    "QuotientIdeal",
    "quotient_log_size",
    "recover_mu",
    "specialize",
    "CurveFile",
    "parse",
    "AnalyzeOptions",
    "analyze",
    "render_text",
    "verify",
]

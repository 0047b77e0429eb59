"""Exact weak saturation numbers for tensor products of cliques.

Closed-form bounds, bootstrap percolation, extremal constructions, brute-force
oracles and exterior-algebra lower-bound certificates.
"""

from .certificate import CertificateReport, certificate_report
from .constructions import ConstructionResult, construct, construct_max_s, construct_min_r
from .core import ColoredHypergraph, ParamFamily, PartsChoice, VertexUniverse, build_host
from .errors import CapacityError, CertificateError, FamilyError, WsatError
from .formulas import cwsat_formula, q_value, reduction_conditions, reduction_family, wsat_formula_symmetric
from .percolation import closure, cwsat_bruteforce, verify_trace, wsat_bruteforce_uncolored

__all__ = [
    "CapacityError", "CertificateError", "CertificateReport", "ColoredHypergraph",
    "ConstructionResult", "FamilyError", "ParamFamily", "PartsChoice", "VertexUniverse",
    "WsatError", "build_host", "certificate_report", "closure", "construct", "construct_max_s",
    "construct_min_r", "cwsat_bruteforce", "cwsat_formula", "q_value", "reduction_conditions",
    "reduction_family", "verify_trace", "wsat_bruteforce_uncolored", "wsat_formula_symmetric",
]
__version__ = "0.1.0"

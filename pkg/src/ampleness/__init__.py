"""Ample and nef cones of automorphic line bundles on U(2) Shimura varieties mod p.

Exact combinatorics for Frobenius-cyclic signature data: Hasse classes and their
transition matrices, Goren-Oort strata and induced data, cone predicates, and
checkable nefness certificates.
"""

from .certify import (
    Certificate,
    CertificationError,
    DegenerateSystem,
    SparseSolution,
    Verdict,
    adjacent_reduce,
    build_certificate,
    sparse_solve,
    verify_certificate,
    verify_sparse,
)
from .cone import ConeError, ample_check, epsilon_max, hodge_split, nef_check
from .datum import DatumError, EmbeddingId, PrimeBlock, ShimuraDatum
from .hasse import hasse_inverse_closed_form, hasse_matrix, lambda_coefficients
from .picard import PicardClass, det_omega_class, hasse_class, omega_class, restrict
from .strata import (
    StratumClass,
    StratumError,
    classify_stratum,
    describe_stratum,
    induced_datum,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CertificationError",
    "ConeError",
    "DatumError",
    "DegenerateSystem",
    "EmbeddingId",
    "PicardClass",
    "PrimeBlock",
    "ShimuraDatum",
    "SparseSolution",
    "StratumClass",
    "StratumError",
    "Verdict",
    "adjacent_reduce",
    "ample_check",
    "build_certificate",
    "classify_stratum",
    "describe_stratum",
    "det_omega_class",
    "epsilon_max",
    "hasse_class",
    "hasse_inverse_closed_form",
    "hasse_matrix",
    "hodge_split",
    "induced_datum",
    "lambda_coefficients",
    "nef_check",
    "omega_class",
    "restrict",
    "sparse_solve",
    "verify_certificate",
    "verify_sparse",
]

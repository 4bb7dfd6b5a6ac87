"""Exact Hoffman constants for polyhedral systems via surjectivity certificates."""
from .certkit import CertificateLedger, algorithm1_run, algorithm2_run, solve_cover_gap, verify_joint_certificates
from .ellipsoid import BarrierCenter, DikinBounds, NotInRelativeInterior, barrier_center, dikin_bounds
from .engine import (
    Algo,
    HoffmanReport,
    ProblemSpec,
    Variant,
    Witness,
    compute,
    facial_distance,
    hoffman_inequalities,
    hoffman_mixed,
    hoffman_mixed_easy_equations,
    hoffman_mixed_easy_inequalities,
    hoffman_restricted,
    tight_witness,
)
from .linalg import NormTag
from .polylp import NormConfig, UnsupportedNormError

__version__ = "0.1.0"

__all__ = [
    "Algo", "BarrierCenter", "CertificateLedger", "DikinBounds", "HoffmanReport", "NormConfig",
    "NormTag", "NotInRelativeInterior", "ProblemSpec", "UnsupportedNormError", "Variant", "Witness",
    "algorithm1_run", "algorithm2_run", "barrier_center", "compute", "dikin_bounds", "facial_distance",
    "hoffman_inequalities", "hoffman_mixed", "hoffman_mixed_easy_equations",
    "hoffman_mixed_easy_inequalities", "hoffman_restricted", "solve_cover_gap", "tight_witness",
    "verify_joint_certificates",
]

"""Switching mirror descent for convex problems with functional constraints."""

from .bounds import (
    adaptive_md_bound,
    adaptive_smd_bound,
    fixed_smd_iterations,
    general_md_bound,
    restarted_md_bound,
    restarted_smd_deviation_bound,
)
from .deterministic import SolverConfig, adaptive_md, dual_value, general_md, restarted_md
from .problems import (
    MaxConstraint,
    OracleResult,
    ProblemInstance,
    StochasticOracle,
    SubgradientOracle,
    column_sample_gradient,
    eval_constraint_with_active,
    instance_from_dict,
    make_linear_max_problem,
    make_quadratic_problem,
    make_quadratic_simplex_problem,
    make_rng,
)
from .prox import (
    BallIntersection,
    Box,
    DomainError,
    EntropySetup,
    EuclideanSetup,
    ShiftedSetup,
    Simplex,
    UnsupportedSetupError,
    bregman,
    dual_norm,
    mirror_step,
    norm,
    prox_center,
)
from .reports import DualCertificate, Guarantee, RunTrace, SolveReport, StochasticReport
from .stochastic import (
    StochasticRunConfig,
    adaptive_smd,
    fixed_smd,
    restarted_smd_deviation,
    restarted_smd_expectation,
)

__version__ = "0.1.0"

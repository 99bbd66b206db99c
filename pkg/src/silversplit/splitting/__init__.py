"""
The four-harmonic splitting model near transition values, its critical points
and their continuation in eps.
"""

from .model import (
    SplittingModel,
    ScaledPotential,
    build_model,
    balance_point,
    TransversalityData,
    transversality,
    DegeneracyLocus,
    degeneracy_locus,
    sufficient_phase_condition,
    adversarial_phases,
    splitting_size,
    Q_TILDE_MAX,
)
from .solver import (
    solve_sine_equation,
    CriticalPoint,
    FullSolution,
    EigenvalueEstimate,
    solve_model_critical_points,
    solve_full_critical_points,
    basin_scan,
    min_eigenvalue_estimate,
)
from .continuation import (
    ContinuationRow,
    ContinuationReport,
    log_grid,
    point_entry,
    solve_escalated,
    continuation_sweep,
)

"""Numerical tolerances used across the package, collected in one record.

Functions take an optional ``tol`` argument defaulting to DEFAULT_TOLERANCES;
pass a modified copy (dataclasses.replace) to tighten or loosen a single
check without touching the rest.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # relative asymmetry allowed when a Hermitian input is required
    hermiticity: float = 1e-10
    # allowed deviation of U†U from the identity
    unitarity: float = 1e-10
    # idempotence / orthogonality / completeness slack for projectors
    projector: float = 1e-10
    # eigenvalue clustering width (scaled by max(1, norm of the operator))
    cluster: float = 1e-8
    # density-matrix trace deviation from 1
    trace: float = 1e-10
    # magnitude of negative eigenvalues tolerated in a density matrix
    positivity: float = 1e-10
    # slack when rounding trace(P) to an integer rank; beyond this is an error
    rank_round: float = 1e-6
    # default accuracy target for the matrix exponential
    expm_accuracy: float = 1e-12
    # imaginary residue allowed when extracting a real observable
    imag_residue: float = 1e-12
    # trace drift that triggers renormalization in long step sequences
    trace_drift: float = 1e-12
    # convergence distances below this are reported as exact (no rate fit)
    exact_distance: float = 1e-10


DEFAULT_TOLERANCES = Tolerances()

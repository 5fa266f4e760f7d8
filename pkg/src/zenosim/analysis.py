"""Observables, convergence measurements, and parameter sweeps.

Connects the engines to numbers one can plot: sector probabilities, purity,
cross-sector coherence norms, distance-to-limit curves with fitted rates,
and the decay-protection sweep over coupling strength.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .engines import (
    evolve_continuous,
    evolve_projective,
    evolve_zeno_limit,
    extracted_continuous_limit,
    extracted_kick_limit,
)
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidParameter,
    InvalidState,
)
from .linalg import (
    as_square_matrix,
    check_density_matrix,
    frobenius,
    opnorm,
    propagator,
)
from .models import ModelBundle, decay_model
from .spectral import ResolutionOfIdentity
from .tolerances import DEFAULT_TOLERANCES, Tolerances

__all__ = [
    "ConvergenceCurve",
    "ObservableSeries",
    "DecayProtectionResult",
    "subspace_probabilities",
    "purity",
    "coherence_block_norm",
    "observables",
    "convergence_curve",
    "projective_convergence_curve",
    "decay_protection_sweep",
]


@dataclass(frozen=True)
class ConvergenceCurve:
    """Distance to the Zeno-limit propagator as the drive parameter grows.

    ``fitted_rate`` is the least-squares slope of log(distance) against
    log(parameter), computed after discarding the two smallest parameter
    values (the pre-asymptotic regime); it is NaN when the curve is flagged
    ``exact`` (all distances at roundoff, nothing to fit).
    """

    parameter_name: str
    parameter_values: np.ndarray
    distances: np.ndarray
    fitted_rate: float
    exact: bool = False

    def __post_init__(self):
        p = np.asarray(self.parameter_values, dtype=float)
        d = np.asarray(self.distances, dtype=float)
        if p.shape != d.shape:
            raise DimensionMismatch("parameter and distance lengths differ")
        if len(p) and np.any(np.diff(p) <= 0):
            raise InvalidParameter("parameter_values must be strictly increasing")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise InvalidParameter("distances must be finite and non-negative")

    @property
    def doubling_factor(self) -> float:
        """Mean factor by which the distance shrinks per parameter doubling.

        Geometric mean over the whole sweep: the raw step-to-step ratios
        oscillate because the leading error term carries a phase that spins
        with the parameter, but the aggregate factor is stable and equals
        2^(-fitted slope) for clean first-order convergence.
        """
        p = np.asarray(self.parameter_values, dtype=float)
        d = np.asarray(self.distances, dtype=float)
        if self.exact or d[-1] == 0.0 or len(d) < 2:
            return float("nan")
        n_doublings = np.log2(p[-1] / p[0])
        return float((d[0] / d[-1]) ** (1.0 / n_doublings))


@dataclass(frozen=True)
class ObservableSeries:
    """Per-sample observables extracted from an EvolutionRecord.

    ``subspace_probabilities`` has one row per time and one column per
    sector; ``coherence_blocks`` maps sector pairs (n, m), n < m, to the
    Frobenius norm of the cross block P_n rho P_m over time.  ``leakage``
    is 1 - sum_n p_n, nonzero only when amplitude has left the modelled
    levels (the decay model).
    """

    times: np.ndarray
    subspace_probabilities: np.ndarray
    purity: np.ndarray
    coherence_blocks: dict[tuple[int, int], np.ndarray]
    leakage: np.ndarray


@dataclass(frozen=True)
class DecayProtectionResult:
    """Survival of the decaying level versus protective coupling strength."""

    couplings: np.ndarray
    survivals: np.ndarray
    protective_coupling: float | None
    threshold: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return [(float(k), float(s)) for k, s in zip(self.couplings, self.survivals)]


def _real_part(value: complex, what: str, tol: Tolerances) -> float:
    if abs(value.imag) > tol.imag_residue * max(1.0, abs(value)):
        raise InvalidState(f"{what} has imaginary residue {value.imag:.3e}")
    return float(value.real)


def subspace_probabilities(rho, res: ResolutionOfIdentity,
                           tol: Tolerances = DEFAULT_TOLERANCES) -> list[float]:
    """Sector populations p_n = trace(rho P_n); they sum to trace(rho)."""
    m = as_square_matrix(rho, "rho")
    if m.shape[0] != res.dim:
        raise DimensionMismatch(
            f"rho is {m.shape[0]}-dim, resolution is {res.dim}-dim")
    return [_real_part(complex(np.trace(m @ p)), f"p_{i + 1}", tol)
            for i, p in enumerate(res.projectors)]


def purity(rho, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """trace(rho^2): 1 for pure states, 1/d for the maximally mixed state."""
    m = check_density_matrix(rho, tol=tol)
    return _real_part(complex(np.trace(m @ m)), "purity", tol)


def coherence_block_norm(rho, res: ResolutionOfIdentity, n: int, m: int) -> float:
    """Frobenius norm of the cross block P_n rho P_m (n != m)."""
    if n == m:
        raise InvalidParameter("coherence block needs two distinct sectors")
    for idx in (n, m):
        if not 0 <= idx < res.nsectors:
            raise IndexOutOfRange(f"sector {idx} not in 0..{res.nsectors - 1}")
    x = as_square_matrix(rho, "rho")
    if x.shape[0] != res.dim:
        raise DimensionMismatch(
            f"rho is {x.shape[0]}-dim, resolution is {res.dim}-dim")
    return frobenius(res.projectors[n] @ x @ res.projectors[m])


def _as_density(state: np.ndarray) -> np.ndarray:
    if state.ndim == 1:
        return np.outer(state, state.conj())
    return state


def observables(record, res: ResolutionOfIdentity,
                tol: Tolerances = DEFAULT_TOLERANCES) -> ObservableSeries:
    """Evaluate probabilities, purity, coherences, and leakage on a record.

    State-vector samples are promoted to projectors; a subnormalized vector
    (decay model) then shows up as leakage = 1 - ||psi||^2.
    """
    times = np.asarray(record.times_or_steps, dtype=float)
    pairs = [(n, m) for n in range(res.nsectors) for m in range(res.nsectors) if n < m]
    probs, purs, leaks = [], [], []
    coh = {pair: [] for pair in pairs}
    for state in record.states:
        rho = _as_density(np.asarray(state))
        p = subspace_probabilities(rho, res, tol)
        probs.append(p)
        purs.append(_real_part(complex(np.trace(rho @ rho)), "purity", tol))
        leaks.append(1.0 - sum(p))
        for pair in pairs:
            coh[pair].append(coherence_block_norm(rho, res, *pair))
    return ObservableSeries(
        times=times,
        subspace_probabilities=np.array(probs),
        purity=np.array(purs),
        coherence_blocks={k: np.array(v) for k, v in coh.items()},
        leakage=np.array(leaks),
    )


def _fit_rate(params: np.ndarray, dists: np.ndarray) -> float:
    # drop the two smallest parameters (pre-asymptotic regime) while keeping
    # at least two points to fit
    skip = min(2, len(params) - 2)
    x = np.log(params[skip:])
    y = np.log(np.maximum(dists[skip:], 1e-300))
    return float(np.polyfit(x, y, 1)[0])


def convergence_curve(bundle: ModelBundle, t: float, parameter_values,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> ConvergenceCurve:
    """Operator-norm distance of the extracted limit to exp(-i H_Z t).

    Works on kicked bundles (parameter N, integer kick counts) and
    continuous bundles (parameter K).  First-order convergence shows up as
    fitted_rate near -1 and a doubling_factor near 2.
    """
    if bundle.mechanism not in ("kicked", "continuous"):
        raise InvalidParameter(
            f"convergence_curve needs a kicked or continuous bundle, "
            f"got {bundle.mechanism!r}")
    values = np.asarray(parameter_values, dtype=float)
    if len(values) < 3:
        raise InvalidParameter("need at least 3 parameter values")
    if np.any(np.diff(values) <= 0):
        raise InvalidParameter("parameter values must be strictly increasing")
    u_z = propagator(bundle.zeno_hamiltonian(tol), t, tol)
    dists = []
    for v in values:
        if bundle.mechanism == "kicked":
            if v != int(v):
                raise InvalidParameter(f"kick count must be an integer, got {v!r}")
            ext = extracted_kick_limit(bundle.H, bundle.U_kick, t, int(v), tol)
        else:
            ext = extracted_continuous_limit(bundle.H, bundle.H_c, t, float(v), tol)
        dists.append(opnorm(ext - u_z))
    dists = np.asarray(dists)
    exact = bool(np.all(dists <= tol.exact_distance))
    rate = float("nan") if exact else _fit_rate(values, dists)
    return ConvergenceCurve(
        parameter_name="N" if bundle.mechanism == "kicked" else "K",
        parameter_values=values, distances=dists, fitted_rate=rate, exact=exact)


def projective_convergence_curve(bundle: ModelBundle, rho0, t: float, n_values,
                                 tol: Tolerances = DEFAULT_TOLERANCES) -> ConvergenceCurve:
    """Frobenius distance of the finite-N measured state to the Zeno limit."""
    if bundle.mechanism != "projective":
        raise InvalidParameter(
            f"projective_convergence_curve needs a projective bundle, "
            f"got {bundle.mechanism!r}")
    values = np.asarray(n_values, dtype=float)
    if len(values) < 3:
        raise InvalidParameter("need at least 3 parameter values")
    if np.any(np.diff(values) <= 0):
        raise InvalidParameter("parameter values must be strictly increasing")
    rho0 = check_density_matrix(rho0, bundle.dim, tol)
    limit = evolve_zeno_limit(rho0, bundle.H, bundle.res, t, samples=2,
                              tol=tol).final_state
    dists = []
    for v in values:
        if v != int(v):
            raise InvalidParameter(f"measurement count must be an integer, got {v!r}")
        final = evolve_projective(rho0, bundle.H, bundle.res, t, int(v),
                                  samples=2, tol=tol).final_state
        dists.append(frobenius(final - limit))
    dists = np.asarray(dists)
    exact = bool(np.all(dists <= tol.exact_distance))
    rate = float("nan") if exact else _fit_rate(values, dists)
    return ConvergenceCurve(parameter_name="N", parameter_values=values,
                            distances=dists, fitted_rate=rate, exact=exact)


def decay_protection_sweep(omega1: float, tau_z: float, gamma: float,
                           omega_b: float, k_values, t: float,
                           threshold: float = 0.9,
                           tol: Tolerances = DEFAULT_TOLERANCES) -> DecayProtectionResult:
    """Survival |<b|psi(t)>|^2 of the decaying level over a coupling sweep.

    The initial state is |b>.  Reports the sweep plus the smallest K whose
    survival reaches ``threshold`` (None if none does).  Only the tail
    (large K) is guaranteed monotone; weak coupling can accelerate decay.
    """
    ks = np.asarray(k_values, dtype=float)
    if len(ks) == 0:
        raise InvalidParameter("need at least one coupling value")
    if np.any(np.diff(ks) <= 0):
        raise InvalidParameter("coupling values must be strictly increasing")
    survivals = []
    for k in ks:
        bundle = decay_model(omega1, tau_z, gamma, float(k), omega_b)
        psi0 = np.zeros(4, dtype=complex)
        psi0[1] = 1.0
        rec = evolve_continuous(psi0, bundle.H, bundle.H_c, float(k), t,
                                samples=2, tol=tol)
        survivals.append(float(abs(rec.final_state[1]) ** 2))
    survivals = np.asarray(survivals)
    hit = np.nonzero(survivals >= threshold)[0]
    protective = float(ks[hit[0]]) if len(hit) else None
    return DecayProtectionResult(couplings=ks, survivals=survivals,
                                 protective_coupling=protective,
                                 threshold=threshold)

"""Evolution engines for the three Zeno mechanisms and their common limit.

Three finite-parameter drives are implemented: repeated nonselective
measurements (pinches), unitary kicks, and strong continuous coupling.  Each
has an extracted-limit sequence that converges to the same block-diagonal
propagator exp(-i H_Z t) built from the Zeno Hamiltonian, and an exact
limit engine assembles that propagator directly from the sector evolutions
V_n(t) = P_n exp(-i P_n H P_n t).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidParameter,
    InvalidState,
    NonHermitianDensityEvolution,
    NotUnitary,
)
from .linalg import (
    as_square_matrix,
    check_density_matrix,
    check_state_vector,
    dagger,
    expm,
    hermiticity_defect,
    propagator,
    require_hermitian,
    unitarity_defect,
)
from .spectral import ResolutionOfIdentity, pinch
from .tolerances import DEFAULT_TOLERANCES, Tolerances

__all__ = [
    "EvolutionRecord",
    "evolve_projective",
    "evolve_kicked",
    "evolve_continuous",
    "evolve_zeno_limit",
    "zeno_propagators",
    "kicked_propagator",
    "continuous_propagator",
    "asymptotic_kicked_propagator",
    "asymptotic_continuous_propagator",
    "extracted_kick_limit",
    "extracted_continuous_limit",
    "projective_survival",
]

# trace drift in long pinch/kick sequences is checked this often at most
_RENORM_INTERVAL = 10_000


@dataclass(frozen=True)
class EvolutionRecord:
    """Sampled trajectory of one evolution run.

    ``times_or_steps`` holds real times for the projective, continuous and
    zeno-limit engines and integer step counts for the kicked engine;
    ``states`` is the matching list of state vectors or density matrices.
    ``trace_corrections`` lists (step, drift) pairs where the engine
    renormalized a density matrix to counter accumulated roundoff.
    """

    mechanism: str
    times_or_steps: np.ndarray
    states: tuple[np.ndarray, ...]
    parameters: dict = field(default_factory=dict)
    trace_corrections: tuple[tuple[int, float], ...] = ()

    def __post_init__(self):
        if len(self.times_or_steps) != len(self.states):
            raise DimensionMismatch("times and states lengths differ")
        diffs = np.diff(np.asarray(self.times_or_steps, dtype=float))
        if len(diffs) and diffs.min() <= 0:
            raise InvalidParameter("times_or_steps must be strictly increasing")

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.states)


def _checkpoints(n_steps: int, samples: int) -> np.ndarray:
    """Step indices to record: ~samples points, always including 0 and N."""
    if samples < 2:
        raise InvalidParameter(f"samples must be >= 2, got {samples}")
    return np.unique(np.round(
        np.linspace(0, n_steps, min(samples, n_steps + 1))).astype(int))


def _validate_step_args(t: float, n: int) -> tuple[float, int]:
    if not (t > 0):
        raise InvalidParameter(f"t must be positive, got {t!r}")
    if int(n) != n or n < 1:
        raise InvalidParameter(f"N must be a positive integer, got {n!r}")
    return float(t), int(n)


def _maybe_renormalize(rho: np.ndarray, step: int,
                       corrections: list[tuple[int, float]],
                       tol: Tolerances) -> np.ndarray:
    if step % _RENORM_INTERVAL != 0:
        return rho
    tr = float(np.trace(rho).real)
    drift = abs(tr - 1.0)
    if drift > tol.trace_drift:
        corrections.append((step, drift))
        return rho / tr
    return rho


def evolve_projective(rho0, h, res: ResolutionOfIdentity, t: float, n: int,
                      samples: int = 50,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> EvolutionRecord:
    """Evolve under N equally spaced nonselective measurements in time t.

    A preparatory pinch is applied first, then N rounds of free evolution
    over t/N followed by a pinch:  rho_k = (pinch ∘ U_{t/N})^k pinch(rho0).
    Callers who want no preparatory measurement can pass an already pinched
    state; the pinch is idempotent.  Cross-sector coherences die, sector
    probabilities drift only through the unitary factors (O(1/N)), and
    purity never increases along the sequence.
    """
    t, n = _validate_step_args(t, n)
    hm = require_hermitian(h, "H", tol)
    rho = check_density_matrix(rho0, res.dim, tol)
    if hm.shape[0] != res.dim:
        raise DimensionMismatch("H and resolution dimensions differ")
    u = propagator(hm, t / n, tol)
    ud = dagger(u)

    keep = _checkpoints(n, samples)
    keep_set = set(int(k) for k in keep)
    corrections: list[tuple[int, float]] = []

    rho = pinch(rho, res)
    states = []
    if 0 in keep_set:
        states.append(rho.copy())
    for k in range(1, n + 1):
        rho = pinch(u @ rho @ ud, res)
        rho = _maybe_renormalize(rho, k, corrections, tol)
        if k in keep_set:
            states.append(rho.copy())
    return EvolutionRecord(
        mechanism="projective",
        times_or_steps=keep.astype(float) * (t / n),
        states=tuple(states),
        parameters={"t": t, "N": n, "dim": res.dim},
        trace_corrections=tuple(corrections),
    )


def evolve_kicked(state0, h, u_kick, t: float, n: int, samples: int = 50,
                  tol: Tolerances = DEFAULT_TOLERANCES) -> EvolutionRecord:
    """Evolve by N kick cycles: state after k steps is [U_kick U(t/N)]^k.

    Accepts a state vector or a density matrix.  The dynamics is unitary,
    so norm, trace and purity are conserved up to roundoff.
    """
    t, n = _validate_step_args(t, n)
    hm = require_hermitian(h, "H", tol)
    uk = as_square_matrix(u_kick, "U_kick")
    d = unitarity_defect(uk)
    if d > tol.unitarity:
        raise NotUnitary(f"U_kick has unitarity defect {d:.3e}")
    if uk.shape != hm.shape:
        raise DimensionMismatch("H and U_kick dimensions differ")
    step_op = uk @ propagator(hm, t / n, tol)

    is_density = np.asarray(state0).ndim == 2
    if is_density:
        state = check_density_matrix(state0, hm.shape[0], tol)
    else:
        state = check_state_vector(state0, hm.shape[0], tol=tol)

    keep = _checkpoints(n, samples)
    keep_set = set(int(k) for k in keep)
    corrections: list[tuple[int, float]] = []
    states = []
    if 0 in keep_set:
        states.append(state.copy())
    sd = dagger(step_op)
    for k in range(1, n + 1):
        if is_density:
            state = step_op @ state @ sd
            state = _maybe_renormalize(state, k, corrections, tol)
        else:
            state = step_op @ state
        if k in keep_set:
            states.append(state.copy())
    return EvolutionRecord(
        mechanism="kicked",
        times_or_steps=keep,
        states=tuple(states),
        parameters={"t": t, "N": n, "dim": hm.shape[0]},
        trace_corrections=tuple(corrections),
    )


def evolve_continuous(state0, h, h_c, coupling: float, t: float,
                      samples: int = 50,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> EvolutionRecord:
    """Evolve under H + K*H_c, sampled on a uniform time grid up to t.

    Hermitian generators take the spectral route (one eigh, exactly unitary
    at every sample).  A non-Hermitian H models decay at amplitude level and
    is accepted for state vectors only; its norm must not grow.
    """
    if not (t > 0):
        raise InvalidParameter(f"t must be positive, got {t!r}")
    if not (coupling >= 0) or not np.isfinite(coupling):
        raise InvalidParameter(f"K must be a finite real >= 0, got {coupling!r}")
    if samples < 2:
        raise InvalidParameter(f"samples must be >= 2, got {samples}")
    hm = as_square_matrix(h, "H")
    hcm = require_hermitian(h_c, "H_c", tol)
    if hm.shape != hcm.shape:
        raise DimensionMismatch("H and H_c dimensions differ")
    h_k = hm + coupling * hcm
    dim = hm.shape[0]
    times = np.linspace(0.0, t, samples)
    hermitian = hermiticity_defect(h_k) <= tol.hermiticity

    is_density = np.asarray(state0).ndim == 2
    if is_density and not hermitian:
        raise NonHermitianDensityEvolution(
            "density-matrix input requires a Hermitian generator; "
            "propagate a state vector instead")

    states = []
    if hermitian:
        if is_density:
            rho0m = check_density_matrix(state0, dim, tol)
        else:
            psi0 = check_state_vector(state0, dim, tol=tol)
        w, v = np.linalg.eigh(0.5 * (h_k + dagger(h_k)))
        for tau in times:
            u = (v * np.exp(-1j * w * tau)) @ dagger(v)
            states.append(u @ rho0m @ dagger(u) if is_density else u @ psi0)
    else:
        psi0 = check_state_vector(state0, dim, subnormalized=True, tol=tol)
        for tau in times:
            psi = expm(-1j * h_k * tau, tol.expm_accuracy) @ psi0
            nrm = float(np.linalg.norm(psi))
            if nrm > 1.0 + 1e-8:
                raise InvalidState(
                    f"non-Hermitian generator amplified the state to norm "
                    f"{nrm:.6f}; only decaying models are supported")
            states.append(psi)
    return EvolutionRecord(
        mechanism="continuous",
        times_or_steps=times,
        states=tuple(states),
        parameters={"t": t, "K": float(coupling), "dim": dim},
    )


def zeno_propagators(h, res: ResolutionOfIdentity, t: float,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> list[np.ndarray]:
    """Sector propagators V_n(t) = P_n exp(-i P_n H P_n t).

    Each V_n is unitary within its sector and vanishes outside it;
    sum_n V_n† V_n = I.
    """
    hm = require_hermitian(h, "H", tol)
    if hm.shape[0] != res.dim:
        raise DimensionMismatch("H and resolution dimensions differ")
    out = []
    for p in res.projectors:
        h_n = p @ hm @ p
        out.append(p @ propagator(0.5 * (h_n + dagger(h_n)), t, tol))
    return out


def evolve_zeno_limit(rho0, h, res: ResolutionOfIdentity, t: float,
                      samples: int = 50,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> EvolutionRecord:
    """Exact Zeno-limit dynamics rho(tau) = sum_n V_n(tau) rho0 V_n(tau)†.

    Subspace probabilities are constant for all times; cross-sector
    coherences are removed at tau = 0+ (V_n(0) = P_n, so the first sample
    is pinch(rho0)).  t = 0 is allowed and returns that single sample.
    """
    if t < 0:
        raise InvalidParameter(f"t must be >= 0, got {t!r}")
    if samples < 2:
        raise InvalidParameter(f"samples must be >= 2, got {samples}")
    rho = check_density_matrix(rho0, res.dim, tol)
    hm = require_hermitian(h, "H", tol)
    if hm.shape[0] != res.dim:
        raise DimensionMismatch("H and resolution dimensions differ")
    times = np.array([0.0]) if t == 0 else np.linspace(0.0, t, samples)

    # eigh once per sector, reuse across the time grid
    blocks = []
    for p in res.projectors:
        h_n = p @ hm @ p
        w, v = np.linalg.eigh(0.5 * (h_n + dagger(h_n)))
        blocks.append((p, w, v))
    states = []
    for tau in times:
        acc = np.zeros_like(rho)
        for p, w, v in blocks:
            v_n = p @ ((v * np.exp(-1j * w * tau)) @ dagger(v))
            acc += v_n @ rho @ dagger(v_n)
        states.append(acc)
    return EvolutionRecord(
        mechanism="zeno-limit",
        times_or_steps=times,
        states=tuple(states),
        parameters={"t": float(t), "dim": res.dim},
    )


def asymptotic_kicked_propagator(h, res: ResolutionOfIdentity, t: float,
                                 n: int,
                                 tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Large-N form of the kicked propagator, sum_n e^{-i N λ_n} V_n(t).

    ``res`` must carry the kick eigenphases as labels.  Sector populations
    follow the Zeno dynamics; cross-sector phases advance by N λ_n.
    """
    t, n = _validate_step_args(t, n)
    vs = zeno_propagators(h, res, t, tol)
    return sum(np.exp(-1j * n * lam) * v for lam, v in zip(res.labels, vs))


def asymptotic_continuous_propagator(h, res: ResolutionOfIdentity, t: float,
                                     coupling: float,
                                     tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Large-K form of the coupled propagator, sum_n e^{-i K η_n t} V_n(t).

    ``res`` must carry the coupling eigenvalues as labels; K t plays the
    role the kick count N plays in the kicked mechanism.
    """
    if not (t > 0):
        raise InvalidParameter(f"t must be positive, got {t!r}")
    vs = zeno_propagators(h, res, t, tol)
    return sum(np.exp(-1j * coupling * eta * t) * v
               for eta, v in zip(res.labels, vs))


def kicked_propagator(h, u_kick, t: float, n: int,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Lab-frame propagator after N kick cycles, U_N(t) = [U_kick U(t/N)]^N."""
    t, n = _validate_step_args(t, n)
    hm = require_hermitian(h, "H", tol)
    uk = as_square_matrix(u_kick, "U_kick")
    d = unitarity_defect(uk)
    if d > tol.unitarity:
        raise NotUnitary(f"U_kick has unitarity defect {d:.3e}")
    if uk.shape != hm.shape:
        raise DimensionMismatch("H and U_kick dimensions differ")
    return np.linalg.matrix_power(uk @ propagator(hm, t / n, tol), n)


def continuous_propagator(h, h_c, coupling: float, t: float,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Lab-frame propagator U_K(t) = exp(-i (H + K H_c) t), Hermitian case."""
    hm = require_hermitian(h, "H", tol)
    hcm = require_hermitian(h_c, "H_c", tol)
    if hm.shape != hcm.shape:
        raise DimensionMismatch("H and H_c dimensions differ")
    return propagator(hm + coupling * hcm, t, tol)


def extracted_kick_limit(h, u_kick, t: float, n: int,
                         tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Kick-frame propagator V_N(t) = (U_kick†)^N [U_kick U(t/N)]^N.

    Converges to exp(-i H_Z t) at rate O(1/N), where H_Z is the pinching of
    H by the kick's spectral projectors.
    """
    t, n = _validate_step_args(t, n)
    hm = require_hermitian(h, "H", tol)
    uk = as_square_matrix(u_kick, "U_kick")
    d = unitarity_defect(uk)
    if d > tol.unitarity:
        raise NotUnitary(f"U_kick has unitarity defect {d:.3e}")
    if uk.shape != hm.shape:
        raise DimensionMismatch("H and U_kick dimensions differ")
    step = uk @ propagator(hm, t / n, tol)
    return np.linalg.matrix_power(dagger(uk), n) @ np.linalg.matrix_power(step, n)


def extracted_continuous_limit(h, h_c, t: float, coupling: float,
                               tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Coupling-frame propagator exp(i K H_c t) exp(-i (H + K H_c) t).

    Converges to exp(-i H_Z t) at rate O(1/K), where H_Z is the pinching of
    H by the eigenprojections of H_c.
    """
    if not (t > 0):
        raise InvalidParameter(f"t must be positive, got {t!r}")
    hm = require_hermitian(h, "H", tol)
    hcm = require_hermitian(h_c, "H_c", tol)
    if hm.shape != hcm.shape:
        raise DimensionMismatch("H and H_c dimensions differ")
    return propagator(hcm, -coupling * t, tol) @ propagator(hm + coupling * hcm, t, tol)


def projective_survival(state0, h, res: ResolutionOfIdentity, sector: int,
                        t: float, n: int,
                        tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Probability of being found in one sector at every one of N measurements.

    This is the survival probability of the Zeno setup proper: the product
    of conditional outcomes, tr([P U]^N rho0 ([P U]^N)†) with U = U(t/N).
    It differs from the sector population of the nonselective record, which
    also counts histories that leave the sector and return.  For a rank-1
    sector and a 2-level Hamiltonian Omega sigma_x it reduces to the
    classic cos^{2N}(Omega t / N).
    """
    t, n = _validate_step_args(t, n)
    hm = require_hermitian(h, "H", tol)
    if hm.shape[0] != res.dim:
        raise DimensionMismatch("H and resolution dimensions differ")
    p = res.projector(sector)
    factor = p @ propagator(hm, t / n, tol)
    v = np.linalg.matrix_power(factor, n)
    if np.asarray(state0).ndim == 2:
        rho = check_density_matrix(state0, res.dim, tol)
        return float(np.trace(v @ rho @ dagger(v)).real)
    psi = check_state_vector(state0, res.dim, tol=tol)
    return float(np.linalg.norm(v @ psi) ** 2)

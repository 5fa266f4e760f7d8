import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    basis_state,
    random_density,
    random_hermitian,
    random_state,
    random_two_block_resolution,
    random_unitary,
    straddle_state,
)
from zenosim.engines import (
    EvolutionRecord,
    asymptotic_continuous_propagator,
    asymptotic_kicked_propagator,
    continuous_propagator,
    evolve_continuous,
    evolve_kicked,
    evolve_projective,
    evolve_zeno_limit,
    extracted_continuous_limit,
    extracted_kick_limit,
    kicked_propagator,
    projective_survival,
    zeno_propagators,
)
from zenosim.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    InvalidParameter,
    InvalidState,
    NonHermitianDensityEvolution,
    NotUnitary,
)
from zenosim.linalg import dagger, frobenius, opnorm, propagator
from zenosim.spectral import ResolutionOfIdentity, pinch, zeno_hamiltonian

CHAIN = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex)
RES3 = ResolutionOfIdentity.from_projectors(
    [np.diag([1.0, 1.0, 0.0]).astype(complex),
     np.diag([0.0, 0.0, 1.0]).astype(complex)], [1.0, 2.0])


def sector_probs(rho, res):
    return [float(np.trace(rho @ p).real) for p in res.projectors]


class TestEvolutionRecord:
    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            EvolutionRecord("kicked", np.array([0, 1]), (np.eye(2),))

    def test_nonincreasing_times(self):
        with pytest.raises(InvalidParameter):
            EvolutionRecord("kicked", np.array([0, 0]), (np.eye(2), np.eye(2)))

    def test_final_state_and_len(self):
        rec = EvolutionRecord("kicked", np.array([0, 1]),
                              (np.zeros((2, 2)), np.eye(2)))
        assert len(rec) == 2
        assert np.array_equal(rec.final_state, np.eye(2))


class TestProjective:
    def test_preparatory_pinch_halves_purity(self):
        psi = straddle_state(3)
        rho0 = np.outer(psi, psi.conj())
        rec = evolve_projective(rho0, CHAIN, RES3, t=1.0, n=4)
        first = rec.states[0]
        assert abs(np.trace(first @ first).real - 0.5) <= 1e-14
        assert frobenius(first - pinch(rho0, RES3)) <= 1e-14

    def test_purity_never_increases(self):
        psi = straddle_state(3)
        rho0 = np.outer(psi, psi.conj())
        rec = evolve_projective(rho0, CHAIN, RES3, t=2.0, n=40, samples=41)
        pur = [np.trace(s @ s).real for s in rec.states]
        assert all(b <= a + 1e-12 for a, b in zip(pur, pur[1:]))

    def test_trace_preserved(self):
        rng = np.random.default_rng(7)
        rho0 = random_density(rng, 3)
        rec = evolve_projective(rho0, CHAIN, RES3, t=1.0, n=100)
        assert all(abs(np.trace(s).real - 1.0) <= 1e-12 for s in rec.states)
        assert rec.trace_corrections == ()

    def test_approaches_zeno_limit(self):
        rho0 = np.diag([1.0, 0.0, 0.0]).astype(complex)
        exact = evolve_zeno_limit(rho0, CHAIN, RES3, t=1.0, samples=2).final_state
        d_small = frobenius(
            evolve_projective(rho0, CHAIN, RES3, 1.0, 16).final_state - exact)
        d_large = frobenius(
            evolve_projective(rho0, CHAIN, RES3, 1.0, 512).final_state - exact)
        assert d_large < d_small / 16  # O(1/N)
        assert d_large <= 1e-3

    def test_sector_probability_drift_scales(self):
        rho0 = np.diag([1.0, 0.0, 0.0]).astype(complex)
        devs = []
        for n in (10, 100):
            rec = evolve_projective(rho0, CHAIN, RES3, t=1.0, n=n)
            devs.append(abs(sector_probs(rec.final_state, RES3)[0] - 1.0))
        assert devs[1] < devs[0] / 5

    def test_sampling_grid(self):
        rho0 = np.diag([1.0, 0.0, 0.0]).astype(complex)
        rec = evolve_projective(rho0, CHAIN, RES3, t=2.0, n=10, samples=11)
        assert rec.times_or_steps[0] == 0.0
        assert abs(rec.times_or_steps[-1] - 2.0) <= 1e-15
        assert len(rec) == 11
        assert rec.mechanism == "projective"

    def test_bad_args(self):
        rho0 = np.diag([1.0, 0.0, 0.0]).astype(complex)
        with pytest.raises(InvalidParameter):
            evolve_projective(rho0, CHAIN, RES3, t=-1.0, n=4)
        with pytest.raises(InvalidParameter):
            evolve_projective(rho0, CHAIN, RES3, t=1.0, n=0)
        with pytest.raises(DimensionMismatch):
            evolve_projective(np.eye(4) / 4, np.eye(4), RES3, t=1.0, n=4)


class TestKicked:
    def test_identity_kick_is_free_evolution(self):
        psi0 = basis_state(3, 0)
        rec = evolve_kicked(psi0, CHAIN, np.eye(3), t=1.3, n=7)
        expect = propagator(CHAIN, 1.3) @ psi0
        assert np.linalg.norm(rec.final_state - expect) <= 1e-12

    def test_single_step(self):
        rng = np.random.default_rng(5)
        uk = random_unitary(rng, 3)
        psi0 = basis_state(3, 1)
        rec = evolve_kicked(psi0, CHAIN, uk, t=0.9, n=1)
        expect = uk @ propagator(CHAIN, 0.9) @ psi0
        assert np.linalg.norm(rec.final_state - expect) <= 1e-13

    def test_integer_step_axis(self):
        psi0 = basis_state(3, 0)
        rec = evolve_kicked(psi0, CHAIN, np.eye(3), t=1.0, n=8, samples=9)
        assert list(rec.times_or_steps) == list(range(9))

    def test_density_purity_conserved(self):
        rng = np.random.default_rng(12)
        uk = random_unitary(rng, 3)
        rho0 = random_density(rng, 3)
        p0 = np.trace(rho0 @ rho0).real
        rec = evolve_kicked(rho0, CHAIN, uk, t=1.0, n=512)
        pN = np.trace(rec.final_state @ rec.final_state).real
        assert abs(pN - p0) <= 1e-10

    def test_matches_propagator_power(self):
        rng = np.random.default_rng(2)
        uk = random_unitary(rng, 3)
        psi0 = basis_state(3, 0)
        rec = evolve_kicked(psi0, CHAIN, uk, t=1.0, n=6)
        assert np.linalg.norm(
            rec.final_state - kicked_propagator(CHAIN, uk, 1.0, 6) @ psi0) <= 1e-13

    def test_rejects_nonunitary_kick(self):
        with pytest.raises(NotUnitary):
            evolve_kicked(basis_state(3, 0), CHAIN, np.diag([1.0, 1.0, 2.0]),
                          t=1.0, n=2)

    @given(st.integers(0, 10_000))
    @settings(max_examples=20, deadline=None)
    def test_norm_conserved(self, seed):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, 3)
        uk = random_unitary(rng, 3)
        psi0 = random_state(rng, 3)
        rec = evolve_kicked(psi0, h, uk, t=1.0, n=20)
        assert abs(np.linalg.norm(rec.final_state) - 1.0) <= 1e-12


class TestContinuous:
    def test_zero_coupling_is_free_evolution(self):
        psi0 = basis_state(3, 0)
        rec = evolve_continuous(psi0, CHAIN, np.zeros((3, 3)), 0.0, t=1.3)
        expect = propagator(CHAIN, 1.3) @ psi0
        assert np.linalg.norm(rec.final_state - expect) <= 1e-12

    def test_pure_coupling_rabi(self):
        # H = 0: the coupling drives c <-> M at angular rate K
        h_c = np.zeros((4, 4), dtype=complex)
        h_c[2, 3] = h_c[3, 2] = 1.0
        psi0 = basis_state(4, 2)
        k, t = 2.0, 0.7
        rec = evolve_continuous(psi0, np.zeros((4, 4)), h_c, k, t=t)
        assert abs(abs(rec.final_state[2]) ** 2 - np.cos(k * t) ** 2) <= 1e-12

    def test_matches_propagator(self):
        rng = np.random.default_rng(9)
        h = random_hermitian(rng, 3)
        h_c = random_hermitian(rng, 3)
        psi0 = basis_state(3, 1)
        rec = evolve_continuous(psi0, h, h_c, 1.7, t=0.8)
        expect = continuous_propagator(h, h_c, 1.7, 0.8) @ psi0
        assert np.linalg.norm(rec.final_state - expect) <= 1e-12

    def test_density_purity_conserved(self):
        rng = np.random.default_rng(4)
        rho0 = random_density(rng, 3)
        h_c = np.diag([0.0, 0.0, 1.0]).astype(complex)
        p0 = np.trace(rho0 @ rho0).real
        rec = evolve_continuous(rho0, CHAIN, h_c, 3.0, t=1.0)
        assert abs(np.trace(rec.final_state @ rec.final_state).real - p0) <= 1e-12

    def test_nonhermitian_rejects_density(self):
        h = np.array([[0, 1], [1, -0.5j]], dtype=complex)
        with pytest.raises(NonHermitianDensityEvolution):
            evolve_continuous(np.diag([1.0, 0.0]), h, np.zeros((2, 2)), 0.0, t=1.0)

    def test_nonhermitian_decay_shrinks_norm(self):
        h = np.array([[0, 1], [1, -0.5j]], dtype=complex)
        rec = evolve_continuous(basis_state(2, 0), h, np.zeros((2, 2)), 0.0, t=2.0)
        norms = [np.linalg.norm(s) for s in rec.states]
        assert norms[-1] < 1.0
        assert all(n <= 1.0 + 1e-8 for n in norms)

    def test_amplifying_generator_rejected(self):
        h = 0.5j * np.eye(2)  # gain, not decay
        with pytest.raises(InvalidState):
            evolve_continuous(basis_state(2, 0), h, np.zeros((2, 2)), 0.0,
                              t=1.0, samples=2)

    def test_negative_coupling_rejected(self):
        with pytest.raises(InvalidParameter):
            evolve_continuous(basis_state(3, 0), CHAIN, np.zeros((3, 3)),
                              -1.0, t=1.0)


class TestZenoLimit:
    def test_sector_propagator_structure(self):
        t = 0.9
        v1, v2 = zeno_propagators(CHAIN, RES3, t)
        c, s = np.cos(t), np.sin(t)
        expect1 = np.array([[c, -1j * s, 0], [-1j * s, c, 0], [0, 0, 0]])
        assert frobenius(v1 - expect1) <= 1e-12
        assert frobenius(v2 - RES3.projector(1)) <= 1e-12

    def test_sector_propagators_complete(self):
        vs = zeno_propagators(CHAIN, RES3, 1.4)
        acc = sum(dagger(v) @ v for v in vs)
        assert frobenius(acc - np.eye(3)) <= 1e-12

    def test_probabilities_exactly_constant(self):
        rng = np.random.default_rng(21)
        rho0 = random_density(rng, 3)
        rec = evolve_zeno_limit(rho0, CHAIN, RES3, t=3.0, samples=30)
        probs = np.array([sector_probs(s, RES3) for s in rec.states])
        assert np.ptp(probs, axis=0).max() <= 1e-13

    def test_cross_block_coherence_removed(self):
        psi = straddle_state(3)
        rho0 = np.outer(psi, psi.conj())
        rec = evolve_zeno_limit(rho0, CHAIN, RES3, t=2.0, samples=10)
        p1, p2 = RES3.projectors
        for s in rec.states:
            assert frobenius(p1 @ s @ p2) <= 1e-13

    def test_zero_time_is_pinch(self):
        psi = straddle_state(3)
        rho0 = np.outer(psi, psi.conj())
        rec = evolve_zeno_limit(rho0, CHAIN, RES3, t=0.0)
        assert len(rec) == 1
        assert frobenius(rec.final_state - pinch(rho0, RES3)) <= 1e-14

    def test_matches_zeno_hamiltonian_propagator(self):
        # pure sector-1 state: limit dynamics = exp(-i H_Z t) on that block
        rho0 = np.diag([1.0, 0.0, 0.0]).astype(complex)
        t = 1.1
        rec = evolve_zeno_limit(rho0, CHAIN, RES3, t=t, samples=2)
        u_z = propagator(zeno_hamiltonian(CHAIN, RES3), t)
        expect = u_z @ rho0 @ dagger(u_z)
        assert frobenius(rec.final_state - expect) <= 1e-12


class TestAsymptoticPropagators:
    def test_kicked_asymptotic_close_at_large_n(self):
        h = np.zeros((4, 4), dtype=complex)
        h[0, 1] = h[1, 0] = 1.0
        h[1, 2] = h[2, 1] = 1.0
        lam2 = 1.0
        uk = np.zeros((4, 4), dtype=complex)
        uk[0, 0] = uk[1, 1] = 1.0
        uk[2, 2] = uk[3, 3] = np.cos(lam2)
        uk[2, 3] = uk[3, 2] = -1j * np.sin(lam2)
        from zenosim.spectral import projections_of_unitary
        res = projections_of_unitary(uk)
        n = 1024
        exact = kicked_propagator(h, uk, 1.0, n)
        asym = asymptotic_kicked_propagator(h, res, 1.0, n)
        assert opnorm(exact - asym) <= 0.02
        assert opnorm(dagger(asym) @ asym - np.eye(4)) <= 1e-12

    def test_continuous_asymptotic_close_at_large_k(self):
        h = np.zeros((4, 4), dtype=complex)
        h[0, 1] = h[1, 0] = 1.0
        h[1, 2] = h[2, 1] = 1.0
        h_c = np.zeros((4, 4), dtype=complex)
        h_c[2, 3] = h_c[3, 2] = 1.0
        from zenosim.spectral import projections_of_hermitian
        res = projections_of_hermitian(h_c)
        k = 1024.0
        exact = continuous_propagator(h, h_c, k, 1.0)
        asym = asymptotic_continuous_propagator(h, res, 1.0, k)
        assert opnorm(exact - asym) <= 0.02
        assert opnorm(dagger(asym) @ asym - np.eye(4)) <= 1e-12


class TestExtractedLimits:
    def test_single_kick_extraction_is_free_evolution(self):
        rng = np.random.default_rng(17)
        uk = random_unitary(rng, 3)
        v = extracted_kick_limit(CHAIN, uk, t=0.8, n=1)
        assert frobenius(v - propagator(CHAIN, 0.8)) <= 1e-12

    def test_commuting_kick_extraction_exact(self):
        # H already block diagonal for the kick: no transient at any N
        h = np.diag([0.3, 0.3, -0.2]).astype(complex)
        h[0, 1] = h[1, 0] = 1.0
        uk = np.diag([1.0, 1.0, np.exp(-1j)]).astype(complex)
        for n in (1, 5, 64):
            v = extracted_kick_limit(h, uk, t=1.0, n=n)
            assert frobenius(v - propagator(h, 1.0)) <= 1e-11

    def test_kick_extraction_ignores_global_phase(self):
        # (e^{i theta} U)† cancels against (e^{i theta} U) cycle by cycle
        rng = np.random.default_rng(31)
        uk = random_unitary(rng, 3)
        a = extracted_kick_limit(CHAIN, uk, t=1.0, n=16)
        b = extracted_kick_limit(CHAIN, np.exp(1j * 0.7) * uk, t=1.0, n=16)
        assert frobenius(a - b) <= 1e-12

    def test_kick_extraction_converges(self):
        uk = np.diag([1.0, 1.0, np.exp(-1j)]).astype(complex)
        from zenosim.spectral import projections_of_unitary
        res = projections_of_unitary(uk)
        target = propagator(zeno_hamiltonian(CHAIN, res), 1.0)
        d64 = opnorm(extracted_kick_limit(CHAIN, uk, 1.0, 64) - target)
        d256 = opnorm(extracted_kick_limit(CHAIN, uk, 1.0, 256) - target)
        assert d256 < d64 / 2

    def test_zero_coupling_extraction_is_free_evolution(self):
        h_c = np.diag([0.0, 0.0, 1.0]).astype(complex)
        v = extracted_continuous_limit(CHAIN, h_c, t=0.8, coupling=0.0)
        assert frobenius(v - propagator(CHAIN, 0.8)) <= 1e-12

    def test_commuting_coupling_extraction_exact(self):
        h = np.diag([0.3, 0.3, -0.2]).astype(complex)
        h[0, 1] = h[1, 0] = 1.0
        h_c = np.diag([0.0, 0.0, 1.0]).astype(complex)
        for k in (0.0, 3.0, 50.0):
            v = extracted_continuous_limit(h, h_c, t=1.0, coupling=k)
            assert frobenius(v - propagator(h, 1.0)) <= 1e-11

    def test_continuous_extraction_converges(self):
        h_c = np.diag([0.0, 0.0, 1.0]).astype(complex)
        from zenosim.spectral import projections_of_hermitian
        res = projections_of_hermitian(h_c)
        target = propagator(zeno_hamiltonian(CHAIN, res), 1.0)
        d64 = opnorm(extracted_continuous_limit(CHAIN, h_c, 1.0, 64.0) - target)
        d256 = opnorm(extracted_continuous_limit(CHAIN, h_c, 1.0, 256.0) - target)
        assert d256 < d64 / 2


class TestProjectiveSurvival:
    RES2 = ResolutionOfIdentity.from_projectors(
        [np.diag([1.0, 0.0]).astype(complex),
         np.diag([0.0, 1.0]).astype(complex)], [1.0, 2.0])
    H2 = np.array([[0, 1], [1, 0]], dtype=complex)  # Omega = 1

    def test_closed_form(self):
        for n in (1, 2, 10, 100):
            s = projective_survival(basis_state(2, 0), self.H2, self.RES2,
                                    sector=0, t=1.0, n=n)
            assert abs(s - np.cos(1.0 / n) ** (2 * n)) <= 1e-12

    def test_survival_below_nonselective_population(self):
        # histories that leave and return count toward the population only
        n = 2
        s = projective_survival(basis_state(2, 0), self.H2, self.RES2,
                                sector=0, t=1.0, n=n)
        rho0 = np.diag([1.0, 0.0]).astype(complex)
        rec = evolve_projective(rho0, self.H2, self.RES2, t=1.0, n=n)
        pop = sector_probs(rec.final_state, self.RES2)[0]
        c2, s2 = np.cos(0.5) ** 2, np.sin(0.5) ** 2
        assert abs(pop - (c2 ** 2 + s2 ** 2)) <= 1e-12
        assert s < pop

    def test_density_matches_vector(self):
        psi = basis_state(2, 0)
        rho = np.outer(psi, psi.conj())
        a = projective_survival(psi, self.H2, self.RES2, 0, t=1.0, n=7)
        b = projective_survival(rho, self.H2, self.RES2, 0, t=1.0, n=7)
        assert abs(a - b) <= 1e-13

    def test_sector_bounds(self):
        with pytest.raises(IndexOutOfRange):
            projective_survival(basis_state(2, 0), self.H2, self.RES2,
                                sector=2, t=1.0, n=2)

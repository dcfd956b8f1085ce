import math

import numpy as np
import pytest

from metroscope import (
    SymmetricState,
    angular_momentum,
    beam_splitter,
    classical_fi,
    mz_fi,
    mz_fi_scan,
    mz_povm,
    mz_probabilities,
    qfi,
)
from metroscope.interferometer import default_phi_grid
from conftest import random_mixed_sym, random_pure_sym

SAFE_GRID = (np.arange(64) + 0.5) * (2 * np.pi / 64)  # avoids the degenerate 0, pi


class TestMzPovm:
    def test_completeness(self):
        for N in (1, 6, 25):
            povm = mz_povm(N)
            total = sum(povm.elements)
            assert np.abs(total - np.eye(N + 1)).max() < 1e-10

    def test_rank_one_projectors(self):
        povm = mz_povm(5)
        for el in povm.elements:
            evals = np.sort(np.linalg.eigvalsh(el))[::-1]
            assert abs(evals[0] - 1.0) < 1e-10
            assert np.abs(evals[1:]).max() < 1e-10

    def test_single_particle_projects_on_jy_eigenvector(self):
        povm = mz_povm(1)
        Jy = angular_momentum("y", 1).matrix
        evals, evecs = np.linalg.eigh(Jy)
        down = evecs[:, 0]  # eigenvalue -1/2 of the sigma_y-type generator
        want = np.outer(down, down.conj())
        np.testing.assert_allclose(povm.elements[0], want, atol=1e-12)


class TestMzProbabilities:
    def test_zero_phase_counts_directly(self):
        for n in (0, 2, 5):
            p = mz_probabilities(SymmetricState.dicke(5, n), 0.0)
            want = np.zeros(6)
            want[n] = 1.0
            np.testing.assert_allclose(p, want, atol=1e-12)

    def test_polarized_input_is_binomial(self):
        N, phi = 9, 1.13
        p = mz_probabilities(SymmetricState.dicke(N, 0), phi)
        n = np.arange(N + 1)
        want = np.array([
            math.comb(N, k) * math.cos(phi / 2) ** (2 * (N - k))
            * math.sin(phi / 2) ** (2 * k)
            for k in n
        ])
        np.testing.assert_allclose(p, want, atol=1e-13)

    def test_normalized_for_random_inputs(self, rng):
        for _ in range(5):
            state = random_pure_sym(11, rng)
            phi = rng.uniform(0, 2 * np.pi)
            p = mz_probabilities(state, phi)
            assert p.min() >= 0.0
            assert p.sum() == pytest.approx(1.0, abs=1e-10)

    def test_two_evaluation_paths_agree(self, rng):
        # modal path: POVM {B^† D_n B} on the J_z-evolved state after the
        # input beam splitter; must equal the bare-Dicke J_y-evolution path
        N = 8
        B = beam_splitter(N)
        Jz = angular_momentum("z", N)
        povm = mz_povm(N)
        for _ in range(5):
            state = random_mixed_sym(N, rng, rank=3)
            phi = rng.uniform(0, 2 * np.pi)
            inside = SymmetricState.from_density(
                N, B.conj().T @ state.density_matrix() @ B
            )
            got = mz_fi(state, phi)
            via_povm = classical_fi(povm, inside, Jz, phi)
            assert got == pytest.approx(via_povm, rel=1e-10, abs=1e-10)


class TestMzFi:
    def test_polarized_input_reaches_shot_noise(self):
        N = 12
        for phi in (0.3, 1.0, 2.2):
            assert mz_fi(SymmetricState.dicke(N, 0), phi) == pytest.approx(N, rel=1e-10)

    def test_single_qubit_unit_information(self):
        for phi in (0.1, 0.9, 2.7):
            assert mz_fi(SymmetricState.dicke(1, 0), phi) == pytest.approx(1.0)

    def test_bounded_by_probe_family_qfi(self, rng):
        N = 9
        Jy = angular_momentum("y", N)
        for _ in range(10):
            state = random_mixed_sym(N, rng, rank=2)
            phi = rng.uniform(0, 2 * np.pi)
            assert mz_fi(state, phi) <= qfi(state, Jy) + 1e-9


class TestMzScan:
    def test_single_point(self, rng):
        state = random_pure_sym(6, rng)
        scan = mz_fi_scan(state, [0.4])
        assert scan.min == scan.max == pytest.approx(mz_fi(state, 0.4))

    def test_polarized_is_flat(self):
        N = 10
        scan = mz_fi_scan(SymmetricState.dicke(N, 0), SAFE_GRID)
        assert scan.min == pytest.approx(N, rel=1e-9)
        assert scan.max == pytest.approx(N, rel=1e-9)

    def test_default_grid(self):
        grid = default_phi_grid()
        assert grid.size == 128
        assert grid[0] == 0.0
        assert grid[-1] < 2 * np.pi

    @pytest.mark.slow
    def test_random_states_keep_heisenberg_floor(self):
        # min over phi >= 0.05 N^2 for >= 95% of sampled states at N = 60
        N, wanted = 60, 0.05 * 60 ** 2
        grid = (np.arange(64) + 0.5) * (2 * np.pi / 64)
        good = 0
        trials = 200
        gen = np.random.default_rng(1414)
        for _ in range(trials):
            state = random_pure_sym(N, gen)
            if mz_fi_scan(state, grid).min >= wanted:
                good += 1
        assert good >= 0.95 * trials


class TestPhiAverageInvariance:
    def test_means_agree_across_phases(self):
        # E_U FI(U psi U^†, phi) cannot depend on phi
        N, n_samples = 30, 200
        gen = np.random.default_rng(7)
        means, ses = [], []
        for phi in (0.0, np.pi / 3, np.pi / 2):
            vals = []
            gen_phi = np.random.default_rng(7)  # same states at every phi
            for _ in range(n_samples):
                vals.append(mz_fi(random_pure_sym(N, gen_phi), phi))
            means.append(np.mean(vals))
            ses.append(np.std(vals, ddof=1) / math.sqrt(n_samples))
        for (m1, s1), (m2, s2) in zip(zip(means, ses), list(zip(means, ses))[1:]):
            assert abs(m1 - m2) <= 3.0 * math.hypot(s1, s2)

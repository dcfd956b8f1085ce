import numpy as np
import pytest

from metroscope import (
    LocalHamiltonian,
    SymmetricState,
    angular_momentum,
    beam_splitter,
    collective_full,
    collective_sym,
    dicke_basis,
    dicke_embed,
    expm_hermitian,
    sym_dim,
    sym_power_lift,
)
from conftest import random_traceless_h

H_Z = LocalHamiltonian(np.diag([-0.5, 0.5]))
SIGMA_Z_HALF = LocalHamiltonian(np.diag([0.5, -0.5]))


class TestLocalHamiltonian:
    def test_trace_removed_and_recorded(self):
        h = LocalHamiltonian(np.diag([2.0, 1.0]))
        assert h.trace_shift == pytest.approx(1.5)
        assert abs(np.trace(h.matrix)) < 1e-14
        np.testing.assert_allclose(h.matrix, np.diag([0.5, -0.5]), atol=1e-15)

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            LocalHamiltonian(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_cached_eigen(self, rng):
        h = random_traceless_h(3, rng)
        np.testing.assert_allclose(
            (h.eigenvectors * h.eigenvalues) @ h.eigenvectors.conj().T, h.matrix,
            atol=1e-12,
        )


class TestCollectiveSym:
    def test_jz_is_diagonal_dicke_index(self):
        for N in (1, 4, 9):
            H = collective_sym(H_Z, N)
            np.testing.assert_allclose(
                H.matrix, np.diag(np.arange(N + 1) - N / 2), atol=1e-13
            )

    def test_trace_zero(self, rng):
        for N, d in ((6, 2), (4, 3)):
            H = collective_sym(random_traceless_h(d, rng), N)
            assert abs(np.trace(H.matrix)) < 1e-10

    @pytest.mark.parametrize("N,d", [(10, 2), (8, 3), (6, 4)])
    def test_symmetric_trace_identity(self, N, d, rng):
        h = random_traceless_h(d, rng)
        H = collective_sym(h, N)
        got = np.trace(H.matrix @ H.matrix).real
        want = N * (N + d) * h.tr_h2 * sym_dim(N, d) / (d * (d + 1))
        assert abs(got - want) < 1e-10 * abs(want)

    @pytest.mark.parametrize("d", [2, 3])
    def test_spectrum_is_occupation_dot_eigenvalues(self, d, rng):
        N = 5
        h = random_traceless_h(d, rng)
        H = collective_sym(h, N)
        got = np.sort(np.linalg.eigvalsh(H.matrix))
        want = np.sort([
            np.dot(k, h.eigenvalues) for k in dicke_basis(N, d).occupations
        ])
        np.testing.assert_allclose(got, want, atol=1e-10)


class TestCollectiveFull:
    def test_single_particle_is_h(self, rng):
        h = random_traceless_h(2, rng)
        np.testing.assert_allclose(collective_full(h, 1).matrix, h.matrix, atol=1e-15)

    def test_trace_of_square(self, rng):
        for N, d in ((5, 2), (3, 3)):
            h = random_traceless_h(d, rng)
            H = collective_full(h, N)
            got = np.trace(H.matrix @ H.matrix).real
            assert got == pytest.approx(N * h.tr_h2 * d ** (N - 1), rel=1e-12)

    @pytest.mark.parametrize("N", [2, 4, 6])
    def test_restriction_matches_collective_sym(self, N, rng):
        h = random_traceless_h(2, rng)
        Hf = collective_full(h, N)
        Hs = collective_sym(h, N)
        for n in range(N + 1):
            col = dicke_embed(SymmetricState.dicke(N, n)).amplitudes
            image = Hf.matrix @ col
            # H preserves S_N, so project the image back without loss
            back = np.array([
                np.vdot(dicke_embed(SymmetricState.dicke(N, k)).amplitudes, image)
                for k in range(N + 1)
            ])
            np.testing.assert_allclose(back, Hs.matrix[:, n], atol=1e-12)


class TestAngularMomentum:
    def test_su2_commutator(self):
        N = 7
        Jx, Jy, Jz = (angular_momentum(a, N).matrix for a in "xyz")
        assert np.abs(Jx @ Jy - Jy @ Jx - 1j * Jz).max() < 1e-10

    def test_casimir(self):
        N = 9
        Jx, Jy, Jz = (angular_momentum(a, N).matrix for a in "xyz")
        want = (N / 2) * (N / 2 + 1) * np.eye(N + 1)
        assert np.abs(Jx @ Jx + Jy @ Jy + Jz @ Jz - want).max() < 1e-10

    def test_jz_diagonal(self):
        N = 6
        np.testing.assert_allclose(
            angular_momentum("z", N).matrix, np.diag(np.arange(N + 1) - N / 2),
            atol=1e-13,
        )


class TestBeamSplitter:
    def test_unitary(self):
        for N in (1, 5, 40):
            B = beam_splitter(N)
            assert np.abs(B.conj().T @ B - np.eye(N + 1)).max() < 1e-12

    def test_conjugation_identity(self, rng):
        N = 8
        B = beam_splitter(N)
        Jz = angular_momentum("z", N).matrix
        Jy = angular_momentum("y", N).matrix
        for phi in rng.uniform(0, 2 * np.pi, size=3):
            lhs = B @ expm_hermitian(Jz, -1j * phi) @ B.conj().T
            rhs = expm_hermitian(Jy, 1j * phi)
            assert np.abs(lhs - rhs).max() < 1e-10

    def test_single_particle_matches_lift(self):
        # B(N) is the lift of its one-particle restriction exp(-i pi jx / 4)
        one = beam_splitter(1)
        np.testing.assert_allclose(beam_splitter(4), sym_power_lift(one, 4), atol=1e-12)
        sx_half = np.array([[0.0, 0.5], [0.5, 0.0]])
        np.testing.assert_allclose(one, expm_hermitian(sx_half, -1j * np.pi / 2), atol=1e-13)

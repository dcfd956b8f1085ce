import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from metroscope import (
    FullState,
    SymmetricState,
    SymmetryLeakageError,
    dicke_basis,
    dicke_embed,
    dicke_project,
    haar_unitary,
    sym_dim,
    sym_power_lift,
)
from conftest import random_pure_sym


def kron_power(V, N):
    out = np.array([[1.0 + 0j]])
    for _ in range(N):
        out = np.kron(out, V)
    return out


class TestSymDim:
    def test_two_qubit_triplet(self):
        assert sym_dim(2, 2) == 3

    def test_three_bosons_three_modes(self):
        # C(5, 3) by hand: 5!/3!2! = 10
        assert sym_dim(3, 3) == 10

    def test_single_mode(self):
        for N in (0, 1, 7, 100):
            assert sym_dim(N, 1) == 1

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            sym_dim(-1, 2)
        with pytest.raises(ValueError):
            sym_dim(3, 0)

    def test_large_arguments_exact(self):
        assert sym_dim(1000, 2) == 1001
        assert sym_dim(100, 4) == math.comb(103, 100)


class TestDickeBasis:
    def test_dimension_matches_binomial(self):
        for N, d in ((5, 2), (4, 3), (3, 5)):
            b = dicke_basis(N, d)
            assert b.dim == math.comb(N + d - 1, N)
            assert len(b.occupations) == b.dim

    def test_index_round_trip(self):
        b = dicke_basis(4, 3)
        seen = set()
        for pos, occ in enumerate(b.occupations):
            assert sum(occ) == 4
            assert b.index(occ) == pos
            seen.add(occ)
        assert len(seen) == b.dim

    def test_two_mode_ordering(self):
        # position n holds n particles in the second basis state (mode a)
        b = dicke_basis(3, 2)
        assert b.occupations == ((3, 0), (2, 1), (1, 2), (0, 3))


class TestEmbedProject:
    def test_d0_is_all_zeros_string(self):
        full = dicke_embed(SymmetricState.dicke(2, 0))
        np.testing.assert_allclose(full.amplitudes, [1, 0, 0, 0], atol=1e-15)

    def test_d1_is_uniform_weight_one(self):
        full = dicke_embed(SymmetricState.dicke(2, 1))
        np.testing.assert_allclose(
            full.amplitudes, [0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0], atol=1e-15
        )

    def test_round_trip(self, rng):
        for N in (1, 3, 6):
            state = random_pure_sym(N, rng)
            back = dicke_project(dicke_embed(state))
            np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-12)

    def test_project_inverts_embed_on_basis(self):
        got = dicke_project(FullState(2, 2, amplitudes=np.array([0, 1, 1, 0]) / math.sqrt(2)))
        np.testing.assert_allclose(got.amplitudes, [0, 1, 0], atol=1e-14)

    def test_antisymmetric_state_rejected(self):
        singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
        with pytest.raises(SymmetryLeakageError) as err:
            dicke_project(FullState(2, 2, amplitudes=singlet))
        assert err.value.leakage > 0.99

    def test_all_zeros_string_projects_to_d0(self):
        got = dicke_project(FullState(2, 2, amplitudes=np.array([1, 0, 0, 0])))
        np.testing.assert_allclose(got.amplitudes, [1, 0, 0], atol=1e-15)

    def test_density_round_trip(self, rng):
        state = random_pure_sym(4, rng)
        rho = SymmetricState.from_density(4, state.density_matrix())
        back = dicke_project(dicke_embed(rho))
        np.testing.assert_allclose(back.density, rho.density, atol=1e-12)

    def test_embed_is_isometry(self, rng):
        for N in (3, 10):
            for _ in range(5):
                a = random_pure_sym(N, rng)
                b = random_pure_sym(N, rng)
                inner_sym = np.vdot(a.amplitudes, b.amplitudes)
                inner_full = np.vdot(dicke_embed(a).amplitudes, dicke_embed(b).amplitudes)
                assert abs(inner_sym - inner_full) < 1e-12


class TestSymPowerLift:
    def test_identity(self):
        np.testing.assert_allclose(sym_power_lift(np.eye(2), 7), np.eye(8), atol=1e-14)

    def test_diagonal_phases(self):
        # exp(-i theta sigma_z / 2) lifts to diag(e^{i theta (n - N/2)}):
        # |D_n> has N-n qubits |0> (phase e^{-i theta/2} each) and n qubits |1>
        theta, N = 0.83, 9
        V = np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
        got = sym_power_lift(V, N)
        n = np.arange(N + 1)
        np.testing.assert_allclose(got, np.diag(np.exp(1j * theta * (n - N / 2))), atol=1e-13)

    @pytest.mark.parametrize("N", [1, 2, 4, 6])
    def test_matches_tensor_product_oracle(self, N, rng):
        V = haar_unitary(2, rng)
        lift = sym_power_lift(V, N)
        W = kron_power(V, N)
        for n in range(N + 1):
            image = W @ dicke_embed(SymmetricState.dicke(N, n)).amplitudes
            col = dicke_project(FullState(N, 2, amplitudes=image)).amplitudes
            np.testing.assert_allclose(lift[:, n], col, atol=1e-12)

    def test_unitary_for_random_inputs(self, rng):
        for N in (3, 25, 120):
            U = sym_power_lift(haar_unitary(2, rng), N)
            assert np.abs(U.conj().T @ U - np.eye(N + 1)).max() < 1e-12

    @pytest.mark.slow
    def test_unitary_at_n_1000(self):
        V = np.array([[1.0, 2.0j], [2.0j, 1.0]]) / math.sqrt(5.0)
        U = sym_power_lift(V, 1000)
        assert np.abs(U.conj().T @ U - np.eye(1001)).max() < 1e-12

    def test_homomorphism(self, rng):
        for N in (2, 9, 20):
            V, W = haar_unitary(2, rng), haar_unitary(2, rng)
            lhs = sym_power_lift(V @ W, N)
            rhs = sym_power_lift(V, N) @ sym_power_lift(W, N)
            assert np.abs(lhs - rhs).max() < 1e-10

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError):
            sym_power_lift(np.array([[1.0, 0.1], [0.0, 1.0]]), 3)


class TestStateContainers:
    def test_pure_norm_enforced(self):
        with pytest.raises(ValueError):
            SymmetricState.pure(2, np.array([1.0, 1.0, 0.0]))

    def test_density_checks(self):
        bad = np.array([[0.6, 0.5], [0.5, 0.4]]) * 2  # trace 2
        with pytest.raises(ValueError):
            SymmetricState.from_density(1, bad)
        not_psd = np.array([[1.2, 0.0], [0.0, -0.2]])
        with pytest.raises(ValueError):
            SymmetricState.from_density(1, not_psd)

    def test_full_state_capacity(self):
        with pytest.raises(Exception, match="cap"):
            FullState(13, 2, amplitudes=np.zeros(2 ** 13))

    def test_payloads_are_immutable(self, rng):
        state = random_pure_sym(3, rng)
        with pytest.raises(ValueError):
            state.amplitudes[0] = 1.0


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=40), st.integers(min_value=1, max_value=6))
def test_sym_dim_recurrence(N, d):
    # Pascal-style identity: |S_N(d)| = |S_N(d-1)| + |S_{N-1}(d)|
    if d > 1 and N > 0:
        assert sym_dim(N, d) == sym_dim(N, d - 1) + sym_dim(N - 1, d)

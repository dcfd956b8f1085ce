import numpy as np
import pytest

from metroscope import SymmetricState


def random_pure_sym(N, rng, d=2):
    from metroscope import dicke_basis, sym_dim

    v = rng.standard_normal(sym_dim(N, d)) + 1j * rng.standard_normal(sym_dim(N, d))
    v /= np.linalg.norm(v)
    return SymmetricState(dicke_basis(N, d), amplitudes=v)


def random_mixed_sym(N, rng, rank=None, d=2):
    from metroscope import dicke_basis, sym_dim

    dim = sym_dim(N, d)
    rank = rank or dim
    G = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = G @ G.conj().T
    rho /= np.trace(rho).real
    return SymmetricState(dicke_basis(N, d), density=rho)


def random_traceless_h(d, rng):
    from metroscope import LocalHamiltonian

    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return LocalHamiltonian(g + g.conj().T)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)

"""Local generators, collective Hamiltonians on full/symmetric spaces,
two-mode angular momentum operators, and the balanced beam splitter.

Sign conventions follow the package-wide Dicke indexing (see dicke.py):
``J_z = (n_a - n_b)/2 = diag(n - N/2)`` on ``|D_n> = |n, N-n>``, which in the
qubit picture is the collective lift of ``diag(-1/2, +1/2)``.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .dicke import CapacityError, FULL_SPACE_CAP, dicke_basis

__all__ = [
    "LocalHamiltonian",
    "CollectiveHamiltonian",
    "collective_sym",
    "collective_full",
    "angular_momentum",
    "beam_splitter",
    "expm_hermitian",
]


@dataclass(frozen=True)
class LocalHamiltonian:
    """Traceless Hermitian d x d generator; any input trace is removed and recorded."""

    matrix: np.ndarray
    trace_shift: float = field(init=False)
    eigenvalues: np.ndarray = field(init=False)
    eigenvectors: np.ndarray = field(init=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("local Hamiltonian must be a square matrix")
        if np.abs(m - m.conj().T).max() > 1e-12:
            raise ValueError("local Hamiltonian is not Hermitian to 1e-12")
        shift = np.trace(m).real / m.shape[0]
        m = m - shift * np.eye(m.shape[0])
        m.setflags(write=False)
        evals, evecs = np.linalg.eigh(m)
        evals.setflags(write=False)
        evecs.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "trace_shift", float(shift))
        object.__setattr__(self, "eigenvalues", evals)
        object.__setattr__(self, "eigenvectors", evecs)

    @property
    def d(self):
        return self.matrix.shape[0]

    @property
    def tr_h2(self):
        """tr(h^2) of the traceless part."""
        return float(np.sum(self.eigenvalues ** 2))

    @property
    def op_norm(self):
        return float(np.abs(self.eigenvalues).max())


@dataclass(frozen=True)
class CollectiveHamiltonian:
    """Sum of one local generator per particle, on the full or symmetric space."""

    space: str  # "full" | "symmetric"
    N: int
    d: int
    matrix: np.ndarray
    local: LocalHamiltonian = None

    def __post_init__(self):
        if self.space not in ("full", "symmetric"):
            raise ValueError(f"unknown space tag {self.space!r}")
        m = np.array(self.matrix, dtype=complex)
        if np.abs(m - m.conj().T).max() > 1e-12:
            raise ValueError("collective Hamiltonian is not Hermitian to 1e-12")
        if abs(np.trace(m)) > 1e-10 * max(1.0, np.abs(m).max()):
            raise ValueError("collective Hamiltonian is not traceless to 1e-10")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def op_norm(self):
        if self.local is not None:
            return self.N * self.local.op_norm
        return float(np.abs(np.linalg.eigvalsh(self.matrix)).max())


def collective_sym(h: LocalHamiltonian, N: int) -> CollectiveHamiltonian:
    """H_N restricted to S_N, built second-quantized: sum_{uv} h_uv a†_u a_v.

    The spectrum is {k . lambda : |k| = N} over occupation vectors k of h's
    eigenbasis; the matrix is expressed in the canonical occupation basis.
    """
    basis = dicke_basis(N, h.d)
    dim = basis.dim
    H = np.zeros((dim, dim), dtype=complex)
    hm = h.matrix
    for i, k in enumerate(basis.occupations):
        diag = 0.0
        for mu in range(h.d):
            diag += hm[mu, mu].real * k[mu]
            for nu in range(h.d):
                if mu == nu or k[nu] == 0:
                    continue
                kk = list(k)
                kk[nu] -= 1
                kk[mu] += 1
                j = basis.index(tuple(kk))
                H[j, i] += hm[mu, nu] * np.sqrt(k[nu] * (k[mu] + 1))
        H[i, i] += diag
    return CollectiveHamiltonian("symmetric", N, h.d, H, local=h)


def collective_full(h: LocalHamiltonian, N: int) -> CollectiveHamiltonian:
    """Dense sum_j h^(j) on (C^d)^(x N)."""
    d = h.d
    if d ** N > FULL_SPACE_CAP:
        raise CapacityError(f"full space d^N = {d ** N} exceeds cap {FULL_SPACE_CAP}")
    D = d ** N
    H = np.zeros((D, D), dtype=complex)
    for j in range(N):
        left = d ** j
        right = d ** (N - 1 - j)
        term = np.kron(np.kron(np.eye(left), h.matrix), np.eye(right))
        H += term
    return CollectiveHamiltonian("full", N, d, H, local=h)


def apply_collective_full(h: LocalHamiltonian, psi: np.ndarray, N: int) -> np.ndarray:
    """(sum_j h^(j)) |psi> without forming the dense matrix."""
    d = h.d
    out = np.zeros_like(psi, dtype=complex)
    for j in range(N):
        t = psi.reshape(d ** j, d, d ** (N - 1 - j))
        out += np.einsum("ab,ibj->iaj", h.matrix, t).reshape(psi.shape)
    return out


# local generators of the two-mode angular momentum algebra; mode a = qubit |1>
_LOCAL_J = {
    "x": np.array([[0.0, 0.5], [0.5, 0.0]], dtype=complex),
    "y": np.array([[0.0, 0.5j], [-0.5j, 0.0]], dtype=complex),
    "z": np.array([[-0.5, 0.0], [0.0, 0.5]], dtype=complex),
}


@lru_cache(maxsize=None)
def angular_momentum(axis: str, N: int) -> CollectiveHamiltonian:
    """Collective J_x, J_y or J_z on S_N for d = 2; J_z = diag(n - N/2)."""
    if axis not in _LOCAL_J:
        raise ValueError(f"axis must be one of x, y, z, got {axis!r}")
    return collective_sym(LocalHamiltonian(_LOCAL_J[axis]), N)


def expm_hermitian(H: np.ndarray, t: complex = -1j) -> np.ndarray:
    """exp(t H) for Hermitian H via eigendecomposition (exact up to roundoff)."""
    evals, evecs = np.linalg.eigh(H)
    return (evecs * np.exp(t * evals)) @ evecs.conj().T


@lru_cache(maxsize=None)
def beam_splitter(N: int) -> np.ndarray:
    """Balanced beam splitter exp(-i pi J_x / 2) on S_N."""
    Jx = angular_momentum("x", N).matrix
    B = expm_hermitian(Jx, t=-1j * np.pi / 2)
    B.setflags(write=False)
    return B

"""Symmetric (bosonic) subspaces: generalized Dicke indexing, state containers,
qubit-picture conversion, and symmetric-power lifting of 2x2 unitaries.

Conventions used throughout the package (d = 2):

* The Dicke basis of N two-mode bosons is ``|D_n^N> = |n, N-n>`` with
  ``n = 0..N`` counting photons in mode a.
* In the qubit picture mode a is qubit state ``|1>``, so ``|D_n^N>`` is the
  normalized sum of the computational strings of Hamming weight n, and a
  symmetric state ``sum_n alpha_n |D_n>`` has string coefficients
  ``c_x = alpha_{|x|} / sqrt(C(N, |x|))``.
* Occupation vectors k list particle counts per single-particle basis state,
  so ``|D_n>`` has k = (N-n, n).
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from ._kernels import sym_power

__all__ = [
    "CapacityError",
    "SymmetryLeakageError",
    "DickeBasis",
    "SymmetricState",
    "FullState",
    "sym_dim",
    "dicke_basis",
    "dicke_embed",
    "dicke_project",
    "sym_power_lift",
    "binom",
    "log_binom",
    "log_binom_row",
]

#: largest full tensor-product space handled by the qubit-picture helpers
FULL_SPACE_CAP = 4096


class CapacityError(ValueError):
    """The requested full tensor-product space exceeds the supported size."""


class SymmetryLeakageError(ValueError):
    """A full-space state has support outside the symmetric subspace."""

    def __init__(self, leakage, tol):
        self.leakage = leakage
        self.tol = tol
        super().__init__(
            f"state leaks {leakage:.3e} of its weight outside the symmetric "
            f"subspace (tolerance {tol:.1e})"
        )


def sym_dim(N, d):
    """Dimension C(N+d-1, N) of the symmetric subspace of N d-mode bosons."""
    if N < 0 or d < 1:
        raise ValueError(f"need N >= 0 and d >= 1, got N={N}, d={d}")
    return math.comb(N + d - 1, N)


def binom(n, k):
    """Binomial coefficient as a float; exact integer arithmetic underneath."""
    if k < 0 or k > n:
        return 0.0
    return float(math.comb(n, k))


def log_binom(n, k):
    """log C(n, k) via log-gamma; safe far beyond float overflow."""
    if k < 0 or k > n:
        return -np.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_binom_row(n):
    """Array of log C(n, k) for k = 0..n."""
    k = np.arange(n + 1, dtype=np.float64)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _compositions(total, parts):
    """Weak compositions of ``total`` into ``parts`` parts, first part descending.

    For d = 2 this enumerates (N, 0), (N-1, 1), ..., (0, N), i.e. position n
    holds n particles in the second basis state (mode a).
    """
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class DickeBasis:
    """Indexing of the generalized Dicke basis of N bosons in d modes."""

    N: int
    d: int
    dim: int = field(init=False)
    occupations: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", sym_dim(self.N, self.d))
        occ = tuple(_compositions(self.N, self.d))
        object.__setattr__(self, "occupations", occ)
        object.__setattr__(self, "_index", {k: i for i, k in enumerate(occ)})

    def index(self, occupation):
        return self._index[tuple(occupation)]

    def occupation(self, position):
        return self.occupations[position]


@lru_cache(maxsize=None)
def dicke_basis(N, d=2):
    return DickeBasis(N, d)


def _freeze(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def _check_density(rho, dim, what, atol_eig=1e-12, atol_tr=1e-12):
    if rho.shape != (dim, dim):
        raise ValueError(f"{what} density matrix must be {dim}x{dim}, got {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=1e-12, rtol=0.0):
        raise ValueError(f"{what} density matrix is not Hermitian to 1e-12")
    if abs(np.trace(rho).real - 1.0) > atol_tr or abs(np.trace(rho).imag) > atol_tr:
        raise ValueError(f"{what} density matrix trace {np.trace(rho)} is not 1")
    evals = np.linalg.eigvalsh(rho)
    if evals.min() < -1e-12:
        raise ValueError(
            f"{what} density matrix has negative eigenvalue {evals.min():.3e}"
        )


@dataclass(frozen=True)
class SymmetricState:
    """Pure amplitudes or a density matrix over the generalized Dicke basis."""

    basis: DickeBasis
    amplitudes: np.ndarray = None
    density: np.ndarray = None

    def __post_init__(self):
        if (self.amplitudes is None) == (self.density is None):
            raise ValueError("provide exactly one of amplitudes/density")
        if self.amplitudes is not None:
            amp = _freeze(self.amplitudes)
            if amp.shape != (self.basis.dim,):
                raise ValueError(
                    f"amplitudes must have length {self.basis.dim}, got {amp.shape}"
                )
            if abs(np.linalg.norm(amp) - 1.0) > 1e-12:
                raise ValueError("pure payload is not normalized to 1e-12")
            object.__setattr__(self, "amplitudes", amp)
        else:
            rho = _freeze(self.density)
            _check_density(rho, self.basis.dim, "symmetric")
            object.__setattr__(self, "density", rho)

    @property
    def N(self):
        return self.basis.N

    @property
    def d(self):
        return self.basis.d

    @property
    def dim(self):
        return self.basis.dim

    @property
    def is_pure(self):
        return self.amplitudes is not None

    def density_matrix(self):
        """Density payload, promoting a pure payload to its projector."""
        if self.is_pure:
            return np.outer(self.amplitudes, self.amplitudes.conj())
        return np.asarray(self.density)

    @classmethod
    def pure(cls, N, amplitudes, d=2):
        return cls(dicke_basis(N, d), amplitudes=amplitudes)

    @classmethod
    def from_density(cls, N, density, d=2):
        return cls(dicke_basis(N, d), density=density)

    @classmethod
    def dicke(cls, N, n, d=2):
        """The basis state |D_n^N> (d = 2)."""
        amp = np.zeros(sym_dim(N, d), dtype=complex)
        amp[n] = 1.0
        return cls(dicke_basis(N, d), amplitudes=amp)

    @classmethod
    def ghz(cls, N):
        """(|D_0> + |D_N>)/sqrt(2), the two-mode N00N/GHZ state."""
        amp = np.zeros(N + 1, dtype=complex)
        amp[0] = amp[N] = 1.0 / math.sqrt(2.0)
        return cls(dicke_basis(N, 2), amplitudes=amp)

    @classmethod
    def balanced(cls, N):
        """alpha_n = sqrt(C(N,n)/2^N); the |+>^(x N) product state."""
        lb = log_binom_row(N)
        amp = np.exp(0.5 * (lb - N * math.log(2.0))).astype(complex)
        return cls(dicke_basis(N, 2), amplitudes=amp)


@dataclass(frozen=True)
class FullState:
    """Pure vector or density matrix on the d^N distinguishable-particle space."""

    N: int
    d: int
    amplitudes: np.ndarray = None
    density: np.ndarray = None

    def __post_init__(self):
        if self.d ** self.N > FULL_SPACE_CAP:
            raise CapacityError(
                f"full space d^N = {self.d ** self.N} exceeds cap {FULL_SPACE_CAP}"
            )
        if (self.amplitudes is None) == (self.density is None):
            raise ValueError("provide exactly one of amplitudes/density")
        if self.amplitudes is not None:
            amp = _freeze(self.amplitudes)
            if amp.shape != (self.dim,):
                raise ValueError(f"amplitudes must have length {self.dim}")
            if abs(np.linalg.norm(amp) - 1.0) > 1e-12:
                raise ValueError("pure payload is not normalized to 1e-12")
            object.__setattr__(self, "amplitudes", amp)
        else:
            rho = _freeze(self.density)
            _check_density(rho, self.dim, "full-space")
            object.__setattr__(self, "density", rho)

    @property
    def dim(self):
        return self.d ** self.N

    @property
    def is_pure(self):
        return self.amplitudes is not None

    def density_matrix(self):
        if self.is_pure:
            return np.outer(self.amplitudes, self.amplitudes.conj())
        return np.asarray(self.density)


@lru_cache(maxsize=None)
def _hamming_weights(N):
    """Hamming weight of every N-bit string, most significant bit = qubit 1."""
    return np.array([bin(x).count("1") for x in range(2 ** N)], dtype=np.intp)


@lru_cache(maxsize=None)
def _embedding_matrix(N):
    """Isometry E: S_N -> (C^2)^(x N), column n spreads |D_n> over weight-n strings."""
    w = _hamming_weights(N)
    E = np.zeros((2 ** N, N + 1))
    for n in range(N + 1):
        rows = np.nonzero(w == n)[0]
        E[rows, n] = 1.0 / math.sqrt(len(rows))
    return E


def dicke_embed(state: SymmetricState) -> FullState:
    """Map a two-mode symmetric state into the qubit-picture full space."""
    if state.d != 2:
        raise ValueError("dicke_embed requires d = 2")
    N = state.N
    if 2 ** N > FULL_SPACE_CAP:
        raise CapacityError(f"2^{N} exceeds cap {FULL_SPACE_CAP}")
    E = _embedding_matrix(N)
    if state.is_pure:
        return FullState(N, 2, amplitudes=E @ state.amplitudes)
    return FullState(N, 2, density=E @ state.density @ E.T)


def dicke_project(state: FullState, tol=1e-10) -> SymmetricState:
    """Project a qubit-picture state back onto the Dicke basis.

    Raises SymmetryLeakageError when more than ``tol`` of the state's weight
    lies outside the symmetric subspace.
    """
    if state.d != 2:
        raise ValueError("dicke_project requires d = 2")
    N = state.N
    E = _embedding_matrix(N)
    if state.is_pure:
        alpha = E.T @ state.amplitudes
        leak = abs(float(np.vdot(state.amplitudes, state.amplitudes).real) - float(np.vdot(alpha, alpha).real))
        if leak > tol:
            raise SymmetryLeakageError(leak, tol)
        alpha = alpha / np.linalg.norm(alpha)
        return SymmetricState.pure(N, alpha)
    rho = E.T @ state.density @ E
    leak = abs(np.trace(state.density).real - np.trace(rho).real)
    if leak > tol:
        raise SymmetryLeakageError(leak, tol)
    rho = rho / np.trace(rho).real
    return SymmetricState.from_density(N, rho)


def sym_power_lift(V, N):
    """Matrix of V^(x N) restricted to the symmetric subspace, in the Dicke basis.

    Defined by ``lift(V)|D_n> = dicke_project(V^(x N) dicke_embed(|D_n>))`` and
    computed by the stable particle-append recurrence (see _kernels.sym_power);
    the closed-form binomial expansion cancels catastrophically for N >> 10.
    """
    V = np.asarray(V, dtype=complex)
    if V.shape != (2, 2):
        raise ValueError("sym_power_lift expects a 2x2 matrix")
    if np.abs(V.conj().T @ V - np.eye(2)).max() > 1e-12:
        raise ValueError("sym_power_lift expects a unitary matrix (to 1e-12)")
    if N < 0:
        raise ValueError("N must be nonnegative")
    return sym_power(V[0, 0], V[0, 1], V[1, 0], V[1, 1], N)

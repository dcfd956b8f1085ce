"""Quantum and classical Fisher information, distance measures, the spectrum
functional Lambda, closed-form ensemble averages, and the bounds used by the
experiments.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import svdvals

from ._kernels import qfi_pair_sum, spectrum_pair_sum
from .dicke import FullState, SymmetricState, sym_dim
from .hamiltonians import (
    CollectiveHamiltonian,
    LocalHamiltonian,
    apply_collective_full,
    expm_hermitian,
)

__all__ = [
    "Spectrum",
    "Povm",
    "NonRemovableSingularityError",
    "qfi",
    "classical_fi",
    "fisher_from_probabilities",
    "fidelity_bures",
    "asymmetry_bounds",
    "lambda_of_spectrum",
    "analytic_avg_qfi",
    "loss_avg_bounds",
    "fi_avg_bounds",
    "lu_upper_bound",
    "lu_optimize_qfi",
    "C_MINUS",
    "C_PLUS",
]

# Two-sided bounds on the Haar-average Mach-Zehnder FI, E FI / N^2 in
# [C_MINUS, C_PLUS + 1/N].  C_MINUS comes from the Delta = 6 optimization of
# the lower-bound expression N^2/(6 Delta) - N^2 e^-Delta (2+Delta)/Delta.
C_MINUS = 1.0 / 36.0 - (4.0 / 3.0) * math.exp(-6.0)
C_PLUS = 3.0 / math.e - 5.0 / 6.0


class NonRemovableSingularityError(ArithmeticError):
    """A Fisher-information term has vanishing probability but finite slope."""

    def __init__(self, index, prob, slope):
        self.index = index
        self.prob = prob
        self.slope = slope
        super().__init__(
            f"outcome {index}: probability {prob:.3e} below floor but "
            f"derivative {slope:.3e} is not negligible"
        )


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalue vector of a density matrix: nonnegative, normalized, descending."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("spectrum must be a nonempty 1-d array")
        if p.min() < -1e-10:
            raise ValueError(f"negative probability {p.min():.3e}")
        if abs(p.sum() - 1.0) > 1e-10:
            raise ValueError(f"spectrum sums to {p.sum()!r}, not 1")
        p = np.sort(np.clip(p, 0.0, None))[::-1].copy()
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __len__(self):
        return self.probs.size

    @property
    def is_pure(self):
        return self.probs[0] == 1.0

    @property
    def purity(self):
        return float(np.sum(self.probs ** 2))

    @classmethod
    def pure(cls, D):
        p = np.zeros(D)
        p[0] = 1.0
        return cls(p)

    @classmethod
    def uniform(cls, D):
        return cls(np.full(D, 1.0 / D))

    @classmethod
    def depolarized(cls, D, p):
        """Spectrum (1-p+p/D, p/D, ..., p/D) of (1-p) psi + p 1/D."""
        if not 0.0 <= p <= 1.0:
            raise ValueError("depolarization weight must lie in [0, 1]")
        v = np.full(D, p / D)
        v[0] += 1.0 - p
        return cls(v)


@dataclass(frozen=True)
class Povm:
    """Positive operator-valued measure: PSD elements resolving the identity."""

    elements: tuple

    def __post_init__(self):
        els = tuple(np.array(e, dtype=complex) for e in self.elements)
        if not els:
            raise ValueError("POVM needs at least one element")
        dim = els[0].shape[0]
        total = np.zeros((dim, dim), dtype=complex)
        for e in els:
            if e.shape != (dim, dim):
                raise ValueError("POVM elements must share one square shape")
            if np.abs(e - e.conj().T).max() > 1e-12:
                raise ValueError("POVM element is not Hermitian")
            if np.linalg.eigvalsh(e).min() < -1e-12:
                raise ValueError("POVM element is not PSD to 1e-12")
            e.setflags(write=False)
            total += e
        if np.abs(total - np.eye(dim)).max() > 1e-10:
            raise ValueError("POVM elements do not sum to the identity (1e-10)")
        object.__setattr__(self, "elements", els)
        stack = np.stack(els)
        stack.setflags(write=False)
        object.__setattr__(self, "_stack", stack)

    @property
    def dim(self):
        return self.elements[0].shape[0]

    def __len__(self):
        return len(self.elements)

    def probabilities(self, rho):
        p = np.einsum("nij,ji->n", self._stack, rho).real
        return np.clip(p, 0.0, None)


def _hamiltonian_matrix(H):
    if isinstance(H, CollectiveHamiltonian):
        return H.matrix
    return np.asarray(H, dtype=complex)


def _density_of(state):
    if isinstance(state, (SymmetricState, FullState)):
        return state.density_matrix()
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return np.outer(arr, arr.conj())
    return arr


def qfi(state, H) -> float:
    """Quantum Fisher information of ``state`` for the generator ``H``.

    Pure payloads use 4 Var(H); density payloads use the eigenpair formula
    2 sum_{p_i+p_j>tau} (p_i-p_j)^2/(p_i+p_j) |<e_i|H|e_j>|^2 with
    tau = 1e-12 max(p).
    """
    Hm = _hamiltonian_matrix(H)
    if isinstance(state, (SymmetricState, FullState)) and state.is_pure:
        psi = state.amplitudes
        if psi.shape[0] != Hm.shape[0]:
            raise ValueError(
                f"state dim {psi.shape[0]} does not match H dim {Hm.shape[0]}"
            )
        w = Hm @ psi
        mean = np.vdot(psi, w).real
        second = np.vdot(w, w).real
        return max(4.0 * (second - mean * mean), 0.0)
    rho = _density_of(state)
    if rho.shape != Hm.shape:
        raise ValueError(f"state dim {rho.shape} does not match H dim {Hm.shape}")
    evals, evecs = np.linalg.eigh(rho)
    A = evecs.conj().T @ Hm @ evecs
    val = 2.0 * qfi_pair_sum(np.ascontiguousarray(evals), np.abs(A) ** 2)
    return max(val, 0.0)


def fisher_from_probabilities(p, dp, p_floor=1e-12, slope_floor=1e-9):
    """sum dp_n^2 / p_n with the removable-singularity policy.

    Outcomes with probability below ``p_floor`` are dropped only when their
    derivative is below ``slope_floor`` in magnitude; otherwise the
    singularity is not removable and an error is raised.
    """
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    dp = np.asarray(dp, dtype=float)
    fi = 0.0
    for n in range(p.size):
        if p[n] >= p_floor:
            fi += dp[n] * dp[n] / p[n]
        elif abs(dp[n]) >= slope_floor:
            raise NonRemovableSingularityError(n, p[n], dp[n])
    return fi


def classical_fi(povm: Povm, state, H, phi: float) -> float:
    """Classical FI of ``povm`` on the family e^{-iH phi} rho e^{+iH phi}.

    The phi-derivative is taken analytically through the commutator form
    tr(i [Pi_n, H] rho(phi)); finite differences are kept for tests only.
    """
    Hm = _hamiltonian_matrix(H)
    rho = _density_of(state)
    if rho.shape[0] != povm.dim:
        raise ValueError("POVM does not act on the state's space")
    U = expm_hermitian(Hm, t=-1j * phi)
    rho_phi = U @ rho @ U.conj().T
    p = np.einsum("nij,ji->n", povm._stack, rho_phi).real
    comm = Hm @ rho_phi - rho_phi @ Hm
    # tr(i[Pi_n, H] rho) = i tr(Pi_n [H, rho]); real for Hermitian Pi_n, H
    t = (1j * np.einsum("nij,ji->n", povm._stack, comm)).real
    return fisher_from_probabilities(p, t)


def _sqrtm_psd(rho):
    evals, evecs = np.linalg.eigh(rho)
    if evals.min() < -1e-10:
        raise ValueError(f"matrix is not PSD: min eigenvalue {evals.min():.3e}")
    return (evecs * np.sqrt(np.clip(evals, 0.0, None))) @ evecs.conj().T


def fidelity_bures(rho, sigma):
    """Uhlmann fidelity and Bures distance; pure payloads are auto-promoted."""
    r = _density_of(rho)
    s = _density_of(sigma)
    if r.shape != s.shape:
        raise ValueError("states live on different spaces")
    root = _sqrtm_psd(r)
    evals = np.linalg.eigvalsh(root @ s @ root)
    # roundoff turns exact kernel eigenvalues into ~1e-16 noise whose square
    # roots would pollute the sum at 1e-8; clip relative to the top eigenvalue
    evals = np.clip(evals, 0.0, None)
    if evals.size:
        evals[evals < 100.0 * np.finfo(float).eps * evals.max()] = 0.0
    fid = float(np.sqrt(evals).sum())
    fid = min(max(fid, 0.0), 1.0)
    return fid, math.sqrt(2.0 * (1.0 - fid))


def asymmetry_bounds(rho, H):
    """(||[H, rho]||_1^2, ||[H, rho]||_HS^2): lower bounds on the QFI."""
    Hm = _hamiltonian_matrix(H)
    r = _density_of(rho)
    comm = Hm @ r - r @ Hm
    sv = svdvals(comm)
    return float(sv.sum() ** 2), float(np.sum(sv ** 2))


def lambda_of_spectrum(spectrum: Spectrum, D: int = None):
    """Mixedness factor Lambda and its Bures lower bound.

    Lambda = [1/(2(D-1))] sum_{p_i+p_j>0} (p_i-p_j)^2/(p_i+p_j); equals 1 for
    pure spectra and 0 for the uniform one.  The companion lower bound is
    (D/(D-1)) d_B(diag p, 1/D)^2 / 2 via the harmonic-geometric mean estimate.
    """
    if not isinstance(spectrum, Spectrum):
        spectrum = Spectrum(np.asarray(spectrum, dtype=float))
    p = spectrum.probs
    if D is None:
        D = p.size
    if p.size != D:
        raise ValueError(f"spectrum has length {p.size}, expected D={D}")
    if D < 2:
        raise ValueError("Lambda needs a space of dimension at least 2")
    lam = spectrum_pair_sum(np.ascontiguousarray(p)) / (2.0 * (D - 1))
    fid = float(np.sqrt(p).sum()) / math.sqrt(D)  # F(diag p, 1/D)
    fid = min(fid, 1.0)
    lower = (D / (D - 1)) * (2.0 * (1.0 - fid)) / 2.0
    return lam, lower


def analytic_avg_qfi(space, N, d, spectrum, tr_h2):
    """Haar-average QFI of isospectral states under a collective generator.

    full      -> 4 N tr(h^2) d^N / (d (d^N + 1)) Lambda
    symmetric -> [4 N (N+d) tr(h^2) / (d (d+1))] [S/(S+1)] Lambda,  S = |S_N|
    """
    if space == "full":
        dim = d ** N
    elif space == "symmetric":
        dim = sym_dim(N, d)
    else:
        raise ValueError(f"unknown space {space!r}")
    if not isinstance(spectrum, Spectrum):
        spectrum = Spectrum(np.asarray(spectrum, dtype=float))
    if len(spectrum) != dim:
        raise ValueError(f"spectrum length {len(spectrum)} != space dimension {dim}")
    lam, _ = lambda_of_spectrum(spectrum, dim)
    if space == "full":
        return 4.0 * N * tr_h2 * dim / (d * (dim + 1.0)) * lam
    return (4.0 * N * (N + d) * tr_h2 / (d * (d + 1.0))) * (dim / (dim + 1.0)) * lam


def loss_avg_bounds(N, k, purity):
    """Bounds on the Haar-average QFI of N-boson states after losing k (d=2,
    tr h^2 = 1/2): lower from the commutator-norm estimate, upper from the
    variance bound (N-k)(N-k+2)/3.
    """
    if not 0 <= k < N:
        raise ValueError(f"need 0 <= k < N, got k={k}, N={N}")
    lo_p, hi_p = 1.0 / (N + 1.0), 1.0
    if not lo_p - 1e-12 <= purity <= hi_p + 1e-12:
        raise ValueError(f"purity {purity} outside [{lo_p}, 1]")
    lower = (
        (N - k) * (N + 1.0) / (3.0 * (k + 1.0) * (k + 2.0))
        * ((N + 1.0) * purity - 1.0) / N
    )
    upper = (N - k) * (N - k + 2.0) / 3.0
    return max(lower, 0.0), upper


def fi_avg_bounds(N):
    """(c_- N^2, c_+ N^2 + N) band for the Haar-average Mach-Zehnder FI."""
    return C_MINUS * N * N, C_PLUS * N * N + N


def lu_upper_bound(N, d, h_norm):
    """Upper bound 4 N ||h||^2 [1 + (N-1) d^2 / sqrt(d^N)] on the average
    LU-optimized QFI of Haar states of distinguishable particles."""
    return 4.0 * N * h_norm ** 2 * (1.0 + (N - 1.0) * d * d / math.sqrt(d ** N))


# ---------------------------------------------------------------------------
# Local-unitary coordinate ascent
# ---------------------------------------------------------------------------

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo, hi, iters=40):
    """Golden-section maximization on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _local_gate(angles):
    """Rz(a) Ry(b) Rz(c) up to global phase."""
    a, b, c = angles
    rz1 = np.array([[np.exp(-0.5j * a), 0.0], [0.0, np.exp(0.5j * a)]])
    ry = np.array(
        [[math.cos(b / 2.0), -math.sin(b / 2.0)], [math.sin(b / 2.0), math.cos(b / 2.0)]],
        dtype=complex,
    )
    rz2 = np.array([[np.exp(-0.5j * c), 0.0], [0.0, np.exp(0.5j * c)]])
    return rz1 @ ry @ rz2


def _apply_local(psi, gate, j, N):
    t = psi.reshape(2 ** j, 2, 2 ** (N - 1 - j))
    return np.einsum("ab,ibj->iaj", gate, t).reshape(psi.shape)


def lu_optimize_qfi(state: FullState, h: LocalHamiltonian, sweeps: int, rng=None,
                    restarts: int = 5) -> float:
    """Coordinate-ascent lower bound on sup_{V in LU} QFI(V psi V†, H).

    Each local unitary carries three Euler angles (d = 2); every angle is
    refined by golden-section search and a move is kept only when it improves
    the QFI, so the result never drops below the unrotated value and is
    nondecreasing over sweeps.
    """
    if not state.is_pure:
        raise ValueError("LU optimization is defined for pure states")
    if state.d != 2 or h.d != 2:
        raise ValueError("the angle parameterization covers d = 2 only")
    if rng is None:
        rng = np.random.default_rng(0)
    N = state.N
    psi0 = state.amplitudes

    def value(angles):
        psi = psi0
        for j in range(N):
            psi = _apply_local(psi, _local_gate(angles[j]), j, N)
        w = apply_collective_full(h, psi, N)
        mean = np.vdot(psi, w).real
        return 4.0 * (np.vdot(w, w).real - mean * mean)

    best = value(np.zeros((N, 3)))
    for restart in range(restarts):
        if restart == 0:
            angles = np.zeros((N, 3))
        else:
            angles = rng.uniform(-math.pi, math.pi, size=(N, 3))
        current = value(angles)
        for _ in range(sweeps):
            for j in range(N):
                for a in range(3):
                    def trial(x, _j=j, _a=a):
                        probe = angles.copy()
                        probe[_j, _a] = x
                        return value(probe)

                    x, fx = _golden_max(trial, -math.pi, math.pi)
                    if fx > current:
                        angles[j, a] = x
                        current = fx
        best = max(best, current)
    return best

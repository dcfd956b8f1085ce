"""Particle loss on two-mode bosonic states: closed-form Dicke-basis partial
trace, the brute-force qubit-picture oracle, the fictitious beam-splitter
channel, and the verifier for their equivalence at equal transmissivities.
"""

from dataclasses import dataclass

import numpy as np

from ._kernels import partial_trace_pair
from .dicke import FullState, SymmetricState, log_binom_row

__all__ = [
    "LossBlocks",
    "partial_trace_dicke",
    "partial_trace_bruteforce",
    "bs_loss",
    "verify_bs_trace_equivalence",
    "BsTraceReport",
]


@dataclass(frozen=True)
class LossBlocks:
    """Block-diagonal output of a loss channel: (photons lost, probability,
    conditional state on S_{N-l}) triples; zero-probability blocks omitted."""

    N: int
    blocks: tuple  # of (l, p_l, SymmetricState)

    def __post_init__(self):
        total = sum(p for _, p, _ in self.blocks)
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"block probabilities sum to {total!r}, not 1")
        for l, p, rho in self.blocks:
            if not 0 <= l <= self.N:
                raise ValueError(f"block index {l} outside 0..{self.N}")
            if rho.N != self.N - l:
                raise ValueError(f"block {l} lives on S_{rho.N}, expected S_{self.N - l}")

    def probability(self, l):
        for ll, p, _ in self.blocks:
            if ll == l:
                return p
        return 0.0

    def state(self, l):
        for ll, _, rho in self.blocks:
            if ll == l:
                return rho
        raise KeyError(f"no block with l={l}")


def _trace_pair_kernel(a, b, N, k):
    """tr_k |a><b| in the Dicke basis for amplitude vectors a, b on S_N."""
    log_ck = log_binom_row(k)
    lb_out = log_binom_row(N - k)
    lb_in = log_binom_row(N)
    return partial_trace_pair(
        np.ascontiguousarray(a, dtype=complex),
        np.ascontiguousarray(b, dtype=complex),
        k,
        log_ck,
        lb_out,
        lb_in,
    )


def partial_trace_dicke(state: SymmetricState, k: int) -> SymmetricState:
    """Trace k of N particles out of a two-mode symmetric state.

    Pure input uses the closed-form entries
    rho_nm = sum_u alpha_{m+u} alpha*_{n+u} C(k,u)
             sqrt(C(N-k,m) C(N-k,n) / (C(N,m+u) C(N,n+u)));
    density input is eigendecomposed and handled by linearity.
    """
    if state.d != 2:
        raise ValueError("partial_trace_dicke requires d = 2")
    N = state.N
    if not 0 <= k <= N:
        raise ValueError(f"need 0 <= k <= N, got k={k}")
    if k == 0:
        return SymmetricState.from_density(N, state.density_matrix())
    if state.is_pure:
        rho = _trace_pair_kernel(state.amplitudes, state.amplitudes, N, k)
    else:
        evals, evecs = np.linalg.eigh(state.density)
        rho = np.zeros((N - k + 1, N - k + 1), dtype=complex)
        for w, v in zip(evals, evecs.T):
            if w > 1e-14:
                rho += w * _trace_pair_kernel(v, v, N, k)
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    return SymmetricState.from_density(N - k, rho)


def partial_trace_bruteforce(state: FullState, k: int) -> FullState:
    """Literal partial trace over the last k tensor factors (d = 2)."""
    if state.d != 2:
        raise ValueError("partial_trace_bruteforce requires d = 2")
    N = state.N
    if not 0 <= k <= N:
        raise ValueError(f"need 0 <= k <= N, got k={k}")
    keep, env = 2 ** (N - k), 2 ** k
    if state.is_pure:
        M = state.amplitudes.reshape(keep, env)
        rho = M @ M.conj().T
    else:
        rho = np.einsum("iaja->ij", state.density.reshape(keep, env, keep, env))
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    return FullState(N - k, 2, density=rho)


def _log_pow(x, exponents):
    """log(x**e) elementwise for integer e >= 0, with the convention 0**0 = 1."""
    e = np.asarray(exponents, dtype=float)
    safe = np.where(x > 0.0, x, 1.0)
    out = np.where(e == 0.0, 0.0, e * np.log(safe))
    return np.where((x == 0.0) & (e > 0.0), -np.inf, out)


def bs_loss(state: SymmetricState, eta_a: float, eta_b: float) -> LossBlocks:
    """Fictitious beam-splitter loss channel with per-mode transmissivities.

    Returns the direct-sum decomposition over the total number of photons
    lost; the per-(l_a, l_b) structure is resolved internally and merged.
    All binomial products are evaluated in log space.
    """
    if not (0.0 <= eta_a <= 1.0 and 0.0 <= eta_b <= 1.0):
        raise ValueError("transmissivities must lie in [0, 1]")
    if state.d != 2 or not state.is_pure:
        raise ValueError("bs_loss expects a pure two-mode symmetric state")
    N = state.N
    alpha = state.amplitudes
    # log C(n, l) table for n = 0..N
    log_c = np.full((N + 1, N + 1), -np.inf)
    for n in range(N + 1):
        log_c[n, : n + 1] = log_binom_row(n)

    raw = {}  # l -> unnormalized block matrix on S_{N-l}
    probs = np.zeros(N + 1)
    for la in range(N + 1):
        for lbv in range(N + 1 - la):
            l = la + lbv
            n = np.arange(la, N - lbv + 1)
            log_b = (
                log_c[n, la]
                + _log_pow(eta_a, n - la)
                + _log_pow(1.0 - eta_a, la)
                + log_c[N - n, lbv]
                + _log_pow(eta_b, N - n - lbv)
                + _log_pow(1.0 - eta_b, lbv)
            )
            amp = alpha[n] * np.exp(0.5 * log_b)
            w = float(np.vdot(amp, amp).real)  # p_{la, lb}
            if w == 0.0:
                continue
            block = raw.setdefault(l, np.zeros((N - l + 1, N - l + 1), dtype=complex))
            # |xi> components sit at Dicke index n - la on S_{N-l}
            vec = np.zeros(N - l + 1, dtype=complex)
            vec[n - la] = amp
            block += np.outer(vec, vec.conj())
            probs[l] += w

    blocks = []
    for l in sorted(raw):
        p = probs[l]
        rho = raw[l] / p
        rho = 0.5 * (rho + rho.conj().T)
        rho /= np.trace(rho).real
        blocks.append((l, float(p), SymmetricState.from_density(N - l, rho)))
    return LossBlocks(N, tuple(blocks))


@dataclass(frozen=True)
class BsTraceReport:
    """Outcome of checking bs_loss(eta, eta) against the partial trace."""

    N: int
    eta: float
    max_block_dev: float
    max_prob_dev: float
    tolerance: float

    @property
    def ok(self):
        return max(self.max_block_dev, self.max_prob_dev) <= self.tolerance


def verify_bs_trace_equivalence(state: SymmetricState, eta: float,
                                tolerance: float = 1e-12) -> BsTraceReport:
    """Check block-by-block that the mode-symmetric beam-splitter channel equals
    binomially weighted partial traces: rho_l = tr_l(psi) and
    p_l = C(N,l) eta^(N-l) (1-eta)^l.  Deviations are reported, never raised.
    """
    N = state.N
    out = bs_loss(state, eta, eta)
    lb = log_binom_row(N)
    log_pl = lb + _log_pow(eta, N - np.arange(N + 1)) + _log_pow(1.0 - eta, np.arange(N + 1))
    binom_p = np.exp(log_pl)

    max_block = 0.0
    max_prob = 0.0
    for l in range(N + 1):
        p = out.probability(l)
        max_prob = max(max_prob, abs(p - binom_p[l]))
        if p > 0.0:
            got = out.state(l).density_matrix()
            want = partial_trace_dicke(state, l).density_matrix()
            max_block = max(max_block, float(np.abs(got - want).max()))
    return BsTraceReport(N, eta, max_block, max_prob, tolerance)

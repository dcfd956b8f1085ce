"""Hot numeric kernels, JIT-compiled with numba when available.

Three inner loops dominate when pure numpy is not enough: the eigenpair
sum of the mixed-state QFI, the Dicke-basis partial-trace kernel, and the
symmetric-power recurrence used to lift 2x2 unitaries to S_N (N up to ~1000).
Each has a pure-numpy twin; set ``METROSCOPE_PURE_NUMPY=1`` to force the
numpy path (see benchmarks/bench_kernels.py for a comparison).
"""

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("METROSCOPE_PURE_NUMPY", "").lower() in ("1", "true", "yes")

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

USING_NUMBA = _HAVE_NUMBA and not _FORCE_NUMPY


# ---------------------------------------------------------------------------
# QFI eigenpair sum:  sum_{i,j: p_i+p_j > tau} (p_i-p_j)^2/(p_i+p_j) * w_ij
# ---------------------------------------------------------------------------

def _qfi_pair_sum_np(p, w):
    tau = 1e-12 * max(p.max(), 0.0)
    ps = p[:, None] + p[None, :]
    num = (p[:, None] - p[None, :]) ** 2
    frac = np.zeros_like(ps)
    np.divide(num, ps, out=frac, where=ps > tau)
    return float(np.sum(frac * w))


def _qfi_pair_sum_loop(p, w):
    tau = 1e-12 * max(p.max(), 0.0)
    acc = 0.0
    for i in range(p.shape[0]):
        for j in range(p.shape[0]):
            s = p[i] + p[j]
            if s > tau:
                d = p[i] - p[j]
                acc += d * d / s * w[i, j]
    return acc


# ---------------------------------------------------------------------------
# Spectrum pair sum:  sum_{i,j: p_i+p_j > 0} (p_i-p_j)^2/(p_i+p_j)
# ---------------------------------------------------------------------------

def _spectrum_pair_sum_np(p):
    ps = p[:, None] + p[None, :]
    num = (p[:, None] - p[None, :]) ** 2
    frac = np.zeros_like(ps)
    np.divide(num, ps, out=frac, where=ps > 0)
    return float(frac.sum())


def _spectrum_pair_sum_loop(p):
    acc = 0.0
    for i in range(p.shape[0]):
        for j in range(p.shape[0]):
            s = p[i] + p[j]
            if s > 0.0:
                d = p[i] - p[j]
                acc += d * d / s
    return acc


# ---------------------------------------------------------------------------
# Dicke partial trace of a pure-pair |a><b|, traced over k particles.
#
#   R[n, m] = <D_n| tr_k |a><b| |D_m>
#           = sum_u a[n+u] conj(b[m+u]) C(k,u)
#             * sqrt( C(N-k,n) C(N-k,m) / (C(N,n+u) C(N,m+u)) )
#
# The binomial square roots arrive precomputed in log space:
#   log_ck[u]  = log C(k, u)
#   lb_out[n]  = log C(N-k, n)      n = 0..N-k
#   lb_in[j]   = log C(N, j)        j = 0..N
# The u-th term is rank one: R += e^{log_ck[u]} outer(a_u f_u, conj(b_u) f_u)
# with f_u[x] = exp((lb_out[x] - lb_in[x+u]) / 2).
# ---------------------------------------------------------------------------

def _partial_trace_pair_np(a, b, k, log_ck, lb_out, lb_in):
    nk = lb_out.shape[0]
    out = np.zeros((nk, nk), dtype=np.complex128)
    for u in range(k + 1):
        f = np.exp(0.5 * (lb_out - lb_in[u:u + nk]))
        va = a[u:u + nk] * f
        vb = np.conj(b[u:u + nk]) * f
        out += np.exp(log_ck[u]) * np.outer(va, vb)
    return out


def _partial_trace_pair_loop(a, b, k, log_ck, lb_out, lb_in):
    nk = lb_out.shape[0]
    out = np.zeros((nk, nk), dtype=np.complex128)
    f = np.empty(nk)
    for u in range(k + 1):
        cu = np.exp(log_ck[u])
        for x in range(nk):
            f[x] = np.exp(0.5 * (lb_out[x] - lb_in[x + u]))
        for n in range(nk):
            va = cu * a[n + u] * f[n]
            for m in range(nk):
                out[n, m] += va * np.conj(b[m + u]) * f[m]
    return out


# ---------------------------------------------------------------------------
# Symmetric power of a 2x2 matrix in the Dicke basis, built by appending one
# particle at a time:  M_k = Isom^† (M_{k-1} ⊗ V) Isom  with the isometry
# |D_n^k> = sqrt((k-n)/k)|D_n^{k-1}>|0> + sqrt(n/k)|D_{n-1}^{k-1}>|1>.
# Every step is a contraction for unitary V, so errors stay O(N eps); the
# naive closed-form binomial sum loses ~||abs(V)||^N digits instead.
# ---------------------------------------------------------------------------

def _sym_power_np(v00, v01, v10, v11, N):
    M = np.ones((1, 1), dtype=np.complex128)
    for k in range(1, N + 1):
        w = np.sqrt(np.arange(k + 1, dtype=np.float64))
        wb = w[::-1]  # wb[m] = sqrt(k - m)
        out = np.zeros((k + 1, k + 1), dtype=np.complex128)
        out[:k, :k] += (v00 * M) * np.outer(wb[:k], wb[:k])
        out[1:, :k] += (v10 * M) * np.outer(w[1:], wb[:k])
        out[:k, 1:] += (v01 * M) * np.outer(wb[:k], w[1:])
        out[1:, 1:] += (v11 * M) * np.outer(w[1:], w[1:])
        out /= k
        M = out
    return M


def _sym_power_loop(v00, v01, v10, v11, N):
    M = np.ones((1, 1), dtype=np.complex128)
    for k in range(1, N + 1):
        out = np.zeros((k + 1, k + 1), dtype=np.complex128)
        for m in range(k + 1):
            rm = np.sqrt(k - m)
            sm = np.sqrt(m)
            for n in range(k + 1):
                rn = np.sqrt(k - n)
                sn = np.sqrt(n)
                acc = 0.0 + 0.0j
                if m < k and n < k:
                    acc += v00 * rm * rn * M[m, n]
                if m > 0 and n < k:
                    acc += v10 * sm * rn * M[m - 1, n]
                if m < k and n > 0:
                    acc += v01 * rm * sn * M[m, n - 1]
                if m > 0 and n > 0:
                    acc += v11 * sm * sn * M[m - 1, n - 1]
                out[m, n] = acc / k
        M = out
    return M


if USING_NUMBA:
    qfi_pair_sum = njit(cache=True)(_qfi_pair_sum_loop)
    spectrum_pair_sum = njit(cache=True)(_spectrum_pair_sum_loop)
    partial_trace_pair = njit(cache=True)(_partial_trace_pair_loop)
    sym_power = njit(cache=True)(_sym_power_loop)
else:
    qfi_pair_sum = _qfi_pair_sum_np
    spectrum_pair_sum = _spectrum_pair_sum_np
    partial_trace_pair = _partial_trace_pair_np
    sym_power = _sym_power_np

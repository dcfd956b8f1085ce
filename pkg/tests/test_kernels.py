"""The jitted kernels and their pure-numpy twins must agree exactly."""

import numpy as np
import pytest

from metroscope import _kernels as K
from metroscope.dicke import log_binom_row

numba_missing = not K._HAVE_NUMBA


@pytest.fixture
def spectra(rng):
    p = rng.dirichlet(np.ones(9))
    return np.sort(p)[::-1]


@pytest.mark.skipif(numba_missing, reason="numba unavailable")
class TestJitMatchesNumpy:
    def test_qfi_pair_sum(self, rng, spectra):
        w = rng.random((9, 9))
        w = w + w.T
        jit = K.njit(cache=True)(K._qfi_pair_sum_loop)
        assert jit(spectra, w) == pytest.approx(K._qfi_pair_sum_np(spectra, w), rel=1e-13)

    def test_spectrum_pair_sum(self, spectra):
        jit = K.njit(cache=True)(K._spectrum_pair_sum_loop)
        assert jit(spectra) == pytest.approx(K._spectrum_pair_sum_np(spectra), rel=1e-13)

    def test_partial_trace_pair(self, rng):
        N, k = 10, 3
        a = rng.standard_normal(N + 1) + 1j * rng.standard_normal(N + 1)
        b = rng.standard_normal(N + 1) + 1j * rng.standard_normal(N + 1)
        args = (k, log_binom_row(k), log_binom_row(N - k), log_binom_row(N))
        jit = K.njit(cache=True)(K._partial_trace_pair_loop)
        got = jit(a, b, *args)
        want = K._partial_trace_pair_np(a, b, *args)
        np.testing.assert_allclose(got, want, atol=1e-13)

    def test_sym_power(self, rng):
        from metroscope import haar_unitary

        V = haar_unitary(2, rng)
        jit = K.njit(cache=True)(K._sym_power_loop)
        got = jit(V[0, 0], V[0, 1], V[1, 0], V[1, 1], 12)
        want = K._sym_power_np(V[0, 0], V[0, 1], V[1, 0], V[1, 1], 12)
        np.testing.assert_allclose(got, want, atol=1e-13)


def test_zero_spectrum_pairs_excluded():
    p = np.array([1.0, 0.0, 0.0])
    # (0,0) pairs are skipped, pure spectra give 2(D-1)
    assert K._spectrum_pair_sum_np(p) == pytest.approx(4.0)
    assert K.spectrum_pair_sum(np.ascontiguousarray(p)) == pytest.approx(4.0)


def test_dispatch_respects_env(monkeypatch):
    import importlib
    import metroscope._kernels as mod

    monkeypatch.setenv("METROSCOPE_PURE_NUMPY", "1")
    reloaded = importlib.reload(mod)
    try:
        assert reloaded.USING_NUMBA is False
        assert reloaded.sym_power is reloaded._sym_power_np
    finally:
        monkeypatch.delenv("METROSCOPE_PURE_NUMPY")
        importlib.reload(mod)

"""Haar-random unitaries, ensemble sampling, deterministic parallel Monte
Carlo, and empirical concentration reports paired with the analytic tail
bounds.

Determinism contract: sample i of a run draws from a generator seeded by
SeedSequence((master_seed, ...context..., i)), so results depend only on
(spec, master_seed, n) and never on worker count or scheduling.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circuits import apply_circuit, sample_circuit, start_state
from .dicke import CapacityError, FULL_SPACE_CAP, FullState, SymmetricState, sym_dim
from .fisher import Spectrum, analytic_avg_qfi, qfi
from .hamiltonians import LocalHamiltonian, collective_full, collective_sym
from .interferometer import mz_fi

__all__ = [
    "EnsembleSpec",
    "McResult",
    "haar_unitary",
    "sample_state",
    "mc_estimate",
    "concentration_report",
    "ConcentrationReport",
]

_KINDS = ("haar_full_pure", "haar_sym_isospectral", "haar_sym_depolarized", "circuit")


@dataclass(frozen=True)
class EnsembleSpec:
    """Descriptor of a random-state ensemble."""

    kind: str
    N: int
    d: int = 2
    spectrum: Spectrum = None  # haar_sym_isospectral
    p: float = None  # haar_sym_depolarized
    depth: int = None  # circuit
    start: str = "balanced"  # circuit

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.kind == "haar_full_pure" and self.d ** self.N > FULL_SPACE_CAP:
            raise CapacityError(
                f"full space d^N = {self.d ** self.N} exceeds cap {FULL_SPACE_CAP}"
            )
        if self.kind == "haar_sym_isospectral":
            spec = self.spectrum
            if spec is None:
                spec = Spectrum.pure(self.dim)
                object.__setattr__(self, "spectrum", spec)
            if len(spec) != self.dim:
                raise ValueError(
                    f"spectrum length {len(spec)} != |S_N| = {self.dim}"
                )
        if self.kind == "haar_sym_depolarized":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ValueError("depolarized ensembles need p in [0, 1]")
        if self.kind == "circuit":
            if self.depth is None or self.depth < 0:
                raise ValueError("circuit ensembles need a nonnegative depth")
            if self.d != 2:
                raise ValueError("circuit ensembles cover d = 2 only")

    @property
    def dim(self):
        if self.kind == "haar_full_pure":
            return self.d ** self.N
        return sym_dim(self.N, self.d)


@dataclass(frozen=True)
class McResult:
    n_samples: int
    mean: float
    std_error: float
    master_seed: int
    n_skipped: int = 0
    sample_values: np.ndarray = field(default=None, repr=False)


def haar_unitary(D: int, rng) -> np.ndarray:
    """Haar-distributed D x D unitary: complex Ginibre then QR, with the phase
    convention that leaves the triangular factor's diagonal real positive."""
    if D < 1:
        raise ValueError("dimension must be positive")
    G = rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))
    Q, R = np.linalg.qr(G)
    diag = np.diag(R)
    return Q * (diag / np.abs(diag))


def _haar_vector(D, rng):
    v = rng.standard_normal(D) + 1j * rng.standard_normal(D)
    return v / np.linalg.norm(v)


def sample_state(spec: EnsembleSpec, rng):
    """One draw from the ensemble.

    Pure Haar kinds draw a normalized complex Gaussian vector, which is
    exactly the distribution of U|psi_0> without the QR cost; mixed
    isospectral kinds conjugate the reference spectrum by a full Haar unitary.
    """
    if spec.kind == "haar_full_pure":
        return FullState(spec.N, spec.d, amplitudes=_haar_vector(spec.dim, rng))
    if spec.kind == "haar_sym_isospectral":
        if spec.spectrum.is_pure:
            return SymmetricState.pure(spec.N, _haar_vector(spec.dim, rng), d=spec.d)
        U = haar_unitary(spec.dim, rng)
        rho = (U * spec.spectrum.probs) @ U.conj().T
        return SymmetricState.from_density(spec.N, rho, d=spec.d)
    if spec.kind == "haar_sym_depolarized":
        psi = _haar_vector(spec.dim, rng)
        rho = (1.0 - spec.p) * np.outer(psi, psi.conj())
        rho[np.diag_indices_from(rho)] += spec.p / spec.dim
        return SymmetricState.from_density(spec.N, rho, d=spec.d)
    # circuit
    circ = sample_circuit(spec.N, spec.depth, rng)
    return apply_circuit(start_state(spec.start, spec.N), circ)


def _run_indices(functional, spec, master_seed, indices, out, failed):
    for i in indices:
        rng = np.random.default_rng(np.random.SeedSequence((master_seed, i)))
        state = sample_state(spec, rng)
        try:
            out[i] = functional(state)
        except Exception:
            failed.append(i)


def mc_estimate(functional, spec: EnsembleSpec, n: int, master_seed: int,
                workers: int = 1, keep_values: bool = True) -> McResult:
    """Monte Carlo mean of ``functional`` over the ensemble.

    Sample i is generated from its own seed stream derived from
    (master_seed, i); the result is identical for any worker count. Failed
    evaluations are skipped and counted; more than 1% failures is an error.
    """
    if n < 2:
        raise ValueError("need at least two samples")
    values = np.full(n, np.nan)
    failed = []
    if workers and workers > 1:
        chunks = np.array_split(np.arange(n), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_indices, functional, spec, master_seed, chunk, values, failed)
                for chunk in chunks if chunk.size
            ]
            for f in futures:
                f.result()
    else:
        _run_indices(functional, spec, master_seed, np.arange(n), values, failed)

    n_skipped = len(failed)
    if n_skipped > 0.01 * n:
        raise RuntimeError(
            f"{n_skipped}/{n} functional evaluations failed (indices {sorted(failed)[:5]}...)"
        )
    ok = ~np.isnan(values)
    vals = values[ok]
    mean = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(vals.size)) if vals.size > 1 else 0.0
    return McResult(
        n_samples=int(vals.size),
        mean=mean,
        std_error=se,
        master_seed=master_seed,
        n_skipped=n_skipped,
        sample_values=vals if keep_values else None,
    )


# ---------------------------------------------------------------------------
# Concentration-of-measure report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConcentrationReport:
    spec: EnsembleSpec
    functional: str
    n_samples: int
    sample_mean: float
    sample_std: float
    rows: tuple  # of (eps, empirical tail, analytic bound, vacuous flag)

    @property
    def relative_std(self):
        return self.sample_std / abs(self.sample_mean)


def _bures_to_uniform(spectrum: Spectrum, dim: int) -> float:
    fid = min(float(np.sqrt(spectrum.probs).sum()) / math.sqrt(dim), 1.0)
    return math.sqrt(2.0 * (1.0 - fid))


def _tail_bound(spec, functional, h, eps):
    """Two-sided analytic bound on Pr(|f - E f| >= eps) for the ensemble."""
    N, d = spec.N, spec.d
    hn = h.op_norm
    if functional == "mz_fi":
        if spec.kind not in ("haar_sym_isospectral", "haar_sym_depolarized"):
            raise ValueError("MZ FI tail bounds cover symmetric ensembles only")
        return 2.0 * math.exp(-(eps ** 2) * (N + 1.0) / (144.0 * N ** 4))
    if spec.kind == "haar_full_pure":
        return 2.0 * math.exp(-(eps ** 2) * d ** N / (4096.0 * hn ** 4 * N ** 4))
    if spec.kind == "haar_sym_isospectral":
        S = spec.dim
        C = min(1.0, 8.0 * _bures_to_uniform(spec.spectrum, S))
        return 2.0 * math.exp(-(eps ** 2) * S / (4096.0 * C * hn ** 4 * N ** 4))
    if spec.kind == "haar_sym_depolarized":
        S = spec.dim
        mean = analytic_avg_qfi(
            "symmetric", N, d, Spectrum.depolarized(S, spec.p), h.tr_h2
        )
        if mean == 0.0:
            return 2.0
        eps_rel = eps / mean
        expo = (
            eps_rel ** 2
            * h.tr_h2 ** 2 * (N + d) ** 2 * S ** 2
            / (64.0 * hn ** 4 * (d * (d + 1.0) * N * (1.0 + S)) ** 2)
            * S
        )
        return 2.0 * math.exp(-expo)
    raise ValueError(f"no analytic tail bound for ensemble kind {spec.kind!r}")


def concentration_report(spec: EnsembleSpec, functional: str, n: int, eps_grid,
                         master_seed: int, h: LocalHamiltonian = None,
                         phi: float = np.pi / 2, workers: int = 1):
    """Empirical deviation tails of ``functional`` ("qfi" or "mz_fi") against
    the applicable analytic concentration bound.

    Bounds larger than 1 are flagged vacuous rather than omitted; the paper's
    tail constants are far from tight, so most desk-scale bounds are.
    """
    if functional not in ("qfi", "mz_fi"):
        raise ValueError(f"unknown functional {functional!r}")
    if h is None:
        h = LocalHamiltonian(np.diag([-0.5, 0.5]))  # the J_z generator
    if functional == "qfi":
        if spec.kind == "haar_full_pure":
            H = collective_full(h, spec.N)
        else:
            H = collective_sym(h, spec.N)
        func = lambda state: qfi(state, H)
    else:
        func = lambda state: mz_fi(state, phi)
    # fail fast on unsupported ensemble kinds before sampling
    _tail_bound(spec, functional, h, 1.0)

    eps_grid = np.asarray(eps_grid, dtype=float)
    if eps_grid.size == 0 or eps_grid.min() <= 0 or np.any(np.diff(eps_grid) <= 0):
        raise ValueError("eps grid must be positive and strictly ascending")

    result = mc_estimate(func, spec, n, master_seed, workers=workers, keep_values=True)
    vals = result.sample_values
    dev = np.abs(vals - vals.mean())
    rows = []
    for eps in eps_grid:
        tail = float(np.mean(dev >= eps))
        bound = _tail_bound(spec, functional, h, eps)
        rows.append((float(eps), tail, bound, bound >= 1.0))
    return ConcentrationReport(
        spec=spec,
        functional=functional,
        n_samples=result.n_samples,
        sample_mean=float(vals.mean()),
        sample_std=float(vals.std(ddof=1)),
        rows=tuple(rows),
    )

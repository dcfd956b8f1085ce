"""Named experiments behind the CLI: each returns tabular rows plus the
checks that --check mode enforces.  Tolerances are pinned here, matching the
acceptance suite.
"""

import math
from dataclasses import dataclass

import numpy as np

from .circuits import circuit_convergence
from .dicke import SymmetricState, sym_dim
from .fisher import (
    Spectrum,
    analytic_avg_qfi,
    fi_avg_bounds,
    loss_avg_bounds,
    lu_optimize_qfi,
    lu_upper_bound,
    qfi,
)
from .hamiltonians import (
    LocalHamiltonian,
    angular_momentum,
    collective_full,
    collective_sym,
)
from .interferometer import mz_fi
from .loss import partial_trace_dicke, verify_bs_trace_equivalence
from .sampling import EnsembleSpec, concentration_report, mc_estimate, sample_state

__all__ = ["Check", "ExperimentResult", "EXPERIMENTS", "run_experiment"]

H_Z = LocalHamiltonian(np.diag([-0.5, 0.5]))  # tr h^2 = 1/2, ||h|| = 1/2


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    observed: float
    target: str


@dataclass(frozen=True)
class ExperimentResult:
    experiment: str
    columns: tuple
    rows: tuple  # of dicts
    checks: tuple  # of Check

    @property
    def ok(self):
        return all(c.passed for c in self.checks)


def _reject_unknown(params, allowed):
    unknown = set(params) - set(allowed)
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)} (allowed: {sorted(allowed)})")


def _as_list(x):
    if x is None:
        return []
    if isinstance(x, (list, tuple, np.ndarray)):
        return list(x)
    return [x]


# ---------------------------------------------------------------------------
# avg-qfi: Haar-average QFI vs the closed-form integration value
# ---------------------------------------------------------------------------

def run_avg_qfi(params):
    _reject_unknown(params, {"space", "N", "d", "pure", "depol", "spectrum",
                             "samples", "seed", "workers"})
    space = params.get("space", "sym")
    if space not in ("sym", "full"):
        raise ValueError("space must be 'sym' or 'full'")
    d = int(params.get("d", 2))
    samples = int(params.get("samples", 2000))
    seed = int(params.get("seed", 0))
    workers = int(params.get("workers", 1))
    depol = params.get("depol", None)

    rows, checks = [], []
    for N in _as_list(params.get("N", 20)):
        N = int(N)
        dim = d ** N if space == "full" else sym_dim(N, d)
        if space == "full":
            spec = EnsembleSpec("haar_full_pure", N, d)
            spectrum = Spectrum.pure(dim)
            H = collective_full(H_Z, N) if d == 2 else collective_full(
                _traceless_basis_h(d), N)
        elif depol is not None:
            spec = EnsembleSpec("haar_sym_depolarized", N, d, p=float(depol))
            spectrum = Spectrum.depolarized(dim, float(depol))
            H = collective_sym(_h_for(d), N)
        elif params.get("spectrum") is not None:
            spectrum = Spectrum(np.asarray(params["spectrum"], dtype=float))
            spec = EnsembleSpec("haar_sym_isospectral", N, d, spectrum=spectrum)
            H = collective_sym(_h_for(d), N)
        else:
            spectrum = Spectrum.pure(dim)
            spec = EnsembleSpec("haar_sym_isospectral", N, d, spectrum=spectrum)
            H = collective_sym(_h_for(d), N)
        h = H.local
        analytic = analytic_avg_qfi(
            "full" if space == "full" else "symmetric", N, d, spectrum, h.tr_h2
        )
        res = mc_estimate(lambda s: qfi(s, H), spec, samples, seed, workers=workers,
                          keep_values=False)
        rows.append({
            "space": space, "N": N, "d": d, "ensemble": spec.kind,
            "samples": res.n_samples, "mean": res.mean, "std_error": res.std_error,
            "analytic": analytic,
            "rel_dev": abs(res.mean - analytic) / analytic if analytic else 0.0,
        })
        dev = abs(res.mean - analytic)
        checks.append(Check(
            f"avg-qfi N={N} mean within 3 std errors of analytic",
            dev <= 3.0 * res.std_error, dev, f"<= {3.0 * res.std_error:.4g}",
        ))
        if analytic:
            checks.append(Check(
                f"avg-qfi N={N} mean within 2% of analytic",
                dev <= 0.02 * analytic, dev / analytic, "<= 0.02",
            ))
    cols = ("space", "N", "d", "ensemble", "samples", "mean", "std_error",
            "analytic", "rel_dev")
    return ExperimentResult("avg-qfi", cols, tuple(rows), tuple(checks))


def _h_for(d):
    return H_Z if d == 2 else _traceless_basis_h(d)


def _traceless_basis_h(d):
    """A fixed traceless diagonal generator for d > 2 runs."""
    v = np.arange(d, dtype=float)
    v -= v.mean()
    v /= math.sqrt(2.0 * np.sum(v ** 2))  # normalize to tr h^2 = 1/2
    return LocalHamiltonian(np.diag(v))


# ---------------------------------------------------------------------------
# futility: full-space Haar mean vs the closed form and the LU bound
# ---------------------------------------------------------------------------

def run_futility(params):
    _reject_unknown(params, {"N", "samples", "seed", "workers", "lu_N",
                             "lu_samples", "lu_sweeps"})
    N = int(params.get("N", 10))
    samples = int(params.get("samples", 400))
    seed = int(params.get("seed", 0))
    workers = int(params.get("workers", 1))
    lu_N = int(params.get("lu_N", 8))
    lu_samples = int(params.get("lu_samples", 4))
    lu_sweeps = int(params.get("lu_sweeps", 2))

    H = collective_full(H_Z, N)
    spec = EnsembleSpec("haar_full_pure", N, 2)
    analytic = analytic_avg_qfi("full", N, 2, Spectrum.pure(2 ** N), H_Z.tr_h2)
    bound = lu_upper_bound(N, 2, H_Z.op_norm)
    res = mc_estimate(lambda s: qfi(s, H), spec, samples, seed, workers=workers,
                      keep_values=False)

    rows = [{
        "N": N, "kind": "haar_mean", "samples": res.n_samples, "value": res.mean,
        "std_error": res.std_error, "analytic": analytic, "lu_bound": bound,
    }]
    checks = [
        Check("futility mean within 3 std errors of closed form",
              abs(res.mean - analytic) <= 3.0 * res.std_error,
              abs(res.mean - analytic), f"<= {3.0 * res.std_error:.4g}"),
        Check("futility mean below LU upper bound", res.mean < bound, res.mean,
              f"< {bound:.4g}"),
    ]

    lu_bound_small = lu_upper_bound(lu_N, 2, H_Z.op_norm)
    lu_spec = EnsembleSpec("haar_full_pure", lu_N, 2)
    for i in range(lu_samples):
        rng = np.random.default_rng(np.random.SeedSequence((seed, 2 ** 20 + i)))
        state = sample_state(lu_spec, rng)
        val = lu_optimize_qfi(state, H_Z, sweeps=lu_sweeps, rng=rng)
        rows.append({
            "N": lu_N, "kind": "lu_optimized", "samples": 1, "value": val,
            "std_error": 0.0, "analytic": float("nan"), "lu_bound": lu_bound_small,
        })
        checks.append(Check(
            f"LU-optimized sample {i} below bound at N={lu_N}",
            val <= lu_bound_small + 1e-9, val, f"<= {lu_bound_small:.4g}",
        ))
    cols = ("N", "kind", "samples", "value", "std_error", "analytic", "lu_bound")
    return ExperimentResult("futility", cols, tuple(rows), tuple(checks))


# ---------------------------------------------------------------------------
# loss: Theorem-3 bounds under partial trace, plus GHZ fragility
# ---------------------------------------------------------------------------

def run_loss(params):
    _reject_unknown(params, {"N", "k", "samples", "seed", "workers"})
    N = int(params.get("N", 30))
    ks = [int(k) for k in _as_list(params.get("k", [1, 2, 3]))]
    samples = int(params.get("samples", 1000))
    seed = int(params.get("seed", 0))
    workers = int(params.get("workers", 1))

    spec = EnsembleSpec("haar_sym_isospectral", N, 2)
    rows, checks = [], []
    for k in ks:
        Hk = angular_momentum("z", N - k)
        lower, upper = loss_avg_bounds(N, k, 1.0)
        res = mc_estimate(
            lambda s, _k=k, _H=Hk: qfi(partial_trace_dicke(s, _k), _H),
            spec, samples, seed, workers=workers, keep_values=False,
        )
        rows.append({
            "N": N, "k": k, "samples": res.n_samples, "mean": res.mean,
            "std_error": res.std_error, "lower": lower, "upper": upper,
        })
        checks.append(Check(
            f"loss k={k} mean above lower bound (3 std errors)",
            res.mean >= lower - 3.0 * res.std_error, res.mean, f">= {lower:.4g}",
        ))
        checks.append(Check(
            f"loss k={k} mean below upper bound (3 std errors)",
            res.mean <= upper + 3.0 * res.std_error, res.mean, f"<= {upper:.4g}",
        ))

    ghz_rho = partial_trace_dicke(SymmetricState.ghz(N), 1)
    ghz_val = qfi(ghz_rho, angular_momentum("z", N - 1))
    rows.append({
        "N": N, "k": 1, "samples": 1, "mean": ghz_val, "std_error": 0.0,
        "lower": 0.0, "upper": 0.0,
    })
    checks.append(Check("GHZ useless after one lost particle",
                        ghz_val <= 1e-10, ghz_val, "<= 1e-10"))
    cols = ("N", "k", "samples", "mean", "std_error", "lower", "upper")
    return ExperimentResult("loss", cols, tuple(rows), tuple(checks))


# ---------------------------------------------------------------------------
# bs-equiv: beam-splitter channel vs binomially weighted partial traces
# ---------------------------------------------------------------------------

def run_bs_equiv(params):
    _reject_unknown(params, {"N", "eta", "seed", "states", "tol"})
    N = int(params.get("N", 12))
    etas = [float(e) for e in _as_list(params.get("eta", [round(0.1 * i, 1) for i in range(1, 10)]))]
    seed = int(params.get("seed", 0))
    n_states = int(params.get("states", 3))
    tol = float(params.get("tol", 1e-12))

    spec = EnsembleSpec("haar_sym_isospectral", N, 2)
    rows, checks = [], []
    for eta in etas:
        worst_block, worst_prob = 0.0, 0.0
        for i in range(n_states):
            rng = np.random.default_rng(np.random.SeedSequence((seed, i)))
            psi = sample_state(spec, rng)
            report = verify_bs_trace_equivalence(psi, eta, tolerance=tol)
            worst_block = max(worst_block, report.max_block_dev)
            worst_prob = max(worst_prob, report.max_prob_dev)
        rows.append({"N": N, "eta": eta, "states": n_states,
                     "max_block_dev": worst_block, "max_prob_dev": worst_prob})
        checks.append(Check(
            f"bs-equiv eta={eta} max deviation within tolerance",
            max(worst_block, worst_prob) <= tol, max(worst_block, worst_prob),
            f"<= {tol:.1e}",
        ))
    cols = ("N", "eta", "states", "max_block_dev", "max_prob_dev")
    return ExperimentResult("bs-equiv", cols, tuple(rows), tuple(checks))


# ---------------------------------------------------------------------------
# mz-fi: interferometric FI of Haar states vs the analytic band
# ---------------------------------------------------------------------------

def run_mz_fi(params):
    _reject_unknown(params, {"N", "samples", "seed", "workers", "phi"})
    Ns = [int(N) for N in _as_list(params.get("N", [40, 100]))]
    samples = int(params.get("samples", 150))
    seed = int(params.get("seed", 0))
    workers = int(params.get("workers", 1))
    phis = [float(p) for p in _as_list(params.get("phi", [0.0, np.pi / 3, np.pi / 2]))]

    rows, checks = [], []
    for N in Ns:
        lower, upper = fi_avg_bounds(N)
        conjecture = N * (N + 1) / 6.0
        results = []
        for phi in phis:
            spec = EnsembleSpec("haar_sym_isospectral", N, 2)
            res = mc_estimate(lambda s, _p=phi: mz_fi(s, _p), spec, samples, seed,
                              workers=workers, keep_values=False)
            results.append((phi, res))
            rows.append({
                "N": N, "phi": phi, "samples": res.n_samples, "mean": res.mean,
                "std_error": res.std_error, "band_lower": lower, "band_upper": upper,
                "conjecture": conjecture,
                "conjecture_rel_dev": abs(res.mean - conjecture) / conjecture,
            })
            checks.append(Check(
                f"mz-fi N={N} phi={phi:.3f} mean within analytic band (3 std errors)",
                lower - 3 * res.std_error <= res.mean <= upper + 3 * res.std_error,
                res.mean, f"in [{lower:.4g}, {upper:.4g}]",
            ))
        for (p1, r1), (p2, r2) in zip(results, results[1:]):
            combined = math.hypot(r1.std_error, r2.std_error)
            checks.append(Check(
                f"mz-fi N={N} mean phi-independent ({p1:.3f} vs {p2:.3f})",
                abs(r1.mean - r2.mean) <= 3.0 * combined,
                abs(r1.mean - r2.mean), f"<= {3.0 * combined:.4g}",
            ))
    cols = ("N", "phi", "samples", "mean", "std_error", "band_lower",
            "band_upper", "conjecture", "conjecture_rel_dev")
    return ExperimentResult("mz-fi", cols, tuple(rows), tuple(checks))


# ---------------------------------------------------------------------------
# circuit-converge: depth scan toward Haar-typical QFI/FI
# ---------------------------------------------------------------------------

def run_circuit_converge(params):
    _reject_unknown(params, {"N", "K", "samples", "seed", "start", "phi",
                             "ksuf_pct", "check_K"})
    N = int(params.get("N", 100))
    K_list = [int(k) for k in _as_list(params.get("K", [0, 5, 10, 20, 40, 60]))]
    samples = int(params.get("samples", 150))
    seed = int(params.get("seed", 0))
    start = params.get("start", "balanced")
    phis = [float(p) for p in _as_list(params.get("phi", [np.pi / 2, np.pi / 3]))]
    ksuf_pct = float(params.get("ksuf_pct", 10.0))

    conv = circuit_convergence(N, K_list, samples, start, seed, phis=tuple(phis),
                               ksuf_pct=ksuf_pct)
    rows = []
    for row in conv.rows:
        out = {"N": N, "start": start, **row,
               "qfi_target": conv.qfi_target, "fi_target": conv.fi_target}
        rows.append(out)

    checks = []
    by_K = {row["K"]: row for row in conv.rows}
    for K, q_tol, f_tol in ((60, 0.05, 0.10), (20, 0.10, 0.10)):
        if K not in by_K:
            continue
        row = by_K[K]
        qdev = abs(row["qfi_mean"] - conv.qfi_target) / conv.qfi_target
        checks.append(Check(
            f"circuit K={K} mean QFI within {q_tol:.0%} of {conv.qfi_target:.2f}",
            qdev <= q_tol, qdev, f"<= {q_tol}",
        ))
        for a, phi in enumerate(phis):
            fdev = abs(row[f"fi_mean_phi{a}"] - conv.fi_target) / conv.fi_target
            checks.append(Check(
                f"circuit K={K} mean FI(phi={phi:.3f}) within {f_tol:.0%} of "
                f"{conv.fi_target:.2f}",
                fdev <= f_tol, fdev, f"<= {f_tol}",
            ))
    cols = tuple(rows[0].keys()) if rows else ()
    return ExperimentResult("circuit-converge", cols, tuple(rows), tuple(checks))


# ---------------------------------------------------------------------------
# concentration: empirical tails vs the analytic bounds; rel-std monotonicity
# ---------------------------------------------------------------------------

def run_concentration(params):
    _reject_unknown(params, {"N", "kind", "samples", "seed", "workers", "eps",
                             "functional", "phi", "relstd_N", "p"})
    Ns = [int(N) for N in _as_list(params.get("relstd_N", [20, 40, 80]))]
    kind = params.get("kind", "haar_sym_isospectral")
    functional = params.get("functional", "qfi")
    samples = int(params.get("samples", 500))
    seed = int(params.get("seed", 0))
    workers = int(params.get("workers", 1))
    phi = float(params.get("phi", np.pi / 2))
    p = params.get("p", None)

    rows, checks = [], []
    rel_stds = []
    for N in Ns:
        if kind == "haar_sym_depolarized":
            spec = EnsembleSpec(kind, N, 2, p=float(p if p is not None else 0.3))
        else:
            spec = EnsembleSpec(kind, N, 2)
        eps = params.get("eps")
        if eps is None:
            probe = mc_estimate(
                _functional_for(spec, functional, phi), spec, min(samples, 200),
                seed + 1, workers=workers,
            )
            scale = probe.std_error * math.sqrt(probe.n_samples)
            eps = [0.5 * scale, scale, 2.0 * scale, 4.0 * scale]
        report = concentration_report(spec, functional, samples, eps, seed,
                                      phi=phi, workers=workers)
        rel_stds.append((N, report.relative_std))
        for eps_val, tail, bound, vacuous in report.rows:
            rows.append({
                "kind": spec.kind, "functional": functional, "N": spec.N,
                "samples": report.n_samples, "eps": eps_val, "tail": tail,
                "bound": bound, "vacuous": int(vacuous),
                "rel_std": report.relative_std,
            })
            se = math.sqrt(max(tail * (1 - tail), 1.0 / report.n_samples)
                           / report.n_samples)
            checks.append(Check(
                f"tail N={spec.N} eps={eps_val:.3g} below analytic bound",
                tail <= bound + 3.0 * se, tail, f"<= {bound:.3g} + 3se",
            ))
    for (n1, s1), (n2, s2) in zip(rel_stds, rel_stds[1:]):
        checks.append(Check(
            f"relative std decreases from N={n1} to N={n2}",
            s2 < s1, s2, f"< {s1:.4g}",
        ))
    cols = ("kind", "functional", "N", "samples", "eps", "tail", "bound",
            "vacuous", "rel_std")
    return ExperimentResult("concentration", cols, tuple(rows), tuple(checks))


def _functional_for(spec, functional, phi):
    if functional == "mz_fi":
        return lambda s: mz_fi(s, phi)
    if spec.kind == "haar_full_pure":
        H = collective_full(H_Z, spec.N)
    else:
        H = collective_sym(H_Z, spec.N)
    return lambda s: qfi(s, H)


EXPERIMENTS = {
    "avg-qfi": run_avg_qfi,
    "futility": run_futility,
    "loss": run_loss,
    "bs-equiv": run_bs_equiv,
    "mz-fi": run_mz_fi,
    "circuit-converge": run_circuit_converge,
    "concentration": run_concentration,
}


def run_experiment(name, params):
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    return EXPERIMENTS[name](params)

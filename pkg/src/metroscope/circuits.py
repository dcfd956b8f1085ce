"""Random circuits over the universal gate set {V1, V2, V3, V_XK} and their
inverses, lifted to the symmetric subspace, plus the depth-convergence
experiment toward Haar-typical QFI/FI values.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .dicke import SymmetricState, sym_power_lift
from .fisher import NonRemovableSingularityError, qfi
from .hamiltonians import angular_momentum
from .interferometer import mz_fi

__all__ = [
    "Gate",
    "Circuit",
    "GATE_SET",
    "gate_matrix",
    "sample_circuit",
    "apply_circuit",
    "start_state",
    "circuit_convergence",
    "ConvergenceResult",
]

_SQRT5 = math.sqrt(5.0)

# single-particle beam-splitter gates; "fast" universal set for linear optics
_LOCAL = {
    "V1": np.array([[1.0, 2.0j], [2.0j, 1.0]]) / _SQRT5,
    "V2": np.array([[1.0, 2.0], [-2.0, 1.0]], dtype=complex) / _SQRT5,
    "V3": np.array([[1.0 + 2.0j, 0.0], [0.0, 1.0 - 2.0j]]) / _SQRT5,
}


@dataclass(frozen=True)
class Gate:
    kind: str  # V1 | V2 | V3 | XK
    dagger: bool = False

    def __post_init__(self):
        if self.kind not in ("V1", "V2", "V3", "XK"):
            raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def label(self):
        return self.kind + ("†" if self.dagger else "")


GATE_SET = tuple(
    Gate(kind, dagger) for kind in ("V1", "V2", "V3", "XK") for dagger in (False, True)
)

_matrix_cache = {}


def gate_matrix(gate: Gate, N: int) -> np.ndarray:
    """Unitary of one gate on S_N; lifts are cached per (gate, N).

    V1-V3 are symmetric powers of the 2x2 matrices; the cross-Kerr gate is
    diagonal with phases exp(-i pi n (N-n) / 3) on |D_n>.
    """
    key = (gate.kind, gate.dagger, N)
    if key not in _matrix_cache:
        if gate.kind == "XK":
            n = np.arange(N + 1)
            M = np.diag(np.exp(-1j * np.pi * n * (N - n) / 3.0))
        else:
            M = sym_power_lift(_LOCAL[gate.kind], N)
        if gate.dagger:
            M = M.conj().T
        M = np.ascontiguousarray(M)
        M.setflags(write=False)
        _matrix_cache[key] = M
    return _matrix_cache[key]


@dataclass(frozen=True)
class Circuit:
    N: int
    gates: tuple
    seed: object = None  # provenance only

    def __len__(self):
        return len(self.gates)

    def dagger_reversed(self):
        """The inverse circuit: reversed order, every gate conjugated."""
        return Circuit(self.N, tuple(Gate(g.kind, not g.dagger) for g in reversed(self.gates)))


def sample_circuit(N: int, K: int, rng) -> Circuit:
    """K i.i.d. uniform draws from the 8-element gate set."""
    if K < 0:
        raise ValueError("circuit depth must be nonnegative")
    idx = rng.integers(0, len(GATE_SET), size=K)
    return Circuit(N, tuple(GATE_SET[i] for i in idx))


def apply_circuit(state: SymmetricState, circuit: Circuit) -> SymmetricState:
    """Apply gates in list order; matrix-vector per gate for pure states."""
    if state.d != 2 or state.N != circuit.N:
        raise ValueError("circuit and state dimensions do not match")
    if state.is_pure:
        psi = np.array(state.amplitudes)
        for g in circuit.gates:
            psi = gate_matrix(g, circuit.N) @ psi
        psi /= np.linalg.norm(psi)
        return SymmetricState.pure(circuit.N, psi)
    rho = state.density_matrix()
    for g in circuit.gates:
        M = gate_matrix(g, circuit.N)
        rho = M @ rho @ M.conj().T
    rho /= np.trace(rho).real
    return SymmetricState.from_density(circuit.N, rho)


def start_state(tag: str, N: int) -> SymmetricState:
    """Named interferometer inputs: polarized |D_0>, balanced sqrt(C(N,n)/2^N),
    or the N00N superposition (|D_0>+|D_N>)/sqrt(2)."""
    if tag == "polarized":
        return SymmetricState.dicke(N, 0)
    if tag == "balanced":
        return SymmetricState.balanced(N)
    if tag == "noon":
        return SymmetricState.ghz(N)
    raise ValueError(f"unknown start state {tag!r}")


@dataclass(frozen=True)
class ConvergenceResult:
    N: int
    start: str
    n_samples: int
    phis: tuple
    qfi_target: float
    fi_target: float
    rows: tuple = field(default=())  # dicts per depth K
    k_suf: dict = field(default=None)


def circuit_convergence(N, K_list, n_samples, start, master_seed,
                        phis=(np.pi / 2, np.pi / 3), ksuf_pct=10.0):
    """Sample random circuits at each depth K and track mean QFI (generator
    J_z) and mean interferometric FI at the given phases.

    k_suf reports, per functional, the smallest listed K whose sample mean is
    within ksuf_pct percent of the Haar-typical target (N(N+1)/3 for the QFI
    and N(N+1)/6 for the FI).
    """
    psi0 = start_state(start, N)
    Jz = angular_momentum("z", N)
    qfi_target = N * (N + 1) / 3.0
    fi_target = N * (N + 1) / 6.0

    rows = []
    for K in K_list:
        qvals = np.empty(n_samples)
        fvals = np.full((len(phis), n_samples), np.nan)
        skipped = 0
        for i in range(n_samples):
            rng = np.random.default_rng(np.random.SeedSequence((master_seed, K, i)))
            psi = apply_circuit(psi0, sample_circuit(N, K, rng))
            qvals[i] = qfi(psi, Jz)
            for a, phi in enumerate(phis):
                try:
                    fvals[a, i] = mz_fi(psi, phi)
                except NonRemovableSingularityError:
                    skipped += 1
        if skipped > 0.01 * n_samples * len(phis):
            raise RuntimeError(
                f"{skipped} FI evaluations at K={K} hit non-removable singularities"
            )
        row = {
            "K": K,
            "qfi_mean": float(qvals.mean()),
            "qfi_se": float(qvals.std(ddof=1) / math.sqrt(n_samples)) if n_samples > 1 else 0.0,
        }
        for a, phi in enumerate(phis):
            good = fvals[a][~np.isnan(fvals[a])]
            row[f"fi_mean_phi{a}"] = float(good.mean())
            row[f"fi_se_phi{a}"] = (
                float(good.std(ddof=1) / math.sqrt(good.size)) if good.size > 1 else 0.0
            )
        rows.append(row)

    frac = ksuf_pct / 100.0
    k_suf = {"qfi": None, "fi": None}
    for row in rows:
        if k_suf["qfi"] is None and abs(row["qfi_mean"] - qfi_target) <= frac * qfi_target:
            k_suf["qfi"] = row["K"]
        fi_ok = all(
            abs(row[f"fi_mean_phi{a}"] - fi_target) <= frac * fi_target
            for a in range(len(phis))
        )
        if k_suf["fi"] is None and fi_ok:
            k_suf["fi"] = row["K"]

    return ConvergenceResult(
        N=N, start=start, n_samples=n_samples, phis=tuple(phis),
        qfi_target=qfi_target, fi_target=fi_target, rows=tuple(rows), k_suf=k_suf,
    )

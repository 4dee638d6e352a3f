"""Seeded property suites that cross-check the fast paths against brute force."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from . import oracle
from .collective import build_collective
from .protocols import KINDS, ProtocolRun, ProtocolSpec
from .qfi import fvc_upper_bound, qfi_mixed, random_mixed_state, zeta_coefficient, zeta_gap

SUITES = ("fvc", "zeta", "sector", "envelope")


@dataclass
class SuiteResult:
    suite: str
    trials: int
    passed_trials: int
    max_violation: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.passed_trials == self.trials

    def as_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def fvc_suite(trials: int = 100, seed: int = 0, max_n: int = 8, max_components: int = 4) -> SuiteResult:
    """QFI <= 4 sum lam C_mu on random mixed Dicke states, and the zeta identity closes the gap.

    ``max_violation`` is the worst of (QFI - bound) and the relative identity residual.
    """
    rng = np.random.default_rng(seed)
    ok, worst_slack, worst_ident, worst_oracle = 0, -np.inf, 0.0, 0.0
    for _ in range(trials):
        n = int(rng.integers(1, max_n + 1))
        k = int(rng.integers(1, min(max_components, n + 1) + 1))
        rho = random_mixed_state(n + 1, k, rng)
        sz = build_collective("z", n)
        f = qfi_mixed(rho, sz)
        bound = fvc_upper_bound(rho, sz)
        gap = zeta_gap(rho, sz)
        brute = oracle.qfi_bruteforce(rho, sz.to_dense())
        scale = max(1.0, abs(bound))
        slack_violation = f - bound
        ident = abs(f + gap - bound) / scale
        oracle_err = abs(f - brute) / max(1.0, abs(brute))
        worst_slack = max(worst_slack, slack_violation)
        worst_ident = max(worst_ident, ident)
        worst_oracle = max(worst_oracle, oracle_err)
        if slack_violation <= 1e-9 and ident <= 1e-9 and oracle_err <= 1e-9:
            ok += 1
    return SuiteResult(
        "fvc",
        trials,
        ok,
        float(max(worst_slack, worst_ident)),
        {"max_qfi_minus_bound": float(worst_slack), "max_identity_residual": float(worst_ident),
         "max_oracle_residual": float(worst_oracle)},
    )


def zeta_suite(trials: int = 1000, seed: int = 0) -> SuiteResult:
    rng = np.random.default_rng(seed)
    lam = rng.uniform(0, 1, size=(trials, 2))
    lam[: trials // 10, 1] = 0.0  # boundary cases
    values = np.array([zeta_coefficient(a, b) for a, b in lam])
    ok = int(np.sum(values >= 0.0))
    return SuiteResult("zeta", trials, ok, float(max(0.0, -values.min())), {"min_zeta": float(values.min())})


def sector_trajectories(kind: str, n: int, n_times: int = 50):
    """Dicke-simulated and brute-force QFI along the same time grid.

    The brute-force side evolves the full 2^N product state under a
    Hamiltonian built from site operators and maximises 4 <S_theta^2> by a dense
    2x2 eigensolve, sharing no code with the Dicke route.
    """
    spec = ProtocolSpec(kind, n)
    times = np.linspace(0.0, 5.0 * spec.guess_time(), n_times)
    dicke = np.array([r.f_q for r in ProtocolRun(spec).records(times)])
    return times, dicke, bruteforce_qfi_series(spec, times)


def bruteforce_qfi_series(spec: ProtocolSpec, times) -> np.ndarray:
    """Optimal transverse QFI from full 2^N evolution (N <= oracle.MAX_SITES)."""
    n = spec.n_spins
    h = oracle.protocol_hamiltonian_full(spec.kind, n, spec.chi, spec.b_field)
    target = oracle.full_spectrum(h) if n <= oracle.MAX_DENSE_SITES else h
    psi0 = oracle.x_polarized(n, sign=1 if spec.initial_direction == "+x" else -1)
    sy, sz = oracle.collective_full("y", n), oracle.collective_full("z", n)
    brute = []
    for t in times:
        psi = oracle.full_evolve(target, psi0, t).amplitudes
        y, z = sy @ psi, sz @ psi
        c = np.array([[np.vdot(y, y).real, np.vdot(y, z).real], [np.vdot(z, y).real, np.vdot(z, z).real]])
        brute.append(4.0 * np.linalg.eigvalsh(c)[-1])
    return np.array(brute)


def sector_suite(n_values=(4, 6, 8), kinds=KINDS, n_times: int = 50, tol: float = 1e-8) -> SuiteResult:
    trials = ok = 0
    worst = 0.0
    per_case = {}
    for kind in kinds:
        for n in n_values:
            _, dicke, brute = sector_trajectories(kind, n, n_times)
            err = np.abs(dicke - brute) / np.maximum(1.0, np.abs(brute))
            trials += err.size
            ok += int(np.sum(err <= tol))
            worst = max(worst, float(err.max()))
            per_case[f"{kind}:{n}"] = float(err.max())
    return SuiteResult("sector", trials, ok, worst, per_case)


def envelope_suite(seed: int = 0, trials: int = 3) -> SuiteResult:
    """Correlation growth under all-to-all pairs stays within an N-independent v t envelope,
    and a nearest-neighbour chain keeps its end-to-end correlation tiny."""
    t_grid = np.linspace(0.01, 0.1, 10)
    report = oracle.correlation_envelope_check(
        oracle.LatticeSpec(4, alpha=0.0), t_grid, trials=trials, n_values=(4, 6, 8, 10), seed=seed
    )
    distant = oracle.distant_pair_correlation(
        oracle.LatticeSpec(8, profile="nearest-neighbor"), t_grid, trials=trials, seed=seed
    )
    passed = int(report.passed) + int(distant <= 1e-6)
    return SuiteResult(
        "envelope",
        2,
        passed,
        float(max(report.relative_slope - report.max_slope, distant - 1e-6, 0.0)),
        {**report.as_dict(), "distant_pair_max": float(distant)},
    )


def run_suite(name: str, seed: int = 0, trials: int | None = None) -> SuiteResult:
    if name == "fvc":
        return fvc_suite(trials or 100, seed)
    if name == "zeta":
        return zeta_suite(trials or 1000, seed)
    if name == "sector":
        return sector_suite()
    if name == "envelope":
        return envelope_suite(seed, trials or 3)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES}")

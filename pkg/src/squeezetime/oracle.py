"""Full 2^N Hilbert-space brute force for small N.

Used to validate the Dicke-subspace machinery and to measure connected
correlations under power-law lattice Hamiltonians. Single-site basis: index 0
is spin up (sigma^z = +1); site 0 is the most significant tensor factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .collective import DickeState
from .errors import InvalidArgument, ResourceLimitError
from .qfi import MixedState

MAX_SITES = 14
MAX_DENSE_SITES = 12
MAX_MIXED_SITES = 10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, SX, SY, SZ)
_AXIS = {"x": SX, "y": SY, "z": SZ}


def _check_sites(n: int, limit: int = MAX_SITES) -> int:
    if int(n) != n or n < 1:
        raise InvalidArgument(f"number of sites must be a positive integer, got {n}")
    if n > limit:
        raise ResourceLimitError(f"N={n} exceeds the brute-force limit of {limit} spins")
    return int(n)


@dataclass(frozen=True, eq=False)
class FullState:
    n_spins: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_sites(self.n_spins)
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (2**self.n_spins,):
            raise InvalidArgument(f"expected 2^{self.n_spins} amplitudes, got {amps.shape}")
        if abs(np.linalg.norm(amps) - 1.0) > 1e-10:
            raise InvalidArgument("full state is not normalised")
        object.__setattr__(self, "amplitudes", amps)


# --- operators ---------------------------------------------------------------

def site_operator(op: np.ndarray, site: int, n: int) -> sp.csr_matrix:
    """op acting on one site, identity elsewhere."""
    left = sp.identity(2**site, dtype=complex, format="csr")
    right = sp.identity(2 ** (n - site - 1), dtype=complex, format="csr")
    return sp.kron(sp.kron(left, sp.csr_matrix(op)), right, format="csr")


@lru_cache(maxsize=64)
def collective_full(axis: str, n: int) -> sp.csr_matrix:
    """S_axis = sum_i sigma^axis_i / 2 on the full space."""
    _check_sites(n)
    op = _AXIS[axis] / 2
    total = sp.csr_matrix((2**n, 2**n), dtype=complex)
    for i in range(n):
        total = total + site_operator(op, i, n)
    return total


def two_site_operator(m4: np.ndarray, i: int, j: int, n: int) -> sp.csr_matrix:
    """Embed a 4x4 operator on (site i) x (site j) via its Pauli expansion."""
    out = sp.csr_matrix((2**n, 2**n), dtype=complex)
    for a, pa in enumerate(PAULIS):
        for b, pb in enumerate(PAULIS):
            c = np.trace(np.kron(pa, pb).conj().T @ m4) / 4
            if abs(c) < 1e-15:
                continue
            term = sp.identity(2**n, dtype=complex, format="csr")
            if a:
                term = term @ site_operator(pa, i, n)
            if b:
                term = term @ site_operator(pb, j, n)
            out = out + c * term
    return out


@lru_cache(maxsize=32)
def symmetric_projector(n: int) -> sp.csr_matrix:
    """Isometry (2^N x (N+1)) whose column k is the Dicke state with k spins up."""
    _check_sites(n)
    dim = 2**n
    ones = np.array([bin(b).count("1") for b in range(dim)])
    k = n - ones  # bit 0 = up
    norms = np.array([math.comb(n, int(kk)) for kk in k], dtype=float)
    return sp.csr_matrix((1 / np.sqrt(norms), (np.arange(dim), k)), shape=(dim, n + 1))


def project_operator(h) -> np.ndarray:
    """P^dagger H P: restriction of a permutation-symmetric operator to the Dicke sector."""
    n = int(round(math.log2(h.shape[0])))
    p = symmetric_projector(n)
    return np.asarray((p.conj().T @ h @ p).todense()) if sp.issparse(h) else p.conj().T @ (h @ p)


def embed_dicke(state: DickeState) -> FullState:
    p = symmetric_projector(state.n_spins)
    return FullState(state.n_spins, p @ state.amplitudes)


def project_state(state: FullState) -> np.ndarray:
    """Dicke-basis components P^dagger psi (not renormalised)."""
    return symmetric_projector(state.n_spins).conj().T @ state.amplitudes


def product_state(n: int, thetas, phis) -> FullState:
    """Tensor product of single-spin states with Bloch angles (theta_i, phi_i)."""
    _check_sites(n)
    thetas = np.broadcast_to(np.asarray(thetas, dtype=float), (n,))
    phis = np.broadcast_to(np.asarray(phis, dtype=float), (n,))
    psi = np.ones(1, dtype=complex)
    for th, ph in zip(thetas, phis):
        psi = np.kron(psi, [math.cos(th / 2), np.exp(1j * ph) * math.sin(th / 2)])
    return FullState(n, psi)


def x_polarized(n: int, sign: int = 1) -> FullState:
    return product_state(n, math.pi / 2, 0.0 if sign > 0 else math.pi)


def ghz_state(n: int) -> FullState:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = psi[-1] = 1 / math.sqrt(2)
    return FullState(n, psi)


def random_product_state(n: int, rng: np.random.Generator) -> FullState:
    thetas = np.arccos(rng.uniform(-1, 1, size=n))
    phis = rng.uniform(0, 2 * math.pi, size=n)
    return product_state(n, thetas, phis)


def protocol_hamiltonian_full(kind: str, n: int, chi: float = 1.0, b_field: float | None = None):
    """TAT / TnT / OAT built from full-space collective operators (independent of the Dicke code)."""
    sx, sy, sz = (collective_full(a, n) for a in "xyz")
    if kind == "tat":
        return chi * (sy @ sz + sz @ sy)
    h = chi * (sz @ sz)
    if kind == "tnt":
        if b_field is None:
            raise InvalidArgument("TnT needs an explicit b_field")
        h = h - b_field * sx
    elif kind != "oat":
        raise InvalidArgument(f"unknown protocol {kind!r}")
    return h.tocsr()


# --- lattices -----------------------------------------------------------------

COUPLINGS = ("yz", "random")
PROFILES = ("power-law", "nearest-neighbor", "uniform")

# symmetrised sigma^y sigma^z pair, scaled to unit operator norm
YZ_PAIR = (np.kron(SY, SZ) + np.kron(SZ, SY)) / 2


@dataclass(frozen=True)
class LatticeSpec:
    """Two-body lattice Hamiltonian sum_{i<j} h_ij with ||h_ij|| <= j0 / r^alpha.

    ``profile``: ``power-law`` gives every pair strength j0/r^alpha;
    ``nearest-neighbor`` keeps only r = 1 pairs; ``uniform`` gives every pair
    j0 L^-alpha (the all-to-all twisting preset, L the linear size).
    """

    n_sites: int
    dim: int = 1
    alpha: float = 0.0
    coupling: str = "yz"
    profile: str = "power-law"
    j0: float = 1.0
    seed: int = 0

    def __post_init__(self):
        _check_sites(self.n_sites)
        if self.dim not in (1, 2):
            raise InvalidArgument("lattice dimension must be 1 or 2")
        if not self.alpha >= 0:
            raise InvalidArgument("alpha must be >= 0")
        if self.coupling not in COUPLINGS:
            raise InvalidArgument(f"coupling must be one of {COUPLINGS}")
        if self.profile not in PROFILES:
            raise InvalidArgument(f"profile must be one of {PROFILES}")
        if not self.j0 > 0:
            raise InvalidArgument("j0 must be positive")

    def positions(self) -> np.ndarray:
        if self.dim == 1:
            return np.arange(self.n_sites, dtype=float)[:, None]
        side = self.linear_size
        idx = np.arange(self.n_sites)
        return np.column_stack([idx // side, idx % side]).astype(float)

    @property
    def linear_size(self) -> int:
        return self.n_sites if self.dim == 1 else math.ceil(math.sqrt(self.n_sites))


def tat_preset(n: int, alpha: float = 0.0) -> LatticeSpec:
    """Pauli-convention two-axis twisting, J_alpha sum_{i != j} (s^y_i s^z_j + s^z_i s^y_j),
    J_alpha = L^-alpha. Each unordered pair carries 2 J_alpha (s^y s^z + s^z s^y), norm 4 J_alpha.
    """
    return LatticeSpec(n, 1, alpha, "yz", "uniform", j0=4.0)


@dataclass(frozen=True)
class PairTerm:
    i: int
    j: int
    distance: float
    strength: float
    op: np.ndarray  # unit-norm 4x4 Hermitian


def pair_terms(spec: LatticeSpec) -> list[PairTerm]:
    pos = spec.positions()
    rng = np.random.default_rng(spec.seed)
    terms = []
    for i in range(spec.n_sites):
        for j in range(i + 1, spec.n_sites):
            r = float(np.linalg.norm(pos[i] - pos[j]))
            if spec.profile == "power-law":
                strength = spec.j0 / r**spec.alpha
            elif spec.profile == "nearest-neighbor":
                if abs(r - 1.0) > 1e-9:
                    continue
                strength = spec.j0
            else:
                strength = spec.j0 * spec.linear_size ** (-spec.alpha)
            if spec.coupling == "yz":
                op = YZ_PAIR
            else:
                g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
                op = (g + g.conj().T) / 2
                op = op / np.linalg.norm(op, 2)
            terms.append(PairTerm(i, j, r, strength, op))
    return terms


def full_hamiltonian(spec: LatticeSpec) -> sp.csr_matrix:
    n = spec.n_sites
    h = sp.csr_matrix((2**n, 2**n), dtype=complex)
    for term in pair_terms(spec):
        norm = term.strength * np.linalg.norm(term.op, 2)
        if norm > spec.j0 / term.distance**spec.alpha * (1 + 1e-12):
            raise InvalidArgument(
                f"pair ({term.i},{term.j}) norm {norm:.3g} exceeds j0/r^alpha"
            )
        h = h + term.strength * two_site_operator(term.op, term.i, term.j, n)
    return h.tocsr()


def interaction_speed(spec: LatticeSpec) -> float:
    """v = max_i sum_j ||h_ij||."""
    per_site = np.zeros(spec.n_sites)
    for term in pair_terms(spec):
        norm = term.strength * np.linalg.norm(term.op, 2)
        per_site[term.i] += norm
        per_site[term.j] += norm
    return float(per_site.max())


# --- dynamics -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FullSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def full_spectrum(h) -> FullSpectrum:
    n = int(round(math.log2(h.shape[0])))
    _check_sites(n, MAX_DENSE_SITES)
    dense = h.toarray() if sp.issparse(h) else np.asarray(h)
    w, v = np.linalg.eigh(dense)
    return FullSpectrum(w, v)


def full_evolve(h, state: FullState, t: float) -> FullState:
    """exp(-iHt) psi; ``h`` is a matrix or a precomputed ``FullSpectrum``.

    Dense diagonalisation up to 12 spins, ``expm_multiply`` above.
    """
    if not math.isfinite(t):
        raise InvalidArgument("t must be finite")
    if isinstance(h, FullSpectrum):
        if h.eigenvectors.shape[0] != state.amplitudes.size:
            raise InvalidArgument("dimension mismatch")
        v = h.eigenvectors
        psi = v @ (np.exp(-1j * h.eigenvalues * t) * (v.conj().T @ state.amplitudes))
        return FullState(state.n_spins, psi)
    if h.shape[0] != state.amplitudes.size:
        raise InvalidArgument("dimension mismatch")
    if state.n_spins <= MAX_DENSE_SITES:
        return full_evolve(full_spectrum(h), state, t)
    psi = expm_multiply(-1j * t * sp.csr_matrix(h), state.amplitudes)
    return FullState(state.n_spins, psi)


# --- correlations and QFI ------------------------------------------------------

def _apply_site(psi_t: np.ndarray, op: np.ndarray, site: int) -> np.ndarray:
    out = np.tensordot(op, psi_t, axes=([1], [site]))
    return np.moveaxis(out, 0, site)


def connected_correlations(state: FullState, site_ops):
    """C_ij = <A_i A_j> - <A_i><A_j> and C_total = sum_ij C_ij.

    ``site_ops`` is one 2x2 Hermitian per site, or a single 2x2 used on every site.
    """
    n = state.n_spins
    ops = np.asarray(site_ops, dtype=complex)
    if ops.shape == (2, 2):
        ops = np.broadcast_to(ops, (n, 2, 2))
    if ops.shape != (n, 2, 2):
        raise InvalidArgument("need one 2x2 operator per site")
    for op in ops:
        if np.max(np.abs(op - op.conj().T)) > 1e-12:
            raise InvalidArgument("site operators must be Hermitian")
        if np.linalg.norm(op, 2) > 1 + 1e-12:
            raise InvalidArgument("site operators must have norm <= 1")
    psi = state.amplitudes.reshape((2,) * n)
    phis = np.stack([_apply_site(psi, ops[i], i).ravel() for i in range(n)])
    flat = psi.ravel()
    means = np.real(phis.conj() @ flat)
    second = np.real(phis.conj() @ phis.T)
    c = second - np.outer(means, means)
    return c, float(c.sum())


def qfi_bruteforce(state, generator) -> float:
    """QFI from a dense eigendecomposition of rho and the full double sum over eigenpairs.

    ``state``: FullState, DickeState, raw vector, or MixedState. ``generator``: matrix.
    """
    if isinstance(state, MixedState):
        rho = state.density_matrix()
    else:
        psi = state.amplitudes if hasattr(state, "amplitudes") else np.asarray(state, dtype=complex)
        rho = np.outer(psi, psi.conj())
    dim = rho.shape[0]
    if dim > 2**MAX_MIXED_SITES:
        raise ResourceLimitError(f"dense QFI limited to dimension {2 ** MAX_MIXED_SITES}")
    a = generator.toarray() if sp.issparse(generator) else np.asarray(generator, dtype=complex)
    lam, v = np.linalg.eigh((rho + rho.conj().T) / 2)
    lam = np.where(lam < 1e-13, 0.0, lam)
    a_eig = v.conj().T @ a @ v
    lsum = lam[:, None] + lam[None, :]
    ldiff = lam[:, None] - lam[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        coeff = np.where(lsum > 0, ldiff**2 / lsum, 0.0)
    return float(2.0 * np.sum(coeff * np.abs(a_eig) ** 2))


# --- correlation envelope ------------------------------------------------------

@dataclass(frozen=True)
class EnvelopeReport:
    n_values: tuple
    ratios: tuple  # max over trials, times, pairs of |C_ij| / (v t)
    relative_slope: float  # d log(ratio) / d log(N)
    max_slope: float
    passed: bool

    def as_dict(self) -> dict:
        return {
            "n_values": list(self.n_values),
            "ratios": list(self.ratios),
            "relative_slope": self.relative_slope,
            "max_slope": self.max_slope,
            "passed": self.passed,
        }


def _site_z() -> np.ndarray:
    return SZ / 2


def max_correlation_ratio(spec: LatticeSpec, t_grid, trials: int, seed: int) -> float:
    _check_sites(spec.n_sites, MAX_DENSE_SITES)
    spec_h = full_spectrum(full_hamiltonian(spec))
    v = interaction_speed(spec)
    rng = np.random.default_rng([seed, spec.n_sites])
    mask = ~np.eye(spec.n_sites, dtype=bool)
    best = 0.0
    for _ in range(trials):
        psi0 = random_product_state(spec.n_sites, rng)
        for t in t_grid:
            if t <= 0:
                continue
            c, _ = connected_correlations(full_evolve(spec_h, psi0, t), _site_z())
            best = max(best, float(np.max(np.abs(c[mask]))) / (v * t))
    return best


def correlation_envelope_check(
    spec: LatticeSpec,
    t_grid,
    trials: int = 3,
    n_values: Sequence[int] = (4, 6, 8, 10),
    seed: int = 0,
    max_slope: float = 0.1,
) -> EnvelopeReport:
    """Does max_ij C_ij(t) / (v t) admit an N-independent envelope?

    ``spec`` fixes everything except the number of sites, which runs over
    ``n_values``. PASS when the log-log slope of the ratio against N is at most
    ``max_slope``.
    """
    ratios = []
    for n in n_values:
        ratios.append(max_correlation_ratio(replace(spec, n_sites=n), t_grid, trials, seed))
    slope = float(np.polyfit(np.log(n_values), np.log(ratios), 1)[0])
    return EnvelopeReport(
        tuple(int(n) for n in n_values), tuple(float(r) for r in ratios), slope, max_slope, slope <= max_slope
    )


def distant_pair_correlation(spec: LatticeSpec, t_grid, trials: int = 3, seed: int = 0) -> float:
    """max over trials and times of |C_{0, N-1}(t)|, the most distant pair of a chain."""
    spec_h = full_spectrum(full_hamiltonian(spec))
    rng = np.random.default_rng([seed, spec.n_sites])
    worst = 0.0
    for _ in range(trials):
        psi0 = random_product_state(spec.n_sites, rng)
        for t in t_grid:
            c, _ = connected_correlations(full_evolve(spec_h, psi0, t), _site_z())
            worst = max(worst, abs(c[0, -1]))
    return worst

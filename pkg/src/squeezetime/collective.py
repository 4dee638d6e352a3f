"""Collective spin operators and states in the symmetric (S = N/2) Dicke subspace.

Basis convention: index ``k = m + N/2`` runs over ascending ``m = -N/2 .. N/2``,
so ``S_z`` is diagonal and ascending. Spin-1/2 normalisation, hbar = 1.

Operators are stored as Hermitian band matrices in LAPACK "lower" layout:
``bands[k, i] = M[i + k, i]``; the upper triangle is implied by hermiticity.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma, log

import numpy as np
import scipy.sparse as sp

from .errors import InvalidArgument

MAX_SPINS = 100_000
HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-10


def _check_n(n_spins) -> int:
    if isinstance(n_spins, bool) or int(n_spins) != n_spins:
        raise InvalidArgument(f"N must be an integer, got {n_spins!r}")
    n = int(n_spins)
    if n < 1:
        raise InvalidArgument(f"N must be >= 1, got {n}")
    if n > MAX_SPINS:
        raise InvalidArgument(f"N={n} exceeds the supported Dicke dimension")
    return n


@dataclass(frozen=True, eq=False)
class DickeState:
    n_spins: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.n_spins + 1,):
            raise InvalidArgument(
                f"expected {self.n_spins + 1} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidArgument(f"state is not normalised (|psi| = {norm:.3e})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.n_spins + 1

    @classmethod
    def from_vector(cls, vec, normalize=True) -> "DickeState":
        vec = np.asarray(vec, dtype=complex)
        if normalize:
            vec = vec / np.linalg.norm(vec)
        return cls(vec.size - 1, vec)

    def fidelity(self, other: "DickeState") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)


@dataclass(frozen=True, eq=False)
class CollectiveOperator:
    n_spins: int
    bands: np.ndarray

    def __post_init__(self):
        bands = np.atleast_2d(np.asarray(self.bands, dtype=complex))
        if bands.shape[1] != self.n_spins + 1:
            raise InvalidArgument(
                f"band storage width {bands.shape[1]} != dimension {self.n_spins + 1}"
            )
        diag_imag = np.max(np.abs(bands[0].imag), initial=0.0)
        if diag_imag > HERMITIAN_TOL * max(1.0, np.max(np.abs(bands), initial=0.0)):
            raise InvalidArgument("operator diagonal is not real: not Hermitian")
        bands = bands.copy()
        bands[0] = bands[0].real
        bands.setflags(write=False)
        object.__setattr__(self, "bands", bands)

    @property
    def dim(self) -> int:
        return self.n_spins + 1

    @property
    def half_bandwidth(self) -> int:
        return self.bands.shape[0] - 1

    # -- conversions -------------------------------------------------------
    @classmethod
    def from_sparse(cls, n_spins, mat, tol=HERMITIAN_TOL) -> "CollectiveOperator":
        """Build from a Hermitian (sparse or dense) matrix, trimming empty outer bands."""
        mat = sp.csr_matrix(mat, dtype=complex)
        dim = n_spins + 1
        if mat.shape != (dim, dim):
            raise InvalidArgument(f"matrix shape {mat.shape} does not match N={n_spins}")
        scale = max(1.0, abs(mat).max()) if mat.nnz else 1.0
        if mat.nnz and abs(mat - mat.conj().T).max() > tol * scale:
            raise InvalidArgument("matrix is not Hermitian")
        coo = mat.tocoo()
        offsets = coo.row - coo.col
        width = int(max(0, offsets.max(initial=0), -offsets.min(initial=0)))
        bands = np.zeros((width + 1, dim), dtype=complex)
        for k in range(width + 1):
            d = mat.diagonal(-k)
            bands[k, : d.size] = d
        while bands.shape[0] > 1 and np.max(np.abs(bands[-1])) <= tol * scale:
            bands = bands[:-1]
        return cls(n_spins, bands)

    def to_sparse(self) -> sp.csr_matrix:
        dim = self.dim
        diags, offsets = [self.bands[0]], [0]
        for k in range(1, self.half_bandwidth + 1):
            lower = self.bands[k, : dim - k]
            diags += [lower, lower.conj()]
            offsets += [-k, k]
        return sp.diags(diags, offsets, shape=(dim, dim), format="csr", dtype=complex)

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    # -- algebra -----------------------------------------------------------
    def matvec(self, vec: np.ndarray) -> np.ndarray:
        """Apply to a vector, or to each column of a (dim, k) array."""
        vec = np.asarray(vec, dtype=complex)
        if vec.shape[0] != self.dim:
            raise InvalidArgument(f"vector length {vec.shape[0]} != dimension {self.dim}")
        b = self.bands if vec.ndim == 1 else self.bands[:, :, None]
        out = b[0] * vec
        for k in range(1, self.half_bandwidth + 1):
            n = self.dim - k
            out[k:] += b[k, :n] * vec[:n]
            out[:n] += b[k, :n].conj() * vec[k:]
        return out

    def _same_n(self, other):
        if self.n_spins != other.n_spins:
            raise InvalidArgument(f"mismatched N: {self.n_spins} vs {other.n_spins}")

    def __add__(self, other):
        if not isinstance(other, CollectiveOperator):
            return NotImplemented
        self._same_n(other)
        w = max(self.bands.shape[0], other.bands.shape[0])
        bands = np.zeros((w, self.dim), dtype=complex)
        bands[: self.bands.shape[0]] += self.bands
        bands[: other.bands.shape[0]] += other.bands
        return CollectiveOperator(self.n_spins, bands)

    def __neg__(self):
        return CollectiveOperator(self.n_spins, -self.bands)

    def __sub__(self, other):
        if not isinstance(other, CollectiveOperator):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if not np.isscalar(scalar) or np.iscomplexobj(scalar):
            return NotImplemented
        return CollectiveOperator(self.n_spins, self.bands * float(scalar))

    __rmul__ = __mul__


def _ladder_coefficients(n: int) -> np.ndarray:
    """<m+1|S_+|m> for m = -N/2 .. N/2 - 1."""
    s = n / 2
    m = np.arange(n) - s
    return np.sqrt(s * (s + 1) - m * (m + 1))


def build_collective(axis: str, n_spins: int) -> CollectiveOperator:
    """Return S_x, S_y or S_z for N spin-1/2 particles in the Dicke basis."""
    n = _check_n(n_spins)
    dim = n + 1
    if axis == "z":
        return CollectiveOperator(n, (np.arange(dim) - n / 2)[None, :])
    bands = np.zeros((2, dim), dtype=complex)
    c = _ladder_coefficients(n)
    if axis == "x":
        bands[1, :n] = c / 2
    elif axis == "y":
        # S_y = (S_+ - S_-) / 2i, lower band holds the S_+ part
        bands[1, :n] = -0.5j * c
    else:
        raise InvalidArgument(f"axis must be one of x, y, z; got {axis!r}")
    return CollectiveOperator(n, bands)


def symmetrized_product(a: CollectiveOperator, b: CollectiveOperator) -> CollectiveOperator:
    """AB + BA."""
    a._same_n(b)
    A, B = a.to_sparse(), b.to_sparse()
    return CollectiveOperator.from_sparse(a.n_spins, A @ B + B @ A)


def square(a: CollectiveOperator) -> CollectiveOperator:
    return symmetrized_product(a, a) * 0.5


def coherent_state(n_spins: int, direction: str = "+x") -> DickeState:
    """Product state of N spins polarised along +x or -x."""
    n = _check_n(n_spins)
    if direction not in ("+x", "-x"):
        raise InvalidArgument(f"direction must be '+x' or '-x', got {direction!r}")
    k = np.arange(n + 1)
    # binomial weights in log space: C(1000, 500) overflows a double
    log_amp = 0.5 * (lgamma(n + 1) - np.array([lgamma(i + 1) + lgamma(n - i + 1) for i in k]))
    amps = np.exp(log_amp - 0.5 * n * log(2.0)).astype(complex)
    if direction == "-x":
        amps *= (-1.0) ** k
    amps /= np.linalg.norm(amps)
    return DickeState(n, amps)


def parity_flip(state: DickeState) -> DickeState:
    """a_k -> (-1)^k a_k, i.e. a pi rotation about z up to a global phase."""
    k = np.arange(state.dim)
    return DickeState(state.n_spins, state.amplitudes * (-1.0) ** k)


def expectation(state: DickeState, op: CollectiveOperator) -> float:
    """<psi|op|psi> as a real number."""
    if state.n_spins != op.n_spins:
        raise InvalidArgument(f"mismatched N: state {state.n_spins}, operator {op.n_spins}")
    val = np.vdot(state.amplitudes, op.matvec(state.amplitudes))
    scale = max(1.0, float(np.max(np.abs(op.bands), initial=0.0)))
    if abs(val.imag) > HERMITIAN_TOL * scale * max(1, op.half_bandwidth + 1):
        raise InvalidArgument(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)

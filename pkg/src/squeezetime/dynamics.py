"""Exact time evolution in the Dicke subspace via one banded eigendecomposition.

Times are in units of 1/chi (the Hamiltonian's rate constant is set to 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eig_banded

from .collective import CollectiveOperator, DickeState
from .errors import InvalidArgument


@dataclass(frozen=True, eq=False)
class SpectralForm:
    n_spins: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    @property
    def dim(self) -> int:
        return self.n_spins + 1

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def diagonalize(h: CollectiveOperator) -> SpectralForm:
    if not isinstance(h, CollectiveOperator):
        raise InvalidArgument("diagonalize expects a CollectiveOperator")
    w, v = eig_banded(np.array(h.bands), lower=True, check_finite=True)
    return SpectralForm(h.n_spins, w, v)


class Propagator:
    """Caches V^dagger psi0 so that each ``state_at(t)`` costs one O(dim^2) product."""

    def __init__(self, spec: SpectralForm, state0: DickeState):
        if state0.n_spins != spec.n_spins:
            raise InvalidArgument(
                f"dimension mismatch: state N={state0.n_spins}, Hamiltonian N={spec.n_spins}"
            )
        self.spec = spec
        self.n_spins = spec.n_spins
        self._coeffs = spec.eigenvectors.conj().T @ state0.amplitudes

    def vectors(self, times) -> np.ndarray:
        """Raw state vectors as columns, shape (dim, len(times))."""
        times = np.atleast_1d(np.asarray(times, dtype=float))
        if not np.all(np.isfinite(times)):
            raise InvalidArgument("evolution times must be finite")
        phases = np.exp(-1j * np.outer(self.spec.eigenvalues, times))
        return self.spec.eigenvectors @ (phases * self._coeffs[:, None])

    def state_at(self, t: float) -> DickeState:
        return DickeState(self.n_spins, self.vectors([t])[:, 0])


def evolve(spec: SpectralForm, state: DickeState, t: float) -> DickeState:
    """exp(-iHt) psi."""
    return Propagator(spec, state).state_at(t)


def _check_grid(t_grid) -> np.ndarray:
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1:
        raise InvalidArgument("time grid must be one-dimensional")
    if not np.all(np.isfinite(t_grid)):
        raise InvalidArgument("time grid must be finite")
    if np.any(np.diff(t_grid) < 0):
        raise InvalidArgument("time grid must be ascending")
    return t_grid


def evolve_series(spec: SpectralForm, state0: DickeState, t_grid) -> list[DickeState]:
    t_grid = _check_grid(t_grid)
    prop = Propagator(spec, state0)
    vecs = prop.vectors(t_grid)
    return [DickeState(spec.n_spins, vecs[:, i]) for i in range(t_grid.size)]

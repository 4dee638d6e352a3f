"""Quantum Fisher information: pure and mixed states, optimal transverse axis,
the weighted-correlation upper bound, and the Cramer-Rao error floor.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import atan2, cos, pi, sin, sqrt
from typing import Sequence

import numpy as np

from .collective import CollectiveOperator, DickeState, build_collective
from .errors import InvalidArgument

WEIGHT_CUTOFF = 1e-12
ORTHO_TOL = 1e-9


@dataclass(frozen=True)
class TransverseCovariance:
    syy: float
    szz: float
    cross: float

    def qfi_at(self, theta: float) -> float:
        """F_Q for the generator S_theta = cos(theta) S_y + sin(theta) S_z."""
        c, s = cos(theta), sin(theta)
        return 4.0 * (c * c * self.syy + s * s * self.szz + s * c * self.cross)


@dataclass(frozen=True)
class QfiAtAngle:
    theta_opt: float
    f_q: float


@dataclass(frozen=True, eq=False)
class MixedState:
    """rho = sum_mu weights[mu] |components[mu]><components[mu]|.

    ``components`` is a (dim, k) array with one pure state per column.
    """

    weights: np.ndarray
    components: np.ndarray
    orthonormal: bool = True

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        c = np.asarray(self.components, dtype=complex)
        if c.ndim == 1:
            c = c[:, None]
        if c.shape[1] != w.size:
            raise InvalidArgument(f"{w.size} weights for {c.shape[1]} components")
        if np.any(w < -WEIGHT_CUTOFF) or abs(w.sum() - 1.0) > 1e-12:
            raise InvalidArgument("weights must be a probability vector")
        w = np.where(w < WEIGHT_CUTOFF, 0.0, w)
        if self.orthonormal:
            gram = c.conj().T @ c
            if np.max(np.abs(gram - np.eye(w.size)), initial=0.0) > ORTHO_TOL:
                raise InvalidArgument("components are not orthonormal")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "components", c)

    @property
    def dim(self) -> int:
        return self.components.shape[0]

    def density_matrix(self) -> np.ndarray:
        c = self.components
        return (c * self.weights) @ c.conj().T


def _apply(generator, vecs: np.ndarray) -> np.ndarray:
    if isinstance(generator, CollectiveOperator):
        return generator.matvec(vecs)
    return np.asarray(generator @ vecs)


def _amplitudes(state) -> np.ndarray:
    return state.amplitudes if hasattr(state, "amplitudes") else np.asarray(state, dtype=complex)


def transverse_moments(vecs: np.ndarray, n_spins: int):
    """Second moments and means of S_y, S_z for each column of ``vecs``.

    Returns ``(syy, szz, cross, mean_y, mean_z)`` arrays; uses
    <S_a S_b> = <S_a psi | S_b psi> so no operator products are formed.
    """
    sy = build_collective("y", n_spins)
    sz = build_collective("z", n_spins)
    y, z = sy.matvec(vecs), sz.matvec(vecs)
    syy = np.sum(np.abs(y) ** 2, axis=0)
    szz = np.sum(np.abs(z) ** 2, axis=0)
    cross = 2.0 * np.real(np.sum(y.conj() * z, axis=0))
    mean_y = np.real(np.sum(vecs.conj() * y, axis=0))
    mean_z = np.real(np.sum(vecs.conj() * z, axis=0))
    return syy, szz, cross, mean_y, mean_z


def transverse_covariance(state: DickeState, z2_symmetric: bool = False) -> TransverseCovariance:
    """<S_y^2>, <S_z^2>, <S_y S_z + S_z S_y> of a Dicke state.

    With ``z2_symmetric`` set, also checks that <S_y> and <S_z> vanish (to 1e-8).
    """
    syy, szz, cross, my, mz = transverse_moments(state.amplitudes, state.n_spins)
    if z2_symmetric and max(abs(my), abs(mz)) > 1e-8:
        raise InvalidArgument(f"Z2 check failed: <S_y>={my:.3e}, <S_z>={mz:.3e}")
    return TransverseCovariance(float(syy), float(szz), float(cross))


def optimal_qfi(cov: TransverseCovariance) -> QfiAtAngle:
    """Closed-form maximum of F_Q(theta) over the y-z plane.

    F_Q(theta) is 4 times a quadratic form in (cos, sin), so its maximum is
    4 times the top eigenvalue of [[syy, cross/2], [cross/2, szz]].
    """
    diff = cov.syy - cov.szz
    f_q = 2.0 * ((cov.syy + cov.szz) + sqrt(diff * diff + cov.cross * cov.cross))
    # isotropic to rounding: the angle is arbitrary, report 0
    if max(abs(diff), abs(cov.cross)) <= 1e-12 * max(cov.syy + cov.szz, 1.0):
        theta = 0.0
    else:
        theta = 0.5 * atan2(cov.cross, diff)
        if theta < 0.0:
            theta += pi
        if theta >= pi:
            theta -= pi
    return QfiAtAngle(theta, f_q)


def qfi_pure(state, generator) -> float:
    """4 (<A^2> - <A>^2)."""
    psi = _amplitudes(state)
    a_psi = _apply(generator, psi)
    mean = np.real(np.vdot(psi, a_psi))
    second = np.real(np.vdot(a_psi, a_psi))
    return max(0.0, 4.0 * (second - mean * mean))


def _support(rho: MixedState):
    keep = rho.weights > 0
    return rho.weights[keep], rho.components[:, keep]


def _check_rho(rho: MixedState):
    if not rho.orthonormal:
        raise InvalidArgument("QFI requires orthonormal components (an eigendecomposition)")


def qfi_mixed(rho: MixedState, generator) -> float:
    """QFI of rho for the unitary family exp(-i theta A).

    The terms coupling the support of rho to its null space are summed in
    closed form, 4 sum_mu lam_mu (<A^2>_mu - sum_{nu in support} |A_{mu nu}|^2),
    so no null-space basis is ever built.
    """
    _check_rho(rho)
    lam, vecs = _support(rho)
    a_vecs = _apply(generator, vecs)
    a_mat = vecs.conj().T @ a_vecs
    abs2 = np.abs(a_mat) ** 2
    lsum = lam[:, None] + lam[None, :]
    ldiff = lam[:, None] - lam[None, :]
    support_part = 2.0 * np.sum(ldiff**2 / lsum * abs2)
    second = np.real(np.sum(a_vecs.conj() * a_vecs, axis=0))
    null_part = 4.0 * np.sum(lam * (second - abs2.sum(axis=1)))
    return float(support_part + null_part)


def fvc_upper_bound(rho: MixedState, generator) -> float:
    """4 sum_mu lam_mu C_mu with C_mu the variance of A in component mu."""
    _check_rho(rho)
    lam, vecs = _support(rho)
    a_vecs = _apply(generator, vecs)
    mean = np.real(np.sum(vecs.conj() * a_vecs, axis=0))
    second = np.real(np.sum(a_vecs.conj() * a_vecs, axis=0))
    return float(4.0 * np.sum(lam * (second - mean**2)))


def zeta_coefficient(lambda_mu: float, lambda_nu: float) -> float:
    if lambda_mu < 0 or lambda_nu < 0:
        raise InvalidArgument("eigenvalues must be non-negative")
    total = lambda_mu + lambda_nu
    if total <= 0:
        raise InvalidArgument("zeta is undefined when both eigenvalues vanish")
    # (l_mu + l_nu) - (l_mu - l_nu)^2 / (l_mu + l_nu), rearranged so rounding cannot go negative
    return 4.0 * lambda_mu * lambda_nu / total


def zeta_gap(rho: MixedState, generator) -> float:
    """2 sum_{mu != nu, both in support} zeta_{mu nu} |<mu|A|nu>|^2.

    This is exactly ``fvc_upper_bound - qfi_mixed``.
    """
    lam, vecs = _support(rho)
    a_mat = vecs.conj().T @ _apply(generator, vecs)
    total = 0.0
    for i, li in enumerate(lam):
        for j, lj in enumerate(lam):
            if i != j:
                total += zeta_coefficient(li, lj) * abs(a_mat[i, j]) ** 2
    return 2.0 * total


def cramer_rao(f_q: float, m_repetitions: int = 1) -> float:
    """Smallest achievable phase error 1/sqrt(M F_Q)."""
    if not f_q > 0:
        raise InvalidArgument(f"F_Q must be positive, got {f_q}")
    if int(m_repetitions) != m_repetitions or m_repetitions < 1:
        raise InvalidArgument(f"M must be a positive integer, got {m_repetitions}")
    return 1.0 / sqrt(m_repetitions * f_q)


def random_mixed_state(dim: int, n_components: int, rng: np.random.Generator) -> MixedState:
    """Random orthonormal components (QR of a Gaussian matrix) with Dirichlet weights."""
    if not 1 <= n_components <= dim:
        raise InvalidArgument("need 1 <= n_components <= dim")
    g = rng.normal(size=(dim, n_components)) + 1j * rng.normal(size=(dim, n_components))
    q, _ = np.linalg.qr(g)
    w = rng.dirichlet(np.ones(n_components))
    w[-1] = 1.0 - w[:-1].sum()
    return MixedState(w, q)


def mixture(weights: Sequence[float], states: Sequence) -> MixedState:
    """Mixture of (not necessarily orthogonal) pure states; not usable for QFI."""
    cols = np.column_stack([_amplitudes(s) for s in states])
    return MixedState(np.asarray(weights, dtype=float), cols, orthonormal=False)

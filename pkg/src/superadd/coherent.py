"""Photon-number-space measurement for a weak coherent-state alphabet.

A pair of opposite-amplitude coherent states with mean photon number alpha^2
well below one is truncated to the zero- and one-photon subspace, one
polarization mode per transmission.  The symmetric measurement family is
re-expanded in the photon coordinates |0>|0>, |0>|1>, |1>|0>, |1>|1>, its
(order alpha) two-photon components are dropped, and the clipped vectors are
re-orthogonalized.  The resulting basis never needs to distinguish the
two-photon event from the single-photon ones, which is what makes it
experimentally convenient, at a small cost in rate.

Rates computed here score the clipped basis against the untruncated signal
letters: the signals still carry their two-photon amplitude even though the
measurement ignores it, so the measurement is completed with the two-photon
projector as a fourth outcome to keep the outcome distribution normalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .capacities import Ensemble, RateResult, measured_mutual_information, _xlog2x
from .statespace import Angle, MeasurementBasis, StateVector, lowdin_orthogonalize, tensor
from .twoshot import AnsatzSearchConfig, DEFAULT_ANSATZ_SEARCH, _check_open_range, optimize_r2

SQRT2 = math.sqrt(2.0)
TWO_PHOTON = np.array([0.0, 0.0, 0.0, 1.0])


def alpha_from_gamma(gamma: Angle) -> float:
    """Coherent amplitude reproducing the overlap cos(gamma) after truncation:
    alpha = sqrt((1 - cos gamma) / (1 + cos gamma))."""
    cg = math.cos(gamma.radians)
    return math.sqrt((1.0 - cg) / (1.0 + cg))


@dataclass(frozen=True)
class CoherentAlphabet:
    """Zero/one-photon truncations of the +-alpha coherent states.

    Both states share the |0> amplitude 1/sqrt(1+alpha^2) and differ in the
    sign of the |1> amplitude, so their overlap is (1-alpha^2)/(1+alpha^2).
    """

    alpha: float
    psi0: StateVector
    psi1: StateVector

    def __post_init__(self):
        if self.alpha < 0.0:
            raise ValueError("amplitude must be nonnegative")
        expected = (1.0 - self.alpha**2) / (1.0 + self.alpha**2)
        if abs(self.psi0.inner(self.psi1) - expected) > 1e-12:
            raise ValueError("state overlap inconsistent with the amplitude")

    @classmethod
    def for_angle(cls, gamma: Angle) -> "CoherentAlphabet":
        alpha = alpha_from_gamma(gamma)
        norm = math.sqrt(1.0 + alpha**2)
        psi0 = StateVector(np.array([1.0, alpha]) / norm)
        psi1 = StateVector(np.array([1.0, -alpha]) / norm)
        return cls(alpha=alpha, psi0=psi0, psi1=psi1)


@dataclass(frozen=True)
class PhotonBasisVector:
    """Measurement vector amplitudes on |0>+|0>-, |0>+|1>-, |1>+|0>-, |1>+|1>-."""

    c00: float
    c01: float
    c10: float
    c11: float

    def __post_init__(self):
        norm = math.sqrt(self.c00**2 + self.c01**2 + self.c10**2 + self.c11**2)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"measurement vector norm {norm} is off unit")

    @property
    def coords(self) -> np.ndarray:
        return np.array([self.c00, self.c01, self.c10, self.c11])


def _photon_rows(eta, alpha):
    """Photon-coordinate rows of the symmetric family, vectorized over eta.

    These are the exact re-expansions of the span construction in the
    truncated photon coordinates; every coefficient carries the common
    denominator 2(1 + alpha^2).
    """
    eta = np.asarray(eta, dtype=float)
    ce, se = np.cos(eta), np.sin(eta)
    a2 = alpha * alpha
    den = 2.0 * (1.0 + a2)
    e1 = np.stack(
        [
            (SQRT2 * se + 2.0 * alpha * ce) / den,
            (alpha * SQRT2 * se - ce + a2 * ce - 1.0 - a2) / den,
            (alpha * SQRT2 * se - ce + a2 * ce + 1.0 + a2) / den,
            (a2 * SQRT2 * se - 2.0 * alpha * ce) / den,
        ],
        axis=-1,
    )
    e2 = e1[..., [0, 2, 1, 3]]
    e3 = np.stack(
        [
            2.0 * (ce - alpha * SQRT2 * se) / den,
            (SQRT2 * se * (1.0 - a2) + 2.0 * alpha * ce) / den,
            (SQRT2 * se * (1.0 - a2) + 2.0 * alpha * ce) / den,
            2.0 * (alpha * SQRT2 * se + a2 * ce) / den,
        ],
        axis=-1,
    )
    return np.stack([e1, e2, e3], axis=-2)  # (..., vector, photon coordinate)


def photon_basis(eta: float, gamma: Angle) -> list[PhotonBasisVector]:
    """Symmetric measurement family expanded in photon-number coordinates.

    The two-photon (c11) components are of order alpha while the rest are of
    order one; the expansion is orthonormal for every (eta, gamma).
    """
    _check_open_range(gamma)
    rows = _photon_rows(float(eta), alpha_from_gamma(gamma))
    return [PhotonBasisVector(*row) for row in rows]


def two_shot_coherent_alphabet(gamma: Angle) -> tuple[StateVector, StateVector, StateVector, StateVector]:
    """Two-shot letters as products of the truncated one-mode states, in photon
    coordinates (first transmission on the + polarization)."""
    states = CoherentAlphabet.for_angle(gamma)
    psi0, psi1 = states.psi0, states.psi1
    return (
        tensor(psi0, psi1),
        tensor(psi1, psi0),
        tensor(psi0, psi0),
        tensor(psi1, psi1),
    )


def truncated_orthonormal_basis(eta: float, gamma: Angle) -> MeasurementBasis:
    """Clip the two-photon components and re-orthogonalize.

    Zeroes c11 on each vector and applies symmetric orthogonalization on the
    clipped span; the outputs have exactly zero two-photon amplitude.  The
    clipped Gram matrix is the identity minus a rank-one defect of norm at
    most 3/4, so it never approaches singularity inside (0, 90) degrees.
    """
    _check_open_range(gamma)
    rows = _photon_rows(float(eta), alpha_from_gamma(gamma))
    clipped = rows.copy()
    clipped[:, 3] = 0.0
    return lowdin_orthogonalize(clipped)


def _scoring_basis(eta: float, gamma: Angle) -> MeasurementBasis:
    """Truncated basis completed with the two-photon projector so the four
    outcomes resolve the identity."""
    rows = truncated_orthonormal_basis(eta, gamma).matrix
    return MeasurementBasis.from_rows(np.vstack([rows, TWO_PHOTON]))


def rate_truncated(eta: float, p: float, gamma: Angle) -> float:
    """Bits per transmission of the clipped basis against the coherent letters."""
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"prior p must lie in [0, 0.5], got {p!r}")
    a, b, c, _ = two_shot_coherent_alphabet(gamma)
    ensemble = Ensemble(((p, a), (p, b), (1.0 - 2.0 * p, c)))
    return measured_mutual_information(ensemble, _scoring_basis(eta, gamma)) / 2.0


def _trunc_conditional_probs(gamma_rad: float, etas: np.ndarray) -> np.ndarray:
    """P[eta, outcome, letter] for the completed clipped basis, batched."""
    gamma = Angle(gamma_rad)
    alpha = alpha_from_gamma(gamma)
    rows = _photon_rows(etas, alpha)  # (eta, 3, 4)
    clipped = rows.copy()
    clipped[..., 3] = 0.0
    gram = clipped @ clipped.transpose(0, 2, 1)
    eigvals, eigvecs = np.linalg.eigh(gram)
    inv_sqrt = np.einsum("gik,gk,gjk->gij", eigvecs, eigvals**-0.5, eigvecs)
    ortho = inv_sqrt @ clipped  # (eta, 3, 4)
    letters = np.vstack([s.coords for s in two_shot_coherent_alphabet(gamma)[:3]])
    amplitudes = np.einsum("gkd,xd->gkx", ortho, letters)
    two_photon = letters[:, 3] ** 2  # fourth outcome, eta independent
    probs = np.empty((etas.size, 4, 3))
    probs[:, :3, :] = amplitudes**2
    probs[:, 3, :] = two_photon
    return probs


def _trunc_rate_grid(gamma_rad: float, etas: np.ndarray, ps: np.ndarray) -> np.ndarray:
    probs = _trunc_conditional_probs(gamma_rad, etas)
    priors = np.stack([ps, ps, 1.0 - 2.0 * ps], axis=-1)
    mixture = np.einsum("gkx,px->gpk", probs, priors)
    h_mixture = -_xlog2x(mixture).sum(axis=-1)
    h_letters = -_xlog2x(probs).sum(axis=1)
    h_conditional = np.einsum("gx,px->gp", h_letters, priors)
    return (h_mixture - h_conditional) / 2.0


def optimize_r2_truncated(gamma: Angle, config: AnsatzSearchConfig = DEFAULT_ANSATZ_SEARCH) -> RateResult:
    """Best clipped-basis rate, re-optimizing eta for the clipped scoring.

    Same grid-then-refine protocol as the ideal family.  Re-optimizing eta
    after clipping can only raise the curve relative to reusing the ideal
    angle; the reused variant is available separately for comparison.
    """
    g = _check_open_range(gamma)
    etas = np.linspace(0.0, math.pi, config.eta_points, endpoint=False)
    ps = np.linspace(0.0, 0.5, config.p_points)
    grid = _trunc_rate_grid(g, etas, ps)
    gi, pi = np.unravel_index(int(np.argmax(grid)), grid.shape)
    d_eta = math.pi / config.eta_points
    d_p = 0.5 / (config.p_points - 1)
    bounds = [
        (etas[gi] - 2.0 * d_eta, etas[gi] + 2.0 * d_eta),
        (max(0.0, ps[pi] - 2.0 * d_p), min(0.5, ps[pi] + 2.0 * d_p)),
    ]

    def negative_rate(x: np.ndarray) -> float:
        return -_trunc_rate_grid(g, np.array([x[0]]), np.array([x[1]]))[0, 0]

    result = minimize(
        negative_rate,
        np.array([etas[gi], ps[pi]]),
        method="Nelder-Mead",
        bounds=bounds,
        options={"xatol": config.nm_xatol, "fatol": config.nm_fatol, "maxiter": config.nm_maxiter},
    )
    best = max(-float(result.fun), float(grid[gi, pi]))
    return RateResult(
        bits_per_transmission=best,
        params={"eta": float(result.x[0]) % math.pi, "p": float(result.x[1])},
        iterations=int(grid.size + result.nfev),
        converged=bool(result.success),
        hyperparams=config.hyperparams(),
    )


def optimize_r2_truncated_reused(gamma: Angle, config: AnsatzSearchConfig = DEFAULT_ANSATZ_SEARCH) -> RateResult:
    """Clipped-basis rate at the ideal family's optimal eta, optimizing the
    prior only."""
    g = _check_open_range(gamma)
    ideal = optimize_r2(gamma, config)
    eta = ideal.params["eta"]
    ps = np.linspace(0.0, 0.5, config.p_points)
    grid = _trunc_rate_grid(g, np.array([eta]), ps)[0]
    pi = int(np.argmax(grid))
    lo = max(0.0, ps[pi] - 2.0 * (0.5 / (config.p_points - 1)))
    hi = min(0.5, ps[pi] + 2.0 * (0.5 / (config.p_points - 1)))
    result = minimize_scalar(
        lambda p: -_trunc_rate_grid(g, np.array([eta]), np.array([p]))[0, 0],
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    best = max(-float(result.fun), float(grid[pi]))
    return RateResult(
        bits_per_transmission=best,
        params={"eta": eta, "p": float(result.x)},
        iterations=int(grid.size + result.nfev + ideal.iterations),
        converged=bool(result.success) and ideal.converged,
        hyperparams=config.hyperparams(),
    )

"""Two-shot collective measurement rates for the binary alphabet.

The three-outcome measurement family is built directly in an orthonormal
frame of span{a, b, c}: f1 along the repeated letter c, f2 the symmetric
combination of a and b orthogonal to c, f3 the antisymmetric combination.
The frame is exact in the fixed embedding, so the construction stays well
conditioned down to arbitrarily small overlap angles, where the printed
expansion coefficients (which divide by sin gamma) do not.

The unconstrained search over the full orthogonal group in the four
dimensional two-shot span is a lower-bound probe: it ratifies that the
symmetric family is near optimal but proves nothing about the true two-shot
capacity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from .capacities import Ensemble, RateResult, c1, measured_mutual_information, _xlog2x
from .errors import BracketingError
from .statespace import Angle, MeasurementBasis, two_shot_alphabet

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class AnsatzParams:
    """Symmetric-family parameters: measurement angle eta (radians, periodic)
    and the shared prior p on each mixed letter; the repeated letter c gets
    1 - 2p and d gets zero."""

    eta: float
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"prior p must lie in [0, 0.5], got {self.p!r}")


def _givens_pairs(dim: int) -> tuple[tuple[int, int], ...]:
    """Adjacent-row plane sequence able to reach every rotation of SO(dim)."""
    return tuple(
        (row - 1, row)
        for col in range(dim - 1)
        for row in range(dim - 1, col, -1)
    )


@dataclass(frozen=True)
class RotationParams:
    """dim(dim-1)/2 plane-rotation angles composing an orthogonal matrix.

    The matrix is the product of rotations in the fixed adjacent-row plane
    sequence of _givens_pairs, applied in reverse list order.  Any special
    orthogonal matrix factors uniquely this way (up to angle wrapping), which
    from_matrix exploits.
    """

    angles: tuple[float, ...]
    dim: int = 4

    def __post_init__(self):
        angles = tuple(float(a) for a in self.angles)
        object.__setattr__(self, "angles", angles)
        expected = self.dim * (self.dim - 1) // 2
        if len(angles) != expected:
            raise ValueError(f"need {expected} angles for dimension {self.dim}, got {len(angles)}")

    def matrix(self) -> np.ndarray:
        out = np.eye(self.dim)
        for (i, j), t in zip(reversed(_givens_pairs(self.dim)), reversed(self.angles)):
            c, s = math.cos(t), math.sin(t)
            row_i, row_j = out[i].copy(), out[j]
            out[i] = c * row_i - s * row_j
            out[j] = s * row_i + c * row_j
        return out

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "RotationParams":
        m = np.asarray(matrix, dtype=float)
        dim = m.shape[0]
        if np.linalg.det(m) < 0:
            raise ValueError("only rotations (det +1) factor into plane rotations")
        work = m.copy()
        angles = []
        for col in range(dim - 1):
            for row in range(dim - 1, col, -1):
                # rotate rows (row-1, row) to zero work[row, col]
                t = math.atan2(work[row, col], work[row - 1, col])
                c, s = math.cos(t), math.sin(t)
                upper, lower = work[row - 1].copy(), work[row]
                work[row - 1] = c * upper + s * lower
                work[row] = -s * upper + c * lower
                angles.append(t)
        return cls(angles=tuple(angles), dim=dim)


def _symmetric_frame(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Orthonormal frame (f1, f2, f3) of span{a, b, c} adapted to the a<->b swap."""
    f1 = c / np.linalg.norm(c)
    sym = a + b
    f2 = sym - (sym @ f1) * f1
    f2 = f2 / np.linalg.norm(f2)
    f3 = a - b
    f3 = f3 / np.linalg.norm(f3)
    return np.vstack([f1, f2, f3])


def ansatz_rows(eta: float, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Three orthonormal measurement vectors satisfying the symmetry constraints.

    By construction <c|e3> = cos(eta), e3 has no antisymmetric component
    (so <a|e3> = <b|e3>), and e1, e2 are the swap-conjugate pair splitting
    the remaining plane at 45 degrees (so <a|e1> = <b|e2> and
    <c|e1> = <c|e2>).
    """
    f1, f2, f3 = _symmetric_frame(a, b, c)
    e3 = math.cos(eta) * f1 - math.sin(eta) * f2
    g = math.sin(eta) * f1 + math.cos(eta) * f2
    e1 = (g + f3) / SQRT2
    e2 = (g - f3) / SQRT2
    return np.vstack([e1, e2, e3])


def ansatz_basis(eta: float, gamma: Angle) -> MeasurementBasis:
    """Symmetric three-outcome measurement family on the two-shot span.

    Requires gamma > 0: at zero overlap angle the letters coincide and the
    span collapses.
    """
    if gamma.radians <= 0.0:
        raise ValueError("ansatz basis needs gamma > 0; the letters coincide at gamma = 0")
    a, b, c, _ = two_shot_alphabet(gamma)
    return MeasurementBasis.from_rows(ansatz_rows(eta, a.coords, b.coords, c.coords))


def _ansatz_ensemble(p: float, gamma: Angle) -> Ensemble:
    a, b, c, _ = two_shot_alphabet(gamma)
    return Ensemble(((p, a), (p, b), (1.0 - 2.0 * p, c)))


def rate(eta: float, p: float, gamma: Angle) -> float:
    """Bits per transmission of the symmetric family at (eta, p).

    Half the measured mutual information of the ensemble
    {(p, a), (p, b), (1-2p, c)} against the three-outcome basis: the half
    accounts for the two transmissions consumed per measurement.
    """
    params = AnsatzParams(eta=eta, p=p)
    ensemble = _ansatz_ensemble(params.p, gamma)
    basis = ansatz_basis(params.eta, gamma)
    return measured_mutual_information(ensemble, basis) / 2.0


def _rate_grid(gamma_rad: float, etas: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """Vectorized rate over an (eta, p) grid; rows index eta, columns p.

    Uses the closed-form frame amplitudes: letters a, b, c have frame
    coordinates (cos g, sin g/sqrt2, +-sin g/sqrt2) and (1, 0, 0).  Agreement
    with rate() is covered by tests.
    """
    cg, sg = math.cos(gamma_rad), math.sin(gamma_rad)
    ce, se = np.cos(etas), np.sin(etas)
    amp_a1 = cg * se / SQRT2 + sg * (ce + 1.0) / 2.0
    amp_b1 = cg * se / SQRT2 + sg * (ce - 1.0) / 2.0
    amp_c1 = se / SQRT2
    amp_a3 = cg * ce - sg * se / SQRT2
    probs = np.empty((etas.size, 3, 3))  # (eta, outcome, letter)
    probs[:, 0, 0] = amp_a1
    probs[:, 0, 1] = amp_b1
    probs[:, 0, 2] = amp_c1
    probs[:, 1, 0] = amp_b1
    probs[:, 1, 1] = amp_a1
    probs[:, 1, 2] = amp_c1
    probs[:, 2, 0] = amp_a3
    probs[:, 2, 1] = amp_a3
    probs[:, 2, 2] = ce
    np.square(probs, out=probs)
    priors = np.stack([ps, ps, 1.0 - 2.0 * ps], axis=-1)  # (p, letter)
    mixture = np.einsum("gkx,px->gpk", probs, priors)
    h_mixture = -_xlog2x(mixture).sum(axis=-1)
    h_letters = -_xlog2x(probs).sum(axis=1)  # (eta, letter)
    h_conditional = np.einsum("gx,px->gp", h_letters, priors)
    return (h_mixture - h_conditional) / 2.0


@dataclass(frozen=True)
class AnsatzSearchConfig:
    """Grid-then-refine settings for the symmetric family."""

    eta_points: int = 240  # over [0, pi), the family's period
    p_points: int = 101  # over [0, 0.5]
    nm_xatol: float = 1e-8
    nm_fatol: float = 1e-10  # rate tolerance of the local refinement
    nm_maxiter: int = 4000

    def hyperparams(self) -> dict[str, float]:
        return {
            "eta_points": float(self.eta_points),
            "p_points": float(self.p_points),
            "nm_xatol": self.nm_xatol,
            "nm_fatol": self.nm_fatol,
        }


DEFAULT_ANSATZ_SEARCH = AnsatzSearchConfig()


def _check_open_range(gamma: Angle) -> float:
    if not 0.0 < gamma.radians < math.pi / 2:
        raise ValueError(f"optimization needs gamma strictly inside (0, 90) deg, got {gamma.degrees}")
    return gamma.radians


def optimize_r2(gamma: Angle, config: AnsatzSearchConfig = DEFAULT_ANSATZ_SEARCH) -> RateResult:
    """Best symmetric-family rate at the given overlap angle.

    Coarse (eta, p) grid followed by Nelder-Mead refinement from the best
    cell, bounded to its neighborhood.  Deterministic for a fixed config;
    exact grid ties resolve to the smallest eta, then smallest p (row-major
    argmax order).
    """
    g = _check_open_range(gamma)
    etas = np.linspace(0.0, math.pi, config.eta_points, endpoint=False)
    ps = np.linspace(0.0, 0.5, config.p_points)
    grid = _rate_grid(g, etas, ps)
    gi, pi = np.unravel_index(int(np.argmax(grid)), grid.shape)
    d_eta = math.pi / config.eta_points
    d_p = 0.5 / (config.p_points - 1)
    bounds = [
        (etas[gi] - 2.0 * d_eta, etas[gi] + 2.0 * d_eta),
        (max(0.0, ps[pi] - 2.0 * d_p), min(0.5, ps[pi] + 2.0 * d_p)),
    ]

    def negative_rate(x: np.ndarray) -> float:
        return -_rate_grid(g, np.array([x[0]]), np.array([x[1]]))[0, 0]

    result = minimize(
        negative_rate,
        np.array([etas[gi], ps[pi]]),
        method="Nelder-Mead",
        bounds=bounds,
        options={
            "xatol": config.nm_xatol,
            "fatol": config.nm_fatol,
            "maxiter": config.nm_maxiter,
        },
    )
    best = max(-float(result.fun), float(grid[gi, pi]))
    eta_star = float(result.x[0]) % math.pi
    return RateResult(
        bits_per_transmission=best,
        params={"eta": eta_star, "p": float(result.x[1])},
        iterations=int(grid.size + result.nfev),
        converged=bool(result.success),
        hyperparams=config.hyperparams(),
    )


# ---------------------------------------------------------------------------
# unconstrained search over the full two-shot span


@dataclass(frozen=True)
class GeneralSearchConfig:
    """Annealing-plus-descent settings for the unconstrained probe."""

    restarts: int = 20
    cooling: float = 0.97  # geometric temperature factor per level
    temperature_samples: int = 100  # initial temperature from this many random rates
    levels: int = 100
    proposals_per_level: int = 12
    step_scale: float = 0.35
    polish_candidates: int = 6
    nm_xatol: float = 1e-9
    nm_fatol: float = 1e-10
    nm_maxiter: int = 6000

    def hyperparams(self) -> dict[str, float]:
        return {
            "restarts": float(self.restarts),
            "cooling": self.cooling,
            "temperature_samples": float(self.temperature_samples),
            "levels": float(self.levels),
            "proposals_per_level": float(self.proposals_per_level),
            "step_scale": self.step_scale,
            "nm_fatol": self.nm_fatol,
        }


DEFAULT_GENERAL_SEARCH = GeneralSearchConfig()


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    w = np.exp(shifted)
    return w / w.sum()


def _letters_matrix(gamma: Angle) -> np.ndarray:
    return np.vstack([s.coords for s in two_shot_alphabet(gamma)])


def _general_rate(theta: np.ndarray, letters: np.ndarray, pairs) -> float:
    """Rate of an arbitrary four-outcome measurement and four-letter prior.

    theta[:6] are plane-rotation angles (rows of the rotation are the
    measurement vectors), theta[6:9] are prior logits relative to letter a.
    """
    rotation = np.eye(4)
    for (i, j), t in zip(reversed(pairs), theta[5::-1]):
        c, s = math.cos(t), math.sin(t)
        row_i = rotation[i].copy()
        row_j = rotation[j]
        rotation[i] = c * row_i - s * row_j
        rotation[j] = s * row_i + c * row_j
    priors = _softmax(np.concatenate(([0.0], theta[6:9])))
    probs = (rotation @ letters.T) ** 2  # (outcome, letter)
    mixture = probs @ priors
    h_mixture = float(-_xlog2x(mixture).sum())
    h_conditional = float(priors @ (-_xlog2x(probs)).sum(axis=0))
    return (h_mixture - h_conditional) / 2.0


def _product_measurement_start(gamma: Angle) -> np.ndarray:
    """Parameter vector for the best per-transmission measurement applied twice
    with the uniform independent prior: its rate is exactly c1."""
    g = gamma.radians
    theta = g / 2.0 - math.pi / 4.0
    one_shot = np.array(
        [[math.cos(theta), math.sin(theta)], [-math.sin(theta), math.cos(theta)]]
    )
    basis = np.kron(one_shot, one_shot)
    if np.linalg.det(basis) < 0:
        basis[0] *= -1.0  # outcome projectors are sign blind
    angles = RotationParams.from_matrix(basis).angles
    return np.concatenate([angles, np.zeros(3)])


def _ansatz_start(gamma: Angle, ansatz: RateResult) -> np.ndarray:
    """Parameter vector embedding the symmetric-family optimum."""
    a, b, c, d = (s.coords for s in two_shot_alphabet(gamma))
    rows = ansatz_rows(ansatz.params["eta"], a, b, c)
    fourth = d - rows.T @ (rows @ d)
    fourth = fourth / np.linalg.norm(fourth)
    basis = np.vstack([rows, fourth])
    if np.linalg.det(basis) < 0:
        basis[3] *= -1.0
    angles = RotationParams.from_matrix(basis).angles
    p = max(ansatz.params["p"], 1e-12)
    pc = max(1.0 - 2.0 * ansatz.params["p"], 1e-12)
    logits = np.array([0.0, math.log(pc / p), -40.0])  # letter d effectively off
    return np.concatenate([angles, logits])


def _anneal(fun, x0: np.ndarray, rng: np.random.Generator, t0: float,
            config: GeneralSearchConfig) -> tuple[np.ndarray, float]:
    x = x0.copy()
    f = fun(x)
    best_x, best_f = x.copy(), f
    temperature = t0
    for _ in range(config.levels):
        scale = config.step_scale * max(temperature / t0, 0.05) if t0 > 0 else 0.05
        for _ in range(config.proposals_per_level):
            candidate = x + rng.normal(scale=scale, size=x.size)
            fc = fun(candidate)
            if fc >= f or (temperature > 0 and rng.random() < math.exp((fc - f) / temperature)):
                x, f = candidate, fc
                if f > best_f:
                    best_x, best_f = x.copy(), f
        temperature *= config.cooling
    return best_x, best_f


def optimize_general(gamma: Angle, seed: int,
                     config: GeneralSearchConfig = DEFAULT_GENERAL_SEARCH) -> RateResult:
    """Lower-bound probe over every four-outcome von Neumann measurement and
    every prior on the four letters.

    Seeded simulated annealing restarts (two of them warm-started from the
    product measurement and from the symmetric-family optimum, so the result
    can only improve on both) followed by Nelder-Mead descent on the best
    candidates.  The value is a lower bound on the two-shot capacity, nothing
    more: the parameterization covers rotations only up to projector sign,
    which is enough because outcomes are rank one.
    """
    _check_open_range(gamma)
    letters = _letters_matrix(gamma)
    pairs = _givens_pairs(4)

    def objective(theta: np.ndarray) -> float:
        return _general_rate(theta, letters, pairs)

    ansatz = optimize_r2(gamma)
    starts = [_product_measurement_start(gamma), _ansatz_start(gamma, ansatz)]

    root = np.random.SeedSequence(seed)
    children = root.spawn(config.restarts + 1)
    sampler = np.random.default_rng(children[-1])
    samples = [
        objective(np.concatenate([sampler.uniform(0.0, 2.0 * math.pi, 6), sampler.normal(0.0, 1.5, 3)]))
        for _ in range(config.temperature_samples)
    ]
    t0 = max(float(np.std(samples)), 1e-12)

    candidates = []
    evaluations = config.temperature_samples
    for k in range(config.restarts):
        rng = np.random.default_rng(children[k])
        if k < len(starts):
            x0 = starts[k]
        else:
            x0 = np.concatenate([rng.uniform(0.0, 2.0 * math.pi, 6), rng.normal(0.0, 1.5, 3)])
        x, f = _anneal(objective, x0, rng, t0, config)
        evaluations += 1 + config.levels * config.proposals_per_level
        candidates.append((f, x))

    candidates.sort(key=lambda pair: -pair[0])
    polish = [x for _, x in candidates[: config.polish_candidates]] + starts
    best_f, best_x = -np.inf, None
    for x0 in polish:
        result = minimize(
            lambda th: -objective(th),
            x0,
            method="Nelder-Mead",
            options={"xatol": config.nm_xatol, "fatol": config.nm_fatol,
                     "maxiter": config.nm_maxiter, "maxfev": config.nm_maxiter},
        )
        evaluations += int(result.nfev)
        if -result.fun > best_f:
            best_f, best_x = -float(result.fun), result.x

    priors = _softmax(np.concatenate(([0.0], best_x[6:9])))
    params = {f"theta_{i}": float(best_x[i]) for i in range(6)}
    params.update({name: float(w) for name, w in zip(("p_a", "p_b", "p_c", "p_d"), priors)})
    hyper = config.hyperparams()
    hyper["initial_temperature"] = t0
    hyper["seed"] = float(seed)
    return RateResult(
        bits_per_transmission=best_f,
        params=params,
        iterations=evaluations,
        converged=True,
        hyperparams=hyper,
    )


def crossover_angle(rate_fn: Callable[[Angle], float], lo: Angle, hi: Angle,
                    tolerance_deg: float = 0.01) -> Angle:
    """Angle where rate_fn crosses the one-shot capacity, by bisection.

    Requires rate_fn - c1 to change sign between lo and hi.
    """
    lo_deg, hi_deg = lo.degrees, hi.degrees
    f_lo = rate_fn(lo) - c1(lo)
    f_hi = rate_fn(hi) - c1(hi)
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise BracketingError(
            f"rate - c1 has the same sign at both ends: {f_lo:.3e} at {lo_deg} deg, "
            f"{f_hi:.3e} at {hi_deg} deg"
        )
    while hi_deg - lo_deg > tolerance_deg:
        mid_deg = 0.5 * (lo_deg + hi_deg)
        mid = Angle.from_degrees(mid_deg)
        f_mid = rate_fn(mid) - c1(mid)
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            lo_deg, f_lo = mid_deg, f_mid
        else:
            hi_deg = mid_deg
    return Angle.from_degrees(0.5 * (lo_deg + hi_deg))

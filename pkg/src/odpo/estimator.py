"""Regularized logistic likelihood, Newton MLE, projected MLE, radius.

Samples are passed as a (t, d) array of difference vectors and a (t,) array
of binary outcomes.  The ridge weight lam > 0 makes the log-likelihood
strictly concave, so the damped Newton iteration has a unique target.  The
projected estimate pulls an out-of-ball maximizer back to the unit ball by
minimizing the weighted mismatch of the moment map
H(theta) = lam*theta + sum_s sigmoid(<theta, b_s>) b_s.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .design import DesignMatrix
from .errors import DomainError
from .preference import sigmoid, sigmoid_prime


def log_likelihood(diffs: np.ndarray, wins: np.ndarray, theta: np.ndarray, lam: float) -> float:
    """Ridge-penalized Bernoulli log-likelihood, log-sum-exp stable."""
    theta = np.asarray(theta, dtype=float)
    penalty = 0.5 * lam * float(theta @ theta)
    if len(diffs) == 0:
        return -penalty
    z = diffs @ theta
    # log sigmoid(z) = -log(1 + exp(-z))
    ll = -(wins @ np.logaddexp(0.0, -z)) - ((1.0 - wins) @ np.logaddexp(0.0, z))
    return float(ll) - penalty


def likelihood_gradient(diffs, wins, theta, lam: float) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if len(diffs) == 0:
        return -lam * theta
    residual = wins - sigmoid(diffs @ theta)
    return residual @ diffs - lam * theta


def information_matrix(diffs, theta, lam: float) -> np.ndarray:
    """lam*I + sum_s sigmoid'(<theta, b_s>) b_s b_s^T (minus the Hessian)."""
    theta = np.asarray(theta, dtype=float)
    d = theta.shape[0]
    M = lam * np.eye(d)
    if len(diffs):
        weights = sigmoid_prime(diffs @ theta)
        M = M + diffs.T @ (weights[:, None] * diffs)
    return M


def h_map(diffs, theta, lam: float) -> np.ndarray:
    """Moment map lam*theta + sum_s sigmoid(<theta, b_s>) b_s.

    At the exact MLE this equals sum_s Y_s b_s, which is what ties the
    projected estimate below to the data.
    """
    theta = np.asarray(theta, dtype=float)
    out = lam * theta
    if len(diffs):
        out = out + sigmoid(diffs @ theta) @ diffs
    return out


@dataclass(frozen=True)
class NewtonResult:
    theta: np.ndarray
    iterations: int
    grad_norm: float
    converged: bool


def mle(diffs, wins, lam: float, tol: float = 1e-8, max_iters: int = 100) -> NewtonResult:
    """Maximize the ridge log-likelihood by damped Newton steps.

    Each step solves the information system for the ascent direction and
    backtracks until the Armijo condition holds, so the objective never
    decreases.  Returns the best iterate with ``converged=False`` if the
    gradient norm has not dropped below ``tol`` within ``max_iters``.
    """
    if lam <= 0:
        raise ValueError("lam must be > 0 for a unique maximizer")
    diffs = np.asarray(diffs, dtype=float)
    if diffs.ndim != 2:
        raise ValueError("diffs must be a (t, d) array (t may be 0)")
    theta = np.zeros(diffs.shape[1])
    wins = np.asarray(wins, dtype=float)
    best = (np.inf, theta, 0)
    value = log_likelihood(diffs, wins, theta, lam)
    for it in range(max_iters + 1):
        grad = likelihood_gradient(diffs, wins, theta, lam)
        gnorm = float(np.linalg.norm(grad))
        if gnorm < best[0]:
            best = (gnorm, theta, it)
        if gnorm <= tol:
            return NewtonResult(theta=theta, iterations=it, grad_norm=gnorm, converged=True)
        if it == max_iters:
            break
        step = cho_solve(cho_factor(information_matrix(diffs, theta, lam)), grad)
        slope = float(grad @ step)
        alpha = 1.0
        while alpha > 1e-14:
            cand = theta + alpha * step
            cand_value = log_likelihood(diffs, wins, cand, lam)
            if cand_value >= value + 1e-4 * alpha * slope:
                break
            alpha *= 0.5
        theta = theta + alpha * step
        value = log_likelihood(diffs, wins, theta, lam)
    gnorm, theta, it = best
    return NewtonResult(theta=theta, iterations=it, grad_norm=gnorm, converged=False)


@dataclass(frozen=True)
class ProjectionResult:
    theta: np.ndarray
    objective: float
    iterations: int
    converged: bool


def _project_ball(theta: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(theta))
    return theta / norm if norm > 1.0 else theta


def project_mle(
    theta_hat: np.ndarray,
    diffs,
    V,
    lam: float,
    tol: float = 1e-10,
    max_iters: int = 1000,
) -> ProjectionResult:
    """Pull the MLE into the unit ball through the moment map.

    Minimizes F(theta) = ||H(theta) - H(theta_hat)||^2 in the V^-1 norm over
    the unit ball by projected gradient descent with backtracking, started at
    the radial projection of theta_hat.  If theta_hat is already feasible it
    is returned unchanged with objective 0.
    """
    theta_hat = np.asarray(theta_hat, dtype=float)
    if float(np.linalg.norm(theta_hat)) <= 1.0:
        return ProjectionResult(theta=theta_hat, objective=0.0, iterations=0, converged=True)
    mat = V.matrix if isinstance(V, DesignMatrix) else np.asarray(V, dtype=float)
    factor = cho_factor(mat)
    target = h_map(diffs, theta_hat, lam)

    def objective(theta: np.ndarray) -> tuple[float, np.ndarray]:
        mismatch = h_map(diffs, theta, lam) - target
        weighted = cho_solve(factor, mismatch)
        return float(mismatch @ weighted), weighted

    theta = theta_hat / float(np.linalg.norm(theta_hat))
    value, weighted = objective(theta)
    eta = 1.0
    for it in range(1, max_iters + 1):
        grad = 2.0 * information_matrix(diffs, theta, lam) @ weighted
        accepted = False
        while eta > 1e-18:
            cand = _project_ball(theta - eta * grad)
            move = theta - cand
            cand_value, cand_weighted = objective(cand)
            if cand_value <= value - 1e-4 * float(grad @ move):
                accepted = True
                break
            eta *= 0.5
        if not accepted:
            return ProjectionResult(theta=theta, objective=value, iterations=it, converged=True)
        mapping_norm = float(np.linalg.norm(theta - cand)) / eta
        decrease = value - cand_value
        theta, value, weighted = cand, cand_value, cand_weighted
        eta = min(eta * 2.0, 1e6)
        if mapping_norm <= 1e-8 or decrease < tol * max(value, 1e-30):
            return ProjectionResult(theta=theta, objective=value, iterations=it, converged=True)
    return ProjectionResult(theta=theta, objective=value, iterations=max_iters, converged=False)


def sampling_design_matrix(diffs, lam: float, counts=None) -> DesignMatrix:
    """Realized information lam*I + sum_s c_s b_s b_s^T (counts default 1)."""
    if lam <= 0:
        raise ValueError("lam must be > 0")
    diffs = np.asarray(diffs, dtype=float)
    d = diffs.shape[1]
    if len(diffs) == 0:
        return DesignMatrix(matrix=lam * np.eye(d), ridge=lam)
    c = np.ones(len(diffs)) if counts is None else np.asarray(counts, dtype=float)
    M = lam * np.eye(d) + diffs.T @ (c[:, None] * diffs)
    return DesignMatrix(matrix=M, ridge=lam)


def confidence_radius(t: int, d: int, lam: float, delta: float) -> float:
    """High-probability bound on ||theta_projected - theta_star|| in the
    realized-information norm after t labeled duels.

    Evaluates 20 * [sqrt(2 log(1/delta) + d log(lam^(1-1/d) + 4t/(d lam^(1/d))))
    + sqrt(lam)].  The leading 20 is a fixed analysis constant, deliberately
    conservative.
    """
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must lie in (0, 1), got {delta}")
    if lam <= 0:
        raise DomainError(f"lam must be > 0, got {lam}")
    if t < 0 or d < 1:
        raise DomainError(f"need t >= 0 and d >= 1, got t={t}, d={d}")
    arg = lam ** (1.0 - 1.0 / d) + 4.0 * t / (d * lam ** (1.0 / d))
    if arg <= 0.0:
        raise DomainError(f"log argument {arg} <= 0")
    radicand = 2.0 * np.log(1.0 / delta) + d * np.log(arg)
    if radicand < 0.0:
        raise DomainError(f"radicand {radicand} < 0: bound undefined here")
    return 20.0 * (float(np.sqrt(radicand)) + float(np.sqrt(lam)))


RADIUS_CONSTANT = 20.0  # read-only analysis constant used above


@dataclass(frozen=True)
class EstimatorResult:
    """MLE, its in-ball projection, the realized information and the radius."""

    theta_hat: np.ndarray
    theta_hat_projected: np.ndarray
    V: DesignMatrix
    radius: float
    newton_iters: int
    grad_norm: float
    projection_objective: float

    def validate(self) -> None:
        if float(np.linalg.norm(self.theta_hat_projected)) > 1.0 + 1e-9:
            raise ValueError("projected estimate left the unit ball")


def fit_estimator(
    diffs,
    wins,
    lam: float,
    delta: float,
    tol: float = 1e-8,
    max_iters: int = 100,
) -> EstimatorResult:
    """MLE + projection + realized design matrix + radius, in one pass."""
    diffs = np.asarray(diffs, dtype=float)
    newton = mle(diffs, wins, lam, tol=tol, max_iters=max_iters)
    V = sampling_design_matrix(diffs, lam)
    proj = project_mle(newton.theta, diffs, V, lam)
    result = EstimatorResult(
        theta_hat=newton.theta,
        theta_hat_projected=proj.theta,
        V=V,
        radius=confidence_radius(len(diffs), diffs.shape[1], lam, delta),
        newton_iters=newton.iterations,
        grad_norm=newton.grad_norm,
        projection_objective=proj.objective,
    )
    result.validate()
    return result


def format_estimator_result(result: EstimatorResult) -> str:
    """Key-value text block with the V matrix in row-major decimal."""
    lines = [
        "theta_hat " + " ".join(format(x, ".17g") for x in result.theta_hat),
        "theta_hat_projected "
        + " ".join(format(x, ".17g") for x in result.theta_hat_projected),
        f"radius {format(result.radius, '.17g')}",
        f"newton_iters {result.newton_iters}",
        f"grad_norm {format(result.grad_norm, '.17g')}",
        f"projection_objective {format(result.projection_objective, '.17g')}",
        f"V_ridge {format(result.V.ridge, '.17g')}",
    ]
    for row in result.V.matrix:
        lines.append("V_row " + " ".join(format(x, ".17g") for x in row))
    return "\n".join(lines) + "\n"

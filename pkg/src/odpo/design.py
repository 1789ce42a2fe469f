"""G/D-optimal designs over difference arms via Frank-Wolfe.

A design is a finitely supported probability distribution pi over the arm
pool.  Its information matrix is M(pi) = ridge*I + sum_b pi(b) b b^T and the
G-criterion is g(pi) = max over the whole pool of ||b||^2 in the M(pi)^-1
norm.  The Kiefer-Wolfowitz equivalence makes min g = d (when the pool spans
R^d and ridge ~ 0) and identifies the minimizer with the log-det maximizer,
which is what the Frank-Wolfe iteration below ascends.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh, LinAlgError

from .errors import SingularMatrixError, SpanDeficientError, SpanDeficientWarning

WEIGHT_SUM_TOL = 1e-12
PRUNE_TOL = 1e-9


@dataclass(frozen=True)
class Design:
    """Probability weights on a subset of the arm pool (indices sorted)."""

    indices: np.ndarray  # (m,) int
    weights: np.ndarray  # (m,) float, > 0, sums to 1
    dimension: int

    @property
    def support_size(self) -> int:
        return len(self.indices)

    def validate(self) -> None:
        if self.support_size < 1:
            raise ValueError("design support is empty")
        if np.any(self.weights < 0):
            raise ValueError("negative design weight")
        if abs(float(self.weights.sum()) - 1.0) > WEIGHT_SUM_TOL:
            raise ValueError(f"weights sum to {self.weights.sum()!r}, not 1")


@dataclass(frozen=True)
class DesignMatrix:
    """Symmetric positive (semi)definite information matrix with its ridge."""

    matrix: np.ndarray
    ridge: float

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _make_design(indices, weights, d: int) -> Design:
    indices = np.asarray(indices, dtype=np.int64)
    weights = np.asarray(weights, dtype=float)
    order = np.argsort(indices)
    design = Design(indices=indices[order], weights=weights[order], dimension=d)
    design.validate()
    return design


def uniform_design(num_arms: int, d: int) -> Design:
    return _make_design(np.arange(num_arms), np.full(num_arms, 1.0 / num_arms), d)


def _info_matrix(weights: np.ndarray, arms: np.ndarray, ridge: float) -> np.ndarray:
    d = arms.shape[1]
    return ridge * np.eye(d) + arms.T @ (weights[:, None] * arms)


def design_matrix_of(design: Design, arms, ridge: float) -> DesignMatrix:
    """ridge*I + sum_b pi(b) b b^T over the design's support."""
    arms = np.asarray(arms, dtype=float)
    design.validate()
    M = _info_matrix(design.weights, arms[design.indices], ridge)
    if ridge == 0.0:
        try:
            cho_factor(M)
        except LinAlgError as e:
            raise SingularMatrixError(
                "design support does not span the space and ridge is 0"
            ) from e
    return DesignMatrix(matrix=M, ridge=ridge)


def _weighted_sq_norms(M: np.ndarray, arms: np.ndarray) -> np.ndarray:
    """b^T M^-1 b for every arm (rows of `arms`)."""
    try:
        factor = cho_factor(M)
    except LinAlgError as e:
        raise SingularMatrixError("information matrix is singular") from e
    sol = cho_solve(factor, arms.T)
    return np.einsum("ij,ji->i", arms, sol)


def g_value(design: Design, arms, ridge: float) -> float:
    """Worst-case weighted norm over the whole pool (not just the support)."""
    arms = np.asarray(arms, dtype=float)
    M = design_matrix_of(design, arms, ridge).matrix
    return float(np.max(_weighted_sq_norms(M, arms)))


def closed_form_step(g_m: float, d: int) -> float:
    """Exact log-det line-search step for ridge = 0."""
    return (g_m / d - 1.0) / (g_m - 1.0)


def line_search_gamma(M: np.ndarray, C: np.ndarray, tol: float = 1e-10) -> float:
    """Maximize gamma -> log det((1-gamma) M + gamma C) over [0, 1].

    Uses the generalized eigenvalues mu_i of C w.r.t. M, so that the
    objective equals log det M + sum_i log(1 + gamma (mu_i - 1)); the sum is
    strictly concave in gamma and is maximized by ternary search.
    """
    mu = eigh(C, M, eigvals_only=True)

    def h(gamma: float) -> float:
        with np.errstate(divide="ignore", invalid="ignore"):
            return float(np.sum(np.log1p(gamma * (mu - 1.0))))

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        third = (hi - lo) / 3.0
        m1, m2 = lo + third, hi - third
        if h(m1) < h(m2):
            lo = m1
        else:
            hi = m2
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class FrankWolfeResult:
    design: Design
    iterations: int
    final_g: float
    converged: bool
    span_deficient: bool
    logdets: np.ndarray  # log det of the information matrix per visited iterate


def frank_wolfe_design(
    arms,
    ridge: float,
    epsilon: float,
    max_iters: int = 5000,
    stop_g: float | None = None,
) -> FrankWolfeResult:
    """Compute a (1+epsilon)-approximate G-optimal design.

    Starts from the uniform distribution over the pool and repeatedly mixes
    toward a point mass on the arm of largest weighted norm, with the mixing
    coefficient chosen by exact line search on the log-det objective.  Stops
    once g(pi) <= stop_g (default (1+epsilon)*d).  Ties in the argmax break
    toward the lowest arm index and no randomness is consumed, so runs are
    bit-reproducible.

    On failure to converge the best iterate (smallest g) is returned with
    ``converged=False``.  A pool that does not span R^d triggers
    SpanDeficientWarning: the target g ~ d is then unreachable in the
    missing directions' complement sense and the certificate is void.
    """
    arms = np.asarray(arms, dtype=float)
    if arms.ndim != 2 or arms.shape[0] == 0:
        raise SpanDeficientError("empty or malformed arm pool: no design exists")
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if ridge <= 0:
        raise ValueError("ridge must be > 0 to guarantee invertibility")
    L, d = arms.shape
    span_deficient = int(np.linalg.matrix_rank(arms)) < d
    if span_deficient:
        warnings.warn(
            f"arm pool spans only a strict subspace of R^{d}; "
            "the G-optimality certificate cannot refer to the full dimension",
            SpanDeficientWarning,
            stacklevel=2,
        )
    target = (1.0 + epsilon) * d if stop_g is None else float(stop_g)

    w = np.full(L, 1.0 / L)
    eye = np.eye(d)
    best_g = np.inf
    best_w = w
    converged = False
    iterations = 0
    logdets: list[float] = []

    for m in range(max_iters + 1):
        M = _info_matrix(w, arms, ridge)
        factor = cho_factor(M)
        logdets.append(2.0 * float(np.sum(np.log(np.diag(factor[0])))))
        norms = np.einsum("ij,ji->i", arms, cho_solve(factor, arms.T))
        g = float(np.max(norms))
        if g < best_g:
            best_g, best_w = g, w
        if g <= target:
            converged = True
            iterations = m
            break
        if m == max_iters:
            iterations = m
            break
        j = int(np.argmax(norms))
        C = ridge * eye + np.outer(arms[j], arms[j])
        gamma = line_search_gamma(M, C)
        w = (1.0 - gamma) * w
        w[j] += gamma

    final_w = w if converged else best_w
    keep = np.flatnonzero(final_w > PRUNE_TOL)
    pruned = final_w[keep] / final_w[keep].sum()
    design = _make_design(keep, pruned, d)
    final_g = g_value(design, arms, ridge)
    return FrankWolfeResult(
        design=design,
        iterations=iterations,
        final_g=final_g,
        converged=converged and final_g <= target,
        span_deficient=span_deficient,
        logdets=np.asarray(logdets),
    )


@dataclass(frozen=True)
class KWCertificate:
    """Optimality diagnostics for a design over a pool."""

    g: float
    logdet: float
    support_size: int
    dimension: int
    support_exceeds_kw_bound: bool

    def is_optimal_within(self, tol: float) -> bool:
        return self.g <= (1.0 + tol) * self.dimension


def kw_certificate(design: Design, arms, ridge: float) -> KWCertificate:
    """Report g, log det and support size; flag support above d(d+1)/2.

    Exact optimal designs admit supports of at most d(d+1)/2; approximate
    designs may exceed that, which is reported for diagnostics only.
    """
    arms = np.asarray(arms, dtype=float)
    M = design_matrix_of(design, arms, ridge).matrix
    sign, logdet = np.linalg.slogdet(M)
    g = float(np.max(_weighted_sq_norms(M, arms)))
    d = design.dimension
    return KWCertificate(
        g=g,
        logdet=float(logdet) if sign > 0 else -np.inf,
        support_size=design.support_size,
        dimension=d,
        support_exceeds_kw_bound=design.support_size > d * (d + 1) // 2,
    )


# ---------------------------------------------------------------------------
# Serialization: "arm_index weight" lines, sorted, with a key=value header.
# ---------------------------------------------------------------------------


def format_design(design: Design, meta: dict | None = None) -> str:
    fields = " ".join(f"{k}={_fmt_meta(v)}" for k, v in (meta or {}).items())
    lines = [f"# {fields}".rstrip()]
    for idx, wgt in zip(design.indices, design.weights):
        lines.append(f"{int(idx)} {format(float(wgt), '.17g')}")
    return "\n".join(lines) + "\n"


def _fmt_meta(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_design(design: Design, path, meta: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_design(design, meta))


def read_design(path, dimension: int) -> tuple[Design, dict]:
    """Parse a design file back into (Design, header metadata)."""
    meta: dict = {}
    indices: list[int] = []
    weights: list[float] = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if "=" in tok:
                        k, v = tok.split("=", 1)
                        try:
                            meta[k] = float(v)
                        except ValueError:
                            meta[k] = v
                continue
            idx, wgt = line.split()
            indices.append(int(idx))
            weights.append(float(wgt))
    return _make_design(indices, weights, dimension), meta

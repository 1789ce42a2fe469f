"""End-to-end pair selection: design, rounding, feedback, estimation.

The full run computes an approximate G-optimal design over the difference
pool, rounds it to integer duel counts with ceilings, collects Bernoulli
labels, fits the projected MLE and predicts a best arm per context.  Two
reference selectors (uniform sampling and offline greedy weighted-norm
picking) share the estimation path so regret comparisons differ only in the
allocation.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .design import Design, FrankWolfeResult, frank_wolfe_design
from .estimator import EstimatorResult, fit_estimator
from .instances import Instance
from .preference import PreferenceSample, collect_feedback, samples_to_arrays
from .rng import stream


@dataclass(frozen=True)
class Allocation:
    """Integer duel counts per supported arm after ceil-rounding."""

    indices: np.ndarray  # (m,) int, ascending
    counts: np.ndarray  # (m,) int, >= 1
    requested_T: int
    effective_T: int

    @property
    def support_size(self) -> int:
        return len(self.indices)

    def entries(self) -> list[tuple[int, int]]:
        return [(int(i), int(c)) for i, c in zip(self.indices, self.counts)]


def allocate(design: Design, T: int) -> Allocation:
    """Ceil-round T * weight per supported arm; zero weights are excluded."""
    if T < 1:
        raise ValueError("T must be >= 1")
    design.validate()
    counts = np.ceil(T * design.weights).astype(np.int64)
    keep = counts > 0
    indices = design.indices[keep]
    counts = counts[keep]
    return Allocation(
        indices=indices,
        counts=counts,
        requested_T=T,
        effective_T=int(counts.sum()),
    )


@dataclass(frozen=True)
class Prediction:
    """Chosen arm index and its estimated score per context."""

    chosen: np.ndarray  # (N,) int
    scores: np.ndarray  # (N,) float


def predict(theta: np.ndarray, instance: Instance) -> Prediction:
    """Per-context argmax of <theta, a>; ties break to the lowest index."""
    theta = np.asarray(theta, dtype=float)
    chosen = np.empty(instance.num_contexts, dtype=np.int64)
    scores = np.empty(instance.num_contexts)
    for n, aset in enumerate(instance.action_sets):
        vals = aset.arms @ theta
        k = int(np.argmax(vals))
        chosen[n] = k
        scores[n] = vals[k]
    return Prediction(chosen=chosen, scores=scores)


@dataclass(frozen=True)
class OdpoConfig:
    """Free parameters of a run; lambda_est = None means 1/d."""

    lambda_design: float = 1e-6
    lambda_est: float | None = None
    epsilon: float = 0.5
    delta: float = 0.05
    seed: int = 0
    design_max_iters: int = 5000

    def resolve_lambda_est(self, d: int) -> float:
        return 1.0 / d if self.lambda_est is None else self.lambda_est


@dataclass(frozen=True)
class OdpoRun:
    allocation: Allocation
    estimator: EstimatorResult
    prediction: Prediction
    fw: FrankWolfeResult | None = None
    samples: list[PreferenceSample] = field(default_factory=list)


def run_with_allocation(
    instance: Instance,
    allocation: Allocation,
    config: OdpoConfig,
    rng: np.random.Generator,
    fw: FrankWolfeResult | None = None,
) -> OdpoRun:
    """Collect labels for an allocation and fit the estimator on them."""
    samples = collect_feedback(instance, allocation.entries(), rng)
    diffs, wins = samples_to_arrays(samples, instance.dimension)
    est = fit_estimator(
        diffs,
        wins,
        lam=config.resolve_lambda_est(instance.dimension),
        delta=config.delta,
    )
    pred = predict(est.theta_hat_projected, instance)
    return OdpoRun(
        allocation=allocation, estimator=est, prediction=pred, fw=fw, samples=samples
    )


def design_allocation(instance: Instance, T: int, config: OdpoConfig) -> tuple[Allocation, FrankWolfeResult]:
    fw = frank_wolfe_design(
        instance.diff_matrix,
        ridge=config.lambda_design,
        epsilon=config.epsilon,
        max_iters=config.design_max_iters,
    )
    return allocate(fw.design, T), fw


def run_odpo_with_rng(
    instance: Instance, T: int, config: OdpoConfig, rng: np.random.Generator
) -> OdpoRun:
    d = instance.dimension
    if T < d * (d + 1) // 2:
        warnings.warn(
            f"T={T} is below d(d+1)/2={d * (d + 1) // 2}; the regret "
            "guarantee regime is not reached",
            UserWarning,
            stacklevel=2,
        )
    alloc, fw = design_allocation(instance, T, config)
    return run_with_allocation(instance, alloc, config, rng, fw=fw)


def run_odpo(instance: Instance, T: int, config: OdpoConfig | None = None) -> OdpoRun:
    """Design -> round -> label -> estimate -> predict, deterministic in seed."""
    config = config or OdpoConfig()
    return run_odpo_with_rng(instance, T, config, stream(config.seed))


def baseline_uniform(instance: Instance, T: int, rng) -> Allocation:
    """Control condition: T duels drawn i.i.d. uniformly from the pool."""
    if T < 1:
        raise ValueError("T must be >= 1")
    if isinstance(rng, (int, np.integer)):
        rng = stream(int(rng))
    L = instance.num_diff_arms
    if L == 0:
        raise ValueError("instance has no difference arms")
    picks = rng.integers(0, L, size=T)
    counts = np.bincount(picks, minlength=L)
    keep = np.flatnonzero(counts)
    return Allocation(
        indices=keep.astype(np.int64),
        counts=counts[keep].astype(np.int64),
        requested_T=T,
        effective_T=T,
    )


def baseline_greedy_norm(instance: Instance, T: int, lam: float) -> Allocation:
    """Offline greedy: repeatedly duel the arm of largest weighted norm.

    Updates V <- V + b b^T after each pick and never looks at labels, so the
    whole allocation is deterministic.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    if lam <= 0:
        raise ValueError("lam must be > 0")
    B = instance.diff_matrix
    L, d = B.shape
    if L == 0:
        raise ValueError("instance has no difference arms")
    V = lam * np.eye(d)
    counts = np.zeros(L, dtype=np.int64)
    for _ in range(T):
        sol = cho_solve(cho_factor(V), B.T)
        norms = np.einsum("ij,ji->i", B, sol)
        j = int(np.argmax(norms))
        counts[j] += 1
        V += np.outer(B[j], B[j])
    keep = np.flatnonzero(counts)
    return Allocation(
        indices=keep.astype(np.int64),
        counts=counts[keep],
        requested_T=T,
        effective_T=T,
    )


ALGORITHMS = ("odpo", "uniform", "greedy")


def run_algorithm(
    tag: str,
    instance: Instance,
    T: int,
    config: OdpoConfig,
    rng: np.random.Generator,
) -> OdpoRun:
    """Run one selector by name; labeling and estimation are shared."""
    if tag == "odpo":
        return run_odpo_with_rng(instance, T, config, rng)
    if tag == "uniform":
        alloc = baseline_uniform(instance, T, rng)
    elif tag == "greedy":
        alloc = baseline_greedy_norm(
            instance, T, config.resolve_lambda_est(instance.dimension)
        )
    else:
        raise ValueError(f"unknown algorithm {tag!r}; known: {ALGORITHMS}")
    return run_with_allocation(instance, alloc, config, rng)


def run_record(
    tag: str,
    instance: Instance,
    T: int,
    config: OdpoConfig,
    run: OdpoRun,
    regret: float | None = None,
) -> dict:
    """JSON-ready summary of one run (schema documented in the README)."""
    rec = {
        "algorithm": tag,
        "d": instance.dimension,
        "N": instance.num_contexts,
        "K": instance.max_arms_per_context,
        "requested_T": run.allocation.requested_T,
        "effective_T": run.allocation.effective_T,
        "config": {
            "lambda_design": config.lambda_design,
            "lambda_est": config.resolve_lambda_est(instance.dimension),
            "epsilon": config.epsilon,
            "delta": config.delta,
            "seed": config.seed,
        },
        "allocation": {
            "support_size": run.allocation.support_size,
            "indices": [int(i) for i in run.allocation.indices],
            "counts": [int(c) for c in run.allocation.counts],
        },
        "estimator": {
            "newton_iters": run.estimator.newton_iters,
            "grad_norm": run.estimator.grad_norm,
            "projection_objective": run.estimator.projection_objective,
            "radius": run.estimator.radius,
            "theta_hat_norm": float(np.linalg.norm(run.estimator.theta_hat)),
        },
        "prediction": {"chosen": [int(k) for k in run.prediction.chosen]},
    }
    if run.fw is not None:
        rec["design"] = {
            "iterations": run.fw.iterations,
            "final_g": run.fw.final_g,
            "converged": run.fw.converged,
            "span_deficient": run.fw.span_deficient,
        }
    if regret is not None:
        rec["regret"] = regret
    return rec

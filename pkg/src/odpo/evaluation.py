"""Regret measurement, bound formulas, divergences, and replicated runs.

Brackets the selector empirically: simple regret per run, the high
probability and expected upper-bound formulas from the analysis, and two
adversarial constructions whose information-theoretic floors every algorithm
must respect.  The experiment runner replays (algorithm, grid point, replica)
cells on independent counter-based streams and emits a CSV whose bytes depend
only on the configuration.
"""

import csv
import io
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .design import frank_wolfe_design
from .errors import DomainError, SpanDeficientWarning
from .estimator import fit_estimator
from .instances import (
    ActionSet,
    Instance,
    OnlineConstruction,
    make_hypercube_instance,
    make_online_lower_bound_instance,
    make_random_instance,
    make_rare_direction_instance,
)
from .pipeline import (
    OdpoConfig,
    OdpoRun,
    Prediction,
    design_allocation,
    run_algorithm,
    run_record,
    run_with_allocation,
)
from .preference import sigmoid
from .rng import stream


def simple_regret(instance: Instance, prediction: Prediction) -> float:
    """Worst one-step shortfall of the predictions under the hidden parameter."""
    theta = instance.theta_star
    worst = 0.0
    for n, aset in enumerate(instance.action_sets):
        vals = aset.arms @ theta
        shortfall = float(np.max(vals) - vals[prediction.chosen[n]])
        worst = max(worst, shortfall)
    return worst


# ---------------------------------------------------------------------------
# Bound formulas
# ---------------------------------------------------------------------------


def theorem1_bound(d: int, T: int, epsilon: float, lam: float, delta: float) -> float:
    """High-probability regret bound for a (1+epsilon)-approximate design."""
    if d < 1 or T < 1:
        raise DomainError(f"need d >= 1 and T >= 1, got d={d}, T={T}")
    if lam <= 0 or not 0 < delta < 1 or epsilon < 0:
        raise DomainError("need lam > 0, delta in (0,1), epsilon >= 0")
    arg = lam ** (1.0 - 1.0 / d) + 4.0 * T / (d * lam ** (1.0 / d))
    if arg <= 0:
        raise DomainError(f"log argument {arg} <= 0")
    radicand = 2.0 * np.log(1.0 / delta) + d * np.log(arg)
    if radicand < 0:
        raise DomainError(f"radicand {radicand} < 0")
    return float(
        20.0 * (1.0 + epsilon) * np.sqrt(d / T) * (np.sqrt(radicand) + np.sqrt(lam))
    )


def corollary_hp_bound(d: int, T: int, delta: float) -> float:
    """Theorem bound specialized to a 3/2-approximation and lam = 1/d."""
    if d < 1 or T < 1 or not 0 < delta < 1:
        raise DomainError("need d >= 1, T >= 1, delta in (0,1)")
    arg = (1.0 + 4.0 * T) / d ** (1.0 - 1.0 / d)
    if arg <= 0:
        raise DomainError(f"log argument {arg} <= 0")
    radicand = 2.0 * np.log(1.0 / delta) + d * np.log(arg)
    if radicand < 0:
        raise DomainError(f"radicand {radicand} < 0")
    return float(30.0 * np.sqrt(d / T) * (np.sqrt(radicand) + 1.0 / np.sqrt(d)))


def corollary_expected_bound(d: int, T: int) -> float:
    """Expected-regret form at the tuned failure probability."""
    if d < 1 or T < 1:
        raise DomainError(f"need d >= 1 and T >= 1, got d={d}, T={T}")
    arg = (4.0 * T + 1.0) / d ** (1.0 - 1.0 / d)
    if arg <= 1.0:
        raise DomainError(f"log argument {arg} <= 1: bound undefined")
    return float(
        30.0 * (d + 2.0) / np.sqrt(T) * np.sqrt(np.log(arg)) + 31.0 / np.sqrt(T)
    )


@dataclass(frozen=True)
class CorollaryBounds:
    high_prob: float
    expected: float


def corollary_bound(d: int, T: int, delta: float = 0.05) -> CorollaryBounds:
    return CorollaryBounds(
        high_prob=corollary_hp_bound(d, T, delta),
        expected=corollary_expected_bound(d, T),
    )


def hypercube_regret_floor(d: int, T: int) -> float:
    """Worst-case floor d * e^-5 / (4 sqrt(T)) matching the upper bound rate."""
    return float(d * np.exp(-5.0) / (4.0 * np.sqrt(T)))


# ---------------------------------------------------------------------------
# Divergence utilities
# ---------------------------------------------------------------------------


def kl_bernoulli(p: float, q: float) -> float:
    """KL(Ber(p) || Ber(q)) with the 0 log 0 = 0 convention."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if q in (0.0, 1.0):
        if p == q:
            return 0.0
        raise DomainError(f"KL undefined for q={q} with p={p}")
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    out = 0.0
    if p > 0.0:
        out += p * np.log(p / q)
    if p < 1.0:
        out += (1.0 - p) * np.log((1.0 - p) / (1.0 - q))
    return float(out)


def chi2_bernoulli(p: float, q: float) -> float:
    """chi^2(Ber(p) || Ber(q)) = (p - q)^2 / (q (1 - q))."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if q in (0.0, 1.0):
        if p == q:
            return 0.0
        raise DomainError(f"chi^2 undefined for q={q} with p={p}")
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    return float((p - q) ** 2 / (q * (1.0 - q)))


def bretagnolle_huber_rhs(kl: float) -> float:
    """exp(-KL)/2: the floor on the sum of the two error probabilities."""
    if kl < 0:
        raise DomainError(f"KL must be >= 0, got {kl}")
    return float(np.exp(-kl) / 2.0)


# ---------------------------------------------------------------------------
# Sequential (changing action set) interface and its verifier
# ---------------------------------------------------------------------------


def _pairwise_pool(aset: ActionSet) -> np.ndarray:
    """Nonzero deduplicated differences of one action set, in (i, j) order."""
    seen: dict[bytes, None] = {}
    out = []
    for i in range(aset.num_arms):
        for j in range(aset.num_arms):
            if i == j:
                continue
            b = np.ascontiguousarray(aset.arms[i] - aset.arms[j])
            if not b.any():
                continue
            key = b.tobytes()
            if key in seen:
                continue
            seen[key] = None
            out.append(b)
    if not out:
        return np.zeros((0, aset.dimension))
    return np.stack(out)


def odpo_sequential(
    action_sets,
    duel,
    rng: np.random.Generator,
    lambda_est: float | None = None,
    delta: float = 0.05,
) -> np.ndarray:
    """Pair selection with one duel per incoming action set.

    At step t an approximate optimal design is computed on the differences of
    the t-th set alone and its heaviest arm is dueled; after the last step a
    single projected MLE over all labels picks one arm per context.  ``duel``
    maps (step, difference vector) to the binary label.
    """
    action_sets = list(action_sets)
    if not action_sets:
        raise ValueError("need at least one action set")
    d = action_sets[0].dimension
    lam = 1.0 / d if lambda_est is None else lambda_est
    diffs: list[np.ndarray] = []
    wins: list[float] = []
    for t, aset in enumerate(action_sets):
        pool = _pairwise_pool(aset)
        if len(pool) == 0:
            continue  # a single-arm set carries no duel
        with warnings.catch_warnings():
            # per-step pools of a single context rarely span R^d
            warnings.simplefilter("ignore", SpanDeficientWarning)
            fw = frank_wolfe_design(pool, ridge=1e-6, epsilon=0.5, max_iters=200)
        b = pool[fw.design.indices[int(np.argmax(fw.design.weights))]]
        diffs.append(b)
        wins.append(float(duel(t, b)))
    diff_arr = np.stack(diffs) if diffs else np.zeros((0, d))
    est = fit_estimator(diff_arr, np.asarray(wins), lam=lam, delta=delta)
    chosen = np.empty(len(action_sets), dtype=np.int64)
    for t, aset in enumerate(action_sets):
        chosen[t] = int(np.argmax(aset.arms @ est.theta_hat_projected))
    return chosen


@dataclass(frozen=True)
class OnlineLowerBoundReport:
    T: int
    replicas: int
    c: float
    floor: float
    p_err: tuple[float, float]
    p_err_se: tuple[float, float]
    mistake_sum: float
    mistake_sum_se: float
    mean_regret: tuple[float, float]
    floor_by_horizon: tuple[tuple[int, float], ...]

    @property
    def floor_is_horizon_independent(self) -> bool:
        values = {f for _, f in self.floor_by_horizon}
        return max(values) - min(values) < 1e-15


def _online_construction_c(construction: OnlineConstruction) -> float:
    """Largest final-step divergence between the two candidate labelers."""
    theta, theta_prime = construction.theta_candidates
    pool = _pairwise_pool(construction.action_sets[-1])
    best = 0.0
    for b in pool:
        p = sigmoid(float(theta @ b))
        q = sigmoid(float(theta_prime @ b))
        best = max(best, kl_bernoulli(p, q))
    return best


def verify_online_lower_bound(
    T: int,
    algorithm=None,
    replicas: int = 2000,
    seed: int = 0,
) -> OnlineLowerBoundReport:
    """Monte Carlo check of the changing-action-set impossibility.

    Runs the sequential selector under both candidate parameters and compares
    the summed mistake probability on the final context with exp(-c)/2, where
    c is the divergence the construction actually allows (computed
    numerically, not assumed).
    """
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    algo = algorithm or odpo_sequential
    construction = make_online_lower_bound_instance(T)
    c = _online_construction_c(construction)
    floor = bretagnolle_huber_rhs(c)

    p_err = []
    p_se = []
    mean_regret = []
    for env, theta in enumerate(construction.theta_candidates):
        final = construction.action_sets[-1]
        best_final = int(np.argmax(final.arms @ theta))
        mistakes = 0
        regrets = np.empty(replicas)
        for r in range(replicas):
            rng = stream(seed, env, r)

            def duel(t: int, b: np.ndarray) -> int:
                return int(rng.random() < sigmoid(float(theta @ b)))

            chosen = algo(construction.action_sets, duel, rng)
            mistakes += int(chosen[-1] != best_final)
            worst = 0.0
            for t, aset in enumerate(construction.action_sets):
                vals = aset.arms @ theta
                worst = max(worst, float(np.max(vals) - vals[chosen[t]]))
            regrets[r] = worst
        p = mistakes / replicas
        p_err.append(p)
        p_se.append(float(np.sqrt(p * (1.0 - p) / replicas)))
        mean_regret.append(float(regrets.mean()))

    floors = []
    for horizon in sorted({2, T, 2 * T}):
        other = make_online_lower_bound_instance(horizon)
        floors.append((horizon, bretagnolle_huber_rhs(_online_construction_c(other))))

    return OnlineLowerBoundReport(
        T=T,
        replicas=replicas,
        c=c,
        floor=floor,
        p_err=(p_err[0], p_err[1]),
        p_err_se=(p_se[0], p_se[1]),
        mistake_sum=p_err[0] + p_err[1],
        mistake_sum_se=float(np.hypot(p_se[0], p_se[1])),
        mean_regret=(mean_regret[0], mean_regret[1]),
        floor_by_horizon=tuple(floors),
    )


def format_online_report(report: OnlineLowerBoundReport) -> str:
    lines = [
        "online lower-bound verification",
        f"T {report.T}",
        f"replicas_per_environment {report.replicas}",
        f"c {report.c:.12g}",
        f"floor {report.floor:.12g}",
        f"p_err_theta {report.p_err[0]:.12g} se {report.p_err_se[0]:.12g}",
        f"p_err_theta_prime {report.p_err[1]:.12g} se {report.p_err_se[1]:.12g}",
        f"mistake_sum {report.mistake_sum:.12g} se {report.mistake_sum_se:.12g}",
        f"mean_regret_theta {report.mean_regret[0]:.12g}",
        f"mean_regret_theta_prime {report.mean_regret[1]:.12g}",
        "floor_by_horizon "
        + " ".join(f"T={t}:{f:.12g}" for t, f in report.floor_by_horizon),
        f"floor_is_horizon_independent {report.floor_is_horizon_independent}",
        f"floor_respected {report.mistake_sum >= report.floor - 3 * report.mistake_sum_se}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Hypercube construction verifier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HypercubeLowerBoundReport:
    d: int
    T: int
    replicas: int
    floor: float
    upper_expected: float
    mean_regret: float
    regret_se: float
    sign_error_rate: np.ndarray  # (d,)
    pair_prob: np.ndarray  # (d,) estimates of p(theta, i) + p(theta', i)
    pair_prob_se: np.ndarray  # (d,)
    kl_per_coordinate: np.ndarray  # (d,) realized divergence budget
    desk_scale: bool  # set when d is below the formal regime


def verify_hypercube_lower_bound(
    d: int,
    T: int,
    algorithm=None,
    replicas: int = 200,
    seed: int = 0,
    config: OdpoConfig | None = None,
) -> HypercubeLowerBoundReport:
    """Monte Carlo check of the hypercube floor.

    Each replica draws the hidden parameter uniformly from the sign
    hypercube, runs the selector on the per-coordinate duel pool and scores
    the box regret of the predicted vertex.  Per-coordinate sign-error rates
    double as estimates of the paired error probabilities (flipping one
    coordinate maps the parameter set onto itself), and the realized
    divergence per coordinate is evaluated from the actual allocation.
    """
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    hyper = make_hypercube_instance(d, T)
    config = config or OdpoConfig()
    template = hyper.duel_instance(next(hyper.candidate_thetas()))
    # the pool geometry is parameter-free, so design and rounding happen once
    alloc_probe, fw = design_allocation(template, T, config)
    if algorithm is None:

        def algorithm(inst: Instance, horizon: int, rng: np.random.Generator):
            run = run_with_allocation(inst, alloc_probe, config, rng, fw=fw)
            return run.estimator.theta_hat_projected

    errors = np.zeros((replicas, d))
    regrets = np.empty(replicas)
    for r in range(replicas):
        rng = stream(seed, r)
        theta = hyper.random_theta(rng)
        inst = hyper.duel_instance(theta)
        theta_est = algorithm(inst, T, rng)
        signs_hat = np.where(np.asarray(theta_est) >= 0, 1.0, -1.0)
        regrets[r] = hyper.regret(theta, hyper.vertex(signs_hat))
        errors[r] = signs_hat != np.sign(theta)

    rate = errors.mean(axis=0)
    rate_se = np.sqrt(rate * (1.0 - rate) / replicas)
    # realized duels per coordinate (the allocation is parameter-independent)
    duels = np.zeros(d)
    for idx, count in zip(alloc_probe.indices, alloc_probe.counts):
        coord = template.diff_arms[int(idx)].origin[0]
        duels[coord] += int(count)
    gap = 2.0 * hyper.theta_magnitude * hyper.arm_scale  # |<theta, b>| per duel
    per_duel_kl = kl_bernoulli(sigmoid(gap), sigmoid(-gap))
    kl_coord = duels * per_duel_kl

    return HypercubeLowerBoundReport(
        d=d,
        T=T,
        replicas=replicas,
        floor=hypercube_regret_floor(d, T),
        upper_expected=corollary_expected_bound(d, T),
        mean_regret=float(regrets.mean()),
        regret_se=float(regrets.std(ddof=1) / np.sqrt(replicas)) if replicas > 1 else 0.0,
        sign_error_rate=rate,
        pair_prob=2.0 * rate,
        pair_prob_se=2.0 * rate_se,
        kl_per_coordinate=kl_coord,
        desk_scale=d < 16,
    )


def format_hypercube_report(report: HypercubeLowerBoundReport) -> str:
    lines = [
        "hypercube lower-bound verification",
        f"d {report.d}",
        f"T {report.T}",
        f"replicas {report.replicas}",
        f"floor {report.floor:.12g}",
        f"upper_expected {report.upper_expected:.12g}",
        f"mean_regret {report.mean_regret:.12g} se {report.regret_se:.12g}",
        f"desk_scale {report.desk_scale}",
        f"floor_respected {report.mean_regret >= report.floor}",
        f"below_upper {report.mean_regret <= report.upper_expected}",
    ]
    for i in range(report.d):
        lines.append(
            f"coordinate {i} rate {report.sign_error_rate[i]:.12g} "
            f"pair_prob {report.pair_prob[i]:.12g} "
            f"se {report.pair_prob_se[i]:.12g} "
            f"kl {report.kl_per_coordinate[i]:.12g}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Replicated experiment runner
# ---------------------------------------------------------------------------

CSV_COLUMNS = (
    "replica",
    "seed",
    "algorithm",
    "d",
    "T",
    "effective_T",
    "N",
    "K",
    "regret",
    "theorem1_bound",
    "corollary_hp_bound",
    "corollary_exp_bound",
    "lower_bound",
    "status",
)


@dataclass(frozen=True)
class RegretRow:
    replica: int
    seed: int
    algorithm: str
    d: int
    T: int
    effective_T: int
    N: int
    K: int
    regret: float
    theorem1_bound: float
    corollary_hp_bound: float
    corollary_exp_bound: float
    lower_bound: float
    status: str


@dataclass(frozen=True)
class AggregateRow:
    algorithm: str
    d: int
    T: int
    count: int
    errors: int
    mean_regret: float
    std_error: float
    q50: float
    q90: float
    q95: float


@dataclass(frozen=True)
class RegretReport:
    rows: tuple[RegretRow, ...]
    aggregates: tuple[AggregateRow, ...]
    records: tuple[dict, ...] = ()


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to replay an experiment byte-for-byte."""

    grid: tuple[tuple[int, int], ...]  # (d, T) cells
    algorithms: tuple[str, ...] = ("odpo",)
    replicas: int = 50
    master_seed: int = 0
    generator: str = "random"  # random | rare-direction | file
    N: int = 40
    K: int = 4
    instance: Instance | None = None  # for generator == "file"
    resample_per_replica: bool = True
    lambda_design: float = 1e-6
    lambda_est: float | None = None
    epsilon: float = 0.5
    delta: float = 0.05
    jobs: int = 1
    keep_records: bool = True


def _instance_for_cell(cfg: ExperimentConfig, d: int, cell: int, replica: int) -> Instance:
    if cfg.generator == "file":
        if cfg.instance is None:
            raise ValueError("generator 'file' requires an instance")
        return cfg.instance
    salt = replica if cfg.resample_per_replica else 0
    raw = np.random.SeedSequence(cfg.master_seed, spawn_key=(0, cell, salt))
    gen_seed = int(raw.generate_state(1)[0])
    if cfg.generator == "random":
        return make_random_instance(cfg.N, cfg.K, d, seed=gen_seed)
    if cfg.generator == "rare-direction":
        return make_rare_direction_instance(cfg.N, d, seed=gen_seed)
    raise ValueError(f"unknown generator {cfg.generator!r}")


def nearest_rank_quantile(values: np.ndarray, q: float) -> float:
    """Classical nearest-rank quantile over the sorted sample."""
    ordered = np.sort(np.asarray(values, dtype=float))
    if len(ordered) == 0:
        return float("nan")
    rank = int(np.ceil(q * len(ordered)))
    return float(ordered[max(rank, 1) - 1])


def run_experiment(config: ExperimentConfig) -> RegretReport:
    """Run every (algorithm, grid cell, replica) and aggregate.

    Cells own derived random streams, so the report is identical regardless
    of ``jobs``.  A failing replica contributes an error-tagged row instead
    of aborting the sweep.
    """
    tasks = []
    for a_idx, algo in enumerate(config.algorithms):
        for c_idx, (d, T) in enumerate(config.grid):
            for r in range(config.replicas):
                tasks.append((a_idx, algo, c_idx, d, T, r))

    def safe(fn, *args) -> float:
        try:
            return fn(*args)
        except DomainError:
            return float("nan")

    def run_task(task) -> tuple[RegretRow, dict | None]:
        a_idx, algo, c_idx, d, T, r = task
        row_seed = c_idx * config.replicas + r
        odpo_cfg = OdpoConfig(
            lambda_design=config.lambda_design,
            lambda_est=config.lambda_est,
            epsilon=config.epsilon,
            delta=config.delta,
            seed=config.master_seed,
        )
        lam = odpo_cfg.resolve_lambda_est(d)
        bounds = dict(
            theorem1_bound=safe(theorem1_bound, d, T, config.epsilon, lam, config.delta),
            corollary_hp_bound=safe(corollary_hp_bound, d, T, config.delta),
            corollary_exp_bound=safe(corollary_expected_bound, d, T),
            lower_bound=hypercube_regret_floor(d, T),
        )
        record = None
        try:
            inst = _instance_for_cell(config, d, c_idx, r)
            rng = stream(config.master_seed, 1, a_idx, c_idx, r)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", UserWarning)
                run: OdpoRun = run_algorithm(algo, inst, T, odpo_cfg, rng)
            regret = simple_regret(inst, run.prediction)
            row = RegretRow(
                replica=r,
                seed=row_seed,
                algorithm=algo,
                d=d,
                T=T,
                effective_T=run.allocation.effective_T,
                N=inst.num_contexts,
                K=inst.max_arms_per_context,
                regret=regret,
                status="ok",
                **bounds,
            )
            if config.keep_records:
                record = run_record(algo, inst, T, odpo_cfg, run, regret=regret)
                record.update(replica=r, seed=row_seed)
        except Exception as e:  # noqa: BLE001 - rows carry the failure tag
            row = RegretRow(
                replica=r,
                seed=row_seed,
                algorithm=algo,
                d=d,
                T=T,
                effective_T=0,
                N=0,
                K=0,
                regret=float("nan"),
                status=f"error:{type(e).__name__}",
                **bounds,
            )
        return row, record

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(run_task, tasks))
    else:
        results = [run_task(t) for t in tasks]

    rows = [row for row, _ in results]
    records = tuple(rec for _, rec in results if rec is not None)
    rows.sort(key=lambda r: (r.algorithm, r.seed))

    aggregates = []
    seen_cells = []
    for row in rows:
        cell = (row.algorithm, row.d, row.T)
        if cell not in seen_cells:
            seen_cells.append(cell)
    for algo, d, T in seen_cells:
        sub = [r for r in rows if (r.algorithm, r.d, r.T) == (algo, d, T)]
        ok = np.array([r.regret for r in sub if r.status == "ok"])
        n = len(ok)
        mean = float(ok.mean()) if n else float("nan")
        se = float(ok.std(ddof=1) / np.sqrt(n)) if n > 1 else float("nan")
        aggregates.append(
            AggregateRow(
                algorithm=algo,
                d=d,
                T=T,
                count=len(sub),
                errors=len(sub) - n,
                mean_regret=mean,
                std_error=se,
                q50=nearest_rank_quantile(ok, 0.50) if n else float("nan"),
                q90=nearest_rank_quantile(ok, 0.90) if n else float("nan"),
                q95=nearest_rank_quantile(ok, 0.95) if n else float("nan"),
            )
        )
    return RegretReport(rows=tuple(rows), aggregates=tuple(aggregates), records=records)


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def report_to_csv(report: RegretReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        writer.writerow([_fmt(getattr(row, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def aggregate_table(report: RegretReport) -> str:
    header = f"{'algorithm':<12}{'d':>4}{'T':>7}{'n':>5}{'err':>5}{'mean':>14}{'se':>12}{'q95':>12}"
    lines = [header, "-" * len(header)]
    for agg in report.aggregates:
        lines.append(
            f"{agg.algorithm:<12}{agg.d:>4}{agg.T:>7}{agg.count:>5}{agg.errors:>5}"
            f"{agg.mean_regret:>14.6g}{agg.std_error:>12.4g}{agg.q95:>12.6g}"
        )
    return "\n".join(lines)

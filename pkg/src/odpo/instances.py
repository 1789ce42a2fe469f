"""Problem instances: per-context action sets, difference arms, generators.

An instance bundles N contexts, each carrying K embedded completions (arms in
the closed unit ball of R^d), a hidden reward parameter theta_star, and the
derived pool of nonzero difference arms b = a_n^i - a_n^j used for dueling.
Also provides the two adversarial constructions used by the lower-bound
verifiers and a plain text file format.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InstanceParseError,
    InvalidScale,
    NormViolation,
)

# Slack for unit-norm checks: tolerates normalization round-off only.
NORM_TOL = 1e-9


def _as_vector(x, d: int | None = None) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DimensionMismatch(f"expected a 1-d vector, got shape {v.shape}")
    if d is not None and v.shape[0] != d:
        raise DimensionMismatch(f"expected dimension {d}, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise NormViolation(f"non-finite entries in vector {v!r}")
    return v


def _check_unit_ball(v: np.ndarray, what: str, cap: float = 1.0) -> None:
    norm = float(np.linalg.norm(v))
    if norm > cap + NORM_TOL:
        raise NormViolation(f"{what} has norm {norm:.6g} > {cap:g}: {v!r}")


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ActionSet:
    """Arms (embedded completions) available for one context."""

    context_id: int
    arms: np.ndarray  # (K, d)

    @property
    def num_arms(self) -> int:
        return self.arms.shape[0]

    @property
    def dimension(self) -> int:
        return self.arms.shape[1]


@dataclass(frozen=True)
class DifferenceArm:
    """A dueling arm b = a_n^i - a_n^j with its (context, i, j) origin."""

    vector: np.ndarray  # (d,)
    origin: tuple[int, int, int]


@dataclass(frozen=True)
class Instance:
    """N action sets, hidden parameter, and the deduplicated difference pool."""

    action_sets: tuple[ActionSet, ...]
    theta_star: np.ndarray
    diff_arms: tuple[DifferenceArm, ...]
    dimension: int
    spans_rd: bool

    @property
    def num_contexts(self) -> int:
        return len(self.action_sets)

    @property
    def num_diff_arms(self) -> int:
        return len(self.diff_arms)

    @property
    def max_arms_per_context(self) -> int:
        return max(s.num_arms for s in self.action_sets)

    @cached_property
    def diff_matrix(self) -> np.ndarray:
        """Difference arms stacked as an (L, d) array."""
        if not self.diff_arms:
            return _freeze(np.zeros((0, self.dimension)))
        return _freeze(np.stack([b.vector for b in self.diff_arms]))


def build_instance(action_sets: Sequence, theta_star) -> Instance:
    """Assemble an instance from per-context arm arrays and theta_star.

    Difference arms enumerate every ordered pair (i, j), i != j, within each
    context.  Exact-zero differences are dropped (a duel of an arm against
    itself carries no information) and exact duplicates are removed, keeping
    the first origin encountered.  Both b and -b are retained when distinct.
    """
    if not action_sets:
        raise ValueError("need at least one action set")
    sets: list[ActionSet] = []
    d = None
    for n, arms in enumerate(action_sets):
        if isinstance(arms, ActionSet):
            arms = arms.arms
        arr = np.asarray(arms, dtype=float)
        if arr.ndim != 2 or arr.shape[0] < 1:
            raise DimensionMismatch(
                f"action set {n}: expected a (K, d) array with K >= 1, "
                f"got shape {arr.shape}"
            )
        if d is None:
            d = arr.shape[1]
        elif arr.shape[1] != d:
            raise DimensionMismatch(
                f"action set {n} has dimension {arr.shape[1]}, expected {d}"
            )
        if not np.all(np.isfinite(arr)):
            raise NormViolation(f"action set {n} contains non-finite entries")
        for k in range(arr.shape[0]):
            _check_unit_ball(arr[k], f"arm {k} of action set {n}")
        sets.append(ActionSet(context_id=n, arms=_freeze(arr)))

    theta = _as_vector(theta_star, d)
    _check_unit_ball(theta, "theta_star")

    seen: dict[bytes, None] = {}
    diff_arms: list[DifferenceArm] = []
    for s in sets:
        arms = s.arms
        for i in range(s.num_arms):
            for j in range(s.num_arms):
                if i == j:
                    continue
                b = arms[i] - arms[j]
                if not b.any():
                    continue
                key = b.tobytes()
                if key in seen:
                    continue
                seen[key] = None
                diff_arms.append(
                    DifferenceArm(vector=_freeze(b), origin=(s.context_id, i, j))
                )

    if diff_arms:
        mat = np.stack([b.vector for b in diff_arms])
        spans = int(np.linalg.matrix_rank(mat)) == d
    else:
        spans = False

    return Instance(
        action_sets=tuple(sets),
        theta_star=_freeze(theta),
        diff_arms=tuple(diff_arms),
        dimension=d,
        spans_rd=spans,
    )


def sample_unit_ball(rng: np.random.Generator, d: int) -> np.ndarray:
    """Uniform point in the closed unit ball of R^d.

    Direction uniform on the sphere, radius U^(1/d) (the exact radial law),
    avoiding rejection sampling so the draw count per point is fixed.
    """
    v = rng.standard_normal(d)
    norm = np.linalg.norm(v)
    while norm == 0.0:  # probability zero, but keep the generator total
        v = rng.standard_normal(d)
        norm = np.linalg.norm(v)
    radius = rng.random() ** (1.0 / d)
    return v * (radius / norm)


def make_random_instance(N: int, K: int, d: int, seed: int) -> Instance:
    """Synthetic benchmark: N contexts of K arms uniform in the unit ball."""
    if N < 1 or K < 1 or d < 1:
        raise ValueError("N, K and d must all be >= 1")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    sets = [
        np.stack([sample_unit_ball(rng, d) for _ in range(K)]) for _ in range(N)
    ]
    theta = sample_unit_ball(rng, d)
    return build_instance(sets, theta)


def make_rare_direction_instance(N: int = 50, d: int = 4, seed: int = 0) -> Instance:
    """Anisotropic benchmark: one informative direction in 1 of N contexts.

    The first N-1 contexts duel pairs whose differences are short vectors in
    the first d-1 coordinates and are orthogonal to the hidden parameter, so
    their labels are coin flips.  The last context duels +/-0.9 e_d, the only
    pair informative about theta_star = 0.9 e_d; it is listed worst-arm-first
    so an uninformed tie-break errs.
    """
    if N < d or d < 2:
        raise ValueError("need N >= d >= 2")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    sets = []
    for _ in range(N - 1):
        u = rng.standard_normal(d - 1)
        u /= np.linalg.norm(u)
        u = np.concatenate([u, [0.0]])
        center = np.concatenate([sample_unit_ball(rng, d - 1) * 0.8, [0.0]])
        sets.append(np.stack([center + 0.05 * u, center - 0.05 * u]))
    informative = np.zeros(d)
    informative[-1] = 0.9
    sets.append(np.stack([-informative, informative]))
    theta = informative.copy()
    return build_instance(sets, theta)


@dataclass(frozen=True)
class OnlineConstruction:
    """Changing action sets that defeat any sequential pair-selection rule.

    The first T-1 contexts offer only +/- e1 while the hidden parameter is
    +/- e2, so every duel before the last one is a coin flip; only the final
    context can tell the two candidate parameters apart.
    """

    action_sets: tuple[ActionSet, ...]
    theta_candidates: tuple[np.ndarray, np.ndarray]

    @property
    def horizon(self) -> int:
        return len(self.action_sets)


def make_online_lower_bound_instance(T: int) -> OnlineConstruction:
    """The two-dimensional changing-action-set construction of length T."""
    if T < 2:
        raise ValueError("T must be >= 2")
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    sets = []
    for t in range(T - 1):
        sets.append(ActionSet(context_id=t, arms=_freeze(np.stack([e1, -e1]))))
    sets.append(ActionSet(context_id=T - 1, arms=_freeze(np.stack([e2, -e2]))))
    return OnlineConstruction(
        action_sets=tuple(sets),
        theta_candidates=(_freeze(e2.copy()), _freeze(-e2)),
    )


@dataclass(frozen=True)
class HypercubeInstance:
    """Implicit box action set [-1/sqrt(d), 1/sqrt(d)]^d with sign parameters.

    The candidate parameters are the 2^d sign patterns scaled by sqrt(d/T).
    Best arm and regret decompose coordinatewise, so the box is never
    materialized: predictions are sign vectors scaled by 1/sqrt(d).
    """

    d: int
    T: int

    @property
    def arm_scale(self) -> float:
        return 1.0 / np.sqrt(self.d)

    @property
    def theta_magnitude(self) -> float:
        return float(np.sqrt(self.d / self.T))

    def candidate_thetas(self) -> Iterator[np.ndarray]:
        """Lazily enumerate all 2^d candidate parameters."""
        mag = self.theta_magnitude
        for signs in product((1.0, -1.0), repeat=self.d):
            yield np.asarray(signs) * mag

    def random_theta(self, rng: np.random.Generator) -> np.ndarray:
        signs = np.where(rng.random(self.d) < 0.5, 1.0, -1.0)
        return signs * self.theta_magnitude

    def vertex(self, signs: np.ndarray) -> np.ndarray:
        """Box vertex for a +/-1 sign vector."""
        return np.asarray(signs, dtype=float) * self.arm_scale

    def best_arm(self, theta: np.ndarray) -> np.ndarray:
        return self.vertex(np.where(np.asarray(theta) >= 0, 1.0, -1.0))

    def regret(self, theta: np.ndarray, a_hat: np.ndarray) -> float:
        """Exact one-step shortfall of a prediction inside the box."""
        theta = _as_vector(theta, self.d)
        a_hat = _as_vector(a_hat, self.d)
        if np.max(np.abs(a_hat)) > self.arm_scale + NORM_TOL:
            raise NormViolation("prediction leaves the box action set")
        return float(theta @ (self.best_arm(theta) - a_hat))

    def duel_instance(self, theta: np.ndarray) -> Instance:
        """Explicit instance with one +/- pair per coordinate.

        This is the finite pool a pair-selection algorithm duels on; the box
        regret is still scored through :meth:`regret`.
        """
        theta = _as_vector(theta, self.d)
        _check_unit_ball(theta, "theta")
        s = self.arm_scale
        sets = []
        for i in range(self.d):
            e = np.zeros(self.d)
            e[i] = s
            sets.append(np.stack([e, -e]))
        return build_instance(sets, theta)


def make_hypercube_instance(d: int, T: int) -> HypercubeInstance:
    """Implicit hypercube family; errors if sqrt(d/T) would exceed 1."""
    if d < 1 or T < 1:
        raise ValueError("d and T must be >= 1")
    if d > T:
        raise InvalidScale(
            f"sqrt(d/T) = sqrt({d}/{T}) > 1: candidate parameters would "
            "leave the unit ball"
        )
    return HypercubeInstance(d=d, T=T)


# ---------------------------------------------------------------------------
# Text format: header "N K d", N blocks of K arm lines, then theta_star.
# ---------------------------------------------------------------------------


def format_instance(instance: Instance) -> str:
    """Render in the line-oriented text format (round-trips exactly)."""
    K = instance.max_arms_per_context
    if any(s.num_arms != K for s in instance.action_sets):
        raise ValueError("text format requires every context to have K arms")
    lines = [f"{instance.num_contexts} {K} {instance.dimension}"]
    for s in instance.action_sets:
        for k in range(K):
            lines.append(" ".join(format(x, ".17g") for x in s.arms[k]))
    lines.append(" ".join(format(x, ".17g") for x in instance.theta_star))
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_instance(instance))


def parse_instance(text: str) -> Instance:
    """Parse the text format, reporting offending line numbers."""
    numbered = [
        (i + 1, line.strip())
        for i, line in enumerate(text.splitlines())
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not numbered:
        raise InstanceParseError(1, "empty instance file")

    lineno, header = numbered[0]
    parts = header.split()
    if len(parts) != 3:
        raise InstanceParseError(lineno, f"header must be 'N K d', got {header!r}")
    try:
        N, K, d = (int(p) for p in parts)
    except ValueError:
        raise InstanceParseError(lineno, f"header must be three integers, got {header!r}")
    if N < 1 or K < 1 or d < 1:
        raise InstanceParseError(lineno, f"N, K, d must be positive, got {header!r}")

    body = numbered[1:]
    expected = N * K + 1
    if len(body) != expected:
        raise InstanceParseError(
            numbered[-1][0],
            f"expected {expected} vector lines after the header, got {len(body)}",
        )

    def parse_vector(lineno: int, line: str, what: str, cap: float) -> np.ndarray:
        toks = line.split()
        if len(toks) != d:
            raise InstanceParseError(lineno, f"expected {d} values, got {len(toks)}")
        try:
            v = np.array([float(t) for t in toks])
        except ValueError:
            raise InstanceParseError(lineno, f"malformed number in {line!r}")
        if not np.all(np.isfinite(v)):
            raise InstanceParseError(lineno, f"{what} has non-finite entries")
        norm = float(np.linalg.norm(v))
        if norm > cap + NORM_TOL:
            raise InstanceParseError(lineno, f"{what} norm {norm:.6g} exceeds {cap:g}")
        return v

    sets = []
    idx = 0
    for n in range(N):
        arms = []
        for k in range(K):
            lineno, line = body[idx]
            arms.append(parse_vector(lineno, line, f"arm {k} of context {n}", 1.0))
            idx += 1
        sets.append(np.stack(arms))
    lineno, line = body[idx]
    theta = parse_vector(lineno, line, "theta_star", 1.0)
    return build_instance(sets, theta)


def read_instance(path) -> Instance:
    with open(path) as fh:
        return parse_instance(fh.read())

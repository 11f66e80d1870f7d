"""Hyperbolic-time detection and empirical zooming diagnostics.

A time n qualifies for a point x when, for every 1 <= k <= n, the inverse
derivative cocycle over the last k steps is bounded by sigma**k and the
truncated distance to the critical set at step n - k dominates sigma**(b*k).
Both inequality families are evaluated in log space with a small definitional
slack so that exact-boundary cases (for example constant-derivative maps at
the critical rate) are decided by the mathematics rather than float noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contractions import ContractionSeq
from .dynamics import (
    BRANCH_CLEARANCE,
    MapModel,
    circle_distance,
    iterate,
    orbit_inverse_norms,
)
from .errors import AmbiguityError, InvalidInputError, SingularityError

# Absolute slack, in log space, applied to both defining inequality families.
LOG_SLACK = 1e-12

DEFAULT_SEED = 0xC0FFEE


def truncated_distance(p, critical_set, delta: float, dist=None) -> float:
    """Distance to the critical set, truncated to 1 beyond ``delta``.

    Returns dist(p, C) when it is below delta and 1 otherwise; an empty
    critical set always yields 1 (the far branch), which makes the recurrence
    condition vacuous for maps without critical points.
    """
    if delta <= 0:
        raise InvalidInputError("truncation radius must be positive")
    if critical_set is None or len(critical_set) == 0:
        return 1.0
    if dist is None:
        dist = lambda a, b: abs(a - b)
    d = min(dist(p, c) for c in critical_set)
    return d if d < delta else 1.0


def _map_truncated_distance(map_model: MapModel, p, delta: float) -> float:
    d = map_model.dist_to_critical(p)
    if math.isinf(d):
        return 1.0
    return d if d < delta else 1.0


@dataclass(frozen=True)
class HyperbolicParams:
    """Detection parameters.

    ``b_exp`` defaults to (1/3) * min(1, 1/beta); beta = 0 is allowed for
    maps with an empty critical set and behaves like beta <= 1.
    """

    sigma: float
    epsilon: float = 0.1
    beta: float = 0.0
    b_exp: float | None = None

    def __post_init__(self):
        if not 0.0 < self.sigma < 1.0:
            raise InvalidInputError("sigma must lie in (0, 1)")
        if self.epsilon <= 0:
            raise InvalidInputError("epsilon must be positive")
        if self.beta < 0:
            raise InvalidInputError("beta must be nonnegative")
        cap = 0.5 * min(1.0, 1.0 / self.beta) if self.beta > 0 else 0.5
        if self.b_exp is None:
            object.__setattr__(self, "b_exp", cap * 2.0 / 3.0)
        if not 0.0 < self.b_exp <= cap:
            raise InvalidInputError(
                f"recurrence exponent {self.b_exp} outside (0, {cap}]"
            )


@dataclass(frozen=True)
class TimeRecord:
    """Detected times up to a horizon, with their empirical frequency."""

    indices: tuple[int, ...]
    horizon: int

    @property
    def frequency(self) -> float:
        return len(self.indices) / self.horizon


def detect_hyperbolic_times(
    map_model: MapModel, x, params: HyperbolicParams, horizon: int
) -> TimeRecord:
    """All qualifying times n <= horizon for the point x.

    Linear-time scan using prefix sums and running minima; the defining
    quantified inequalities are recovered exactly because both families
    reduce to comparisons of running extrema against affine thresholds.
    """
    if horizon < 1:
        raise InvalidInputError("horizon must be at least 1")
    w = orbit_inverse_norms(map_model, x, horizon)
    log_w = np.log(w)
    log_sigma = math.log(params.sigma)
    b = params.b_exp

    orbit = iterate(map_model, x, horizon - 1).points
    log_dist = np.empty(horizon)
    for i, p in enumerate(orbit):
        d = _map_truncated_distance(map_model, p, params.epsilon)
        log_dist[i] = math.log(d) if d > 0 else -math.inf

    indices = []
    # Derivative family: sum_{j=n-k}^{n-1} log w_j <= k log sigma for all k
    # is equivalent to A_n <= min_{i<n} A_i with A_n = prefix_n - n log sigma.
    prefix = 0.0
    run_min_a = 0.0  # A_0
    # Recurrence family: log_dist_i >= b (n - i) log sigma for all i < n is
    # equivalent to min_{i<n}(log_dist_i + b i log sigma) >= b n log sigma.
    run_min_d = math.inf
    for n in range(1, horizon + 1):
        prefix += log_w[n - 1]
        a_n = prefix - n * log_sigma
        run_min_d = min(run_min_d, log_dist[n - 1] + b * (n - 1) * log_sigma)
        if a_n <= run_min_a + LOG_SLACK and run_min_d >= b * n * log_sigma - LOG_SLACK:
            indices.append(n)
        run_min_a = min(run_min_a, a_n)
    return TimeRecord(indices=tuple(indices), horizon=horizon)


def is_hyperbolic_time(
    map_model: MapModel, x, n: int, params: HyperbolicParams
) -> bool:
    """Re-verify the defining inequalities for a single time."""
    if n < 1:
        raise InvalidInputError("time must be at least 1")
    rec = detect_hyperbolic_times(map_model, x, params, horizon=n)
    return n in rec.indices


@dataclass(frozen=True)
class FrequencyStats:
    """Per-point and aggregate empirical frequencies over a horizon."""

    per_point: tuple[float, ...]
    horizon: int

    @property
    def minimum(self) -> float:
        return min(self.per_point)

    @property
    def mean(self) -> float:
        return sum(self.per_point) / len(self.per_point)

    @property
    def maximum(self) -> float:
        return max(self.per_point)


def hyperbolic_frequency(
    map_model: MapModel, sample, params: HyperbolicParams, horizon: int
) -> FrequencyStats:
    """Empirical frequency of qualifying times for each sampled point."""
    if horizon < 1:
        raise InvalidInputError("horizon must be at least 1")
    sample = list(sample)
    if not sample:
        raise InvalidInputError("sample must be nonempty")
    freqs = []
    for p in sample:
        rec = detect_hyperbolic_times(map_model, p, params, horizon)
        freqs.append(rec.frequency)
    return FrequencyStats(per_point=tuple(freqs), horizon=horizon)


# ---------------------------------------------------------------------------
# Pre-ball pullbacks
# ---------------------------------------------------------------------------


def branch_itinerary(map_model: MapModel, x, n: int) -> tuple[int, ...]:
    """Branch indices visited by x, f(x), ..., f^{n-1}(x).

    Raises when any orbit point sits within ``BRANCH_CLEARANCE`` of a piece
    boundary, where the itinerary would be a guess rather than a fact.
    """
    orbit = iterate(map_model, x, n - 1).points if n > 0 else ()
    itinerary = []
    for i, p in enumerate(orbit):
        if map_model.boundary_clearance(p) < BRANCH_CLEARANCE:
            raise AmbiguityError(
                f"orbit point {p!r} at step {i} is within {BRANCH_CLEARANCE}"
                " of a branch boundary"
            )
        itinerary.append(map_model.piece_index(p))
    return tuple(itinerary)


def _pull_back(map_model: MapModel, itinerary, u):
    """Apply the inverse branches of the itinerary, deepest first."""
    y = u
    for j in reversed(itinerary):
        y = map_model.branches[j].apply(y)
    return y


def _ball_sampler(map_model: MapModel, center: float, delta: float, rng):
    if map_model.domain.kind == "circle":
        return lambda size: (center + rng.uniform(-delta, delta, size)) % 1.0
    lo = max(map_model.domain.lo, center - delta)
    hi = min(map_model.domain.hi, center + delta)
    return lambda size: rng.uniform(lo, hi, size)


@dataclass(frozen=True)
class PreballReport:
    passed: bool
    worst_margin: float
    worst_pair: tuple | None
    pairs: int
    delta: float
    seed: int


def verify_preball_contraction(
    map_model: MapModel,
    x,
    n: int,
    seq: ContractionSeq,
    pair_sample: int = 128,
    delta: float = 0.1,
    seed: int = DEFAULT_SEED,
) -> PreballReport:
    """Sample pairs in the pre-ball of a detected time and check contraction.

    The pre-ball is the pullback of the delta-ball at f^n(x) through the
    branch itinerary of the central orbit.  For every sampled pair (y, z) and
    every 0 <= j < n the check is
    d(f^j(y), f^j(z)) <= alpha_{n-j}(d(f^n(y), f^n(z))),
    reported through the worst additive margin.
    """
    if n < 1:
        raise InvalidInputError("the time must be at least 1")
    if pair_sample < 1:
        raise InvalidInputError("need at least one pair")
    itinerary = branch_itinerary(map_model, x, n)
    x_n = iterate(map_model, x, n).points[-1]
    rng = np.random.default_rng(seed)
    draw = _ball_sampler(map_model, x_n, delta, rng)
    dist = map_model.domain.distance

    worst_margin = math.inf
    worst_pair = None
    for _ in range(pair_sample):
        u, v = draw(2)
        y = _pull_back(map_model, itinerary, u)
        z = _pull_back(map_model, itinerary, v)
        oy = iterate(map_model, y, n).points
        oz = iterate(map_model, z, n).points
        d_n = dist(oy[n], oz[n])
        for j in range(n):
            bound = seq.alpha(n - j, d_n)
            margin = bound - dist(oy[j], oz[j])
            if margin < worst_margin:
                worst_margin = margin
                worst_pair = (y, z, j)
    return PreballReport(
        passed=worst_margin >= -1e-12,
        worst_margin=worst_margin,
        worst_pair=worst_pair,
        pairs=pair_sample,
        delta=delta,
        seed=seed,
    )


@dataclass(frozen=True)
class DistortionReport:
    """Smallest rho fitting |log J^n(y)/J^n(z)| <= rho * d(f^n y, f^n z)."""

    rho_hat: float
    samples: int
    worst_pair: tuple | None
    time: int
    seed: int


def check_bounded_distortion(
    map_model: MapModel,
    x,
    n: int,
    pair_sample: int = 256,
    delta: float = 0.1,
    seed: int = DEFAULT_SEED,
) -> DistortionReport:
    """Fit the distortion constant over sampled pre-ball pairs."""
    if n < 1:
        raise InvalidInputError("the time must be at least 1")
    if map_model.derivative is None:
        raise InvalidInputError("distortion needs derivative (Jacobian) data")
    itinerary = branch_itinerary(map_model, x, n)
    x_n = iterate(map_model, x, n).points[-1]
    rng = np.random.default_rng(seed)
    draw = _ball_sampler(map_model, x_n, delta, rng)
    dist = map_model.domain.distance

    def log_jac(p0):
        orbit = iterate(map_model, p0, n - 1).points
        total = 0.0
        for i, p in enumerate(orbit):
            j = abs(map_model.derivative(p))
            if j < 1e-300:
                raise SingularityError(
                    "Jacobian vanishes inside the sampled pre-ball", index=i, point=p
                )
            total += math.log(j)
        return total

    rho_hat = 0.0
    worst = None
    for _ in range(pair_sample):
        u, v = draw(2)
        y = _pull_back(map_model, itinerary, u)
        z = _pull_back(map_model, itinerary, v)
        d_end = dist(iterate(map_model, y, n).points[-1], iterate(map_model, z, n).points[-1])
        if d_end <= 0:
            continue
        ratio = abs(log_jac(y) - log_jac(z)) / d_end
        if ratio > rho_hat:
            rho_hat = ratio
            worst = (y, z)
    return DistortionReport(
        rho_hat=rho_hat, samples=pair_sample, worst_pair=worst, time=n, seed=seed
    )


# ---------------------------------------------------------------------------
# Local expansion bounds
# ---------------------------------------------------------------------------


class _MapSpace:
    """Adapter exposing forward/distance/perturb for a MapModel."""

    def __init__(self, map_model: MapModel):
        self.map_model = map_model

    def forward(self, p):
        return self.map_model.step(p)

    def distance(self, a, b):
        return self.map_model.domain.distance(a, b)

    def perturb(self, p, r: float, rng):
        u = rng.uniform(r / 2, r)
        if self.map_model.domain.kind == "circle":
            return (p + (u if rng.integers(2) else -u)) % 1.0
        lo, hi = self.map_model.domain.lo, self.map_model.domain.hi
        cand = p + u if rng.integers(2) else p - u
        if not lo <= cand <= hi:
            cand = p - u if p + u > hi else p + u
        return min(max(cand, lo), hi)


@dataclass(frozen=True)
class ExpansionBounds:
    """Estimated liminf/limsup of d(f(x), f(p)) / d(x, p) near p."""

    d_minus: float
    d_plus: float
    per_radius: tuple[tuple[float, float, float], ...]  # (radius, min, max)


def local_expansion_bounds(
    space,
    p,
    radii,
    samples_per_radius: int = 16,
    seed: int = DEFAULT_SEED,
) -> ExpansionBounds:
    """Displacement-ratio extremes at shrinking radii around p.

    ``space`` is either a MapModel or any object with ``forward``,
    ``distance`` and ``perturb(p, r, rng)``.  The headline estimates are the
    min/max ratios at the smallest radius; the per-radius sequence is
    reported for convergence inspection.  Degenerate points are reported
    (ratios near 0, or diverging) rather than raised.
    """
    if isinstance(space, MapModel):
        space = _MapSpace(space)
    radii = [float(r) for r in radii]
    if not radii or any(r <= 0 for r in radii) or any(
        a <= b for a, b in zip(radii, radii[1:])
    ):
        raise InvalidInputError("radii must be positive and strictly decreasing")
    if samples_per_radius < 8:
        raise InvalidInputError("need at least 8 samples per radius")
    rng = np.random.default_rng(seed)
    fp = space.forward(p)
    rows = []
    for r in radii:
        ratios = []
        for _ in range(samples_per_radius):
            q = space.perturb(p, r, rng)
            dq = space.distance(q, p)
            if dq == 0:
                continue
            ratios.append(space.distance(space.forward(q), fp) / dq)
        if not ratios:
            rows.append((r, math.nan, math.nan))
            continue
        rows.append((r, min(ratios), max(ratios)))
    last = rows[-1]
    return ExpansionBounds(d_minus=last[1], d_plus=last[2], per_radius=tuple(rows))

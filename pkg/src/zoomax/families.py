"""Concrete example systems: expanding circle maps, the quadratic family
with finite-horizon growth/recurrence checkers, and the Viana skew product."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import Domain, InverseBranch, MapModel, circle_reduce
from .errors import InvalidInputError


def make_expanding_circle(d: int) -> MapModel:
    """x -> d*x mod 1 with inverse branches (x + j) / d and |f'| = d."""
    if d < 2:
        raise InvalidInputError("degree must be at least 2")
    branches = tuple(
        InverseBranch(index=j, apply=(lambda y, j=j: (y + j) / d)) for j in range(d)
    )
    return MapModel(
        name="doubling" if d == 2 else f"expanding:d={d}",
        domain=Domain(kind="circle"),
        forward=lambda x: (d * x) % 1.0,
        branches=branches,
        derivative=lambda x: float(d),
        degree=d,
        piece_bounds=tuple(j / d for j in range(d + 1)),
    )


@dataclass(frozen=True)
class QuadraticFamily:
    """The interval family x -> a - x**2 on [-a, a], critical point at 0.

    ``core`` is the invariant interval estimate [a - a**2, a] that the orbit
    of the critical value settles into for a in (1, 2].
    """

    a: float
    map: MapModel = field(init=False, repr=False)
    critical_point: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.a <= 2.0:
            raise InvalidInputError("quadratic parameter must lie in (0, 2]")
        a = self.a
        branches = (
            InverseBranch(
                index=0,
                apply=lambda y: -np.sqrt(np.maximum(a - y, 0.0)),
                valid=lambda y: y <= a + 1e-15,
            ),
            InverseBranch(
                index=1,
                apply=lambda y: np.sqrt(np.maximum(a - y, 0.0)),
                valid=lambda y: y <= a + 1e-15,
            ),
        )
        model = MapModel(
            name=f"quadratic:a={a:g}",
            domain=Domain(kind="interval", lo=-a, hi=a),
            forward=lambda x: a - x * x,
            branches=branches,
            derivative=lambda x: abs(2.0 * x),
            degree=2,
            critical_set=(0.0,),
            piece_bounds=(-a, 0.0, a),
        )
        object.__setattr__(self, "map", model)

    @property
    def core(self) -> tuple[float, float]:
        return (self.a - self.a * self.a, self.a)


def make_quadratic(a: float) -> QuadraticFamily:
    return QuadraticFamily(a=a)


# ---------------------------------------------------------------------------
# Viana skew product
# ---------------------------------------------------------------------------


def _default_forcing(theta):
    return np.sin(2.0 * np.pi * theta)


def _default_forcing_deriv(theta):
    return 2.0 * np.pi * np.cos(2.0 * np.pi * theta)


@dataclass(frozen=True)
class VianaParams:
    """Parameters of the skew product (theta, x) -> (d*theta, a(theta) - x^2),
    a(theta) = a0 + alpha_v * b(theta)."""

    a0: float = 1.8
    alpha_v: float = 0.01
    d: int = 16
    b_func: object = _default_forcing
    b_deriv: object = _default_forcing_deriv
    strip: tuple[float, float] = field(default=None)

    def __post_init__(self):
        if not 1.0 < self.a0 < 2.0:
            raise InvalidInputError("base parameter must lie in (1, 2)")
        if self.alpha_v <= 0:
            raise InvalidInputError("coupling must be positive")
        if self.d < 16:
            raise InvalidInputError("base degree must be at least 16")
        if self.strip is None:
            object.__setattr__(self, "strip", find_invariant_strip(self.a0, self.alpha_v))

    def a_of(self, theta: float) -> float:
        return self.a0 + self.alpha_v * float(self.b_func(theta))


def find_invariant_strip(a0: float, alpha_v: float, pad: float = 0.01) -> tuple[float, float]:
    """Numerically fitted fiber interval I with the one-step image strictly inside.

    The top of the image is a0 + alpha_v (at x = 0); the bottom is
    a0 - alpha_v - hi**2.  A small pad on both ends makes the inclusion strict.
    """
    hi = a0 + alpha_v + pad
    lo = a0 - alpha_v - hi * hi
    lo -= 5 * pad
    # Fixed-point polish: widen until one application stays strictly inside.
    for _ in range(64):
        worst_lo = a0 - alpha_v - max(lo * lo, hi * hi)
        worst_hi = a0 + alpha_v
        if worst_lo > lo + pad / 2 and worst_hi < hi - pad / 2:
            return (lo, hi)
        lo = min(lo, worst_lo - pad)
        hi = max(hi, worst_hi + pad)
    raise InvalidInputError(
        f"no invariant strip found for a0={a0}, alpha={alpha_v}; coupling too large?"
    )


def viana_step(p: tuple[float, float], params: VianaParams) -> tuple[float, float]:
    """One step of the skew product."""
    theta, x = p
    return (circle_reduce(params.d * theta), params.a_of(theta) - x * x)


def _viana_inverse_norm(p, params: VianaParams) -> float:
    """||Df^-1|| = 1/s_min(Df) for Df = [[d, 0], [alpha*b'(theta), -2x]]."""
    theta, x = p
    c = params.alpha_v * float(params.b_deriv(theta))
    t = -2.0 * x
    d = float(params.d)
    # Smallest singular value of a 2x2 triangular block, in closed form.
    s = d * d + c * c + t * t
    det2 = (d * t) ** 2
    disc = max(s * s - 4.0 * det2, 0.0)
    smin_sq = (s - math.sqrt(disc)) / 2.0
    smin = math.sqrt(max(smin_sq, 0.0))
    if smin == 0.0:
        return math.inf
    return 1.0 / smin


def make_viana(params: VianaParams) -> MapModel:
    """MapModel wrapper for the skew product, critical curve {x = 0}."""
    lo, hi = params.strip
    return MapModel(
        name=f"viana:a0={params.a0:g},alpha={params.alpha_v:g},d={params.d}",
        domain=Domain(kind="product", strip=(lo, hi)),
        forward=lambda p: viana_step(p, params),
        branches=(),
        derivative=lambda p: _viana_inverse_norm(p, params),
        degree=2 * params.d,
        critical_distance=lambda p: abs(p[1]),
    )


def viana_strip_violations(
    params: VianaParams, n_points: int, steps: int, seed: int = 0xC0FFEE
) -> int:
    """Count of sampled orbits that ever leave the invariant strip."""
    rng = np.random.default_rng(seed)
    lo, hi = params.strip
    violations = 0
    for _ in range(n_points):
        theta = rng.uniform(0.0, 1.0)
        x = rng.uniform(lo, hi)
        ok = True
        for _ in range(steps):
            theta, x = viana_step((theta, x), params)
            if not lo <= x <= hi:
                ok = False
                break
        if not ok:
            violations += 1
    return violations


# ---------------------------------------------------------------------------
# Finite-horizon condition checkers for the quadratic family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a per-step inequality scan along an orbit."""

    passed: bool
    first_failure: int | None
    margin: float
    note: str = ""


def collet_eckmann_check(
    fam: QuadraticFamily, lambda_ce: float, horizon: int
) -> ConditionReport:
    """Exponential derivative growth along the critical value's orbit.

    Checks log|D(f^n)(f(c))| >= lambda_ce * n for n = 1..horizon, accumulating
    in log space (the raw product overflows past a few hundred steps).
    """
    if horizon < 1:
        raise InvalidInputError("horizon must be at least 1")
    model = fam.map
    p = model.step(fam.critical_point)
    log_sum = 0.0
    margin = math.inf
    for n in range(1, horizon + 1):
        deriv = abs(model.derivative(p))
        if deriv == 0.0:
            return ConditionReport(
                passed=False, first_failure=n, margin=-math.inf,
                note="orbit hit the critical point",
            )
        log_sum += math.log(deriv)
        gap = log_sum - lambda_ce * n
        margin = min(margin, gap)
        if gap < -1e-12:
            return ConditionReport(passed=False, first_failure=n, margin=margin)
        p = model.step(p)
    return ConditionReport(passed=True, first_failure=None, margin=margin)


def slow_recurrence_check(
    map_model: MapModel, x, sigma_rec: float, horizon: int
) -> ConditionReport:
    """dist(f^k(x), critical set) >= exp(-sigma_rec * k) for k = 1..horizon."""
    if horizon < 1:
        raise InvalidInputError("horizon must be at least 1")
    if sigma_rec <= 0:
        raise InvalidInputError("recurrence rate must be positive")
    if not map_model.critical_set and map_model.critical_distance is None:
        return ConditionReport(
            passed=True, first_failure=None, margin=math.inf,
            note="empty critical set; vacuous",
        )
    p = map_model.domain.reduce(x)
    margin = math.inf
    for k in range(1, horizon + 1):
        p = map_model.step(p)
        dist = map_model.dist_to_critical(p)
        bound = math.exp(-sigma_rec * k)
        margin = min(margin, dist - bound)
        if dist < bound:
            return ConditionReport(passed=False, first_failure=k, margin=margin)
    return ConditionReport(passed=True, first_failure=None, margin=margin)


@dataclass(frozen=True)
class ExcursionReport:
    """Derivative growth over orbit segments that avoid the critical window."""

    passed: bool
    first_failure: tuple[int, int] | None
    segments_checked: int
    segments_skipped: int
    margin: float
    note: str = ""


def expansion_outside_check(
    fam: QuadraticFamily,
    x0: float,
    delta: float,
    kappa: float,
    beta_rate: float,
    horizon: int,
    alpha_max: float = 2.0,
) -> ExcursionReport:
    """Scan maximal excursions outside (-delta, delta) and check the lower
    derivative-growth bound kappa * delta**(alpha_max - 1) * exp(beta * n)
    on every prefix of every excursion.

    Steps inside the window are skipped (they fall outside the hypothesis);
    segment selection by maximal excursions is recorded in the note.
    """
    if horizon < 1:
        raise InvalidInputError("horizon must be at least 1")
    if delta <= 0:
        raise InvalidInputError("window radius must be positive")
    model = fam.map
    orbit = [model.domain.reduce(x0)]
    for _ in range(horizon):
        orbit.append(model.step(orbit[-1]))
    outside = [abs(p) >= delta for p in orbit]
    log_d = [
        math.log(abs(model.derivative(p))) if abs(model.derivative(p)) > 0 else -math.inf
        for p in orbit
    ]
    threshold = math.log(kappa) + (alpha_max - 1.0) * math.log(delta)

    checked = skipped = 0
    margin = math.inf
    i = 0
    while i < horizon:
        if not outside[i]:
            skipped += 1
            i += 1
            continue
        j = i
        acc = 0.0
        while j < horizon and outside[j]:
            acc += log_d[j]
            n = j - i + 1
            gap = acc - (threshold + beta_rate * n)
            margin = min(margin, gap)
            if gap < -1e-12:
                return ExcursionReport(
                    passed=False,
                    first_failure=(i, n),
                    segments_checked=checked,
                    segments_skipped=skipped,
                    margin=margin,
                    note="maximal-excursion scan",
                )
            j += 1
        checked += 1
        i = j
    note = "maximal-excursion scan"
    if checked == 0:
        note += "; no qualifying segment, vacuous pass"
    return ExcursionReport(
        passed=True,
        first_failure=None,
        segments_checked=checked,
        segments_skipped=skipped,
        margin=margin if checked else math.inf,
        note=note,
    )

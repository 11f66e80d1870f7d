"""Map models, orbit iteration, Birkhoff sums, preimage trees, derivative cocycles.

Every other module consumes the :class:`MapModel` defined here.  Maps declare
their inverse branches in closed form; there is no implicit root finding.
Points on the circle are reduced into [0, 1) after every operation and circle
distance is ``min(|a-b|, 1-|a-b|)``.
"""

from __future__ import annotations

import math
import os
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BudgetError,
    CapabilityError,
    DomainError,
    InvalidInputError,
    SingularityError,
)

# Derivative magnitudes below this count as a critical-point hit.
DERIV_SINGULAR_TOL = 1e-9

# Clearance required from a monotonicity-piece boundary before a branch
# itinerary is considered unambiguous.
BRANCH_CLEARANCE = 1e-9

_DEFAULT_NODE_BUDGET = 1 << 24


def node_budget() -> int:
    """Leaf budget for preimage trees; ``ZOOMAX_BUDGET_NODES`` overrides."""
    raw = os.environ.get("ZOOMAX_BUDGET_NODES")
    if raw is None:
        return _DEFAULT_NODE_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise InvalidInputError(f"ZOOMAX_BUDGET_NODES must be an integer, got {raw!r}") from exc
    if value < 1:
        raise InvalidInputError("ZOOMAX_BUDGET_NODES must be positive")
    return value


def circle_reduce(x: float) -> float:
    return x - math.floor(x)


def circle_distance(a: float, b: float) -> float:
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


@dataclass(frozen=True)
class Domain:
    """Descriptor of the space a map acts on.

    kind is one of ``circle`` ([0,1) with wraparound), ``interval``
    ([lo, hi]) or ``product`` (circle x interval, the fiber interval stored
    in ``strip``).  Symbolic spaces live in :mod:`zoomax.shiftspace` and do
    not use this class.
    """

    kind: str
    lo: float = 0.0
    hi: float = 1.0
    strip: tuple[float, float] | None = None

    def contains(self, p) -> bool:
        if self.kind == "circle":
            return isinstance(p, (int, float)) and math.isfinite(p)
        if self.kind == "interval":
            return (
                isinstance(p, (int, float))
                and self.lo - 1e-12 <= p <= self.hi + 1e-12
            )
        if self.kind == "product":
            if not (isinstance(p, tuple) and len(p) == 2):
                return False
            lo, hi = self.strip
            return math.isfinite(p[0]) and lo - 1e-12 <= p[1] <= hi + 1e-12
        raise CapabilityError(f"unknown domain kind {self.kind!r}")

    def reduce(self, p):
        if self.kind == "circle":
            return circle_reduce(p)
        if self.kind == "product":
            return (circle_reduce(p[0]), p[1])
        return p

    def distance(self, p, q) -> float:
        if self.kind == "circle":
            return circle_distance(p, q)
        if self.kind == "interval":
            return abs(p - q)
        if self.kind == "product":
            return max(circle_distance(p[0], q[0]), abs(p[1] - q[1]))
        raise CapabilityError(f"unknown domain kind {self.kind!r}")


@dataclass(frozen=True)
class InverseBranch:
    """One inverse branch of a map, valid on a sub-domain of image points."""

    index: int
    apply: Callable
    valid: Callable = field(default=lambda y: True)


@dataclass(frozen=True)
class MapModel:
    """A dynamical system with closed-form inverse branches.

    ``derivative`` returns the scalar |f'(x)| for one-dimensional maps; for
    product (skew) maps it returns the inverse-norm surrogate ||Df(x)^-1||
    directly.  ``critical_set`` lists points where the derivative degenerates;
    product maps with a critical curve supply ``critical_distance`` instead.
    ``piece_bounds`` are the breakpoints of monotonicity for 1-D maps, ordered
    so that piece ``j`` is inverted by branch ``j``.
    """

    name: str
    domain: Domain
    forward: Callable
    branches: tuple[InverseBranch, ...] = ()
    derivative: Callable | None = None
    degree: int | None = None
    critical_set: tuple = ()
    critical_distance: Callable | None = None
    piece_bounds: tuple[float, ...] | None = None

    def step(self, p):
        return self.domain.reduce(self.forward(p))

    def require_point(self, p) -> None:
        if not self.domain.contains(p):
            raise DomainError(f"point {p!r} is outside the domain of {self.name}")

    def inverse_norm(self, p) -> float:
        """||Df(p)^-1|| (1/|f'| in one dimension)."""
        if self.derivative is None:
            raise CapabilityError(f"map {self.name} declares no derivative data")
        value = self.derivative(p)
        if self.domain.kind == "product":
            return value
        if abs(value) < DERIV_SINGULAR_TOL:
            raise SingularityError(
                f"derivative of {self.name} degenerates at {p!r}", point=p
            )
        return 1.0 / abs(value)

    def dist_to_critical(self, p) -> float:
        if self.critical_distance is not None:
            return self.critical_distance(p)
        if not self.critical_set:
            return math.inf
        return min(self.domain.distance(p, c) for c in self.critical_set)

    def piece_index(self, p, clearance: float = 0.0) -> int:
        """Monotonicity piece containing ``p`` (equals the branch index).

        With a positive ``clearance`` the caller is promising to treat
        near-boundary points as ambiguous; this only reports the raw index.
        """
        if self.piece_bounds is None:
            raise CapabilityError(f"map {self.name} declares no monotone pieces")
        bounds = self.piece_bounds
        idx = bisect_right(bounds, p) - 1
        return min(max(idx, 0), len(bounds) - 2)

    def boundary_clearance(self, p) -> float:
        """Distance from ``p`` to the nearest piece boundary."""
        if self.piece_bounds is None:
            raise CapabilityError(f"map {self.name} declares no monotone pieces")
        if self.domain.kind == "circle":
            return min(circle_distance(p, b) for b in self.piece_bounds)
        interior = self.piece_bounds[1:-1]
        if not interior:
            return math.inf
        return min(abs(p - b) for b in interior)


@dataclass(frozen=True)
class Orbit:
    """A forward orbit x, f(x), ..., f^n(x)."""

    points: tuple

    @property
    def length(self) -> int:
        return len(self.points) - 1


def iterate(map_model: MapModel, x, n: int) -> Orbit:
    """Forward orbit of length ``n`` starting at ``x``."""
    if n < 0:
        raise InvalidInputError("step count must be nonnegative")
    map_model.require_point(x)
    pts = [map_model.domain.reduce(x)]
    for _ in range(n):
        pts.append(map_model.step(pts[-1]))
    return Orbit(points=tuple(pts))


def birkhoff_sum(map_model: MapModel, phi, x, n: int) -> float:
    """Sum of ``phi`` along the first ``n`` orbit points (0 for n = 0)."""
    if n < 0:
        raise InvalidInputError("step count must be nonnegative")
    map_model.require_point(x)
    total = 0.0
    p = map_model.domain.reduce(x)
    eval_phi = phi.eval if hasattr(phi, "eval") else phi
    for _ in range(n):
        total += float(eval_phi(p))
        p = map_model.step(p)
    return total


def preimages(map_model: MapModel, x, n: int, budget: int | None = None) -> list:
    """All n-th preimages of ``x``, in lexicographic branch-word order."""
    if n < 1:
        raise InvalidInputError("preimage depth must be at least 1")
    if not map_model.branches:
        raise CapabilityError(f"map {map_model.name} declares no inverse branches")
    map_model.require_point(x)
    limit = node_budget() if budget is None else budget
    if map_model.degree is not None and map_model.degree**n > limit:
        raise BudgetError(
            f"depth {n} needs {map_model.degree**n} leaves, budget is {limit}"
        )
    start = map_model.domain.reduce(x)
    level = [start]
    for _ in range(n):
        nxt = []
        for z in level:
            for branch in map_model.branches:
                if branch.valid(z):
                    nxt.append(map_model.domain.reduce(branch.apply(z)))
            if len(nxt) > limit:
                raise BudgetError(f"preimage tree exceeded the {limit}-leaf budget")
        level = nxt
    return level


def derivative_product(map_model: MapModel, x, n: int) -> float:
    """Product of ||Df^-1|| along the orbit, i.e. prod_{j<n} ||Df(f^j(x))^-1||."""
    if n < 1:
        raise InvalidInputError("need at least one factor")
    map_model.require_point(x)
    p = map_model.domain.reduce(x)
    prod = 1.0
    for j in range(n):
        try:
            prod *= map_model.inverse_norm(p)
        except SingularityError as exc:
            raise SingularityError(str(exc), index=j, point=p) from None
        p = map_model.step(p)
    return prod


def orbit_inverse_norms(map_model: MapModel, x, n: int) -> np.ndarray:
    """||Df^-1|| at the first ``n`` orbit points, as an array."""
    map_model.require_point(x)
    p = map_model.domain.reduce(x)
    out = np.empty(n)
    for j in range(n):
        try:
            out[j] = map_model.inverse_norm(p)
        except SingularityError as exc:
            raise SingularityError(str(exc), index=j, point=p) from None
        p = map_model.step(p)
    return out


# ---------------------------------------------------------------------------
# Covering time (topological exactness at grid resolution)
# ---------------------------------------------------------------------------


def _merge_segments(segs: list[tuple[float, float]], join_tol: float) -> list:
    segs = sorted((a, b) for a, b in segs if b > a)
    merged: list[list[float]] = []
    for a, b in segs:
        if merged and a <= merged[-1][1] + join_tol:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b) for a, b in merged]


def _segment_image(map_model: MapModel, seg: tuple[float, float], inset: float) -> list:
    """Image of one segment under f, split along monotone pieces."""
    if map_model.piece_bounds is None:
        raise CapabilityError(
            f"covering time needs declared monotone pieces for {map_model.name}"
        )
    a, b = seg
    out = []
    bounds = map_model.piece_bounds
    for j in range(len(bounds) - 1):
        lo = max(a, bounds[j])
        hi = min(b, bounds[j + 1])
        if hi - lo <= 2 * inset:
            continue
        fa = float(map_model.forward(lo + inset))
        fb = float(map_model.forward(hi - inset))
        if map_model.domain.kind == "circle":
            # Continuous on the piece interior: unwrap so fa <= fb per monotone leg.
            fa, fb = circle_reduce(fa), circle_reduce(fb)
            if fb < fa:
                fa, fb = fb, fa
            # A nearly full image wraps; treat a span > 1 - inset as everything.
            out.append((fa, fb))
        else:
            out.append((min(fa, fb), max(fa, fb)))
    return out


def covering_time(
    map_model: MapModel,
    region: tuple[float, float],
    resolution: int = 1024,
    k_max: int = 64,
) -> int:
    """Smallest k with f^k(region) covering the domain at grid resolution.

    Returns -1 when no k <= ``k_max`` covers.  Regions and images are tracked
    as unions of intervals; coverage means no gap of a full grid cell remains.
    """
    if map_model.domain.kind not in ("circle", "interval"):
        raise CapabilityError("covering time is defined for 1-D maps only")
    if resolution < 2:
        raise InvalidInputError("resolution must be at least 2")
    lo_dom = map_model.domain.lo
    hi_dom = map_model.domain.hi if map_model.domain.kind == "interval" else 1.0
    a, b = float(region[0]), float(region[1])
    if not b > a:
        raise InvalidInputError("region must be a nonempty interval")
    cell = (hi_dom - lo_dom) / resolution
    inset = 1e-12
    segs = [(max(a, lo_dom), min(b, hi_dom))]

    def covered(current: list[tuple[float, float]]) -> bool:
        merged = _merge_segments(current, join_tol=cell)
        if not merged:
            return False
        if map_model.domain.kind == "interval":
            return (
                len(merged) == 1
                and merged[0][0] <= lo_dom + cell
                and merged[0][1] >= hi_dom - cell
            )
        # Circle: also merge across the wrap point.
        if len(merged) == 1:
            return merged[0][1] - merged[0][0] >= 1.0 - cell
        gap_across = (merged[0][0] + 1.0) - merged[-1][1]
        if gap_across >= cell:
            return False
        for (a1, b1), (a2, b2) in zip(merged, merged[1:]):
            if a2 - b1 >= cell:
                return False
        return True

    for k in range(k_max + 1):
        if covered(segs):
            return k
        nxt: list[tuple[float, float]] = []
        for seg in segs:
            nxt.extend(_segment_image(map_model, seg, inset))
        segs = _merge_segments(nxt, join_tol=2 * inset)
        # Safety valve; merged unions of an expanding 1-D map stay small.
        if len(segs) > 16 * resolution:
            segs = _merge_segments(segs, join_tol=cell / 4)
    return -1


# ---------------------------------------------------------------------------
# Map-compatible grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdicGrid:
    """Uniform circle grid {k / base**level} closed under x -> base*x mod 1."""

    base: int
    level: int

    def __post_init__(self):
        if self.base < 2:
            raise InvalidInputError("grid base must be at least 2")
        if self.level < 0:
            raise InvalidInputError("grid level must be nonnegative")

    @property
    def size(self) -> int:
        return self.base**self.level

    @property
    def points(self) -> np.ndarray:
        n = self.size
        return np.arange(n, dtype=np.int64) / float(n)

    def forward_index(self, k: np.ndarray | int) -> np.ndarray | int:
        """Index of base*x mod 1 for grid index ``k`` (exact integers)."""
        return (np.asarray(k) * self.base) % self.size if isinstance(k, np.ndarray) else (
            k * self.base
        ) % self.size

"""One-sided full shift on two symbols with weighted metrics.

Distances d(x, y) = sum_n b_n |x_n - y_n| are evaluated in exact rational
arithmetic: truncated words carry periodic tails, so for geometric weights
the infinite tail closes in exact form and certificates can be checked with
zero tolerance.  Non-geometric weights carry an explicit tail-bound radius
instead of a hidden truncation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .contractions import ContractionSeq
from .errors import HypothesisError, InvalidInputError, PrecisionError

DEFAULT_WORD_LENGTH = 64


@dataclass(frozen=True)
class SymbolicPoint:
    """A one-sided 0/1 sequence: an explicit word followed by a periodic tail."""

    word: tuple[int, ...]
    tail: tuple[int, ...] = (0,)

    def __post_init__(self):
        if len(self.word) + len(self.tail) < 1 or len(self.tail) < 1:
            raise InvalidInputError("need at least one explicit or tail symbol")
        for s in self.word + self.tail:
            if s not in (0, 1):
                raise InvalidInputError("symbols must be 0 or 1")

    @staticmethod
    def from_string(text: str, tail: str = "0") -> "SymbolicPoint":
        return SymbolicPoint(
            word=tuple(int(ch) for ch in text),
            tail=tuple(int(ch) for ch in tail),
        )

    def symbol(self, n: int) -> int:
        """The n-th symbol, 1-indexed."""
        if n < 1:
            raise InvalidInputError("symbol indices start at 1")
        if n <= len(self.word):
            return self.word[n - 1]
        return self.tail[(n - len(self.word) - 1) % len(self.tail)]

    def shift(self) -> "SymbolicPoint":
        if self.word:
            return SymbolicPoint(word=self.word[1:], tail=self.tail)
        return SymbolicPoint(word=(), tail=self.tail[1:] + self.tail[:1])

    def shifted(self, k: int) -> "SymbolicPoint":
        p = self
        for _ in range(k):
            p = p.shift()
        return p


@dataclass(frozen=True)
class WeightedShiftMetric:
    """Weights b_n > 0 with a summable tail.

    ``kind`` is ``geometric`` (b_n = q**n, exact tails), ``power``
    (b_n = (n + shift)**-exponent, integral tail bound) or ``table``
    (finite list, caller-declared tail bound).
    """

    kind: str
    q: Fraction | None = None
    exponent: float | None = None
    shift: float | None = None
    table: tuple[Fraction, ...] | None = None
    horizon: int = DEFAULT_WORD_LENGTH
    table_tail_bound: float = 0.0

    @staticmethod
    def geometric(q: float) -> "WeightedShiftMetric":
        qf = Fraction(q)
        if not 0 < qf < 1:
            raise InvalidInputError("geometric ratio must lie in (0, 1)")
        return WeightedShiftMetric(kind="geometric", q=qf)

    @staticmethod
    def power(exponent: float, shift: float = 1.0, horizon: int = DEFAULT_WORD_LENGTH):
        if exponent <= 1.0:
            raise InvalidInputError("power weights need exponent > 1 to be summable")
        return WeightedShiftMetric(
            kind="power", exponent=exponent, shift=shift, horizon=horizon
        )

    @staticmethod
    def from_table(weights: Sequence[float], tail_bound: float = 0.0):
        tab = tuple(Fraction(w) for w in weights)
        if not tab or any(w <= 0 for w in tab):
            raise InvalidInputError("weights must be positive")
        return WeightedShiftMetric(
            kind="table", table=tab, horizon=len(tab), table_tail_bound=tail_bound
        )

    def weight(self, n: int) -> Fraction:
        """b_n as an exact rational (power weights via Fraction of the float)."""
        if n < 1:
            raise InvalidInputError("weight indices start at 1")
        if self.kind == "geometric":
            return self.q**n
        if self.kind == "power":
            return Fraction(float((n + self.shift) ** (-self.exponent)))
        if n > len(self.table):
            raise InvalidInputError(
                f"table holds {len(self.table)} weights, index {n} requested"
            )
        return self.table[n - 1]

    def weight_sum(self) -> tuple[float, float]:
        """(value, radius) enclosure of sum_n b_n."""
        if self.kind == "geometric":
            total = self.q / (1 - self.q)
            return float(total), 0.0
        partial = float(sum(self.weight(n) for n in range(1, self.horizon + 1)))
        if self.kind == "power":
            p, b = self.exponent, self.shift
            hi = (self.horizon + b) ** (1.0 - p) / (p - 1.0)
            lo = (self.horizon + 1 + b) ** (1.0 - p) / (p - 1.0)
            return partial + (hi + lo) / 2.0, (hi - lo) / 2.0
        return partial + self.table_tail_bound / 2.0, self.table_tail_bound / 2.0


@dataclass(frozen=True)
class MetricValue:
    """A distance as midpoint + certified radius; ``exact`` when radius is 0."""

    value: float
    radius: float
    exact: Fraction | None = None


def _tail_pattern_sum(x: SymbolicPoint, y: SymbolicPoint, start: int, q: Fraction) -> Fraction:
    """Exact sum of q**n |x_n - y_n| over n > start (both tails periodic there)."""
    period = math.lcm(len(x.tail), len(y.tail))
    # Indices start+1 .. start+period repeat with ratio q**period.
    block = Fraction(0)
    qn = q ** (start + 1)
    for n in range(start + 1, start + period + 1):
        if x.symbol(n) != y.symbol(n):
            block += qn
        qn *= q
    return block / (1 - q**period)


def shift_metric(
    x: SymbolicPoint,
    y: SymbolicPoint,
    metric: WeightedShiftMetric,
    precision: float | None = None,
) -> MetricValue:
    """d(x, y) = sum_n b_n |x_n - y_n| with a certified tail.

    Geometric weights close the periodic tail exactly (radius 0); other
    weight kinds sum to the horizon and report the declared tail bound as
    radius.  ``precision`` asks for a radius at most that large and raises
    :class:`PrecisionError` when the horizon cannot certify it.
    """
    head = max(len(x.word), len(y.word))
    if metric.kind == "geometric":
        total = Fraction(0)
        for n in range(1, head + 1):
            if x.symbol(n) != y.symbol(n):
                total += metric.weight(n)
        total += _tail_pattern_sum(x, y, head, metric.q)
        if precision is not None and precision < 0:
            raise InvalidInputError("precision must be nonnegative")
        return MetricValue(value=float(total), radius=0.0, exact=total)
    horizon = metric.horizon
    if head > horizon:
        raise PrecisionError(
            f"metric horizon {horizon} resolves fewer symbols than the words ({head})"
        )
    total = Fraction(0)
    for n in range(1, horizon + 1):
        if x.symbol(n) != y.symbol(n):
            total += metric.weight(n)
    if metric.kind == "power":
        p, b = metric.exponent, metric.shift
        tail = (horizon + b) ** (1.0 - p) / (p - 1.0)
    else:
        tail = metric.table_tail_bound
    if precision is not None and tail / 2.0 > precision:
        raise PrecisionError(
            f"tail radius {tail / 2.0:.3e} exceeds requested precision {precision:.3e}"
        )
    return MetricValue(value=float(total) + tail / 2.0, radius=tail / 2.0, exact=None)


@dataclass(frozen=True)
class WeightReport:
    """Sub-multiplicativity, summability and the iterated consequence b_n <= b_1**n."""

    submultiplicative: bool
    counterexample: tuple[int, int] | None
    counterexample_values: tuple[float, float] | None
    summable: bool
    sum_value: float
    sum_radius: float
    fekete_ok: bool
    fekete_counterexample: int | None
    equality_cases: int
    n_max: int

    @property
    def is_valid(self) -> bool:
        return self.submultiplicative and self.summable and self.fekete_ok


def validate_weights(metric: WeightedShiftMetric, n_max: int = 32) -> WeightReport:
    """Check b_{n+k} <= b_n b_k for all n + k <= n_max, plus consequences."""
    if n_max < 2:
        raise InvalidInputError("n_max must be at least 2")
    n_hi = min(n_max, metric.horizon) if metric.kind == "table" else n_max
    weights = {n: metric.weight(n) for n in range(1, n_hi + 1)}
    counter = None
    counter_vals = None
    equality = 0
    for n in range(1, n_hi):
        for k in range(1, n_hi - n + 1):
            lhs = weights[n + k]
            rhs = weights[n] * weights[k]
            if lhs > rhs:
                counter = (n, k)
                counter_vals = (float(lhs), float(rhs))
                break
            if lhs == rhs:
                equality += 1
        if counter:
            break
    fekete_counter = None
    b1 = weights[1]
    for n in range(1, n_hi + 1):
        if weights[n] > b1**n:
            fekete_counter = n
            break
    total, radius = metric.weight_sum()
    return WeightReport(
        submultiplicative=counter is None,
        counterexample=counter,
        counterexample_values=counter_vals,
        summable=math.isfinite(total),
        sum_value=total,
        sum_radius=radius,
        fekete_ok=fekete_counter is None,
        fekete_counterexample=fekete_counter,
        equality_cases=equality,
        n_max=n_hi,
    )


@dataclass(frozen=True)
class CylinderCertificate:
    """Shifted-distance domination along a common cylinder."""

    passed: bool
    depth: int
    base_ratio: float
    worst_normalized: float
    worst_index: int | None
    degenerate: bool
    note: str = ""


def _common_prefix_length(x: SymbolicPoint, y: SymbolicPoint, limit: int) -> int:
    k = 0
    while k < limit and x.symbol(k + 1) == y.symbol(k + 1):
        k += 1
    return k


def cylinder_contraction_check(
    x: SymbolicPoint,
    y: SymbolicPoint,
    k: int,
    metric: WeightedShiftMetric,
    seq: ContractionSeq,
    domination_horizon: int = DEFAULT_WORD_LENGTH,
) -> CylinderCertificate:
    """Certify d(shift^i x, shift^i y) <= a_{k-i} d(shift^k x, shift^k y).

    Requires the points to share their first k symbols and the weights to be
    dominated by the rate coefficients (b_n <= a_n) up to the horizon; the
    failing index is reported otherwise.  With exact geometric tails the
    comparison carries zero tolerance; k = 0 passes vacuously through the
    index-0 convention a_0 = 1.
    """
    if k < 0:
        raise InvalidInputError("cylinder depth must be nonnegative")
    if _common_prefix_length(x, y, k) < k:
        raise InvalidInputError(f"points do not share a common cylinder of depth {k}")
    if not seq.is_lipschitz:
        raise InvalidInputError("domination needs Lipschitz rate coefficients")
    horizon = min(domination_horizon, seq.max_index(domination_horizon))
    for n in range(1, horizon + 1):
        if float(metric.weight(n)) > seq.coeff(n):
            raise HypothesisError(
                f"domination fails at n = {n}: b_n = {float(metric.weight(n)):.6g}"
                f" > a_n = {seq.coeff(n):.6g}",
                witness=n,
            )

    d_k = shift_metric(x.shifted(k), y.shifted(k), metric)
    if (d_k.exact is not None and d_k.exact == 0) or d_k.value <= d_k.radius:
        return CylinderCertificate(
            passed=True,
            depth=k,
            base_ratio=0.0,
            worst_normalized=0.0,
            worst_index=None,
            degenerate=True,
            note="identical beyond the cylinder; all distances vanish",
        )

    def shifted_distance(i: int) -> MetricValue:
        if metric.kind == "geometric" and i > 0:
            # Exact re-indexing: no symbol below the cylinder depth differs,
            # so shifting by i <= k scales the sum by q**-i.
            return MetricValue(
                value=float(_geo_d0.exact / metric.q**i),
                radius=0.0,
                exact=_geo_d0.exact / metric.q**i,
            )
        return shift_metric(x.shifted(i), y.shifted(i), metric)

    _geo_d0 = shift_metric(x, y, metric)
    if metric.kind == "geometric" and _geo_d0.exact / metric.q**k != d_k.exact:
        raise InvalidInputError("internal: shifted distance scaling is inconsistent")

    worst = 0.0
    worst_i = None
    exact_ok = True
    for i in range(k):
        d_i = shifted_distance(i)
        bound = Fraction(seq.coeff(k - i))
        if d_i.exact is not None and d_k.exact is not None:
            lhs, rhs = d_i.exact, bound * d_k.exact
            normalized = float(lhs / rhs) if rhs > 0 else math.inf
            if lhs > rhs:
                exact_ok = False
        else:
            lhs = d_i.value + d_i.radius
            rhs = float(bound) * max(d_k.value - d_k.radius, 0.0)
            normalized = lhs / rhs if rhs > 0 else math.inf
            if lhs > rhs:
                exact_ok = False
        if normalized > worst:
            worst = normalized
            worst_i = i
    base_ratio = (
        float(_geo_d0.exact / d_k.exact)
        if (_geo_d0.exact is not None and d_k.exact is not None and d_k.exact > 0)
        else _geo_d0.value / d_k.value
    )
    note = "verified to horizon" if metric.kind != "geometric" else ""
    if metric.kind == "geometric" and seq.kind == "lipschitz" and seq.table is None:
        note = "geometric-vs-power domination checked to horizon; decays faster thereafter"
    return CylinderCertificate(
        passed=exact_ok,
        depth=k,
        base_ratio=base_ratio,
        worst_normalized=worst if k > 0 else 1.0,
        worst_index=worst_i,
        degenerate=False,
        note=note,
    )


class ShiftSpace:
    """Adapter exposing the shift dynamics to the local-expansion estimator."""

    def __init__(self, metric: WeightedShiftMetric, length: int = DEFAULT_WORD_LENGTH):
        self.metric = metric
        self.length = length

    def forward(self, p: SymbolicPoint) -> SymbolicPoint:
        return p.shift()

    def distance(self, a: SymbolicPoint, b: SymbolicPoint) -> float:
        return shift_metric(a, b, self.metric).value

    def perturb(self, p: SymbolicPoint, r: float, rng) -> SymbolicPoint:
        """A point at distance about r: first disagreement where b_n ~ r."""
        if self.metric.kind == "geometric":
            q = float(self.metric.q)
            n0 = max(2, int(math.ceil(math.log(r * (1 - q)) / math.log(q))))
        else:
            n0 = 2
            while n0 < self.length - 1 and float(self.metric.weight(n0)) > r:
                n0 += 1
        n0 = min(n0, self.length - 1)
        word = [p.symbol(n) for n in range(1, self.length + 1)]
        word[n0 - 1] ^= 1
        for i in range(n0, self.length):
            word[i] = int(rng.integers(2))
        return SymbolicPoint(word=tuple(word), tail=p.tail)

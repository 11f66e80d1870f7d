"""Candidate contraction-rate sequences and their defining axioms.

A rate sequence alpha_n(r) must contract (alpha_n(r) < r), be monotone in r,
compose supermultiplicatively (alpha_m o alpha_n <= alpha_{m+n}) and have
uniformly summable tails.  The Lipschitz case alpha_n(r) = a_n * r reduces
every axiom to arithmetic on the coefficients a_n, with the index-0 value
pinned to a_0 = 1 ("no contraction over zero steps") so that tail sums
starting at i = 0 are well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import CapabilityError, InvalidInputError

A0_CONVENTION = 1.0


@dataclass(frozen=True)
class ContractionSeq:
    """A contraction-rate sequence.

    kind is one of:

    - ``exponential``: a_n = exp(-rate * n)
    - ``lipschitz``:   a_n from a closed form (``power``: (n + b)**-a) or a table
    - ``general``:     an arbitrary callable alpha(n, r)

    Index 0 always evaluates to ``A0_CONVENTION``.
    """

    kind: str
    rate: float | None = None
    power_a: float | None = None
    power_b: float | None = None
    table: tuple[float, ...] | None = None
    func: Callable | None = None
    horizon: int = 256

    @staticmethod
    def exponential(rate: float) -> "ContractionSeq":
        if rate <= 0:
            raise InvalidInputError("exponential rate must be positive")
        return ContractionSeq(kind="exponential", rate=rate)

    @staticmethod
    def power(a: float, b: float) -> "ContractionSeq":
        if a <= 0:
            raise InvalidInputError("power exponent must be positive")
        return ContractionSeq(kind="lipschitz", power_a=a, power_b=b)

    @staticmethod
    def from_table(coeffs: Sequence[float]) -> "ContractionSeq":
        tab = tuple(float(c) for c in coeffs)
        if not tab:
            raise InvalidInputError("coefficient table is empty")
        return ContractionSeq(kind="lipschitz", table=tab, horizon=len(tab))

    @staticmethod
    def general(func: Callable, horizon: int = 256) -> "ContractionSeq":
        return ContractionSeq(kind="general", func=func, horizon=horizon)

    @property
    def is_lipschitz(self) -> bool:
        return self.kind in ("exponential", "lipschitz")

    def coeff(self, n: int) -> float:
        """Lipschitz coefficient a_n (a_0 = 1 by convention)."""
        if n < 0:
            raise InvalidInputError("index must be nonnegative")
        if n == 0:
            return A0_CONVENTION
        if self.kind == "exponential":
            return math.exp(-self.rate * n)
        if self.kind == "lipschitz":
            if self.table is not None:
                if n > len(self.table):
                    raise InvalidInputError(
                        f"table holds {len(self.table)} coefficients, index {n} requested"
                    )
                return self.table[n - 1]
            return (n + self.power_b) ** (-self.power_a)
        raise CapabilityError("general sequences have no Lipschitz coefficients")

    def alpha(self, n: int, r: float) -> float:
        """The modulus alpha_n(r)."""
        if self.kind == "general":
            if n == 0:
                return r
            return float(self.func(n, r))
        return self.coeff(n) * r

    def max_index(self, requested: int) -> int:
        if self.table is not None:
            return min(requested, len(self.table))
        return requested


@dataclass(frozen=True)
class AxiomCheck:
    passed: bool
    counterexample: tuple | None = None
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    """Result of checking the four defining axioms on declared ranges."""

    contracting: AxiomCheck
    monotone: AxiomCheck
    supermultiplicative: AxiomCheck
    summable: AxiomCheck
    partial_sum: float
    tail_bound: float
    sampled_only: bool
    n_max: int

    @property
    def verdict(self) -> str:
        ok = all(
            c.passed
            for c in (self.contracting, self.monotone, self.supermultiplicative, self.summable)
        )
        return "valid" if ok else "invalid"

    @property
    def is_valid(self) -> bool:
        return self.verdict == "valid"


def validate_contraction(
    seq: ContractionSeq, r_grid: Sequence[float] | None = None, n_max: int = 64
) -> AxiomReport:
    """Check all four axioms for n, m <= n_max and all radii in r_grid.

    For Lipschitz sequences the composition axiom reduces to
    a_m * a_n <= a_{m+n}, checked exactly over m + n <= n_max; the tail axiom
    uses the analytic tail where the closed form permits.  General sequences
    are checked on the sampled radii only and flagged as such.
    """
    if n_max < 2:
        raise InvalidInputError("n_max must be at least 2")
    if r_grid is None:
        r_grid = tuple(np.linspace(0.05, 0.95, 19))
    r_grid = tuple(float(r) for r in r_grid)
    if not r_grid:
        raise InvalidInputError("radius grid is empty")
    n_hi = seq.max_index(n_max)

    if seq.is_lipschitz:
        coeffs = [seq.coeff(n) for n in range(1, n_hi + 1)]
        for n, a_n in enumerate(coeffs, start=1):
            if not 0.0 <= a_n < 1.0:
                raise InvalidInputError(
                    f"coefficient a_{n} = {a_n} lies outside [0, 1)"
                )

    # Axiom 1: alpha_n(r) < r.
    contracting = AxiomCheck(passed=True)
    for n in range(1, n_hi + 1):
        for r in r_grid:
            if not seq.alpha(n, r) < r:
                contracting = AxiomCheck(
                    passed=False,
                    counterexample=(n, r),
                    detail=f"alpha_{n}({r}) = {seq.alpha(n, r)} >= {r}",
                )
                break
        if not contracting.passed:
            break

    # Axiom 2: r < s implies alpha_n(r) < alpha_n(s).
    monotone = AxiomCheck(passed=True)
    ordered = sorted(r_grid)
    for n in range(1, n_hi + 1):
        done = False
        for i, r in enumerate(ordered):
            for s in ordered[i + 1 :]:
                if not seq.alpha(n, r) < seq.alpha(n, s):
                    monotone = AxiomCheck(
                        passed=False,
                        counterexample=(n, r, s),
                        detail=f"alpha_{n} not strictly increasing at ({r}, {s})",
                    )
                    done = True
                    break
            if done:
                break
        if done:
            break

    # Axiom 3: alpha_m o alpha_n <= alpha_{m+n}.  Equality cases (geometric
    # sequences) must not flip on float rounding, so the comparison carries a
    # relative slack of 1e-12.
    supermult = AxiomCheck(passed=True)
    if seq.is_lipschitz:
        done = False
        for m in range(1, n_hi):
            for n in range(1, n_hi - m + 1):
                lhs = seq.coeff(m) * seq.coeff(n)
                rhs = seq.coeff(m + n)
                if lhs > rhs * (1.0 + 1e-12):
                    supermult = AxiomCheck(
                        passed=False,
                        counterexample=(m, n),
                        detail=f"a_{m}*a_{n} = {lhs:.6g} > a_{m+n} = {rhs:.6g}",
                    )
                    done = True
                    break
            if done:
                break
    else:
        done = False
        for m in range(1, n_hi):
            for n in range(1, n_hi - m + 1):
                for r in r_grid:
                    if seq.alpha(m, seq.alpha(n, r)) > seq.alpha(m + n, r) * (1.0 + 1e-12):
                        supermult = AxiomCheck(
                            passed=False,
                            counterexample=(m, n, r),
                            detail="composition exceeds the direct modulus",
                        )
                        done = True
                        break
                if done:
                    break
            if done:
                break

    # Axiom 4: sup over r in (0,1) of sum alpha_n(r) finite.
    sampled_only = not seq.is_lipschitz or (seq.table is not None)
    if seq.kind == "exponential":
        partial = sum(seq.coeff(n) for n in range(1, n_hi + 1))
        q = math.exp(-seq.rate)
        tail = q ** (n_hi + 1) / (1.0 - q)
        summable = AxiomCheck(passed=True, detail="geometric tail")
        sampled_only = False
    elif seq.kind == "lipschitz" and seq.table is None:
        partial = sum(seq.coeff(n) for n in range(1, n_hi + 1))
        if seq.power_a > 1.0:
            tail = (n_hi + seq.power_b) ** (1.0 - seq.power_a) / (seq.power_a - 1.0)
            summable = AxiomCheck(passed=True, detail="integral-comparison tail")
            sampled_only = False
        else:
            tail = math.inf
            summable = AxiomCheck(
                passed=False,
                counterexample=(seq.power_a,),
                detail="power-law exponent <= 1 diverges",
            )
    elif seq.kind == "lipschitz":
        partial = sum(seq.coeff(n) for n in range(1, n_hi + 1))
        tail = 0.0
        summable = AxiomCheck(passed=True, detail="partial sum only (table)")
    else:
        sup_r = 0.0
        for r in r_grid:
            sup_r = max(sup_r, sum(seq.alpha(n, r) for n in range(1, n_hi + 1)))
        partial = sup_r
        tail = 0.0
        summable = AxiomCheck(
            passed=math.isfinite(sup_r), detail="sampled radii only"
        )

    return AxiomReport(
        contracting=contracting,
        monotone=monotone,
        supermultiplicative=supermult,
        summable=summable,
        partial_sum=partial,
        tail_bound=tail,
        sampled_only=sampled_only,
        n_max=n_hi,
    )


@dataclass(frozen=True)
class TailSum:
    """sum_{i>=0} a_i**alpha with a rigorous enclosure radius."""

    value: float
    radius: float
    diverges: bool

    def __float__(self) -> float:
        if self.diverges:
            return math.inf
        return self.value


def tail_sum(seq: ContractionSeq, alpha: float, horizon: int = 200_000) -> TailSum:
    """Evaluate sum_{i=0}^inf a_i**alpha (a_0 = 1) with an analytic tail.

    Exponential sequences close geometrically (radius 0 up to rounding);
    power-law sequences use an integral-comparison bracket around the tail.
    A divergence flag is returned when the p-series test fails.
    """
    if not 0.0 < alpha <= 1.0:
        raise InvalidInputError("Hoelder exponent must lie in (0, 1]")
    if seq.kind == "exponential":
        q = math.exp(-seq.rate * alpha)
        return TailSum(value=1.0 / (1.0 - q), radius=0.0, diverges=False)
    if seq.kind == "lipschitz" and seq.table is None:
        p = seq.power_a * alpha
        if p <= 1.0:
            return TailSum(value=math.inf, radius=math.inf, diverges=True)
        b = seq.power_b
        idx = np.arange(1, horizon + 1, dtype=float)
        partial = A0_CONVENTION + float(np.sum((idx + b) ** (-p)))
        hi = (horizon + b) ** (1.0 - p) / (p - 1.0)
        lo = (horizon + 1 + b) ** (1.0 - p) / (p - 1.0)
        return TailSum(
            value=partial + (hi + lo) / 2.0, radius=(hi - lo) / 2.0, diverges=False
        )
    raise CapabilityError(
        "no closed-form tail for this sequence; sum the materialized"
        " coefficients directly for a horizon-only partial sum"
    )

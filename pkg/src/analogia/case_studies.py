"""Numeric reconstruction of Euler's route to 1 + 1/4 + 1/9 + ... = pi^2/6,
its corroboration checks, and the Grandi-series regrouping paradox.

The derivation, step by step:

1. Conditions on the wanted value: (a) it is an infinite series; (b) it has
   the form 1/x1^2 + 1/x2^2 + ...; (c) x_k = k*y.
2. A finite algebraic equation b0 - b1 x^2 + b2 x^4 - ... with roots
   +-beta_1 .. +-beta_n factors as b0 (1 - x^2/beta_1^2) ... (1 - x^2/beta_n^2),
   so b1 = b0 (1/beta_1^2 + ... + 1/beta_n^2). This satisfies (b) but not (a).
   (The generic equation is printed in the source with a last exponent 2n+1
   where the even-power pattern calls for 2n.)
3. Hypothesis I: the root/coefficient relation carries over from finite to
   infinite equations.
4. sin x = x - x^3/3! + x^5/5! - ... has roots 0, +-pi, +-2pi, ...
5. Dividing by x leaves 1 - x^2/3! + x^4/5! - ..., with roots +-k*pi, which
   satisfies (c).
6. Hypothesis II: the algebraic factorization holds for this trigonometric
   series, giving sin x / x = prod (1 - x^2/(k^2 pi^2)) and, matching x^2
   coefficients, 1/3! = sum 1/(k^2 pi^2), hence sum 1/k^2 = pi^2/6.

Only the numerically checkable consequences are executable here:
:func:`basel_limit_check`, :func:`sin_via_product` against
:func:`sin_via_series`, :func:`coefficient_identity_residual`, the three
consequence checks in :func:`polya_c1_checks`, and the analogous Leibniz
series in :func:`leibniz_corroboration`.

The regrouping part shows why hypothesis I is dangerous: bracketing
C = 1 - 1 + 1 - ... as (1-1) + (1-1) + ... gives 0, while 1 - (1-1) - ...
gives 1 (the source prints this second bracketing as
``1 - (1 + 1) - (1 + 1) ...`` and reduces it via ``(2 - 2)`` terms). The
same bracketings of a finite sum always agree.
"""

from __future__ import annotations

import enum
import math
import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

# zeta(2) and pi/4 evaluated with mpmath at 50 significant digits, then rounded
# to the nearest double: 1.64493406684822643647..., 0.78539816339744830961...
PI_SQUARED_OVER_SIX = 1.6449340668482264
PI_OVER_FOUR = 0.7853981633974483

DEFAULT_GRID = (0.1, 0.5, 1.0, 1.5)
C1_TOLERANCES = (1e-12, 1e-3, 1e-3)


class SeriesId(str, enum.Enum):
    BASEL = "basel"
    LEIBNIZ = "leibniz"
    GRANDI = "grandi"


def term(series: SeriesId | str, k: int) -> float:
    """k-th term (k >= 1) of the series."""
    series = SeriesId(series)
    if k < 1:
        raise ValueError("term index starts at 1")
    sign = 1.0 if k % 2 else -1.0
    if series is SeriesId.BASEL:
        return 1.0 / (k * k)
    if series is SeriesId.LEIBNIZ:
        return sign / (2 * k - 1)
    return sign


def partial_sum(series: SeriesId | str, n: int) -> float:
    """Sum of the first ``n`` terms, added smallest term first."""
    if n < 1:
        raise ValueError("partial sums need n >= 1")
    total = 0.0
    for k in range(n, 0, -1):
        total += term(series, k)
    return total


@dataclass(frozen=True)
class CorroborationReport:
    check: str
    K: int
    grid: tuple[float, ...]
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "K": self.K,
            "grid": list(self.grid),
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CorroborationReport:
        return cls(
            data["check"], data["K"], tuple(data["grid"]), data["residual"],
            data["tolerance"], data["passed"], data.get("detail", ""),
        )


@dataclass(frozen=True)
class BaselCheck:
    n: int
    partial_sum: float
    residual: float
    within_tail_bounds: bool


def basel_limit_check(n: int) -> BaselCheck:
    """Compare the n-th partial sum with pi^2/6.

    The tail sum_{k>n} 1/k^2 lies strictly between 1/(n+1) and 1/n.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    s = partial_sum(SeriesId.BASEL, n)
    r = PI_SQUARED_OVER_SIX - s
    return BaselCheck(n, s, r, 1 / (n + 1) < r < 1 / n)


def sin_via_series(x: float, terms: int) -> float:
    """Truncated power series x - x^3/3! + x^5/5! - ... with ``terms`` terms."""
    if terms < 1:
        raise ValueError("need at least one term")
    parts = [x]
    x2 = x * x
    for k in range(1, terms):
        parts.append(parts[-1] * -x2 / ((2 * k) * (2 * k + 1)))
    return sum(reversed(parts))


def sine_product_factor(x: float, K: int) -> float:
    """prod_{k=1..K} (1 - x^2/(k^2 pi^2)), the product for sin(x)/x."""
    if K < 1:
        raise ValueError("need K >= 1")
    x2 = x * x / (math.pi * math.pi)
    p = 1.0
    for k in range(1, K + 1):
        p *= 1.0 - x2 / (k * k)
    return p


def sin_via_product(x: float, K: int) -> float:
    return x * sine_product_factor(x, K)


def cos_via_product(x: float, K: int) -> float:
    """prod_{k=1..K} (1 - x^2/((k - 1/2)^2 pi^2))."""
    if K < 1:
        raise ValueError("need K >= 1")
    x2 = x * x / (math.pi * math.pi)
    p = 1.0
    for k in range(1, K + 1):
        h = k - 0.5
        p *= 1.0 - x2 / (h * h)
    return p


def coefficient_identity_residual(K: int) -> float:
    """|1/6 - sum_{k<=K} 1/(k^2 pi^2)|, the x^2-coefficient mismatch."""
    if K < 1:
        raise ValueError("need K >= 1")
    pi2 = math.pi * math.pi
    s = 0.0
    for k in range(K, 0, -1):
        s += 1.0 / (k * k * pi2)
    return abs(1.0 / 6.0 - s)


def product_grid_error(K: int, grid: Sequence[float] = DEFAULT_GRID, series_terms: int = 30) -> float:
    """Largest |product - power series| over ``grid``."""
    return max(abs(sin_via_product(x, K) - sin_via_series(x, series_terms)) for x in grid)


def polya_c1_checks(
    K: int,
    grid: Sequence[float] = DEFAULT_GRID,
    tolerances: Sequence[float] = C1_TOLERANCES,
) -> list[CorroborationReport]:
    """Test three known sine identities on the truncated product.

    1. oddness, P(-x) + P(x) = 0
    2. half-period shift, P(x + pi) + P(x) = 0
    3. duplication, P(x) - 2 P(x/2) C(x/2) = 0 with C the cosine product
    """
    if K < 1:
        raise ValueError("need K >= 1")
    grid = tuple(float(x) for x in grid)
    if not grid:
        raise ValueError("empty grid")
    if any(abs(x) > 2 * math.pi for x in grid):
        raise ValueError("grid points must satisfy |x| <= 2 pi")

    def P(x: float) -> float:
        return sin_via_product(x, K)

    residuals = [
        max(abs(P(-x) + P(x)) for x in grid),
        max(abs(P(x + math.pi) + P(x)) for x in grid),
        max(abs(P(x) - 2 * P(x / 2) * cos_via_product(x / 2, K)) for x in grid),
    ]
    names = ("C1 sin(-x) = -sin x", "C1 sin(x+pi) = -sin x", "C1 sin x = 2 sin(x/2) cos(x/2)")
    return [
        CorroborationReport(name, K, grid, r, tol, r <= tol)
        for name, r, tol in zip(names, residuals, tolerances)
    ]


@dataclass(frozen=True)
class LeibnizResult:
    n: int
    iterations: int
    value: float
    residual: float


def leibniz_corroboration(n: int, iterations: int = 1) -> LeibnizResult:
    """Average consecutive Leibniz partial sums ``iterations`` times.

    Uses S_{n-iterations} .. S_n; each pass replaces the sequence by the
    means of neighbouring entries. ``iterations = 0`` returns S_n itself.
    """
    if iterations < 0:
        raise ValueError("iterations must be nonnegative")
    if n < iterations + 1 or n < 1:
        raise ValueError(f"need n >= {iterations + 1} for {iterations} averaging passes")
    sums = [partial_sum(SeriesId.LEIBNIZ, n - iterations)]
    for k in range(n - iterations + 1, n + 1):
        sums.append(sums[-1] + term(SeriesId.LEIBNIZ, k))
    for _ in range(iterations):
        sums = [(a + b) / 2 for a, b in zip(sums, sums[1:])]
    value = sums[0]
    return LeibnizResult(n, iterations, value, abs(value - PI_OVER_FOUR))


# --------------------------------------------------------------------------
# regrouping


@dataclass(frozen=True)
class GroupingScheme:
    """Consecutive bracketing: ``prefix`` block lengths, then blocks of
    ``repeat`` terms forever (``repeat = 0`` means no repeating tail)."""

    prefix: tuple[int, ...] = ()
    repeat: int = 0

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if any(b < 1 for b in self.prefix) or self.repeat < 0:
            raise ValueError("block lengths must be positive")
        if not self.prefix and not self.repeat:
            raise ValueError("scheme has no blocks")

    def block_length(self, index: int) -> int:
        if index < len(self.prefix):
            return self.prefix[index]
        if not self.repeat:
            raise IndexError("finite scheme exhausted")
        return self.repeat

    def lengths(self, blocks: int) -> list[int]:
        return [self.block_length(i) for i in range(blocks)]


PAIRS = GroupingScheme(repeat=2)
ONE_THEN_PAIRS = GroupingScheme(prefix=(1,), repeat=2)


@dataclass(frozen=True)
class RegroupResult:
    block_sums: tuple[float, ...]
    partial_sums: tuple[float, ...]
    stabilized: bool
    value: float | None

    @property
    def verdict(self) -> str:
        return "stabilized" if self.stabilized else "divergent"


def regroup_series(series: SeriesId | str, scheme: GroupingScheme, blocks: int = 1000) -> RegroupResult:
    """Sum the series block by block under ``scheme``.

    The result is stabilized when the running total is constant over the
    last half of the ``blocks`` computed.
    """
    if blocks < 1:
        raise ValueError("need at least one block")
    block_sums = []
    k = 1
    for length in scheme.lengths(blocks):
        s = 0.0
        for _ in range(length):
            s += term(series, k)
            k += 1
        block_sums.append(s)
    partial = []
    run = 0.0
    for s in block_sums:
        run += s
        partial.append(run)
    tail = partial[(blocks - 1) // 2 :] if blocks > 1 else partial
    stable = all(v == tail[0] for v in tail)
    return RegroupResult(tuple(block_sums), tuple(partial), stable, tail[0] if stable else None)


def finite_regroup_control(terms: Sequence, scheme: GroupingScheme | Sequence[int]) -> tuple[Fraction, Fraction]:
    """(bracketed total, plain total) of a finite list, in exact arithmetic."""
    values = [Fraction(t) for t in terms]
    if isinstance(scheme, GroupingScheme):
        lengths = list(scheme.prefix)
        covered = sum(lengths)
        while scheme.repeat and covered < len(values):
            lengths.append(scheme.repeat)
            covered += scheme.repeat
    else:
        lengths = list(scheme)
    if any(b < 1 for b in lengths):
        raise ValueError("block lengths must be positive")
    if sum(lengths) != len(values):
        raise ValueError(f"scheme covers {sum(lengths)} terms, list has {len(values)}")
    block_totals = []
    pos = 0
    for b in lengths:
        block_totals.append(sum(values[pos : pos + b], Fraction(0)))
        pos += b
    return sum(block_totals, Fraction(0)), sum(values, Fraction(0))


def random_scheme(n: int, rng: random.Random) -> list[int]:
    """A uniformly random composition of ``n`` into consecutive blocks."""
    cuts = [k for k in range(1, n) if rng.random() < 0.5]
    bounds = [0, *cuts, n]
    return [b - a for a, b in zip(bounds, bounds[1:])]


# --------------------------------------------------------------------------
# bundled runs


PRODUCT_K_LADDER = (1000, 2000, 4000, 8000, 16000, 32000, 64000, 100000)


def run_euler(
    n: int = 10_000,
    K: int | None = None,
    grid: Sequence[float] = DEFAULT_GRID,
    tolerance: float | None = None,
) -> list[CorroborationReport]:
    """Every Euler/Polya check as a report; ``K`` overrides all truncations."""
    grid = tuple(grid)
    reports = []

    b = basel_limit_check(n)
    reports.append(CorroborationReport(
        "basel pi^2/6 - S_n in (1/(n+1), 1/n)", n, (), b.residual, 1 / n, b.within_tail_bounds,
        f"S_n={b.partial_sum!r}",
    ))

    k_prod = K or 100_000
    rel = abs(sin_via_product(math.pi / 2, k_prod) - 1.0)
    reports.append(CorroborationReport(
        "product sin(pi/2) = 1", k_prod, (math.pi / 2,), rel, 1e-5, rel <= 1e-5,
    ))

    ladder = PRODUCT_K_LADDER if K is None else tuple(k for k in PRODUCT_K_LADDER if k <= K) or (K,)
    errors = [product_grid_error(k, grid) for k in ladder]
    monotone = all(b < a for a, b in zip(errors, errors[1:]))
    reports.append(CorroborationReport(
        "product vs series, grid error decreasing in K", ladder[-1], grid, errors[-1], 0.0, monotone,
        "errors=" + ",".join(f"{e:.3e}" for e in errors),
    ))

    k_coef = K or 10_000
    coef = coefficient_identity_residual(k_coef)
    bound = 1.1 / (math.pi ** 2 * k_coef)
    reports.append(CorroborationReport(
        "coefficient 1/3! = sum 1/(k^2 pi^2)", k_coef, (), coef, bound, coef <= bound,
    ))

    tols = C1_TOLERANCES if tolerance is None else (C1_TOLERANCES[0], tolerance, tolerance)
    reports.extend(polya_c1_checks(K or 10_000, grid, tols))

    lz = leibniz_corroboration(n, 4)
    ltol = 1e-8 if tolerance is None else tolerance
    reports.append(CorroborationReport(
        "C2 Leibniz series = pi/4", n, (), lz.residual, ltol, lz.residual <= ltol,
        f"value={lz.value!r}, 4 averaging passes",
    ))
    return reports


GRANDI_BRACKETINGS = {"(1-1)+(1-1)+1": (2, 2, 1), "1-(1-1)-(1-1)": (1, 2, 2)}


def run_grandi(blocks: int = 1000, random_schemes: int = 200, seed: int = 0) -> list[CorroborationReport]:
    reports = []
    for name, scheme, expected in (("scheme A (1-1)+(1-1)+...", PAIRS, 0.0), ("scheme B 1-(1-1)-...", ONE_THEN_PAIRS, 1.0)):
        res = regroup_series(SeriesId.GRANDI, scheme, blocks)
        ok = res.stabilized and res.value == expected
        reports.append(CorroborationReport(
            f"grandi {name} -> {expected:g}", blocks, (), 0.0 if ok else 1.0, 0.0, ok,
            f"verdict={res.verdict}, value={res.value}",
        ))
    c = [1, -1, 1, -1, 1]
    for name, lengths in GRANDI_BRACKETINGS.items():
        grouped, plain = finite_regroup_control(c, lengths)
        ok = grouped == plain == 1
        reports.append(CorroborationReport(
            f"finite control c = {name}", len(c), (), float(abs(grouped - plain)), 0.0, ok,
            f"grouped={grouped}, plain={plain}",
        ))
    rng = random.Random(seed)
    mismatches = 0
    for _ in range(random_schemes):
        grouped, plain = finite_regroup_control(c, random_scheme(len(c), rng))
        mismatches += grouped != plain
    reports.append(CorroborationReport(
        f"finite control c under {random_schemes} random bracketings", len(c), (), float(mismatches), 0.0,
        mismatches == 0,
    ))
    return reports


Checker = Callable[[], list[CorroborationReport]]

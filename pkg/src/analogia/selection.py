"""Probabilistic rationales for choosing analogical sources.

Under ignorance every aspect is equally likely to matter. If a source
matches the target on ``s`` of ``m`` shared aspects and ``j`` of those ``m``
aspects are relevant, the chance that all relevant ones are among the
matching ones is C(s, j) / C(m, j).
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from analogia.model import Instance, instance_match_counts

EXACT_LIMIT = 64


@dataclass(frozen=True)
class MatchStatistics:
    """Counts describing how a source matches a target.

    ``i``: matched aspects, ``m``: shared aspects, ``s``: matched aspects in
    the relevance setting, ``j``: relevant aspects.
    """

    i: int
    m: int
    s: int = 0
    j: int = 0

    def __post_init__(self):
        if not 0 <= self.i <= self.m:
            raise ValueError(f"need 0 <= i <= m, got i={self.i}, m={self.m}")
        if not 0 <= self.j <= self.m or not 0 <= self.s <= self.m:
            raise ValueError("s and j must lie in [0, m]")

    @property
    def remaining(self) -> int:
        """Aspects not (yet) matched, m - i."""
        return self.m - self.i


def degree_of_similarity(i: int, m: int) -> float:
    """Fraction of the ``m`` shared aspects on which the objects match."""
    if m < 1:
        raise ValueError("degree of similarity is undefined for m = 0")
    if not 0 <= i <= m:
        raise ValueError(f"need 0 <= i <= m, got i={i}, m={m}")
    return i / m


def _check_counts(s: int, j: int, m: int) -> None:
    if m < 1:
        raise ValueError("m must be at least 1")
    if not 0 <= s <= m:
        raise ValueError(f"need 0 <= s <= m, got s={s}, m={m}")
    if not 0 <= j <= m:
        raise ValueError(f"need 0 <= j <= m, got j={j}, m={m}")


def relevant_match_probability_exact(s: int, j: int, m: int) -> Fraction:
    _check_counts(s, j, m)
    return Fraction(math.comb(s, j), math.comb(m, j))


def relevant_match_probability(s: int, j: int, m: int) -> float:
    """Probability that all ``j`` relevant aspects are among the ``s`` matching ones."""
    _check_counts(s, j, m)
    if j > s:
        return 0.0
    if m <= EXACT_LIMIT:
        return float(relevant_match_probability_exact(s, j, m))
    # C(s,j)/C(m,j) = s! (m-j)! / ((s-j)! m!)
    log_p = math.lgamma(s + 1) + math.lgamma(m - j + 1) - math.lgamma(s - j + 1) - math.lgamma(m + 1)
    return math.exp(log_p)


@dataclass(frozen=True)
class RankedSource:
    source: Instance
    probability: float
    stats: MatchStatistics


def rank_sources(target: Instance, candidates: Sequence[Instance], j: int) -> list[RankedSource]:
    """Order candidate sources by the chance they match on the relevant aspects.

    Ties are broken by source id. A candidate sharing no aspect with the
    target raises :class:`~analogia.model.DisjointDescriptionError`; one
    sharing fewer than ``j`` aspects raises ``ValueError``.
    """
    ranked = []
    for cand in candidates:
        i, m = instance_match_counts(target, cand)
        ranked.append(RankedSource(cand, relevant_match_probability(i, j, m), MatchStatistics(i, m, i, j)))
    ranked.sort(key=lambda r: (-r.probability, r.source.id))
    return ranked

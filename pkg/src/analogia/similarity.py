"""Local and global similarity indices, metric-axiom audit, contrast model
and transformational distance.

Indices are implemented exactly as printed in the literature, which mixes
conventions: the set-complement ratio and the normalized numeric difference
behave like distances (0 for identical values) while the overlap indicator
and the simple matching coefficient behave like similarities (1 for
agreement). :func:`audit_metric_axioms` reports the consequences instead of
normalizing them away.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import deque
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from analogia.model import (
    AspectSchema,
    DisjointDescriptionError,
    Instance,
    Value,
)

AXIOM_TOLERANCE = 1e-12


class LocalIndexKind(str, enum.Enum):
    SET_COMPLEMENT_RATIO = "set-complement-ratio"
    OVERLAP_INDICATOR = "overlap-indicator"
    NORMALIZED_NUMERIC_DIFFERENCE = "normalized-numeric-difference"


class GlobalIndexKind(str, enum.Enum):
    CITY_BLOCK = "city-block"
    EUCLIDEAN = "euclidean"
    SIMPLE_MATCHING = "simple-matching-coefficient"


class UndefinedRatioError(ValueError):
    pass


class CodingError(ValueError):
    """An aspect cannot be coded as a binary positive/negative feature."""


class InapplicableModelError(ValueError):
    pass


class UnreachableError(ValueError):
    """No sequence of enabled operations within the depth bound links the strings."""


def local_sim(kind: LocalIndexKind | str, a: Value, b: Value, aspect: AspectSchema | None = None) -> float:
    kind = LocalIndexKind(kind)
    if kind is LocalIndexKind.NORMALIZED_NUMERIC_DIFFERENCE:
        if isinstance(a, frozenset) or isinstance(b, frozenset):
            raise TypeError("normalized numeric difference needs numeric values")
        if aspect is None or not aspect.is_numeric:
            raise TypeError("normalized numeric difference needs a numeric aspect with bounds")
        return abs(a - b) / aspect.span

    if not isinstance(a, (frozenset, set)) or not isinstance(b, (frozenset, set)):
        raise TypeError(f"{kind.value} needs symbol-set values")
    if kind is LocalIndexKind.OVERLAP_INDICATOR:
        return 0.0 if not (a & b) else 1.0
    union = len(a | b)
    if union == 0:
        raise UndefinedRatioError("set-complement ratio of two empty sets is undefined")
    return (union - len(a & b)) / union


def default_local_kind(aspect: AspectSchema) -> LocalIndexKind:
    if aspect.is_numeric:
        return LocalIndexKind.NORMALIZED_NUMERIC_DIFFERENCE
    return LocalIndexKind.SET_COMPLEMENT_RATIO


def city_block(locals_: Sequence[float]) -> float:
    if not locals_:
        raise DisjointDescriptionError("no local indices to combine")
    return sum(locals_) / len(locals_)


def euclidean(locals_: Sequence[float]) -> float:
    if not locals_:
        raise DisjointDescriptionError("no local indices to combine")
    return math.sqrt(sum(x * x for x in locals_) / len(locals_))


def simple_matching(alpha: int, beta: int, gamma: int, delta: int) -> float:
    """(agreeing positive + agreeing negative) / all coded features."""
    total = alpha + beta + gamma + delta
    if total == 0:
        raise DisjointDescriptionError("no coded features")
    return (alpha + delta) / total


def matching_counts(a: Instance, b: Instance, schema: Mapping[str, AspectSchema]) -> tuple[int, int, int, int]:
    """Counts (alpha, beta, gamma, delta) over the mutually assigned aspects.

    A value is coded positive when it contains the aspect's declared positive
    symbol. beta counts aspects positive in ``a`` only, gamma those positive
    in ``b`` only.
    """
    shared = a.shared_aspects(b)
    if not shared:
        raise DisjointDescriptionError(f"{a.id!r} and {b.id!r} share no assigned aspect")
    alpha = beta = gamma = delta = 0
    for name in shared:
        aspect = schema[name]
        if aspect.is_numeric or aspect.positive is None:
            raise CodingError(f"aspect {name!r} declares no positive symbol")
        pa = aspect.positive in a[name]
        pb = aspect.positive in b[name]
        if pa and pb:
            alpha += 1
        elif pa:
            beta += 1
        elif pb:
            gamma += 1
        else:
            delta += 1
    return alpha, beta, gamma, delta


def local_profile(
    a: Instance,
    b: Instance,
    schema: Mapping[str, AspectSchema],
    locals_: Mapping[str, LocalIndexKind | str] | None = None,
) -> dict[str, float]:
    """Per-aspect local indices over the mutually assigned aspects."""
    shared = a.shared_aspects(b)
    if not shared:
        raise DisjointDescriptionError(f"{a.id!r} and {b.id!r} share no assigned aspect")
    locals_ = locals_ or {}
    out = {}
    for name in shared:
        aspect = schema[name]
        kind = locals_.get(name, default_local_kind(aspect))
        out[name] = local_sim(kind, a[name], b[name], aspect)
    return out


def global_sim(
    kind: GlobalIndexKind | str,
    a: Instance,
    b: Instance,
    schema: Mapping[str, AspectSchema],
    locals_: Mapping[str, LocalIndexKind | str] | None = None,
) -> float:
    """Global index of ``a`` and ``b``.

    ``locals_`` assigns a local index kind per aspect; unlisted aspects use
    the set-complement ratio (symbolic) or the normalized difference
    (numeric). The simple matching coefficient ignores ``locals_`` and codes
    each aspect through its declared positive symbol.
    """
    kind = GlobalIndexKind(kind)
    if kind is GlobalIndexKind.SIMPLE_MATCHING:
        return simple_matching(*matching_counts(a, b, schema))
    values = list(local_profile(a, b, schema, locals_).values())
    if kind is GlobalIndexKind.CITY_BLOCK:
        return city_block(values)
    return euclidean(values)


# --------------------------------------------------------------------------
# metric axioms


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    passed: bool
    witness: tuple[str, str, str] | None = None
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    index: str
    triples_checked: int
    results: tuple[AxiomResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, axiom: str) -> AxiomResult:
        for r in self.results:
            if r.axiom == axiom:
                return r
        raise KeyError(axiom)


def ordered_triples(instances: Sequence[Instance]) -> list[tuple[Instance, Instance, Instance]]:
    """All ordered triples of distinct instances (n*(n-1)*(n-2) of them)."""
    return list(itertools.permutations(instances, 3))


def audit_metric_axioms(
    kind: GlobalIndexKind | str,
    sample: Iterable[tuple[Instance, Instance, Instance]],
    schema: Mapping[str, AspectSchema],
    locals_: Mapping[str, LocalIndexKind | str] | None = None,
    tol: float = AXIOM_TOLERANCE,
) -> AxiomReport:
    """Check symmetry, triangle inequality and minimality on every triple.

    The first violating triple of each axiom is kept as its witness.
    """
    kind = GlobalIndexKind(kind)
    sample = list(sample)
    if not sample:
        raise ValueError("empty sample")
    cache: dict[tuple[str, str], float] = {}

    def sim(x: Instance, y: Instance) -> float:
        key = (x.id, y.id)
        if key not in cache:
            cache[key] = global_sim(kind, x, y, schema, locals_)
        return cache[key]

    witnesses: dict[str, tuple[tuple[str, str, str], str]] = {}
    for a, b, c in sample:
        ids = (a.id, b.id, c.id)
        if "symmetry" not in witnesses:
            for x, y in ((a, b), (b, c), (a, c)):
                if abs(sim(x, y) - sim(y, x)) > tol:
                    witnesses["symmetry"] = (ids, f"SIM({x.id},{y.id})={sim(x, y):.6g} != SIM({y.id},{x.id})={sim(y, x):.6g}")
                    break
        if "triangle" not in witnesses:
            lhs = sim(a, b) + sim(b, c)
            if lhs < sim(a, c) - tol:
                witnesses["triangle"] = (ids, f"SIM({a.id},{b.id})+SIM({b.id},{c.id})={lhs:.6g} < SIM({a.id},{c.id})={sim(a, c):.6g}")
        if "minimality" not in witnesses:
            self_sim = sim(a, a)
            if abs(self_sim) > tol:
                witnesses["minimality"] = (ids, f"SIM({a.id},{a.id})={self_sim:.6g} != 0")
            elif sim(a, b) < self_sim - tol:
                witnesses["minimality"] = (ids, f"SIM({a.id},{b.id})={sim(a, b):.6g} < SIM({a.id},{a.id})")

    results = []
    for axiom in ("symmetry", "triangle", "minimality"):
        if axiom in witnesses:
            triple, detail = witnesses[axiom]
            results.append(AxiomResult(axiom, False, triple, detail))
        else:
            results.append(AxiomResult(axiom, True))
    return AxiomReport(kind.value, len(sample), tuple(results))


# --------------------------------------------------------------------------
# contrast model


@dataclass(frozen=True)
class ContrastWeights:
    """Weights of the common and the two distinctive feature sets.

    ``salience`` gives an additive weight per symbol; symbols without an
    entry weigh 1, so the default salience is plain set cardinality.
    """

    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 1.0
    salience: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) < 0:
            raise ValueError("contrast weights must be nonnegative")
        if any(w < 0 for w in self.salience.values()):
            raise ValueError("salience weights must be nonnegative")

    def f(self, features: Iterable) -> float:
        total = 0.0
        for feat in features:
            symbol = feat[1] if isinstance(feat, tuple) else feat
            total += self.salience.get(symbol, 1.0)
        return total


def contrast_of_sets(a: Iterable, b: Iterable, w: ContrastWeights = ContrastWeights()) -> float:
    a, b = frozenset(a), frozenset(b)
    return w.alpha * w.f(a & b) - w.beta * w.f(a - b) - w.gamma * w.f(b - a)


def feature_set(inst: Instance, aspects: Iterable[str]) -> frozenset:
    """Symbols of ``inst`` on ``aspects``, tagged with their aspect name."""
    return frozenset((name, s) for name in aspects for s in inst[name])


def contrast_model(
    a: Instance,
    b: Instance,
    w: ContrastWeights = ContrastWeights(),
    aspect: str | None = None,
) -> float:
    """Contrast-model similarity of ``a`` to ``b`` (asymmetric when beta != gamma).

    Features are the symbols on ``aspect`` if given, otherwise the union of
    symbols over every mutually assigned symbolic aspect.
    """
    if aspect is not None:
        aspects = [aspect]
        for inst in (a, b):
            if not inst.assigns(aspect):
                raise DisjointDescriptionError(f"{inst.id!r} does not assign {aspect!r}")
    else:
        aspects = a.shared_aspects(b)
        if not aspects:
            raise DisjointDescriptionError(f"{a.id!r} and {b.id!r} share no assigned aspect")
    aspects = [n for n in aspects if isinstance(a[n], frozenset) and isinstance(b[n], frozenset)]
    if not aspects:
        raise InapplicableModelError("contrast model needs symbolic features")
    return contrast_of_sets(feature_set(a, aspects), feature_set(b, aspects), w)


# --------------------------------------------------------------------------
# transformational distance

SUBSTITUTION = "substitution"
REVERSAL = "reversal"
SIGN_FLIP = "sign-flip"
OPERATIONS = (SUBSTITUTION, REVERSAL, SIGN_FLIP)
ALPHABET = frozenset("+-")

_FLIP = str.maketrans("+-", "-+")


def _normalize_ops(ops: Iterable[str]) -> frozenset:
    ops = frozenset(ops)
    if not ops:
        raise ValueError("at least one edit operation must be enabled")
    unknown = ops - set(OPERATIONS)
    if unknown:
        raise ValueError(f"unknown operations {sorted(unknown)}")
    return ops


def _neighbours(s: str, ops: frozenset) -> Iterable[str]:
    if SUBSTITUTION in ops:
        for k, ch in enumerate(s):
            yield s[:k] + ("-" if ch == "+" else "+") + s[k + 1 :]
    if REVERSAL in ops:
        yield s[::-1]
    if SIGN_FLIP in ops:
        yield s.translate(_FLIP)


def transformational_distance(
    s: str,
    t: str,
    ops: Iterable[str] = (SUBSTITUTION,),
    max_depth: int | None = None,
) -> int:
    """Fewest enabled operations turning ``s`` into ``t``, by breadth-first search.

    Raises :class:`UnreachableError` when ``t`` is not reached within
    ``max_depth`` steps (or at all).
    """
    ops = _normalize_ops(ops)
    for name, x in (("source", s), ("target", t)):
        if not set(x) <= ALPHABET:
            raise ValueError(f"{name} string {x!r} uses symbols outside '+-'")
    if len(s) != len(t):
        raise UnreachableError("edit operations preserve length; strings differ in length")
    if s == t:
        return 0
    seen = {s}
    frontier = deque([(s, 0)])
    while frontier:
        cur, depth = frontier.popleft()
        if max_depth is not None and depth >= max_depth:
            continue
        for nxt in _neighbours(cur, ops):
            if nxt == t:
                return depth + 1
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((nxt, depth + 1))
    bound = "" if max_depth is None else f" within {max_depth} operations"
    raise UnreachableError(f"{t!r} is not reachable from {s!r}{bound}")


def operation_configurations() -> list[tuple[str, ...]]:
    """Every nonempty subset of the edit operations, in a fixed order."""
    return [
        combo
        for r in range(1, len(OPERATIONS) + 1)
        for combo in itertools.combinations(OPERATIONS, r)
    ]


def distance_matrix(
    instances: Sequence[Instance],
    fn: Callable[[Instance, Instance], float],
) -> list[list[float]]:
    return [[fn(a, b) for b in instances] for a in instances]

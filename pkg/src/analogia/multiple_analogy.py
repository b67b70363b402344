"""Multiple-source analogies: matching, hypothesis formation, corroboration.

A hypothesis is a disjunction of interpretations, each backed by a set of
sources. Every source records the roles it played: ``generation`` when it
helped form the hypothesis, ``justification`` when it was cited to support
it afterwards. One source can hold both.

:func:`heuristic_loop` strings the pieces together: match the corpus
against the problem's solvability conditions, adopt sources that cover
conditions not yet covered, note the bridging hypotheses their gaps
require, and once every condition is covered run the registered
corroboration checks.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any

from analogia import case_studies
from analogia.case_studies import CorroborationReport
from analogia.model import (
    AspectSchema,
    Instance,
    KnowledgeBase,
    KnowledgeBaseError,
    ParseError,
    decode_document,
    knowledge_base_from_dict,
)

GENERATION = "generation"
JUSTIFICATION = "justification"
ROLES = (GENERATION, JUSTIFICATION)


class SpecificationError(KnowledgeBaseError):
    """A problem refers to something the corpus does not declare."""


class HypothesisError(ValueError):
    pass


@dataclass(frozen=True)
class Condition:
    """A named aspect-value pattern.

    ``op`` is ``contains`` (symbol present), ``equals`` (value equal) or
    ``range`` (numeric value within ``[lo, hi]``). ``bridge`` names the
    analogical hypothesis needed when a source lacks this condition.
    """

    name: str
    aspect: str
    op: str
    operand: Any
    bridge: str | None = None

    def __post_init__(self):
        if self.op not in ("contains", "equals", "range"):
            raise ValueError(f"unknown condition operator {self.op!r}")
        if self.op == "equals" and isinstance(self.operand, (list, set, tuple)):
            object.__setattr__(self, "operand", frozenset(self.operand))
        if self.op == "range":
            lo, hi = self.operand
            object.__setattr__(self, "operand", (float(lo), float(hi)))

    def holds(self, inst: Instance) -> bool:
        if not inst.assigns(self.aspect):
            return False
        value = inst[self.aspect]
        if self.op == "contains":
            return isinstance(value, frozenset) and self.operand in value
        if self.op == "equals":
            if isinstance(value, frozenset):
                return value == self.operand
            return not isinstance(self.operand, frozenset) and value == float(self.operand)
        lo, hi = self.operand
        return not isinstance(value, frozenset) and lo <= value <= hi


@dataclass(frozen=True)
class Problem:
    id: str
    evidence: tuple[Condition, ...] = ()
    conditions: tuple[Condition, ...] = ()
    conjecture: str = "solution"
    checks: tuple[str, ...] = ()
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "evidence", tuple(self.evidence))
        object.__setattr__(self, "conditions", tuple(self.conditions))
        object.__setattr__(self, "checks", tuple(self.checks))
        names = [c.name for c in self.conditions]
        if len(set(names)) != len(names):
            raise ValueError("condition names must be unique")


@dataclass(frozen=True)
class SourceMatch:
    source: str
    satisfied: tuple[str, ...]
    unsatisfied: tuple[str, ...]

    def __post_init__(self):
        if set(self.satisfied) & set(self.unsatisfied):
            raise ValueError("a condition cannot be both satisfied and unsatisfied")


def _check_aspects(conditions: Iterable[Condition], schema: Mapping[str, AspectSchema]) -> None:
    for c in conditions:
        if c.aspect not in schema:
            raise SpecificationError(f"condition {c.name!r} refers to unknown aspect {c.aspect!r}")


def match_conditions(
    problem: Problem,
    corpus: Sequence[Instance],
    schema: Mapping[str, AspectSchema] | None = None,
) -> list[SourceMatch]:
    """Positive/negative analogy of each corpus element against the conditions.

    Ranked by satisfied count (descending) then id; elements satisfying
    nothing are dropped.
    """
    if schema is not None:
        _check_aspects(problem.conditions, schema)
    matches = []
    for inst in corpus:
        sat = tuple(c.name for c in problem.conditions if c.holds(inst))
        if not sat:
            continue
        unsat = tuple(c.name for c in problem.conditions if c.name not in sat)
        matches.append(SourceMatch(inst.id, sat, unsat))
    matches.sort(key=lambda m: (-len(m.satisfied), m.source))
    return matches


@dataclass(frozen=True)
class Hypothesis:
    id: str
    support: Mapping[str, frozenset] = field(default_factory=dict)
    provenance: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "support", MappingProxyType({k: frozenset(v) for k, v in self.support.items()}))
        object.__setattr__(self, "provenance", MappingProxyType({k: frozenset(v) for k, v in self.provenance.items()}))
        for sources in self.support.values():
            for s in sources:
                if not self.provenance.get(s):
                    raise HypothesisError(f"source {s!r} supports the hypothesis without a recorded role")

    @property
    def interpretations(self) -> tuple[str, ...]:
        return tuple(self.support)

    def score(self, interpretation: str) -> int:
        return len(self.support.get(interpretation, ()))

    @property
    def scores(self) -> dict[str, int]:
        return {k: len(v) for k, v in self.support.items()}

    @property
    def reading(self) -> str:
        return " or ".join(self.interpretations)

    def ranking(self) -> list[tuple[str, int]]:
        """Interpretations by support, ties kept in formation order."""
        return sorted(self.scores.items(), key=lambda kv: -kv[1])

    def dual_use_sources(self) -> list[str]:
        return sorted(s for s, roles in self.provenance.items() if set(ROLES) <= roles)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "reading": self.reading,
            "support": {k: sorted(v) for k, v in self.support.items()},
            "scores": self.scores,
            "provenance": {s: sorted(r) for s, r in sorted(self.provenance.items())},
        }


def _extend(h: Hypothesis, sources: Iterable[tuple[str, str]], role: str) -> Hypothesis:
    support = {k: set(v) for k, v in h.support.items()}
    provenance = {k: set(v) for k, v in h.provenance.items()}
    for source, interpretation in sources:
        support.setdefault(interpretation, set()).add(source)
        provenance.setdefault(source, set()).add(role)
    return Hypothesis(h.id, support, provenance)


def form_hypothesis(problem: Problem | str, sources: Sequence[tuple[str, str]]) -> Hypothesis:
    """Disjunctive hypothesis from ``(source id, interpretation)`` pairs."""
    sources = list(sources)
    if not sources:
        raise HypothesisError("cannot form a hypothesis without sources")
    pid = problem.id if isinstance(problem, Problem) else problem
    return _extend(Hypothesis(pid), sources, GENERATION)


def corroborate(h: Hypothesis, new_sources: Sequence[tuple[str, str]]) -> Hypothesis:
    """Add supporting sources in the justification role.

    A source already present keeps its earlier roles and gains
    ``justification``.
    """
    return _extend(h, new_sources, JUSTIFICATION)


# --------------------------------------------------------------------------
# heuristic loop


def _c1_checker() -> list[CorroborationReport]:
    return case_studies.polya_c1_checks(10_000)


def _c2_checker() -> list[CorroborationReport]:
    res = case_studies.leibniz_corroboration(10_000, 4)
    return [CorroborationReport("C2 Leibniz series = pi/4", 10_000, (), res.residual, 1e-8, res.residual <= 1e-8)]


def _basel_checker() -> list[CorroborationReport]:
    b = case_studies.basel_limit_check(10_000)
    return [CorroborationReport("basel tail bounds", 10_000, (), b.residual, 1e-4, b.within_tail_bounds)]


DEFAULT_CHECKERS: dict[str, Callable[[], list[CorroborationReport]]] = {
    "polya-c1": _c1_checker,
    "leibniz-c2": _c2_checker,
    "basel-limit": _basel_checker,
}


@dataclass(frozen=True)
class LoopStep:
    iteration: int
    candidates: tuple[SourceMatch, ...]
    selected: str | None
    hypothesis: Hypothesis | None
    reports: tuple[CorroborationReport, ...]
    open_hypotheses: tuple[str, ...]
    covered: tuple[str, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "iteration": self.iteration,
            "candidates": [
                {"source": m.source, "satisfied": list(m.satisfied), "unsatisfied": list(m.unsatisfied)}
                for m in self.candidates
            ],
            "selected": self.selected,
            "hypothesis": None if self.hypothesis is None else self.hypothesis.to_dict(),
            "reports": [r.to_dict() for r in self.reports],
            "open_hypotheses": list(self.open_hypotheses),
            "covered": list(self.covered),
        }


def heuristic_loop(
    problem: Problem,
    kb: KnowledgeBase,
    max_iterations: int = 10,
    checkers: Mapping[str, Callable[[], list[CorroborationReport]]] | None = None,
) -> list[LoopStep]:
    """Iterate source search, hypothesis growth and corroboration.

    Each step adopts the best-ranked unused source that satisfies a still
    uncovered condition. The loop stops after ``max_iterations`` steps or
    after a step that finds no such source.
    """
    if not problem.conditions:
        raise ValueError("problem has no solvability conditions")
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    checkers = DEFAULT_CHECKERS if checkers is None else checkers
    for name in problem.checks:
        if name not in checkers:
            raise SpecificationError(f"no checker registered under {name!r}")
    _check_aspects(problem.conditions, kb.aspects)

    bridges = {c.name: c.bridge for c in problem.conditions}
    used: set[str] = set()
    covered: list[str] = []
    open_hyps: list[str] = []
    hypothesis: Hypothesis | None = None
    checked = False
    steps = []
    for it in range(1, max_iterations + 1):
        corpus = [inst for inst in kb.instances if inst.id not in used]
        candidates = [
            m for m in match_conditions(problem, corpus)
            if any(name not in covered for name in m.satisfied)
        ]
        if not candidates:
            steps.append(LoopStep(it, (), None, hypothesis, (), tuple(open_hyps), tuple(covered)))
            break
        chosen = candidates[0]
        used.add(chosen.source)
        pair = [(chosen.source, problem.conjecture)]
        hypothesis = form_hypothesis(problem, pair) if hypothesis is None else _extend(hypothesis, pair, GENERATION)
        covered.extend(n for n in chosen.satisfied if n not in covered)
        for name in chosen.unsatisfied:
            bridge = bridges[name]
            if bridge and bridge not in open_hyps:
                open_hyps.append(bridge)

        reports: list[CorroborationReport] = []
        if not checked and len(covered) == len(problem.conditions):
            checked = True
            passed = []
            for name in problem.checks:
                out = checkers[name]()
                reports.extend(out)
                if all(r.passed for r in out):
                    passed.append((f"check:{name}", problem.conjecture))
            if passed:
                hypothesis = corroborate(hypothesis, passed)
        steps.append(LoopStep(
            it, tuple(candidates), chosen.source, hypothesis, tuple(reports), tuple(open_hyps), tuple(covered)
        ))
    return steps


# --------------------------------------------------------------------------
# problem documents

PROBLEM_KEYS = ("target", "conditions", "sources", "interpretations", "checks")



@dataclass(frozen=True)
class ProblemDocument:
    problem: Problem
    corpus: KnowledgeBase
    sources: tuple[tuple[str, str, str], ...]
    interpretations: Mapping[str, str]
    source_labels: Mapping[str, str]


def _parse_condition(raw: Any, path: str) -> Condition:
    if not isinstance(raw, dict) or not isinstance(raw.get("name"), str) or not isinstance(raw.get("aspect"), str):
        raise ParseError("condition needs string name and aspect", path)
    ops = [op for op in ("contains", "equals", "range") if op in raw]
    if len(ops) != 1:
        raise ParseError("condition needs exactly one of contains/equals/range", path)
    op = ops[0]
    operand = raw[op]
    if op == "range" and not (isinstance(operand, list) and len(operand) == 2):
        raise ParseError("range must be [lo, hi]", path)
    return Condition(raw["name"], raw["aspect"], op, operand, raw.get("bridge"))


def load_problem(text: str) -> ProblemDocument:
    """Read a problem document: a KB envelope plus ``target``,
    ``conditions``, ``sources`` (and optional ``interpretations``, ``checks``)."""
    data = decode_document(text)
    if not isinstance(data, dict):
        raise ParseError("document must be a JSON object")
    if "schema" not in data:
        data = {**data, "schema": []}
    kb = knowledge_base_from_dict(data, extra_keys=PROBLEM_KEYS)

    target = data.get("target", {})
    if not isinstance(target, dict) or not isinstance(target.get("id", ""), str):
        raise ParseError("target must be an object with a string id", "$.target")
    conds_raw = data.get("conditions", [])
    if not isinstance(conds_raw, list):
        raise ParseError("conditions must be an array", "$.conditions")
    conditions = [_parse_condition(c, f"$.conditions[{i}]") for i, c in enumerate(conds_raw)]
    evidence_raw = target.get("evidence", [])
    if not isinstance(evidence_raw, list):
        raise ParseError("evidence must be an array", "$.target.evidence")
    evidence = [_parse_condition(c, f"$.target.evidence[{i}]") for i, c in enumerate(evidence_raw)]
    if kb.schema:
        _check_aspects([*conditions, *evidence], kb.aspects)

    sources = []
    labels = {}
    raw_sources = data.get("sources", [])
    if not isinstance(raw_sources, list):
        raise ParseError("sources must be an array", "$.sources")
    for i, s in enumerate(raw_sources):
        path = f"$.sources[{i}]"
        if not isinstance(s, dict) or not isinstance(s.get("id"), str) or not isinstance(s.get("supports"), str):
            raise ParseError("source needs string id and supports", path)
        role = s.get("role", GENERATION)
        if role not in ROLES:
            raise ParseError(f"role must be one of {list(ROLES)}", f"{path}.role")
        sources.append((s["id"], s["supports"], role))
        if "label" in s:
            labels[s["id"]] = str(s["label"])
    interpretations = data.get("interpretations", {})
    if not isinstance(interpretations, dict):
        raise ParseError("interpretations must be an object", "$.interpretations")
    checks = data.get("checks", [])
    if not isinstance(checks, list) or not all(isinstance(c, str) for c in checks):
        raise ParseError("checks must be an array of names", "$.checks")

    problem = Problem(
        target.get("id", "problem"),
        tuple(evidence),
        tuple(conditions),
        target.get("conjecture", "solution"),
        tuple(checks),
        target.get("description", ""),
    )
    return ProblemDocument(problem, kb, tuple(sources), MappingProxyType(dict(interpretations)), MappingProxyType(labels))


def hypothesis_from_document(doc: ProblemDocument) -> Hypothesis | None:
    """Form from the generation sources, then corroborate with the rest, in document order."""
    generation = [(s, i) for s, i, role in doc.sources if role == GENERATION]
    justification = [(s, i) for s, i, role in doc.sources if role == JUSTIFICATION]
    if not generation:
        return None
    return corroborate(form_hypothesis(doc.problem, generation), justification)


"""Concepts ordered by typicality, exceptions, typical examples and rule TYP."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from analogia.determination import (
    AnalogicalConclusion,
    Modality,
    Rule,
    RuleInapplicableError,
)
from analogia.model import Concept, Instance, KnowledgeBase, KnowledgeBaseError


class InvalidOrderError(KnowledgeBaseError):
    """The concept's order is not antisymmetric."""


@dataclass(frozen=True)
class OrderValidation:
    """``witness`` is a pair of distinct mutually related members; ``cycle``
    lists the declared order pairs that relate them."""

    valid: bool
    witness: tuple[str, str] | None = None
    cycle: tuple[tuple[str, str], ...] = ()


def _successors(c: Concept) -> dict[str, list[str]]:
    succ: dict[str, list[str]] = {m: [] for m in c.members}
    for lo, hi in c.order:
        succ.setdefault(lo, []).append(hi)
        succ.setdefault(hi, [])
    return succ


def _path(succ: dict[str, list[str]], start: str, goal: str) -> list[tuple[str, str]] | None:
    parent: dict[str, str | None] = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for nxt in succ[cur]:
            if nxt in parent:
                continue
            parent[nxt] = cur
            if nxt == goal:
                edges = []
                node = goal
                while parent[node] is not None:
                    edges.append((parent[node], node))
                    node = parent[node]
                return edges[::-1]
            queue.append(nxt)
    return None


def closure(c: Concept) -> frozenset[tuple[str, str]]:
    """Reflexive-transitive closure of the declared order."""
    succ = _successors(c)
    pairs = set()
    for start in succ:
        seen = {start}
        stack = [start]
        while stack:
            for nxt in succ[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        pairs.update((start, e) for e in seen)
    return frozenset(pairs)


def validate_order(c: Concept) -> OrderValidation:
    rel = closure(c)
    nodes = list(_successors(c))
    for k, a in enumerate(nodes):
        for b in nodes[k + 1 :]:
            if (a, b) in rel and (b, a) in rel:
                succ = _successors(c)
                cycle = _path(succ, a, b) + _path(succ, b, a)
                return OrderValidation(False, (a, b), tuple(cycle))
    return OrderValidation(True)


def _strict(c: Concept) -> frozenset[tuple[str, str]]:
    check = validate_order(c)
    if not check.valid:
        raise InvalidOrderError(f"concept {c.id!r}: {check.witness[0]!r} and {check.witness[1]!r} are mutually ordered")
    return frozenset((a, b) for a, b in closure(c) if a != b)


def exceptions(c: Concept) -> frozenset[str]:
    """Members comparable with no other member."""
    strict = _strict(c)
    related = {e for pair in strict for e in pair}
    return frozenset(m for m in c.members if m not in related)


def maximal_elements(c: Concept) -> frozenset[str]:
    """Members with nothing strictly above them."""
    strict = _strict(c)
    below = {lo for lo, _ in strict}
    return frozenset(m for m in c.members if m not in below)


def typical_examples(c: Concept) -> frozenset[str]:
    return maximal_elements(c) - exceptions(c)


def is_below(c: Concept, lower: str, upper: str) -> bool:
    """Whether ``lower`` is below or equal to ``upper`` in the closed order."""
    return (lower, upper) in closure(c) or (lower == upper and lower in c.members)


def apply_typ(
    kb: KnowledgeBase,
    c: Concept | str,
    S: Instance | str,
    T: Instance | str,
    Q: str,
) -> AnalogicalConclusion:
    """Project Q from a typical member S onto a member T below it.

    Each failing premise raises :class:`RuleInapplicableError` naming it.
    """
    if isinstance(c, str):
        c = kb.concept(c)
    s_id = S.id if isinstance(S, Instance) else S
    t_id = T.id if isinstance(T, Instance) else T
    if s_id not in typical_examples(c):
        raise RuleInapplicableError(f"tipex({s_id}) fails: not a typical example of {c.id!r}")
    if t_id not in c.members or not is_below(c, t_id, s_id):
        raise RuleInapplicableError(f"{t_id} below {s_id} fails in concept {c.id!r}")
    if Q not in c.relevant.get(s_id, frozenset()):
        raise RuleInapplicableError(f"relevant({Q},{s_id}) fails: {Q!r} is not declared relevant")
    source = kb.instance(s_id)
    target = kb.instance(t_id)
    if not source.assigns(Q):
        raise RuleInapplicableError(f"source {s_id!r} does not assign {Q!r}")
    value = source[Q]
    consistent = None
    notes: tuple[str, ...] = ()
    if target.assigns(Q):
        consistent = target[Q] == value
        if not consistent:
            notes = ("conflicts with the stored value; the result needs revision",)
    return AnalogicalConclusion(t_id, Q, value, Modality.PLAUSIBLE, Rule.TYP, (s_id,), c.id, consistent, notes)

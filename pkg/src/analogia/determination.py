"""Connections [P, Q] and the determination rules DET1 / DET2.

On a finite knowledge base "P determines Q" reduces to a functional
dependency: no two instances agree on every aspect of P while disagreeing on
Q. A connection that passes the check is *total* and licenses a deductive
transfer (DET1); one that fails is *incomplete* and only licenses a plausible
transfer (DET2).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from analogia.model import (
    Connection,
    ConnectionStatus,
    Instance,
    KnowledgeBase,
    KnowledgeBaseError,
    Value,
)


class RuleInapplicableError(KnowledgeBaseError):
    """A premise of an inference rule does not hold."""


class ModalityError(KnowledgeBaseError):
    """The connection's status does not fit the requested rule."""


class Modality(str, enum.Enum):
    DEDUCTIVE = "deductive"
    PLAUSIBLE = "plausible"


class Rule(str, enum.Enum):
    DET1 = "DET1"
    DET2 = "DET2"
    TYP = "TYP"
    SIM = "SIM"


@dataclass(frozen=True)
class AnalogicalConclusion:
    """A value projected onto a target, with the rule and sources behind it.

    ``consistent`` is None when the target had no value for the aspect,
    otherwise whether the projection agrees with the stored fact.
    """

    target: str
    aspect: str
    value: Value
    modality: Modality
    rule: Rule
    sources: tuple[str, ...]
    via: str
    consistent: bool | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.modality is Modality.DEDUCTIVE and self.rule is not Rule.DET1:
            raise ModalityError("only DET1 over a total connection yields deductive conclusions")

    @property
    def conflict(self) -> bool:
        return self.consistent is False

    def to_dict(self) -> dict[str, Any]:
        value = sorted(self.value) if isinstance(self.value, frozenset) else self.value
        return {
            "target": self.target,
            "aspect": self.aspect,
            "value": value,
            "modality": self.modality.value,
            "rule": self.rule.value,
            "sources": list(self.sources),
            "via": self.via,
            "consistent": self.consistent,
            "conflict": self.conflict,
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class DependencyCheck:
    """Outcome of checking [P, Q] against the instances of a KB.

    ``mapping`` is the induced P-values -> Q-value map (first value seen per
    key); ``witness`` is a pair of instance ids agreeing on P but not on Q.
    """

    connection: Connection
    status: ConnectionStatus
    consulted: tuple[str, ...]
    mapping: dict = field(default_factory=dict)
    witness: tuple[str, str] | None = None


def check_dependency(kb: KnowledgeBase, c: Connection) -> DependencyCheck:
    aspects = (*c.P, c.Q)
    consulted = [inst for inst in kb.instances if all(inst.assigns(a) for a in aspects)]
    if not consulted:
        return DependencyCheck(c.with_status(ConnectionStatus.UNVERIFIED), ConnectionStatus.UNVERIFIED, ())
    mapping: dict[tuple, Value] = {}
    first: dict[tuple, str] = {}
    witness = None
    for inst in consulted:
        key = tuple(inst[a] for a in c.P)
        if key not in mapping:
            mapping[key] = inst[c.Q]
            first[key] = inst.id
        elif mapping[key] != inst[c.Q] and witness is None:
            witness = (first[key], inst.id)
    status = ConnectionStatus.TOTAL if witness is None else ConnectionStatus.INCOMPLETE
    return DependencyCheck(
        c.with_status(status), status, tuple(i.id for i in consulted), mapping, witness
    )


def verify_connection(kb: KnowledgeBase, c: Connection) -> ConnectionStatus:
    """Classify ``c`` as total or incomplete over ``kb``.

    Instances missing any aspect of P or Q are skipped; when none remain the
    result is ``UNVERIFIED``.
    """
    return check_dependency(kb, c).status


def verified_view(kb: KnowledgeBase) -> KnowledgeBase:
    """A copy of ``kb`` whose connections carry their verified status."""
    return kb.with_connections(check_dependency(kb, c).connection for c in kb.connections)


def _resolve(kb: KnowledgeBase, inst: Instance | str) -> Instance:
    if isinstance(inst, Instance):
        return inst
    try:
        return kb.instance(inst)
    except KeyError:
        raise RuleInapplicableError(f"unknown instance {inst!r}") from None


def _check_premises(c: Connection, S: Instance, T: Instance) -> None:
    for a in c.P:
        if not S.assigns(a) or not T.assigns(a):
            missing = S.id if not S.assigns(a) else T.id
            raise RuleInapplicableError(f"P(S) = P(T) fails: {missing!r} does not assign {a!r}")
        if S[a] != T[a]:
            raise RuleInapplicableError(f"P(S) = P(T) fails on aspect {a!r}")
    if not S.assigns(c.Q):
        raise RuleInapplicableError(f"source {S.id!r} does not assign Q = {c.Q!r}")


def _conclude(c: Connection, S: Instance, T: Instance, modality: Modality, rule: Rule, notes=()) -> AnalogicalConclusion:
    value = S[c.Q]
    consistent = None
    if T.assigns(c.Q):
        consistent = T[c.Q] == value
        if not consistent:
            notes = (*notes, "conflicts with the stored value; the result needs revision")
    return AnalogicalConclusion(T.id, c.Q, value, modality, rule, (S.id,), c.label, consistent, tuple(notes))


def apply_det1(kb: KnowledgeBase, c: Connection, S: Instance | str, T: Instance | str) -> AnalogicalConclusion:
    """Deductive transfer of Q from S to T under a total connection.

    The connection is re-verified against ``kb``; its declared status is not
    trusted.
    """
    S, T = _resolve(kb, S), _resolve(kb, T)
    status = verify_connection(kb, c)
    if status is not ConnectionStatus.TOTAL:
        raise ModalityError(f"DET1 needs a total connection; {c.label} is {status.value}")
    _check_premises(c, S, T)
    return _conclude(c, S, T, Modality.DEDUCTIVE, Rule.DET1)


def apply_det2(kb: KnowledgeBase, c: Connection, S: Instance | str, T: Instance | str) -> AnalogicalConclusion:
    """Plausible transfer of Q from S to T under an incomplete or unverified connection."""
    S, T = _resolve(kb, S), _resolve(kb, T)
    status = verify_connection(kb, c)
    if status is ConnectionStatus.TOTAL:
        raise ModalityError(f"{c.label} is total; use DET1")
    _check_premises(c, S, T)
    notes = ("connection unverified",) if status is ConnectionStatus.UNVERIFIED else ()
    return _conclude(c, S, T, Modality.PLAUSIBLE, Rule.DET2, notes)

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from analogia.determination import Modality, Rule, RuleInapplicableError
from analogia.model import Concept, Instance, KnowledgeBase, AspectSchema
from analogia.typicality import (
    InvalidOrderError,
    apply_typ,
    closure,
    exceptions,
    maximal_elements,
    typical_examples,
    validate_order,
)


def concept(members, order=()):
    return Concept("k", tuple(members), tuple(order))


def brute_force(c):
    """Closure by fixpoint iteration, then exceptions/maximal/typical by definition."""
    rel = {(m, m) for m in c.members} | set(c.order)
    while True:
        extra = {(a, d) for a, b in rel for b2, d in rel if b == b2} - rel
        if not extra:
            break
        rel |= extra
    strict = {(a, b) for a, b in rel if a != b}
    exc = {m for m in c.members if not any(m in p for p in strict)}
    maximal = {m for m in c.members if not any(a == m for a, _ in strict)}
    return rel, exc, maximal, maximal - exc


def random_poset(rng, n):
    """Random DAG on n members, oriented along a shuffled ranking."""
    members = [f"e{k}" for k in range(n)]
    rank = members[:]
    rng.shuffle(rank)
    order = [(rank[i], rank[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3]
    return concept(members, order)


class TestValidate:
    def test_empty_order(self):
        assert validate_order(concept(["a", "b"])).valid

    def test_two_cycle(self):
        v = validate_order(concept(["a", "b"], [("a", "b"), ("b", "a")]))
        assert not v.valid
        assert v.witness == ("a", "b")

    def test_chain_closure(self):
        c = concept("abc", [("a", "b"), ("b", "c")])
        assert validate_order(c).valid
        assert ("a", "c") in closure(c)

    def test_closure_matches_brute_force(self):
        rng = random.Random(1)
        for _ in range(50):
            c = random_poset(rng, rng.randint(1, 8))
            assert closure(c) == brute_force(c)[0]

    def test_removing_off_cycle_edge_keeps_violation(self):
        rng = random.Random(2)
        for _ in range(100):
            n = rng.randint(2, 7)
            members = [f"e{k}" for k in range(n)]
            order = [(a, b) for a in members for b in members if a != b and rng.random() < 0.25]
            c = concept(members, order)
            v = validate_order(c)
            if v.valid:
                continue
            for edge in set(order) - set(v.cycle):
                reduced = concept(members, [p for p in order if p != edge])
                assert not validate_order(reduced).valid

    def test_invalid_order_blocks_queries(self):
        with pytest.raises(InvalidOrderError):
            exceptions(concept("ab", [("a", "b"), ("b", "a")]))


class TestExceptionsAndTypical:
    def test_singleton(self):
        assert exceptions(concept(["a"])) == {"a"}

    def test_chain_plus_isolated(self):
        c = concept("abcd", [("a", "b"), ("b", "c")])
        assert exceptions(c) == {"d"}
        assert typical_examples(c) == {"c"}

    def test_total_order(self):
        c = concept("abc", [("a", "b"), ("b", "c"), ("a", "c")])
        assert exceptions(c) == set()

    def test_two_chains(self, two_chains):
        c = two_chains.concept("k")
        assert typical_examples(c) == {"c", "d"}

    def test_antichain(self):
        c = concept("abc")
        assert typical_examples(c) == set()
        assert exceptions(c) == {"a", "b", "c"}

    @settings(max_examples=200)
    @given(st.integers(1, 8), st.randoms(use_true_random=False))
    def test_typical_within_maximal_and_disjoint_from_exceptions(self, n, rng):
        c = random_poset(rng, n)
        typ, exc, mx = typical_examples(c), exceptions(c), maximal_elements(c)
        assert typ <= mx
        assert not typ & exc
        _, exc2, mx2, typ2 = brute_force(c)
        assert (exc, mx, typ) == (exc2, mx2, typ2)


class TestTyp:
    def test_berlin_rome(self, berlin_rome):
        out = apply_typ(berlin_rome, "city", "berlin", "rome", "transportation")
        assert out.value == frozenset({"underground", "buses", "taxis"})
        assert out.modality is Modality.PLAUSIBLE
        assert out.rule is Rule.TYP
        assert out.target == "rome"

    def test_reflexive(self, berlin_rome):
        out = apply_typ(berlin_rome, "city", "berlin", "berlin", "transportation")
        assert out.value == berlin_rome.instance("berlin")["transportation"]
        assert out.consistent is True

    def test_not_relevant(self, berlin_rome):
        with pytest.raises(RuleInapplicableError, match="relevant"):
            apply_typ(berlin_rome, "city", "berlin", "rome", "country")

    def test_not_typical(self, berlin_rome):
        with pytest.raises(RuleInapplicableError, match="tipex"):
            apply_typ(berlin_rome, "city", "rome", "berlin", "transportation")

    def test_not_below(self, two_chains):
        with pytest.raises(RuleInapplicableError, match="below"):
            apply_typ(two_chains, "k", "c", "b", "transportation")

    def test_antichain_never_fires(self):
        schema = (AspectSchema("t"),)
        insts = tuple(Instance(i, {"t": frozenset({i})}) for i in "abc")
        kb = KnowledgeBase(schema, insts, (), (Concept("k", ("a", "b", "c"), (), {m: ["t"] for m in "abc"}),))
        for s in "abc":
            for t in "abc":
                with pytest.raises(RuleInapplicableError):
                    apply_typ(kb, "k", s, t, "t")

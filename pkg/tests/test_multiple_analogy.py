import pytest
from hypothesis import given
from hypothesis import strategies as st

from analogia.case_studies import CorroborationReport
from analogia.data import fixture_text
from analogia.model import AspectSchema, Instance, KnowledgeBase, make_instance
from analogia.multiple_analogy import (
    GENERATION,
    JUSTIFICATION,
    Condition,
    Hypothesis,
    HypothesisError,
    Problem,
    SourceMatch,
    SpecificationError,
    corroborate,
    form_hypothesis,
    heuristic_loop,
    hypothesis_from_document,
    load_problem,
    match_conditions,
)

TALALY_GEN = [("i", "a"), ("ii", "b"), ("iii", "b")]
TALALY_JUST = [("iv", "a"), ("v", "b"), ("vi", "a")]


@pytest.fixture
def mengoli():
    return load_problem(fixture_text("mengoli"))


@pytest.fixture
def talaly():
    return load_problem(fixture_text("talaly"))


class TestCondition:
    def test_ops(self):
        inst = make_instance("x", tags=["p", "q"], size=3)
        assert Condition("c", "tags", "contains", "p").holds(inst)
        assert Condition("c", "tags", "equals", ["q", "p"]).holds(inst)
        assert Condition("c", "size", "range", [2, 4]).holds(inst)
        assert not Condition("c", "size", "equals", 2).holds(inst)
        assert not Condition("c", "missing", "contains", "p").holds(inst)

    def test_unknown_op(self):
        with pytest.raises(ValueError):
            Condition("c", "tags", "like", "p")

    def test_duplicate_names(self):
        c = Condition("c", "tags", "contains", "p")
        with pytest.raises(ValueError):
            Problem("p", conditions=(c, c))


class TestMatch:
    def test_mengoli_algebra_source(self, mengoli):
        matches = {m.source: m for m in match_conditions(mengoli.problem, mengoli.corpus.instances)}
        algebra = matches["algebraic-root-coefficient-relation"]
        assert algebra.satisfied == ("b",)
        assert "a" in algebra.unsatisfied

    def test_full_match_first(self):
        conds = (Condition("x", "t", "contains", "p"), Condition("y", "t", "contains", "q"))
        corpus = [make_instance("half", t=["p"]), make_instance("full", t=["p", "q"])]
        out = match_conditions(Problem("p", conditions=conds), corpus)
        assert out[0] == SourceMatch("full", ("x", "y"), ())

    def test_ties_by_id(self):
        conds = (Condition("x", "t", "contains", "p"),)
        corpus = [make_instance(i, t=["p"]) for i in ("c", "a", "b")]
        assert [m.source for m in match_conditions(Problem("p", conditions=conds), corpus)] == ["a", "b", "c"]

    def test_no_matches(self):
        conds = (Condition("x", "t", "contains", "zzz"),)
        assert match_conditions(Problem("p", conditions=conds), [make_instance("a", t=["p"])]) == []

    def test_unknown_aspect(self):
        conds = (Condition("x", "nope", "contains", "p"),)
        with pytest.raises(SpecificationError):
            match_conditions(Problem("p", conditions=conds), [], {"t": AspectSchema("t")})

    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            SourceMatch("s", ("a",), ("a",))


class TestHypothesis:
    def test_talaly_formation(self):
        h = form_hypothesis("talaly", TALALY_GEN)
        assert h.support == {"a": {"i"}, "b": {"ii", "iii"}}
        assert h.reading == "a or b"
        assert all(roles == {GENERATION} for roles in h.provenance.values())

    def test_single(self):
        h = form_hypothesis("p", [("s", "x")])
        assert h.scores == {"x": 1}

    def test_aggregation(self):
        h = form_hypothesis("p", [("s", "x"), ("t", "x")])
        assert h.interpretations == ("x",)
        assert h.score("x") == 2

    def test_empty(self):
        with pytest.raises(HypothesisError):
            form_hypothesis("p", [])

    def test_talaly_corroboration(self):
        h = corroborate(form_hypothesis("talaly", TALALY_GEN), TALALY_JUST)
        assert h.support == {"a": {"i", "iv", "vi"}, "b": {"ii", "iii", "v"}}
        assert h.scores == {"a": 3, "b": 3}
        assert h.provenance["iv"] == {JUSTIFICATION}

    def test_empty_corroboration(self):
        h = form_hypothesis("talaly", TALALY_GEN)
        assert corroborate(h, []) == h

    def test_dual_role(self):
        h = corroborate(form_hypothesis("talaly", TALALY_GEN), [("i", "a")])
        assert h.support["a"] == {"i"}
        assert h.provenance["i"] == {GENERATION, JUSTIFICATION}
        assert h.dual_use_sources() == ["i"]

    def test_support_without_role_rejected(self):
        with pytest.raises(HypothesisError):
            Hypothesis("h", {"a": {"s"}}, {})

    @given(
        st.lists(st.tuples(st.sampled_from("pqrs"), st.sampled_from("xy")), min_size=1, max_size=6),
        st.lists(st.lists(st.tuples(st.sampled_from("pqrstu"), st.sampled_from("xyz")), max_size=4), max_size=4),
    )
    def test_monotone_and_complete(self, first, rounds):
        h = form_hypothesis("p", first)
        for batch in rounds:
            nxt = corroborate(h, batch)
            for k, v in h.support.items():
                assert v <= nxt.support[k]
            h = nxt
            assert h.scores == {k: len(v) for k, v in h.support.items()}
            for sources in h.support.values():
                assert all(h.provenance[s] for s in sources)


class TestDocuments:
    def test_talaly_document(self, talaly):
        h = hypothesis_from_document(talaly)
        assert h.support == {"h_a": {"i", "iv", "vi"}, "h_b": {"ii", "iii", "v"}}
        assert h.scores == {"h_a": 3, "h_b": 3}
        assert h.dual_use_sources()

    def test_mengoli_document(self, mengoli):
        assert [c.name for c in mengoli.problem.conditions] == ["a", "b", "c"]
        assert hypothesis_from_document(mengoli) is None


def fake_checkers(passed=True):
    report = CorroborationReport("fake", 1, (), 0.0, 0.0, passed)
    return {name: (lambda: [report]) for name in ("basel-limit", "polya-c1", "leibniz-c2")}


class TestLoop:
    def test_mengoli_trace(self, mengoli):
        steps = heuristic_loop(mengoli.problem, mengoli.corpus)
        final = steps[-1]
        assert "(I) finite -> infinite" in final.open_hypotheses
        assert "(II) algebra -> trigonometry" in final.open_hypotheses
        reports = [r for s in steps for r in s.reports]
        assert reports and all(r.passed for r in reports)
        assert set(final.covered) == {"a", "b", "c"}
        assert final.hypothesis.provenance["check:polya-c1"] == {JUSTIFICATION}

    def test_failed_checks_not_credited(self, mengoli):
        steps = heuristic_loop(mengoli.problem, mengoli.corpus, checkers=fake_checkers(False))
        assert not any(s.startswith("check:") for s in steps[-1].hypothesis.provenance)

    def test_single_iteration(self, mengoli):
        assert len(heuristic_loop(mengoli.problem, mengoli.corpus, max_iterations=1)) == 1

    def test_no_matches(self):
        kb = KnowledgeBase((AspectSchema("t"),), (Instance("a", {"t": frozenset({"p"})}),))
        problem = Problem("p", conditions=(Condition("x", "t", "contains", "zzz"),))
        steps = heuristic_loop(problem, kb)
        assert len(steps) == 1
        assert steps[0].hypothesis is None and steps[0].selected is None

    def test_deterministic(self, mengoli):
        run = lambda: [s.to_dict() for s in heuristic_loop(mengoli.problem, mengoli.corpus, checkers=fake_checkers())]
        assert run() == run()

    def test_unregistered_check(self, mengoli):
        with pytest.raises(SpecificationError):
            heuristic_loop(mengoli.problem, mengoli.corpus, checkers={})

    def test_bad_iterations(self, mengoli):
        with pytest.raises(ValueError):
            heuristic_loop(mengoli.problem, mengoli.corpus, max_iterations=0)

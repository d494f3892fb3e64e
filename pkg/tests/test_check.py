from conftest import theory
from defeasidl import generator
from defeasidl.check import check_theory, minimize, minimize_failure
from defeasidl.theory import DefeasibleTheory


def test_corpus_theories_agree(tweety, platypus, nonstrat):
    for t in (tweety, platypus, nonstrat):
        result = check_theory(t)
        assert result.agree, result.failures


def test_invalid_theory_reported_not_crashed():
    result = check_theory(theory("r1: p => q.\nr1 > r1."))
    assert not result.agree
    assert result.failures_in("validation")


def test_empty_universe_skips_evaluation():
    result = check_theory(theory("r: p(X) => q(X)."))
    assert result.agree
    assert result.skipped_eval


def test_failure_categories_are_sliceable(rng):
    result = check_theory(generator.random_ground_theory(rng))
    assert result.agree
    assert result.failures_in("oracle-team") == []


def test_minimize_shrinks_to_a_small_witness(tweety):
    # Shrink against a synthetic predicate: "some defeasible rule for neg fly
    # survives".  The minimizer must keep the predicate true while removing
    # everything else.
    def has_neg_fly_rule(t: DefeasibleTheory) -> bool:
        return any(r.head.predicate == "fly" and r.head.negated for r in t.rules)

    small = minimize(tweety, has_neg_fly_rule)
    assert has_neg_fly_rule(small)
    assert len(small.rules) == 1
    assert small.facts == frozenset()
    assert small.superiority == frozenset()


def test_minimize_failure_returns_none_when_agreeing(tweety):
    assert minimize_failure(tweety) is None


def test_mismatched_head_patterns_agree_with_oracle():
    # The defeat clause is keyed on the defender's head vector even when the
    # attacker's pattern differs (diagonal vs general); the ground-level
    # differential is the correctness argument.
    t = theory(
        "r(a, b).\np(a, a).\n"
        "s: p(X, X) => neg q(X, X).\n"
        "t: r(X, Y) => q(X, Y).\n"
        "t > s.\n"
    )
    result = check_theory(t)
    assert result.agree, result.failures
    c = __import__("defeasidl").conclusions(t)
    want = {"q(a, b)", "neg q(a, a)", "r(a, b)", "p(a, a)"}
    assert {str(l) for l in c.dpar} == want


def test_compiling_a_ground_theory_directly_agrees(tweety):
    from defeasidl.theory import DefeasibleTheory, ground_theory

    g = ground_theory(tweety)
    flat = DefeasibleTheory.of(g.facts, g.rules, g.superiority)
    result = check_theory(flat, "ground-tweety")
    assert result.agree, result.failures

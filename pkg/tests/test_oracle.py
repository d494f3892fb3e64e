import pytest

from conftest import lit, theory
from defeasidl import generator
from defeasidl.oracle import (
    conclusions,
    delta_closure,
    dpar_closure,
    dpar_star_closure,
    lambda_closure,
)
from defeasidl.theory import DefeasibleTheory, EmptyUniverse, ground_theory


def lits(*texts):
    return {lit(t) for t in texts}


TWEETY_DELTA = lits("penguin(tweety)", "bird(tweety)", "bird(freddie)", "injured(freddie)")


class TestTweety:
    def test_delta(self, tweety):
        assert delta_closure(ground_theory(tweety)) == TWEETY_DELTA

    def test_lambda(self, tweety):
        c = conclusions(tweety)
        assert c.lam == TWEETY_DELTA | lits("fly(tweety)", "fly(freddie)", "neg fly(tweety)")

    def test_dpar(self, tweety):
        c = conclusions(tweety)
        assert c.dpar == TWEETY_DELTA | lits("neg fly(tweety)")
        assert lit("fly(freddie)") not in c.dpar

    def test_dpar_star_matches_team_here(self, tweety):
        c = conclusions(tweety)
        assert c.dpar_star == c.dpar


class TestPlatypus:
    def test_team_defeat_infers_mammal(self, platypus):
        assert lit("mammal(platypus)") in conclusions(platypus).dpar

    def test_individual_defeat_infers_neither(self, platypus):
        star = conclusions(platypus).dpar_star
        assert lit("mammal(platypus)") not in star
        assert lit("neg mammal(platypus)") not in star


class TestClosureBasics:
    def test_strict_chain_ignores_defeasible(self):
        g = ground_theory(theory("a.\nr: a -> b.\ns: b => c."))
        assert delta_closure(g) == lits("a", "b")

    def test_no_base_case_gives_empty_delta(self):
        g = ground_theory(theory("r: p => q.\ns: q -> p."))
        assert delta_closure(g) == set()

    def test_self_support_yields_nothing(self):
        c = conclusions(theory("r: p => p."))
        assert c.delta == c.lam == c.dpar == c.dpar_star == frozenset()

    def test_facts_only_theory(self):
        c = conclusions(theory("p(a)."))
        assert c.delta == c.lam == c.dpar == c.dpar_star == lits("p(a)")

    def test_empty_theory(self):
        c = conclusions(DefeasibleTheory())
        assert c.delta == frozenset()
        assert c.dpar_star == frozenset()

    def test_empty_universe_propagates(self):
        with pytest.raises(EmptyUniverse):
            conclusions(theory("r: p(X) => q(X)."))

    def test_delta_always_in_lambda(self, rng):
        for _ in range(100):
            g = ground_theory(generator.random_ground_theory(rng))
            delta = delta_closure(g)
            assert delta <= lambda_closure(g, delta)


class TestDefeat:
    def test_defeater_blocks_but_never_concludes(self):
        t = theory("bird(b).\ninjured(b).\nr1: bird(X) => fly(X).\nr4: injured(X) ~> neg fly(X).")
        c = conclusions(t)
        assert lit("fly(b)") not in c.dpar
        assert lit("neg fly(b)") not in c.lam  # defeaters do not support lambda

    def test_beaten_defeater_does_not_block(self):
        t = theory(
            "bird(b).\ninjured(b).\nr1: bird(X) => fly(X).\n"
            "r4: injured(X) ~> neg fly(X).\nr1 > r4."
        )
        c = conclusions(t)
        assert lit("fly(b)") in c.dpar
        assert lit("fly(b)") in c.dpar_star

    def test_inapplicable_attacker_is_ignored(self):
        t = theory("a.\nr1: a => p.\nr2: b => neg p.")
        c = conclusions(t)
        assert lit("p") in c.dpar and lit("p") in c.dpar_star

    def test_definite_complement_blocks_potential(self):
        t = theory("a.\nf: neg p.\nr1: a => p.")
        c = conclusions(t)
        assert lit("p") not in c.lam and lit("p") not in c.dpar
        assert lit("neg p") in c.dpar


class TestProperties:
    def test_inclusion_chain_random(self, rng):
        for _ in range(300):
            c = conclusions(generator.random_ground_theory(rng))
            assert c.delta <= c.dpar_star <= c.dpar <= c.lam
            assert c.delta <= c.lam

    def test_consistency_of_team_defeat(self, rng):
        # q and neg q should both be defeasible only when both are definite.
        for _ in range(300):
            c = conclusions(generator.random_ground_theory(rng))
            for l in c.dpar:
                if l.complement() in c.dpar:
                    assert l in c.delta and l.complement() in c.delta

    def test_rule_order_does_not_matter(self, rng):
        for _ in range(50):
            t = generator.random_ground_theory(rng)
            shuffled = list(t.rules)
            rng.shuffle(shuffled)
            t2 = DefeasibleTheory.of(t.facts, shuffled, t.superiority)
            assert conclusions(t).tagged() == conclusions(t2).tagged()

    def test_closures_are_fixpoints(self, rng):
        for _ in range(100):
            g = ground_theory(generator.random_ground_theory(rng))
            delta = delta_closure(g)
            lam = lambda_closure(g, delta)
            dpar = dpar_closure(g, delta, lam)
            star = dpar_star_closure(g, delta, lam)
            # One more closure pass from the result adds nothing.
            assert delta_closure(g) == delta
            assert lambda_closure(g, delta) == lam
            assert dpar_closure(g, delta, lam) == dpar
            assert dpar_star_closure(g, delta, lam) == star

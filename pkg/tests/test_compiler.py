import pytest

from conftest import lit, theory
from defeasidl import corpus, generator
from defeasidl.compiler import (
    compile_individual,
    compile_team,
    compiled_size,
    emit_datalog_text,
    read_conclusions,
)
from defeasidl.datalog import dependency_graph, parse_datalog
from defeasidl.theory import DefeasibleTheory, ValidationFailed, theory_size


WORKED_PAIR = theory(
    "s: p(X, Y), q(Y, X) => neg q(X, Y).\n"
    "t: p(X, Z), neg p(Z, Y) => q(X, Y).\n"
    "t > s.\n"
)

# The eleven clauses the worked two-rule example compiles to (team defeat).
WORKED_PAIR_EXPECTED = """
lambda__q(X, Y) :- body__t__lam(X, Y), not definitely__not__q(X, Y).
lambda__not__q(X, Y) :- body__s__lam(X, Y), not definitely__q(X, Y).
defeasibly__q(X, Y) :- body__t__d(X, Y), not definitely__not__q(X, Y), not overruled__q(X, Y).
defeasibly__not__q(X, Y) :- body__s__d(X, Y), not definitely__q(X, Y), not overruled__not__q(X, Y).
body__t__lam(X, Y) :- lambda__p(X, Z), lambda__not__p(Z, Y).
body__s__lam(X, Y) :- lambda__p(X, Y), lambda__q(Y, X).
body__t__d(X, Y) :- defeasibly__p(X, Z), defeasibly__not__p(Z, Y).
body__s__d(X, Y) :- defeasibly__p(X, Y), defeasibly__q(Y, X).
overruled__not__q(X, Y) :- body__t__lam(X, Y), not defeated__q(t, X, Y).
overruled__q(X, Y) :- body__s__lam(X, Y), not defeated__not__q(s, X, Y).
defeated__not__q(s, X, Y) :- body__t__d(X, Y).
"""


def clause_set(program):
    return set(program.clauses)


class TestTeamSchemata:
    def test_worked_pair_is_the_eleven_clauses(self):
        out = compile_team(WORKED_PAIR)
        assert len(out.program.clauses) == 11
        assert clause_set(out.program) == clause_set(parse_datalog(WORKED_PAIR_EXPECTED))

    def test_strict_rule_compiles_to_four_clauses(self):
        out = compile_team(theory("r3: penguin(X) -> bird(X)."))
        expected = parse_datalog(
            "definitely__bird(X) :- body__r3__delta(X).\n"
            "lambda__bird(X) :- body__r3__delta(X).\n"
            "defeasibly__bird(X) :- body__r3__delta(X).\n"
            "body__r3__delta(X) :- definitely__penguin(X).\n"
            # A strict rule is also strict-or-defeasible:
            "lambda__bird(X) :- body__r3__lam(X), not definitely__not__bird(X).\n"
            "defeasibly__bird(X) :- body__r3__d(X), not definitely__not__bird(X),"
            " not overruled__bird(X).\n"
            "body__r3__lam(X) :- lambda__penguin(X).\n"
            "body__r3__d(X) :- defeasibly__penguin(X).\n"
            "overruled__not__bird(X) :- body__r3__lam(X), not defeated__bird(r3, X).\n"
        )
        assert clause_set(out.program) == clause_set(expected)
        c15_to_c18 = [c for c, info in out.provenance.items() if info.schema in
                      ("C15", "C16", "C17", "C18")]
        assert len(c15_to_c18) == 4

    def test_empty_theory_compiles_to_empty_program(self):
        out = compile_team(DefeasibleTheory())
        assert out.program.clauses == ()
        assert emit_datalog_text(out) == ""

    def test_fact_unit_clauses(self):
        out = compile_team(theory("p(a)."))
        expected = parse_datalog("definitely__p(a).\nlambda__p(a).\ndefeasibly__p(a).")
        assert clause_set(out.program) == clause_set(expected)

    def test_defeaters_get_lambda_bodies_only(self, tweety):
        out = compile_team(tweety)
        preds = out.program.predicates
        assert "body__r4__lam" in preds
        assert "body__r4__d" not in preds
        assert "body__r4__delta" not in preds

    def test_inert_superiority_compiles_to_nothing(self):
        inert = theory("r1: => p.\nr2: => q.\nr1 > r2.")
        plain = theory("r1: => p.\nr2: => q.")
        assert clause_set(compile_team(inert).program) == clause_set(compile_team(plain).program)

    def test_defeater_superior_compiles_to_nothing(self):
        t = theory("r1: a ~> p.\nr2: => neg p.\nr1 > r2.")
        out = compile_team(t)
        assert not any(info.schema == "C24" for info in out.provenance.values())


class TestIndividualSchemata:
    def test_defeats_unit_clauses_per_pair(self, platypus):
        out = compile_individual(platypus)
        units = [c for c, info in out.provenance.items() if info.schema == "C24"]
        assert len(units) == 2
        # Indexed by the inferior (attacking) rule's head literal.
        texts = sorted(str(c) for c in units)
        assert texts == [
            "defeats__not__mammal(r1, r3).",
            "defeats__not__mammal(r2, r4).",
        ]

    def test_superiority_free_theory_has_no_defeats_units(self, tweety):
        bare = DefeasibleTheory.of(tweety.facts, tweety.rules, frozenset())
        out = compile_individual(bare)
        units = [c for c in out.program.clauses if not c.positive and not c.negative]
        assert not any(c.head.predicate.startswith("defeats__") for c in units)

    def test_overruled_is_rule_indexed(self, tweety):
        out = compile_individual(tweety)
        text = emit_datalog_text(out)
        assert "overruled__not__fly(r2, X) :- body__r1__lam(X), not defeats__fly(r2, r1)." in text
        assert "defeasibly__not__fly(X) :- body__r2__d(X), not definitely__fly(X)," \
               " not overruled__not__fly(r2, X)." in text


class TestCompileGuards:
    def test_validation_failure_raises(self):
        bad = DefeasibleTheory.of(facts=[lit("fly(X)")])
        with pytest.raises(ValidationFailed):
            compile_team(bad)

    def test_floor_is_downward_closed(self, tweety, nonstrat):
        for t in (tweety, nonstrat, WORKED_PAIR):
            for out in (compile_team(t), compile_individual(t)):
                floor = out.floor_names
                graph = dependency_graph(out.program)
                assert not any(p in floor and q not in floor for p, q, _ in graph.edges)

    def test_deterministic_output(self, tweety):
        a = emit_datalog_text(compile_team(tweety))
        b = emit_datalog_text(compile_team(tweety))
        assert a == b


class TestEmission:
    def test_round_trip_corpus(self):
        for name in corpus.names():
            t = corpus.load(name)
            for out in (compile_team(t), compile_individual(t)):
                reparsed = parse_datalog(emit_datalog_text(out))
                assert clause_set(reparsed) == clause_set(out.program)

    def test_round_trip_random(self, rng):
        for _ in range(50):
            t = generator.random_ground_theory(rng)
            out = compile_team(t)
            assert clause_set(parse_datalog(emit_datalog_text(out))) == clause_set(out.program)

    def test_worked_pair_emits_paper_line(self):
        text = emit_datalog_text(compile_team(WORKED_PAIR))
        assert "overruled__not__q(X, Y) :- body__t__lam(X, Y), not defeated__q(t, X, Y)." in text


def replicate(theory_obj: DefeasibleTheory, copies: int) -> DefeasibleTheory:
    """Disjoint renamed copies of a theory, for the linear-size family."""
    from defeasidl.parser import format_theory, parse_theory
    import re

    chunks = []
    for k in range(copies):
        text = format_theory(theory_obj)
        text = re.sub(
            r"\b([a-z][A-Za-z0-9_]*)\b",
            lambda m, k=k: m.group(1) if m.group(1) == "neg" else f"{m.group(1)}_c{k}",
            text,
        )
        chunks.append(text)
    combined = parse_theory("\n".join(chunks))
    assert isinstance(combined, DefeasibleTheory)
    return combined


class TestSizes:
    def test_empty_theory_size_zero(self):
        assert compiled_size(compile_team(DefeasibleTheory())) == 0

    def test_single_fact_three_unit_clauses(self):
        out = compile_team(theory("p(a)."))
        assert compiled_size(out) == 9  # three unit clauses of (marker + pred + arg)

    def test_linear_family_ratio_constant(self, tweety):
        ratios_team = []
        ratios_indiv = []
        for k in (1, 2, 4, 8):
            family = replicate(tweety, k)
            size = theory_size(family)
            ratios_team.append(compiled_size(compile_team(family)) / size)
            ratios_indiv.append(compiled_size(compile_individual(family)) / size)
        assert max(ratios_team) - min(ratios_team) < 1e-9
        assert max(ratios_indiv) - min(ratios_indiv) < 1e-9


class TestReadback:
    def test_round_trip_literals(self, tweety):
        out = compile_team(tweety)
        atoms = [
            ("defeasibly__not__fly", ("tweety",)),
            ("definitely__bird", ("freddie",)),
            ("lambda__penguin", ("tweety",)),
            ("body__r1__lam", ("tweety",)),  # not a tagged-literal predicate: ignored
        ]
        sets = read_conclusions(out, atoms)
        assert sets["defeasibly"] == {lit("neg fly(tweety)")}
        assert sets["definitely"] == {lit("bird(freddie)")}
        assert sets["lambda"] == {lit("penguin(tweety)")}

"""Compiler from defeasible theories to Datalog-with-negation programs.

Two targets share most of their clauses.  Team defeat:

    definitely_q(a)  :- body_r_delta(a).                 (C15, strict r)
    lambda_q(a)      :- body_r_delta(a).                 (C16, strict r)
    defeasibly_q(a)  :- body_r_delta(a).                 (C17, strict r)
    body_r_delta(a)  :- definitely_q1(a1), ...           (C18, strict r)
    lambda_q(a)      :- body_r_lam(a), not definitely_~q(a).            (C19)
    defeasibly_q(a)  :- body_r_d(a), not definitely_~q(a),
                        not overruled_q(a).                             (C20)
    body_r_lam(a)    :- lambda_q1(a1), ...               (C21, every rule)
    body_r_d(a)      :- defeasibly_q1(a1), ...           (C22, strict/defeasible)
    overruled_~h(b)  :- body_s_lam(b), not defeated_h(s, b).  (C23, every rule s)
    defeated_~q(s,a) :- body_t_d(a).                     (C24, per t > s)

plus three unit clauses per fact.  Individual defeat replaces C20/C23/C24
by a rule-indexed variant: the defeasibly clause negates overruled_q(r, a)
(C25), overruled carries the defending rule's label and consults a
defeats fact (C26), and each consumed superiority pair emits the unit
clause defeats_h(r, s) (tagged C24, being that mode's defeat clause).
Superiority pairs whose rules do not have complementary heads, or whose
superior rule is a defeater, compile to nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .datalog import DatalogProgram, DClause
from .mangling import (
    FLAVOR_D,
    FLAVOR_DELTA,
    FLAVOR_LAM,
    TAG_DEFEASIBLY,
    TAG_DEFEATED,
    TAG_DEFEATS,
    TAG_DEFINITELY,
    TAG_LAMBDA,
    TAG_OVERRULED,
    MangledPredicate,
    body_pred,
    literal_pred,
)
from .theory import (
    Atom,
    DefeasibleTheory,
    Literal,
    Rule,
    RuleKind,
    Term,
    ValidationFailed,
    validate_theory,
)

TEAM = "team"
INDIVIDUAL = "individual"

SCHEMA_FACT = "fact"


@dataclass(frozen=True)
class ClauseInfo:
    source: str  # rule label, superiority pair, or fact text
    schema: str  # "fact" or "C15".."C26"


@dataclass
class CompilationOutput:
    program: DatalogProgram
    floor: frozenset[MangledPredicate]
    provenance: dict[DClause, ClauseInfo]
    mode: str
    predicate_info: dict[str, MangledPredicate]

    @property
    def floor_names(self) -> frozenset[str]:
        return frozenset(mp.name for mp in self.floor)


class _Emitter:
    def __init__(self, mode: str):
        self.mode = mode
        self.clauses: list[DClause] = []
        self.provenance: dict[DClause, ClauseInfo] = {}
        self.predicate_info: dict[str, MangledPredicate] = {}

    def atom(self, mp: MangledPredicate, args: tuple[Term, ...]) -> Atom:
        self.predicate_info[mp.name] = mp
        return Atom(mp.name, args)

    def lit_atom(self, tag: str, lit: Literal, extra: tuple[Term, ...] = ()) -> Atom:
        return self.atom(literal_pred(tag, lit), extra + lit.args)

    def body_atom(self, rule: Rule, flavor: str) -> Atom:
        return self.atom(body_pred(rule.label, flavor), rule.head.args)

    def emit(self, clause: DClause, source: str, schema: str) -> None:
        self.clauses.append(clause)
        self.provenance[clause] = ClauseInfo(source, schema)

    def finish(self) -> CompilationOutput:
        floor = frozenset(mp for mp in self.predicate_info.values() if mp.is_floor)
        return CompilationOutput(
            program=DatalogProgram(tuple(self.clauses)),
            floor=floor,
            provenance=self.provenance,
            mode=self.mode,
            predicate_info=self.predicate_info,
        )


def _consumed_superiority(theory: DefeasibleTheory) -> list[tuple[Rule, Rule]]:
    """(superior, inferior) rule pairs that actually produce defeat clauses:
    the superior rule is strict or defeasible and the heads are complementary."""
    rule_map = theory.rule_map()
    pairs = []
    for t, s in sorted(theory.superiority):
        sup, inf = rule_map[t], rule_map[s]
        if not sup.is_strict_or_defeasible:
            continue
        if sup.head.predicate != inf.head.predicate or sup.head.negated == inf.head.negated:
            continue
        pairs.append((sup, inf))
    return pairs


def _compile(theory: DefeasibleTheory, mode: str) -> CompilationOutput:
    report = validate_theory(theory)
    if not report.ok:
        raise ValidationFailed(report)
    em = _Emitter(mode)

    for fact in sorted(theory.facts):
        for tag in (TAG_DEFINITELY, TAG_LAMBDA, TAG_DEFEASIBLY):
            em.emit(DClause(em.lit_atom(tag, fact)), str(fact), SCHEMA_FACT)

    strict = [r for r in theory.rules if r.kind is RuleKind.STRICT]
    sd = [r for r in theory.rules if r.is_strict_or_defeasible]

    for r in strict:
        delta_body = (em.body_atom(r, FLAVOR_DELTA),)
        em.emit(DClause(em.lit_atom(TAG_DEFINITELY, r.head), delta_body), r.label, "C15")
        em.emit(DClause(em.lit_atom(TAG_LAMBDA, r.head), delta_body), r.label, "C16")
        em.emit(DClause(em.lit_atom(TAG_DEFEASIBLY, r.head), delta_body), r.label, "C17")
        em.emit(
            DClause(
                em.body_atom(r, FLAVOR_DELTA),
                tuple(em.lit_atom(TAG_DEFINITELY, b) for b in r.body),
            ),
            r.label,
            "C18",
        )

    for r in sd:
        em.emit(
            DClause(
                em.lit_atom(TAG_LAMBDA, r.head),
                (em.body_atom(r, FLAVOR_LAM),),
                (em.lit_atom(TAG_DEFINITELY, r.head.complement()),),
            ),
            r.label,
            "C19",
        )

    if mode == TEAM:
        for r in sd:
            em.emit(
                DClause(
                    em.lit_atom(TAG_DEFEASIBLY, r.head),
                    (em.body_atom(r, FLAVOR_D),),
                    (
                        em.lit_atom(TAG_DEFINITELY, r.head.complement()),
                        em.lit_atom(TAG_OVERRULED, r.head),
                    ),
                ),
                r.label,
                "C20",
            )
    else:
        for r in sd:
            em.emit(
                DClause(
                    em.lit_atom(TAG_DEFEASIBLY, r.head),
                    (em.body_atom(r, FLAVOR_D),),
                    (
                        em.lit_atom(TAG_DEFINITELY, r.head.complement()),
                        em.lit_atom(TAG_OVERRULED, r.head, extra=(Term(r.label),)),
                    ),
                ),
                r.label,
                "C25",
            )

    for r in theory.rules:  # lambda-bodies exist for defeaters too: overruled needs them
        em.emit(
            DClause(
                em.body_atom(r, FLAVOR_LAM),
                tuple(em.lit_atom(TAG_LAMBDA, b) for b in r.body),
            ),
            r.label,
            "C21",
        )
    for r in sd:  # d-bodies of defeaters are never referenced
        em.emit(
            DClause(
                em.body_atom(r, FLAVOR_D),
                tuple(em.lit_atom(TAG_DEFEASIBLY, b) for b in r.body),
            ),
            r.label,
            "C22",
        )

    if mode == TEAM:
        for s in theory.rules:
            em.emit(
                DClause(
                    em.lit_atom(TAG_OVERRULED, s.head.complement()),
                    (em.body_atom(s, FLAVOR_LAM),),
                    (em.lit_atom(TAG_DEFEATED, s.head, extra=(Term(s.label),)),),
                ),
                s.label,
                "C23",
            )
        for sup, inf in _consumed_superiority(theory):
            em.emit(
                DClause(
                    em.lit_atom(TAG_DEFEATED, sup.head.complement(), extra=(Term(inf.label),)),
                    (em.body_atom(sup, FLAVOR_D),),
                ),
                f"{sup.label} > {inf.label}",
                "C24",
            )
    else:
        for s in theory.rules:
            defended = s.head.complement()
            for r in sd:
                if r.head.predicate != defended.predicate or r.head.negated != defended.negated:
                    continue
                em.emit(
                    DClause(
                        em.lit_atom(TAG_OVERRULED, defended, extra=(Term(r.label),)),
                        (em.body_atom(s, FLAVOR_LAM),),
                        (
                            em.atom(
                                literal_pred(TAG_DEFEATS, s.head),
                                (Term(r.label), Term(s.label)),
                            ),
                        ),
                    ),
                    f"{r.label} | {s.label}",
                    "C26",
                )
        for sup, inf in _consumed_superiority(theory):
            em.emit(
                DClause(
                    em.atom(
                        literal_pred(TAG_DEFEATS, inf.head),
                        (Term(sup.label), Term(inf.label)),
                    )
                ),
                f"{sup.label} > {inf.label}",
                "C24",
            )
    return em.finish()


def compile_team(theory: DefeasibleTheory) -> CompilationOutput:
    """Compile for the team-defeat consequence relation."""
    return _compile(theory, TEAM)


def compile_individual(theory: DefeasibleTheory) -> CompilationOutput:
    """Compile for the individual-defeat consequence relation; the result
    is stratified for every theory."""
    return _compile(theory, INDIVIDUAL)


def emit_datalog_text(out: CompilationOutput) -> str:
    """Textual program, one clause per line, with provenance comments."""
    lines = []
    for clause in out.program.clauses:
        info = out.provenance[clause]
        lines.append(f"{clause} % {info.schema} {info.source}")
    return "\n".join(lines) + ("\n" if lines else "")


def compiled_size(out: CompilationOutput) -> int:
    """Symbol count under the same counting rule as :func:`theory_size`:
    every predicate and term occurrence, plus one marker per clause."""
    total = 0
    for clause in out.program.clauses:
        total += 1
        for atom in clause.atoms():
            total += 1 + len(atom.args)
    return total


def read_conclusions(out: CompilationOutput, true_atoms) -> dict[str, frozenset[Literal]]:
    """Map true compiled atoms back to tagged source literals.

    ``true_atoms`` iterates (predicate, args) pairs; the result has the
    keys "definitely", "lambda" and "defeasibly".
    """
    sets: dict[str, set[Literal]] = {TAG_DEFINITELY: set(), TAG_LAMBDA: set(), TAG_DEFEASIBLY: set()}
    for pred, args in true_atoms:
        mp = out.predicate_info.get(pred)
        if mp is None or mp.base not in sets:
            continue
        lit = Literal(Atom(mp.source_predicate, tuple(Term(a) for a in args)), mp.negated)
        sets[mp.base].add(lit)
    return {tag: frozenset(lits) for tag, lits in sets.items()}

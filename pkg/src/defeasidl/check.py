"""Differential harness: oracle closures vs the compiled pipelines.

For each theory this checks, against the proof-theoretic oracle, the
positive atom sets of the well-founded models of both compiled programs,
the hybrid (stratified floor + Fitting) backend, the pure stratified
backend where it applies, the structural guarantees of the compilation,
and the subset chain of the four closures.  Failures carry a category
prefix so callers can slice them; a failing theory can be shrunk with
:func:`minimize`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .compiler import (
    CompilationOutput,
    compile_individual,
    compile_team,
    read_conclusions,
)
from .datalog import (
    compute_signing,
    dependency_graph,
    is_call_consistent,
    is_safe,
    stratify,
)
from .evaluator import eval_hybrid, eval_stratified, eval_wellfounded
from .oracle import conclusions
from .theory import (
    DefeasibleTheory,
    EmptyUniverse,
    is_hierarchical,
    is_range_restricted,
    validate_theory,
)


@dataclass
class CheckResult:
    name: str
    failures: list[str] = field(default_factory=list)
    skipped_eval: bool = False

    @property
    def agree(self) -> bool:
        return not self.failures

    def failures_in(self, category: str) -> list[str]:
        return [f for f in self.failures if f.startswith(category + ":")]


def _literals(lits) -> str:
    return "{" + ", ".join(sorted(str(l) for l in lits)) + "}"


def _compare(result: CheckResult, category: str, what: str, got, want) -> None:
    if got != want:
        result.failures.append(
            f"{category}: {what}: got {_literals(got)}, want {_literals(want)}"
        )


def _structural(result: CheckResult, theory: DefeasibleTheory, team: CompilationOutput,
                indiv: CompilationOutput) -> None:
    if stratify(indiv.program) is None:
        result.failures.append("structural: individual-defeat program is not stratified")
    if not is_call_consistent(team.program):
        result.failures.append("structural: team program is not call-consistent")
    if is_hierarchical(theory) is not None and stratify(team.program) is None:
        result.failures.append("structural: hierarchical theory compiled to a non-stratified program")
    rr = is_range_restricted(theory)
    for label, out in (("team", team), ("individual", indiv)):
        if is_safe(out.program) != rr:
            result.failures.append(
                f"structural: {label} safety {is_safe(out.program)} != range-restriction {rr}"
            )
        floor = out.floor_names
        graph = dependency_graph(out.program)
        if any(p in floor and q not in floor for p, q, _ in graph.edges):
            result.failures.append(f"structural: {label} floor is not downward closed")
        floor_program = out.program.restrict_to(floor)
        if stratify(floor_program) is None:
            result.failures.append(f"structural: {label} floor subprogram is not stratified")
        scope = [p for p in out.program.predicates if p not in floor]
        signing = compute_signing(out.program, scope)
        if signing is None:
            result.failures.append(f"structural: {label} above-floor signing not found")
        else:
            for pred in scope:
                base = out.predicate_info[pred].base
                if base == "defeasibly" and signing.sign(pred) != +1:
                    result.failures.append(f"structural: {label} signing gives {pred} sign -1")
                if base == "overruled" and signing.sign(pred) != -1:
                    result.failures.append(f"structural: {label} signing gives {pred} sign +1")


def check_theory(theory: DefeasibleTheory, name: str = "theory") -> CheckResult:
    """Run the full differential and structural battery on one theory."""
    result = CheckResult(name)
    report = validate_theory(theory)
    if not report.ok:
        result.failures.append("validation: " + "; ".join(i.message for i in report.errors))
        return result

    team = compile_team(theory)
    indiv = compile_individual(theory)
    _structural(result, theory, team, indiv)

    try:
        oracle = conclusions(theory)
    except EmptyUniverse:
        result.skipped_eval = True
        return result

    if not (oracle.delta <= oracle.dpar_star <= oracle.dpar <= oracle.lam):
        result.failures.append("chain: closure subset chain violated")

    if not is_safe(team.program):
        result.skipped_eval = True
        return result

    wf_team = eval_wellfounded(team.program)
    wf_indiv = eval_wellfounded(indiv.program)
    got_team = read_conclusions(team, wf_team.true_set)
    got_indiv = read_conclusions(indiv, wf_indiv.true_set)

    _compare(result, "oracle-team", "definitely vs delta", got_team["definitely"], oracle.delta)
    _compare(result, "oracle-team", "lambda", got_team["lambda"], oracle.lam)
    _compare(result, "oracle-team", "defeasibly vs dpar", got_team["defeasibly"], oracle.dpar)
    _compare(result, "oracle-individual", "definitely vs delta", got_indiv["definitely"], oracle.delta)
    _compare(result, "oracle-individual", "lambda", got_indiv["lambda"], oracle.lam)
    _compare(
        result, "oracle-individual", "defeasibly vs dpar_star", got_indiv["defeasibly"], oracle.dpar_star
    )

    for label, out, wf in (("team", team, wf_team), ("individual", indiv, wf_indiv)):
        hybrid = eval_hybrid(out)
        want = wf.true_of(lambda p: out.predicate_info[p].base == "defeasibly")
        got = hybrid.true_of(lambda p: out.predicate_info[p].base == "defeasibly")
        if got != want:
            result.failures.append(
                f"hybrid: {label} defeasibly truths differ: "
                f"got {sorted(map(str, got))}, want {sorted(map(str, want))}"
            )
        if stratify(out.program) is not None:
            strat = eval_stratified(out.program)
            got = strat.true_of(lambda p: out.predicate_info[p].base == "defeasibly")
            if got != want:
                result.failures.append(f"stratified-backend: {label} disagrees with well-founded")
    return result


def minimize(
    theory: DefeasibleTheory, still_failing: Callable[[DefeasibleTheory], bool]
) -> DefeasibleTheory:
    """Greedy one-at-a-time shrink keeping ``still_failing`` true."""
    current = theory
    progress = True
    while progress:
        progress = False
        for rule in current.rules:
            candidate = DefeasibleTheory.of(
                current.facts,
                tuple(r for r in current.rules if r is not rule),
                frozenset(p for p in current.superiority if rule.label not in p),
            )
            if still_failing(candidate):
                current = candidate
                progress = True
                break
        if progress:
            continue
        for fact in sorted(current.facts):
            candidate = DefeasibleTheory.of(
                current.facts - {fact}, current.rules, current.superiority
            )
            if still_failing(candidate):
                current = candidate
                progress = True
                break
        if progress:
            continue
        for pair in sorted(current.superiority):
            candidate = DefeasibleTheory.of(
                current.facts, current.rules, current.superiority - {pair}
            )
            if still_failing(candidate):
                current = candidate
                progress = True
                break
    return current


def minimize_failure(theory: DefeasibleTheory) -> Optional[DefeasibleTheory]:
    """Shrink a theory on which :func:`check_theory` reports failures."""
    if check_theory(theory).agree:
        return None

    def still_failing(candidate: DefeasibleTheory) -> bool:
        try:
            return not check_theory(candidate).agree
        except Exception:
            return False

    return minimize(theory, still_failing)

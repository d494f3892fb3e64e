"""Data model for defeasible theories.

A theory is a triple (facts, rules, superiority): ground facts, labelled
rules of three kinds (strict ``->``, defeasible ``=>``, defeater ``~>``),
and an acyclic priority relation over rule labels.  This module owns
validation, grounding over the Herbrand universe, and the structural
checks (range restriction, hierarchy) that the compiler and the analyses
rely on.  Everything here is immutable and side-effect free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterable, Optional


class EmptyUniverse(Exception):
    """The theory contains variables but no constants to instantiate them."""


class ValidationFailed(Exception):
    """A downstream operation was handed a theory that fails validation."""

    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(issue.message for issue in report.errors))
        self.report = report


def _check_name(name: str, what: str) -> None:
    if not name or not all(ch.isalnum() or ch == "_" for ch in name):
        raise ValueError(f"malformed {what} name: {name!r}")
    first = name[0]
    if not (first.isalpha() or first.isdigit()):
        raise ValueError(f"{what} name must start with a letter or digit: {name!r}")


@dataclass(frozen=True, order=True)
class Term:
    """A variable (uppercase-initial) or a constant (lowercase/digit-initial)."""

    name: str

    def __post_init__(self):
        _check_name(self.name, "term")

    @property
    def is_variable(self) -> bool:
        return self.name[0].isupper()

    def __str__(self) -> str:
        return self.name


def var(name: str) -> Term:
    t = Term(name)
    if not t.is_variable:
        raise ValueError(f"not a variable name: {name!r}")
    return t


def const(name: str) -> Term:
    t = Term(name)
    if t.is_variable:
        raise ValueError(f"not a constant name: {name!r}")
    return t


@dataclass(frozen=True, order=True)
class Atom:
    """A predicate applied to terms; arity is fixed per predicate by validation."""

    predicate: str
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        _check_name(self.predicate, "predicate")
        if self.predicate[0].isdigit() or self.predicate[0].isupper():
            raise ValueError(f"predicate must start with a lowercase letter: {self.predicate!r}")

    @property
    def arity(self) -> int:
        return len(self.args)

    def is_ground(self) -> bool:
        return not any(t.is_variable for t in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({', '.join(t.name for t in self.args)})"


@dataclass(frozen=True, order=True)
class Literal:
    """A possibly classically-negated atom."""

    atom: Atom
    negated: bool = False

    @property
    def predicate(self) -> str:
        return self.atom.predicate

    @property
    def args(self) -> tuple[Term, ...]:
        return self.atom.args

    def complement(self) -> "Literal":
        return Literal(self.atom, not self.negated)

    def is_ground(self) -> bool:
        return self.atom.is_ground()

    def __str__(self) -> str:
        return f"neg {self.atom}" if self.negated else str(self.atom)


def complement(lit: Literal) -> Literal:
    """Complementary literal: flips the classical-negation sign (involution)."""
    return lit.complement()


class RuleKind(Enum):
    STRICT = "->"
    DEFEASIBLE = "=>"
    DEFEATER = "~>"

    @property
    def arrow(self) -> str:
        return self.value


@dataclass(frozen=True, order=True)
class Rule:
    """A labelled rule.  The body may be empty; the head is a single literal."""

    label: str
    body: tuple[Literal, ...]
    head: Literal
    kind: RuleKind = RuleKind.DEFEASIBLE

    def __post_init__(self):
        _check_name(self.label, "rule label")
        if self.label[0].isupper():
            raise ValueError(f"rule label must not look like a variable: {self.label!r}")

    @property
    def is_strict_or_defeasible(self) -> bool:
        return self.kind is not RuleKind.DEFEATER

    def variables(self) -> tuple[str, ...]:
        """Distinct variable names, in first-occurrence order (body first)."""
        seen: dict[str, None] = {}
        for lit in (*self.body, self.head):
            for t in lit.args:
                if t.is_variable:
                    seen.setdefault(t.name, None)
        return tuple(seen)

    def __str__(self) -> str:
        body = ", ".join(str(b) for b in self.body)
        sep = f"{body} " if body else ""
        return f"{self.label}: {sep}{self.kind.arrow} {self.head}"


class _TheoryOps:
    """Helpers shared by source theories and their groundings."""

    facts: frozenset[Literal]
    rules: tuple[Rule, ...]
    superiority: frozenset[tuple[str, str]]

    def rule_map(self) -> dict[str, Rule]:
        return {r.label: r for r in self.rules}

    def literals(self) -> Iterable[Literal]:
        yield from self.facts
        for r in self.rules:
            yield from r.body
            yield r.head

    def predicates(self) -> set[str]:
        return {lit.predicate for lit in self.literals()}

    def constants(self) -> set[str]:
        return {t.name for lit in self.literals() for t in lit.args if not t.is_variable}

    def has_variables(self) -> bool:
        return any(t.is_variable for lit in self.literals() for t in lit.args)


@dataclass(frozen=True)
class DefeasibleTheory(_TheoryOps):
    """An immutable theory (facts, rules, superiority over labels)."""

    facts: frozenset[Literal] = frozenset()
    rules: tuple[Rule, ...] = ()
    superiority: frozenset[tuple[str, str]] = frozenset()

    @staticmethod
    def of(
        facts: Iterable[Literal] = (),
        rules: Iterable[Rule] = (),
        superiority: Iterable[tuple[str, str]] = (),
    ) -> "DefeasibleTheory":
        return DefeasibleTheory(frozenset(facts), tuple(rules), frozenset(superiority))


# Substitutions map variable names to constant terms.
Substitution = tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class GroundTheory(_TheoryOps):
    """A variable-free theory plus the provenance of each ground rule.

    Ground rule labels are synthesized as ``<source>__<ordinal>`` whenever
    the source theory contains variables; a fully variable-free theory
    grounds to itself, labels included.
    """

    facts: frozenset[Literal] = frozenset()
    rules: tuple[Rule, ...] = ()
    superiority: frozenset[tuple[str, str]] = frozenset()
    provenance: dict[str, tuple[str, Substitution]] = field(default_factory=dict)


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    location: str = ""


@dataclass
class ValidationReport:
    errors: list[ValidationIssue] = field(default_factory=list)
    warnings: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, code: str, message: str, location: str = "") -> None:
        self.errors.append(ValidationIssue(code, message, location))

    def warn(self, code: str, message: str, location: str = "") -> None:
        self.warnings.append(ValidationIssue(code, message, location))


def _superiority_cycle(pairs: Iterable[tuple[str, str]]) -> Optional[list[str]]:
    """Return one cycle of labels in the superiority digraph, if any."""
    adj: dict[str, list[str]] = {}
    for t, s in sorted(pairs):
        adj.setdefault(t, []).append(s)
    WHITE, GREY, BLACK = 0, 1, 2
    colour: dict[str, int] = {}
    for start in sorted(adj):
        if colour.get(start, WHITE) is not WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        path = [start]
        colour[start] = GREY
        while stack:
            node, idx = stack[-1]
            succs = adj.get(node, [])
            if idx < len(succs):
                stack[-1] = (node, idx + 1)
                nxt = succs[idx]
                c = colour.get(nxt, WHITE)
                if c == GREY:
                    return path[path.index(nxt):] + [nxt] if nxt in path else [nxt, nxt]
                if c == WHITE:
                    colour[nxt] = GREY
                    stack.append((nxt, 0))
                    path.append(nxt)
            else:
                colour[node] = BLACK
                stack.pop()
                path.pop()
    return None


def validate_theory(theory: DefeasibleTheory) -> ValidationReport:
    """Structural validation; a theory with errors is rejected downstream.

    Errors: duplicate rule labels, superiority over undefined labels,
    superiority cycles, non-ground facts, arity mismatches, and mangling
    collisions between generated predicate names.  Warnings flag
    superiority pairs that cannot influence compilation (non-complementary
    heads, or a defeater in the superior position).
    """
    report = ValidationReport()

    seen_labels: set[str] = set()
    for rule in theory.rules:
        if rule.label in seen_labels:
            report.error("duplicate-label", f"duplicate rule label {rule.label!r}", rule.label)
        seen_labels.add(rule.label)

    for fact in sorted(theory.facts):
        if not fact.is_ground():
            report.error("non-ground-fact", f"fact {fact} contains variables", str(fact))

    arities: dict[str, tuple[int, str]] = {}
    for lit in theory.literals():
        known = arities.get(lit.predicate)
        if known is None:
            arities[lit.predicate] = (lit.atom.arity, str(lit))
        elif known[0] != lit.atom.arity:
            report.error(
                "arity-mismatch",
                f"predicate {lit.predicate!r} used with arities {known[0]} and {lit.atom.arity}",
                str(lit),
            )

    rule_map = theory.rule_map()
    for t, s in sorted(theory.superiority):
        missing = [lbl for lbl in (t, s) if lbl not in rule_map]
        if missing:
            report.error(
                "undefined-superiority-label",
                f"superiority {t} > {s} refers to undefined label(s) {', '.join(missing)}",
                f"{t} > {s}",
            )
    if not any(i.code == "undefined-superiority-label" for i in report.errors):
        cycle = _superiority_cycle(theory.superiority)
        if cycle is not None:
            report.error(
                "superiority-cycle",
                "superiority relation has a cycle: " + " > ".join(cycle),
                cycle[0],
            )
        for t, s in sorted(theory.superiority):
            sup, inf = rule_map[t], rule_map[s]
            heads_complementary = (
                sup.head.predicate == inf.head.predicate
                and sup.head.negated != inf.head.negated
            )
            if not heads_complementary:
                report.warn(
                    "inert-superiority",
                    f"superiority {t} > {s} is inert: rule heads are not complementary",
                    f"{t} > {s}",
                )
            elif sup.kind is RuleKind.DEFEATER:
                report.warn(
                    "defeater-superior",
                    f"superiority {t} > {s} is inert: superior rule {t} is a defeater",
                    f"{t} > {s}",
                )

    # Deferred import: the mangling scheme lives next to the compiler.
    from .mangling import mangling_collisions

    for name, a, b in mangling_collisions(theory):
        report.error(
            "mangling-collision",
            f"generated predicate name {name!r} is produced by both {a} and {b}",
            name,
        )
    return report


def is_range_restricted(theory: DefeasibleTheory) -> bool:
    """True iff every head variable occurs in the rule body and facts are ground."""
    if any(not f.is_ground() for f in theory.facts):
        return False
    for rule in theory.rules:
        body_vars = {t.name for lit in rule.body for t in lit.args if t.is_variable}
        for t in rule.head.args:
            if t.is_variable and t.name not in body_vars:
                return False
    return True


def _apply(lit: Literal, binding: dict[str, Term]) -> Literal:
    args = tuple(binding[t.name] if t.is_variable else t for t in lit.args)
    return Literal(Atom(lit.predicate, args), lit.negated)


def ground_theory(theory: DefeasibleTheory) -> GroundTheory:
    """All instantiations of the rules over the theory's own constants.

    Variable-free theories ground to themselves.  Superiority lifts to
    every pair of instances of related source rules, and provenance maps
    each ground label back to its source label and substitution.
    """
    if not theory.has_variables():
        return GroundTheory(
            facts=theory.facts,
            rules=theory.rules,
            superiority=theory.superiority,
            provenance={r.label: (r.label, ()) for r in theory.rules},
        )
    constants = sorted(theory.constants())
    if not constants:
        raise EmptyUniverse("theory has variables but no constants")
    universe = [Term(c) for c in constants]

    ground_rules: list[Rule] = []
    provenance: dict[str, tuple[str, Substitution]] = {}
    instances: dict[str, list[str]] = {}
    for rule in theory.rules:
        names = rule.variables()
        labels: list[str] = []
        for ordinal, values in enumerate(product(universe, repeat=len(names)), start=1):
            binding = dict(zip(names, values))
            label = f"{rule.label}__{ordinal}"
            ground_rules.append(
                Rule(
                    label=label,
                    body=tuple(_apply(b, binding) for b in rule.body),
                    head=_apply(rule.head, binding),
                    kind=rule.kind,
                )
            )
            provenance[label] = (rule.label, tuple((n, binding[n].name) for n in names))
            labels.append(label)
        instances[rule.label] = labels

    lifted = frozenset(
        (gt, gs)
        for t, s in theory.superiority
        for gt in instances.get(t, ())
        for gs in instances.get(s, ())
    )
    return GroundTheory(
        facts=theory.facts,
        rules=tuple(ground_rules),
        superiority=lifted,
        provenance=provenance,
    )


def _acyclic_levels(nodes: Iterable[str], edges: dict[str, set[str]]) -> Optional[dict[str, int]]:
    """Longest-path levels with every edge strictly decreasing, or None on a cycle."""
    levels: dict[str, int] = {}
    DOING = -1
    order = sorted(nodes)

    def visit(start: str) -> bool:
        stack = [(start, iter(sorted(edges.get(start, ()))))]
        levels[start] = DOING
        while stack:
            node, it = stack[-1]
            advanced = False
            for succ in it:
                got = levels.get(succ)
                if got == DOING:
                    return False
                if got is None:
                    levels[succ] = DOING
                    stack.append((succ, iter(sorted(edges.get(succ, ())))))
                    advanced = True
                    break
            if not advanced:
                succs = edges.get(node, ())
                levels[node] = 1 + max((levels[s] for s in succs), default=-1)
                stack.pop()
        return True

    for node in order:
        if node not in levels and not visit(node):
            return None
    return levels


def is_hierarchical(theory: DefeasibleTheory) -> Optional[dict[str, int]]:
    """A witness level mapping on predicates, or None if rule dependencies cycle.

    The mapping places every rule head strictly above every body predicate,
    ignoring polarity.
    """
    edges: dict[str, set[str]] = {}
    for rule in theory.rules:
        succ = edges.setdefault(rule.head.predicate, set())
        succ.update(b.predicate for b in rule.body)
    return _acyclic_levels(theory.predicates(), edges)


def is_locally_hierarchical(theory) -> bool:
    """True iff the ground-atom dependency graph of ground(theory) is acyclic."""
    g = theory if isinstance(theory, GroundTheory) else ground_theory(theory)
    edges: dict[str, set[str]] = {}
    for rule in g.rules:
        key = str(rule.head.atom)
        succ = edges.setdefault(key, set())
        succ.update(str(b.atom) for b in rule.body)
    nodes = set(edges)
    for succs in edges.values():
        nodes.update(succs)
    return _acyclic_levels(nodes, edges) is not None


def theory_size(theory) -> int:
    """Symbol count: every predicate/constant/variable/label occurrence,
    plus one marker per rule arrow, per fact, and per superiority pair."""
    total = 0
    for fact in theory.facts:
        total += 1 + 1 + len(fact.args)
    for rule in theory.rules:
        total += 1 + 1  # label + arrow
        for lit in (*rule.body, rule.head):
            total += 1 + len(lit.args)
    total += 3 * len(theory.superiority)  # two labels + pair marker
    return total

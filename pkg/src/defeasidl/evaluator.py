"""Grounding and evaluation of safe Datalog-with-negation programs.

Three semantics are provided.  The stratified (iterated-fixpoint)
semantics applies to stratified programs and is total.  Fitting's
semantics is the least fixpoint of the three-valued immediate-consequence
operator: an atom becomes true when some clause body is true, false when
every clause body is false (so atoms with no clauses are false at once).
The well-founded semantics extends Fitting's by falsifying atoms that are
supported only through positive loops; it is computed by the standard
alternating fixpoint.  A hybrid pipeline for compiled programs evaluates
the stratified floor first and then runs Fitting's semantics above it,
which provably recovers exactly the well-founded truths of the
defeasibly predicates.

Ground atoms are plain ``(predicate, args)`` tuples for speed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, NamedTuple, Optional

from .compiler import CompilationOutput
from .datalog import DatalogProgram, is_safe, stratify

GAtom = tuple  # (predicate: str, args: tuple[str, ...])

MAX_ALTERNATIONS = 100_000  # defensive cap; finite ground programs terminate long before


class UnsafeProgram(Exception):
    """Grounding requires every clause variable to be positively bound."""


class NotStratified(Exception):
    """The stratified semantics was requested for a non-stratified program."""


class GroundClause(NamedTuple):
    head: GAtom
    positive: tuple[GAtom, ...]
    negative: tuple[GAtom, ...]


@dataclass(frozen=True)
class GroundProgram:
    """Relevance-pruned ground instances plus the Herbrand base they span."""

    clauses: tuple[GroundClause, ...]
    herbrand_base: frozenset[GAtom]


def format_atom(atom: GAtom) -> str:
    pred, args = atom
    return f"{pred}({', '.join(args)})" if args else pred


@dataclass(frozen=True)
class ThreeValuedInterpretation:
    """Disjoint true/false sets over a ground-atom domain; the rest is unknown."""

    true_set: frozenset[GAtom]
    false_set: frozenset[GAtom]
    domain: frozenset[GAtom] = frozenset()

    def __post_init__(self):
        if self.true_set & self.false_set:
            raise ValueError("true and false sets overlap")
        object.__setattr__(self, "domain", self.domain | self.true_set | self.false_set)

    def value(self, atom: GAtom) -> str:
        if atom in self.true_set:
            return "true"
        if atom in self.false_set:
            return "false"
        return "unknown"

    @property
    def unknown_set(self) -> frozenset[GAtom]:
        return self.domain - self.true_set - self.false_set

    def is_total(self) -> bool:
        return not self.unknown_set

    def leq(self, other: "ThreeValuedInterpretation") -> bool:
        """Information ordering: decided atoms keep their values in ``other``."""
        return self.true_set <= other.true_set and self.false_set <= other.false_set

    def true_of(self, predicate_test) -> frozenset[GAtom]:
        return frozenset(a for a in self.true_set if predicate_test(a[0]))


def _compile_clauses(program: DatalogProgram):
    compiled = []
    for clause in program.clauses:
        head = (clause.head.predicate, tuple((t.is_variable, t.name) for t in clause.head.args))
        pos = tuple(
            (a.predicate, tuple((t.is_variable, t.name) for t in a.args)) for a in clause.positive
        )
        neg = tuple(
            (a.predicate, tuple((t.is_variable, t.name) for t in a.args)) for a in clause.negative
        )
        compiled.append((head, pos, neg))
    return compiled


def _instantiate(pattern, binding) -> GAtom:
    pred, args = pattern
    return (pred, tuple(binding[name] if is_var else name for is_var, name in args))


def _match(pattern_args, ground_args, binding) -> Optional[list[str]]:
    added: list[str] = []
    for (is_var, name), value in zip(pattern_args, ground_args):
        if is_var:
            bound = binding.get(name)
            if bound is None:
                binding[name] = value
                added.append(name)
            elif bound != value:
                for n in added:
                    del binding[n]
                return None
        elif name != value:
            for n in added:
                del binding[n]
            return None
    return added


def _head_instances(compiled, constants: list[str]) -> dict[str, set[tuple]]:
    """Every instance of a clause head pattern over the constant pool.

    This is the coarsest universe of atoms any semantics could make true;
    unlike a derivability overestimate it keeps positively self-supporting
    atoms (``q :- q``), which Fitting's semantics must leave unknown.
    """
    universe: dict[str, set[tuple]] = {}
    for head, _, _ in compiled:
        pred, args = head
        names = list(dict.fromkeys(name for is_var, name in args if is_var))
        bucket = universe.setdefault(pred, set())
        if not names:
            bucket.add(tuple(name for _, name in args))
            continue
        for values in product(constants, repeat=len(names)):
            binding = dict(zip(names, values))
            bucket.add(tuple(binding[name] if is_var else name for is_var, name in args))
    return universe


def _ground_clauses(
    program: DatalogProgram, external_true: Iterable[GAtom] = ()
) -> tuple[list[GroundClause], set[GAtom]]:
    """Clause instances whose positive body atoms can all appear as heads.

    Computed as a greatest fixpoint: start from every head-pattern
    instance and repeatedly drop atoms no retained instance supports.
    Dropped atoms are false under the stratified, Fitting and well-founded
    semantics alike (each of their clause bodies contains an atom already
    proven false), so the pruning changes no verdict over the retained
    base.  ``external_true`` atoms (a fixed floor) count as support.
    """
    compiled = _compile_clauses(program)
    external: dict[str, set[tuple]] = {}
    for pred, args in external_true:
        external.setdefault(pred, set()).add(args)
    constants = sorted(
        program.constants() | {name for args in (a[1] for a in external_true) for name in args}
    )
    universe = _head_instances(compiled, constants)
    for pred, argsets in external.items():
        universe.setdefault(pred, set()).update(argsets)

    while True:
        instances: list[GroundClause] = []
        seen: set[GroundClause] = set()
        supported: dict[str, set[tuple]] = {p: set(s) for p, s in external.items()}

        def add_instance(head, pos, neg) -> None:
            inst = GroundClause(head, pos, neg)
            if inst not in seen:
                seen.add(inst)
                instances.append(inst)
                supported.setdefault(head[0], set()).add(head[1])

        for head, pos, neg in compiled:
            binding: dict[str, str] = {}

            def join(i: int) -> None:
                if i == len(pos):
                    add_instance(
                        _instantiate(head, binding),
                        tuple(_instantiate(p, binding) for p in pos),
                        tuple(_instantiate(n, binding) for n in neg),
                    )
                    return
                pred, pattern_args = pos[i]
                for ground_args in universe.get(pred, ()):
                    added = _match(pattern_args, ground_args, binding)
                    if added is not None:
                        join(i + 1)
                        for name in added:
                            del binding[name]

            join(0)
        if supported == universe:
            base = {a for inst in instances for a in (inst.head, *inst.positive, *inst.negative)}
            return instances, base
        universe = supported


def ground_program(program: DatalogProgram) -> GroundProgram:
    """Ground a safe program over its own constants, pruning clauses whose
    positive body can never be derived."""
    if not is_safe(program):
        raise UnsafeProgram("program is not safe; grounding would not terminate on ground atoms")
    instances, base = _ground_clauses(program)
    return GroundProgram(tuple(instances), frozenset(base))


def _least_model(
    clauses: Iterable[GroundClause],
    assumed_false: Optional[set[GAtom]] = None,
    seed: Iterable[GAtom] = (),
) -> set[GAtom]:
    """Least model over ``seed`` of the positive reduct: a clause
    participates iff all its negative atoms are in ``assumed_false``
    (negation is ignored entirely when None; callers prefilter then)."""
    usable = [
        c
        for c in clauses
        if assumed_false is None or all(n in assumed_false for n in c.negative)
    ]
    waiting: dict[GAtom, list[int]] = {}
    need: list[int] = []
    true: set[GAtom] = set()
    queue: list[GAtom] = []

    def fire(atom: GAtom) -> None:
        if atom not in true:
            true.add(atom)
            queue.append(atom)

    for idx, clause in enumerate(usable):
        distinct = set(clause.positive)
        need.append(len(distinct))
        if not distinct:
            fire(clause.head)
        for atom in distinct:
            waiting.setdefault(atom, []).append(idx)
    for atom in seed:
        fire(atom)
    while queue:
        atom = queue.pop()
        for idx in waiting.get(atom, ()):
            need[idx] -= 1
            if need[idx] == 0:
                fire(usable[idx].head)
    return true


def eval_stratified(program: DatalogProgram) -> ThreeValuedInterpretation:
    """Iterated least models along a stratification; the result is total."""
    strata = stratify(program)
    if strata is None:
        raise NotStratified("program has a negative edge inside a recursive component")
    g = ground_program(program)
    by_stratum: dict[int, list[GroundClause]] = {}
    for clause in g.clauses:
        by_stratum.setdefault(strata[clause.head[0]], []).append(clause)
    true: set[GAtom] = set()
    for level in sorted(by_stratum):
        layer = by_stratum[level]
        # Negative atoms live strictly below this stratum, so they are decided.
        usable = [c for c in layer if all(n not in true for n in c.negative)]
        true = _least_model(usable, seed=true)
    return ThreeValuedInterpretation(
        true_set=frozenset(true),
        false_set=frozenset(g.herbrand_base - true),
        domain=g.herbrand_base,
    )


def eval_fitting(
    program: DatalogProgram, fixed: Optional[ThreeValuedInterpretation] = None
) -> ThreeValuedInterpretation:
    """Kleene iteration of the three-valued immediate-consequence operator
    from all-unknown, with ``fixed`` floor atoms pinned to their values."""
    if not is_safe(program):
        raise UnsafeProgram("program is not safe")
    pinned_true = set(fixed.true_set) if fixed else set()
    pinned_false = set(fixed.false_set) if fixed else set()
    if fixed:
        fixed_preds = {a[0] for a in fixed.domain}
        for clause in program.clauses:
            if clause.head.predicate in fixed_preds:
                raise ValueError(f"fixed predicate {clause.head.predicate!r} is redefined")
    instances, base = _ground_clauses(program, external_true=pinned_true)
    base |= pinned_true | pinned_false

    by_head: dict[GAtom, list[GroundClause]] = {}
    for inst in instances:
        by_head.setdefault(inst.head, []).append(inst)

    true = set(pinned_true)
    false = set(pinned_false)
    undecided = base - true - false
    changed = True
    while changed:
        changed = False
        for atom in list(undecided):
            clauses = by_head.get(atom, ())
            some_true = False
            all_false = True
            for clause in clauses:
                body_false = any(p in false for p in clause.positive) or any(
                    n in true for n in clause.negative
                )
                if body_false:
                    continue
                all_false = False
                if all(p in true for p in clause.positive) and all(
                    n in false for n in clause.negative
                ):
                    some_true = True
                    break
            if some_true:
                true.add(atom)
            elif all_false:
                false.add(atom)
            else:
                continue
            undecided.discard(atom)
            changed = True
    return ThreeValuedInterpretation(frozenset(true), frozenset(false), frozenset(base))


def eval_wellfounded(
    program: DatalogProgram, max_alternations: int = MAX_ALTERNATIONS
) -> ThreeValuedInterpretation:
    """The well-founded model via the alternating fixpoint: underestimates
    of truth and overestimates alternate until both stabilise."""
    g = ground_program(program)
    base = set(g.herbrand_base)
    lower: set[GAtom] = set()
    previous_upper = base
    rounds = 0
    while True:
        rounds += 1
        if rounds > max_alternations:
            raise RuntimeError("alternating fixpoint failed to stabilise (internal error)")
        upper = _least_model(g.clauses, assumed_false=base - lower)
        new_lower = _least_model(g.clauses, assumed_false=base - upper)
        assert lower <= new_lower, "true underestimate must be nondecreasing"
        assert upper <= previous_upper, "false-complement overestimate must be nonincreasing"
        previous_upper = upper
        if new_lower == lower:
            return ThreeValuedInterpretation(
                true_set=frozenset(lower),
                false_set=frozenset(base - upper),
                domain=g.herbrand_base,
            )
        lower = new_lower


def is_three_valued_model(program: DatalogProgram, interp: ThreeValuedInterpretation) -> bool:
    """No ground clause has a true body and a non-true head."""
    instances, _ = _ground_clauses(program, external_true=interp.true_set)
    for clause in instances:
        body_true = all(p in interp.true_set for p in clause.positive) and all(
            n in interp.false_set for n in clause.negative
        )
        if body_true and clause.head not in interp.true_set:
            return False
    return True


def eval_hybrid(compiled: CompilationOutput) -> ThreeValuedInterpretation:
    """Stratified floor, then Fitting above it: returns the floor verdicts
    plus exactly the well-founded truths of the defeasibly predicates."""
    if not isinstance(compiled, CompilationOutput) or not all(
        clause in compiled.provenance for clause in compiled.program.clauses
    ):
        raise TypeError("hybrid evaluation needs a compiler-produced program with provenance")
    floor_names = compiled.floor_names
    floor_clauses = []
    upper_clauses = []
    for clause in compiled.program.clauses:
        if clause.head.predicate in floor_names:
            floor_clauses.append(clause)
        else:
            upper_clauses.append(clause)
    floor_interp = eval_stratified(DatalogProgram(tuple(floor_clauses)))
    upper_interp = eval_fitting(DatalogProgram(tuple(upper_clauses)), fixed=floor_interp)
    defeasibly_true = upper_interp.true_of(
        lambda p: p not in floor_names and compiled.predicate_info[p].base == "defeasibly"
    )
    return ThreeValuedInterpretation(
        true_set=floor_interp.true_set | defeasibly_true,
        false_set=floor_interp.false_set,
        domain=floor_interp.domain | upper_interp.domain,
    )

"""Deterministic predicate-name mangling for compiled programs.

Compiled predicates fuse a tag (definitely/lambda/defeasibly/overruled/
defeated/defeats/body) with either a source predicate plus polarity or a
rule label plus body flavour.  Components are joined with the reserved
two-character separator ``__`` and negative literals insert a ``not``
component, e.g. ``defeasibly__not__fly``.  Injectivity cannot be assumed
for arbitrary source names (identifiers may contain underscores), so
validation enumerates the full candidate name space and rejects theories
where two distinct sources collide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .theory import DefeasibleTheory, Literal

SEP = "__"
NEG = "not"

TAG_DEFINITELY = "definitely"
TAG_LAMBDA = "lambda"
TAG_DEFEASIBLY = "defeasibly"
TAG_OVERRULED = "overruled"
TAG_DEFEATED = "defeated"
TAG_DEFEATS = "defeats"
LITERAL_TAGS = (TAG_DEFINITELY, TAG_LAMBDA, TAG_DEFEASIBLY, TAG_OVERRULED, TAG_DEFEATED, TAG_DEFEATS)

FLAVOR_DELTA = "delta"
FLAVOR_LAM = "lam"
FLAVOR_D = "d"
BODY_FLAVORS = (FLAVOR_DELTA, FLAVOR_LAM, FLAVOR_D)

FLOOR_TAGS = (TAG_DEFINITELY, TAG_LAMBDA)
FLOOR_FLAVORS = (FLAVOR_DELTA, FLAVOR_LAM)


@dataclass(frozen=True)
class MangledPredicate:
    """Descriptor of a generated predicate: a tag plus its qualifier."""

    base: str
    source_predicate: Optional[str] = None
    negated: bool = False
    rule_label: Optional[str] = None
    flavor: Optional[str] = None

    @property
    def name(self) -> str:
        if self.base == "body":
            return SEP.join(("body", self.rule_label, self.flavor))
        parts = [self.base, NEG, self.source_predicate] if self.negated else [self.base, self.source_predicate]
        return SEP.join(parts)

    @property
    def is_floor(self) -> bool:
        if self.base == "body":
            return self.flavor in FLOOR_FLAVORS
        return self.base in FLOOR_TAGS

    def __str__(self) -> str:
        if self.base == "body":
            return f"body[{self.rule_label}, {self.flavor}]"
        sign = "neg " if self.negated else ""
        return f"{self.base}[{sign}{self.source_predicate}]"


def literal_pred(tag: str, lit: Literal) -> MangledPredicate:
    return MangledPredicate(base=tag, source_predicate=lit.predicate, negated=lit.negated)


def body_pred(label: str, flavor: str) -> MangledPredicate:
    return MangledPredicate(base="body", rule_label=label, flavor=flavor)


def candidate_predicates(theory: DefeasibleTheory) -> list[MangledPredicate]:
    """Every name compilation could generate for this theory, in either mode."""
    out: list[MangledPredicate] = []
    for pred in sorted(theory.predicates()):
        for tag in LITERAL_TAGS:
            out.append(MangledPredicate(base=tag, source_predicate=pred, negated=False))
            out.append(MangledPredicate(base=tag, source_predicate=pred, negated=True))
    for rule in theory.rules:
        for flavor in BODY_FLAVORS:
            out.append(body_pred(rule.label, flavor))
    return out


def mangling_collisions(
    theory: DefeasibleTheory,
) -> list[tuple[str, MangledPredicate, MangledPredicate]]:
    """Pairs of distinct descriptors that mangle to the same name."""
    seen: dict[str, MangledPredicate] = {}
    collisions = []
    for mp in candidate_predicates(theory):
        prev = seen.get(mp.name)
        if prev is None:
            seen[mp.name] = mp
        elif prev != mp:
            collisions.append((mp.name, prev, mp))
    return collisions

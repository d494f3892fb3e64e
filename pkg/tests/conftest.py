import random

import pytest

from defeasidl import corpus
from defeasidl.parser import parse_theory
from defeasidl.theory import DefeasibleTheory, Literal


def lit(text: str) -> Literal:
    """Parse a single literal given as .dfl text, e.g. "neg fly(X)"."""
    theory = parse_theory(f"probe: => {text}.")
    assert isinstance(theory, DefeasibleTheory), theory
    return theory.rules[0].head


def theory(text: str) -> DefeasibleTheory:
    parsed = parse_theory(text)
    assert isinstance(parsed, DefeasibleTheory), parsed
    return parsed


@pytest.fixture(scope="session")
def tweety() -> DefeasibleTheory:
    return corpus.load("tweety")


@pytest.fixture(scope="session")
def platypus() -> DefeasibleTheory:
    return corpus.load("platypus")


@pytest.fixture(scope="session")
def nonstrat() -> DefeasibleTheory:
    return corpus.load("nonstrat")


@pytest.fixture()
def rng() -> random.Random:
    return random.Random(0xDEFEA51)

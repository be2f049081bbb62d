"""Horn-NC logic programs over a finite truth-value chain.

A rule ``B -> H`` has a positive body B (only ``X>=a`` literals) and a
Horn-NC head H.  It is read as the disjunction ``(| not(B) H)``, where the
body is negated exactly by dualising connectives and mapping ``X>=a`` to
``X<=a-1/k`` on the chain {0, 1/k, ..., 1}.

Program files (``.rlp``)::

    chain 10
    fact P>=0.8
    rule {& R>=1 P>=0.7} -> (| Q>=0.5 S<=0.2)
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (
    EMPTY_DISJ,
    Conj,
    Const,
    Disj,
    Formula,
    Lit,
    RegncError,
    Sign,
    postorder,
)
from .hornnc import is_horn_nc_pattern
from .parser import parse
from .semantics import Status, evaluate
from .solver import NotHnc, solve


class ThresholdNotInChain(RegncError):
    pass


class NotPositive(RegncError):
    pass


class ProgramSyntaxError(RegncError):
    pass


@dataclass(frozen=True)
class Chain:
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"chain granularity must be a positive integer, got {self.k!r}")

    def values(self) -> List[Fraction]:
        return [Fraction(i, self.k) for i in range(self.k + 1)]

    def contains(self, v: Fraction) -> bool:
        return 0 <= v <= 1 and (v * self.k).denominator == 1

    def pred(self, v: Fraction) -> Fraction:
        return v - Fraction(1, self.k)

    def check(self, phi: Formula) -> None:
        for node in postorder(phi):
            vals = ()
            if isinstance(node, Lit):
                vals = (node.threshold,)
            elif isinstance(node, Const):
                vals = (node.lhs, node.rhs)
            for v in vals:
                if not self.contains(v):
                    raise ThresholdNotInChain(f"{v} is not on the chain with k={self.k}")


def _check_positive(body: Formula) -> None:
    for node in postorder(body):
        if isinstance(node, Const) or (isinstance(node, Lit) and node.sign is not Sign.GEQ):
            raise NotPositive(f"rule bodies may only contain X>=a literals, found {node}")


@dataclass(frozen=True)
class HncRule:
    body: Formula
    head: Formula

    def __post_init__(self):
        _check_positive(self.body)
        verdict = is_horn_nc_pattern(self.head)
        if not verdict.is_hnc:
            raise NotHnc(verdict.witness)

    def __str__(self) -> str:
        return f"{self.body} -> {self.head}"


@dataclass(frozen=True)
class Program:
    rules: Tuple[HncRule, ...]
    chain: Chain

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for r in self.rules:
            self.chain.check(r.body)
            self.chain.check(r.head)


def negate_positive(phi: Formula, chain: Chain) -> Formula:
    """Exact complement of a positive formula over chain-valued interpretations.

    ``X>=0`` always holds, so its complement is the empty disjunction.
    """
    _check_positive(phi)
    chain.check(phi)
    out: Dict[int, Formula] = {}
    for node in postorder(phi):
        if isinstance(node, Lit):
            if node.threshold == 0:
                out[id(node)] = EMPTY_DISJ
            else:
                out[id(node)] = Lit(Sign.LEQ, node.prop, chain.pred(node.threshold))
        else:
            dual = Disj if isinstance(node, Conj) else Conj
            out[id(node)] = dual(tuple(out[id(c)] for c in node.children))
    return out[id(phi)]


def _check_facts(facts: Iterable[Lit], chain: Chain) -> Tuple[Lit, ...]:
    facts = tuple(facts)
    for f in facts:
        if not isinstance(f, Lit) or f.sign is not Sign.GEQ:
            raise NotPositive(f"facts must be X>=a literals, found {f}")
        chain.check(f)
    return facts


def to_formula(facts: Iterable[Lit], program: Program) -> Conj:
    facts = _check_facts(facts, program.chain)
    rules = tuple(Disj((negate_positive(r.body, program.chain), r.head)) for r in program.rules)
    return Conj(facts + rules)


def minimal_model(facts: Iterable[Lit], program: Program) -> Optional[Dict[str, Fraction]]:
    """The least model of facts plus program, or None when there is none."""
    result = solve(to_formula(facts, program), trace=False)
    return result.model if result.status is Status.SAT else None


class Answer(enum.Enum):
    TRUE = "TRUE"
    FALSE = "FALSE"
    UNSAT_PROGRAM = "UNSAT-PROGRAM"


CLASSICAL = "classical"
MINIMAL_MODEL = "minimal-model"


@dataclass
class Entailment:
    answer: Answer
    semantics: str
    model: Optional[Dict[str, Fraction]] = None


def entails(facts: Iterable[Lit], program: Program, query: Formula) -> Entailment:
    """Evaluate ``query`` in the minimal model.

    For queries built from ``X>=a`` literals only, truth in the minimal model
    coincides with logical consequence, and the result is labelled
    ``classical``.  Queries with ``X<=b`` literals get minimal-model
    entailment, labelled accordingly.
    """
    positive = all(not isinstance(n, Lit) or n.sign is Sign.GEQ for n in postorder(query))
    semantics = CLASSICAL if positive else MINIMAL_MODEL
    model = minimal_model(facts, program)
    if model is None:
        return Entailment(Answer.UNSAT_PROGRAM, semantics)
    answer = Answer.TRUE if evaluate(query, model) == 1 else Answer.FALSE
    return Entailment(answer, semantics, model)


def parse_program(text: str) -> Tuple[Tuple[Lit, ...], Program]:
    """Parse an ``.rlp`` file into (facts, program)."""
    chain: Optional[Chain] = None
    facts: List[Lit] = []
    rules: List[HncRule] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if keyword == "chain":
                if chain is not None:
                    raise ProgramSyntaxError("duplicate chain header")
                chain = Chain(int(rest))
            elif keyword == "fact":
                lit = parse(rest)
                if not isinstance(lit, Lit) or lit.sign is not Sign.GEQ:
                    raise ProgramSyntaxError(f"fact must be an X>=a literal, got {rest!r}")
                facts.append(lit)
            elif keyword == "rule":
                body, arrow, head = rest.partition("->")
                if not arrow:
                    raise ProgramSyntaxError("rule needs 'BODY -> HEAD'")
                rules.append(HncRule(parse(body), parse(head)))
            else:
                raise ProgramSyntaxError(f"unknown directive {keyword!r}")
        except (RegncError, ValueError) as exc:
            raise ProgramSyntaxError(f"line {lineno}: {exc}") from exc
    if chain is None:
        raise ProgramSyntaxError("missing 'chain k' header")
    try:
        program = Program(tuple(rules), chain)
        return _check_facts(facts, chain), program
    except RegncError as exc:
        raise ProgramSyntaxError(str(exc)) from exc


def chain_models(phi: Formula, chain: Chain, props: Sequence[str]) -> List[Dict[str, Fraction]]:
    """All chain-valued models of ``phi`` over ``props`` (brute force)."""
    from .semantics import enumerate_models

    grid = {p: chain.values() for p in props}
    return enumerate_models(phi, grid)

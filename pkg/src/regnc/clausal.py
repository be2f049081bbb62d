"""Distributive clausal form and regular Horn unit resolution."""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .core import Conj, Const, Disj, Formula, Lit, RegncError, Sign, postorder
from .hornnc import clauses_of, is_horn_clausal
from .semantics import Status, evaluate

DEFAULT_MAX_CLAUSES = 10**5


class Blowup(RegncError):
    pass


class NotHorn(RegncError):
    pass


class NotConstantFree(RegncError):
    pass


@dataclass(frozen=True)
class ClausalFormula:
    clauses: Tuple[Tuple[Lit, ...], ...]

    def to_formula(self) -> Conj:
        return Conj(tuple(Disj(c) for c in self.clauses))

    def __str__(self) -> str:
        return str(self.to_formula())

    def __len__(self) -> int:
        return len(self.clauses)


def _clause_counts(phi: Formula, cap: int) -> Dict[int, int]:
    """Clause count of cl() per node, saturating just above ``cap``."""
    count: Dict[int, int] = {}
    for node in postorder(phi):
        if isinstance(node, Conj):
            count[id(node)] = min(cap + 1, sum(count[id(c)] for c in node.children))
        elif isinstance(node, Disj):
            n = 1
            for c in node.children:
                n = min(cap + 1, n * count[id(c)])
            count[id(node)] = n
        else:
            count[id(node)] = 1
    return count


def to_clausal(phi: Formula, max_clauses: int = DEFAULT_MAX_CLAUSES) -> ClausalFormula:
    """Exhaustive distribution of disjunctions over conjunctions.

    Conjunctions concatenate their children's clauses; a disjunction takes
    the cartesian product of its children's clause lists (first child
    varying slowest) and concatenates each combination.  Duplicates are
    kept.  Raises Blowup when more than ``max_clauses`` clauses would result.
    """
    counts = _clause_counts(phi, max_clauses)
    if counts[id(phi)] > max_clauses:
        raise Blowup(f"clausal form exceeds {max_clauses} clauses")
    cl: Dict[int, List[Tuple[Lit, ...]]] = {}
    for node in postorder(phi):
        if isinstance(node, Lit):
            cl[id(node)] = [(node,)]
        elif isinstance(node, Const):
            raise NotConstantFree("to_clausal expects a constant-free formula")
        elif isinstance(node, Conj):
            cl[id(node)] = [c for child in node.children for c in cl[id(child)]]
        else:
            parts = [cl[id(child)] for child in node.children]
            cl[id(node)] = [tuple(itertools.chain.from_iterable(combo))
                            for combo in itertools.product(*parts)]
    return ClausalFormula(tuple(cl[id(phi)]))


@dataclass
class ClausalResult:
    status: Status
    model: Optional[Dict[str, Fraction]] = None


def clausal_unit_resolution_sat(phi) -> ClausalResult:
    """Regular Horn satisfiability by positive unit propagation.

    A positive unit ``X>=a`` deletes every ``X<=b`` with ``a > b``; a clause
    left with a single positive literal becomes a unit.  An emptied clause
    means UNSAT; otherwise the units (0 elsewhere) form a model.
    """
    if isinstance(phi, ClausalFormula):
        clauses = [list(c) for c in phi.clauses]
    else:
        clauses = clauses_of(phi)
    if not is_horn_clausal(ClausalFormula(tuple(tuple(c) for c in clauses))):
        raise NotHorn("clausal unit resolution needs a Horn formula")

    live: List[int] = []          # remaining negative literals per clause
    positive: List[Optional[Lit]] = []
    neg_index: Dict[str, List[Tuple[Fraction, int]]] = {}
    satisfied = [False] * len(clauses)
    for ci, clause in enumerate(clauses):
        pos = None
        n_neg = 0
        for atom in clause:
            if isinstance(atom, Const):
                if atom.lhs >= atom.rhs:
                    satisfied[ci] = True
                continue
            if atom.sign is Sign.GEQ:
                pos = atom
            else:
                n_neg += 1
                neg_index.setdefault(atom.prop, []).append((atom.threshold, ci))
        positive.append(pos)
        live.append(n_neg)
    for entries in neg_index.values():
        entries.sort()
    cursor = {p: 0 for p in neg_index}

    units: Dict[str, Fraction] = {}
    queue: List[int] = []
    for ci in range(len(clauses)):
        if satisfied[ci]:
            continue
        if live[ci] == 0:
            if positive[ci] is None:
                return ClausalResult(Status.UNSAT)
            queue.append(ci)
    while queue:
        ci = queue.pop()
        lit = positive[ci]
        old = units.get(lit.prop)
        if old is not None and old >= lit.threshold:
            continue
        units[lit.prop] = lit.threshold
        entries = neg_index.get(lit.prop, [])
        # delete X<=b for all b < a; entries are sorted by b
        stop = bisect.bisect_left(entries, (lit.threshold, -1))
        for k in range(cursor.get(lit.prop, 0), stop):
            cj = entries[k][1]
            if satisfied[cj]:
                continue
            live[cj] -= 1
            if live[cj] == 0:
                if positive[cj] is None:
                    return ClausalResult(Status.UNSAT)
                queue.append(cj)
        if lit.prop in cursor:
            cursor[lit.prop] = max(cursor[lit.prop], stop)
    model = dict(units)
    check = ClausalFormula(tuple(tuple(a for a in c) for c in clauses)).to_formula()
    assert evaluate(check, model) == 1, "unit-resolution model does not verify"
    return ClausalResult(Status.SAT, model)

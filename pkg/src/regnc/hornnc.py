"""Recognition of the Horn-NC class.

Two independent deciders are provided and are expected to agree:

* ``is_horn_nc_pattern`` checks every disjunction occurrence directly
  (at most one disjunct containing a positive literal) and reports the first
  offender in depth-first order;
* ``is_horn_nc_inductive`` follows the three-rule inductive grammar
  bottom-up in one linear pass.

Both memoise per node object, so shared DAG nodes are examined once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

from .core import (
    Conj,
    Const,
    Disj,
    Formula,
    Lit,
    OccRef,
    RegncError,
    Sign,
    postorder,
)


class NotClausal(RegncError):
    pass


@dataclass(frozen=True)
class HncVerdict:
    is_hnc: bool
    witness: Optional[OccRef] = None

    def __bool__(self) -> bool:
        return self.is_hnc


def _positive_map(phi: Formula) -> Dict[int, bool]:
    """id(node) -> whether the subtree contains a positive literal."""
    pos: Dict[int, bool] = {}
    for node in postorder(phi):
        if isinstance(node, Lit):
            pos[id(node)] = node.sign is Sign.GEQ
        elif isinstance(node, (Conj, Disj)):
            pos[id(node)] = any(pos[id(c)] for c in node.children)
        else:
            pos[id(node)] = False
    return pos


def is_negative(phi: Formula) -> bool:
    """True iff no literal of ``phi`` is positive; constants are ignored."""
    return not any(isinstance(n, Lit) and n.sign is Sign.GEQ for n in postorder(phi))


def _pattern_holds(phi: Formula) -> bool:
    """Fast yes/no version of the pattern check (leaves handled inline)."""
    if type(phi) not in (Conj, Disj):
        return True
    geq = Sign.GEQ
    pos: Dict[int, bool] = {}
    for node in postorder(phi):
        t = type(node)
        if t is not Conj and t is not Disj:
            continue
        npos = 0
        for c in node.children:
            tc = type(c)
            if tc is Lit:
                npos += c.sign is geq
            elif tc is Conj or tc is Disj:
                npos += pos[id(c)]
        if npos > 1 and t is Disj:
            return False
        pos[id(node)] = npos > 0
    return True


def is_horn_nc_pattern(phi: Formula) -> HncVerdict:
    if _pattern_holds(phi):
        return HncVerdict(True)
    pos = _positive_map(phi)
    # a subtree is bad if it contains a disjunction with two positive disjuncts
    bad: Dict[int, bool] = {}
    for node in postorder(phi):
        if isinstance(node, Disj):
            npos = sum(1 for c in node.children if pos[id(c)])
            bad[id(node)] = npos > 1 or any(bad[id(c)] for c in node.children)
        elif isinstance(node, Conj):
            bad[id(node)] = any(bad[id(c)] for c in node.children)
        else:
            bad[id(node)] = False
    if not bad[id(phi)]:
        return HncVerdict(True)
    # descend to the first offending disjunction in depth-first order
    path: list = []
    node = phi
    while True:
        if isinstance(node, Disj) and sum(1 for c in node.children if pos[id(c)]) > 1:
            return HncVerdict(False, tuple(path))
        for i, child in enumerate(node.children):
            if bad[id(child)]:
                path.append(i)
                node = child
                break


def is_horn_nc_inductive(phi: Formula) -> bool:
    negative: Dict[int, bool] = {}
    hnc: Dict[int, bool] = {}
    for node in postorder(phi):
        key = id(node)
        if isinstance(node, Lit):
            negative[key] = node.sign is Sign.LEQ
            hnc[key] = True
        elif isinstance(node, Const):
            negative[key] = True
            hnc[key] = True
        elif isinstance(node, Conj):
            negative[key] = all(negative[id(c)] for c in node.children)
            hnc[key] = all(hnc[id(c)] for c in node.children)
        else:
            non_negative = [c for c in node.children if not negative[id(c)]]
            negative[key] = not non_negative
            hnc[key] = len(non_negative) <= 1 and all(hnc[id(c)] for c in non_negative)
    return hnc[id(phi)]


def clauses_of(phi: Formula):
    """Split a flat clausal formula into its clauses (lists of atoms).

    Accepts a conjunction whose children are disjunctions of atoms or bare
    atoms (unit clauses).
    """
    if not isinstance(phi, Conj):
        raise NotClausal("a clausal formula is a conjunction of clauses")
    out = []
    for i, clause in enumerate(phi.children):
        if isinstance(clause, (Lit, Const)):
            out.append([clause])
        elif isinstance(clause, Disj) and all(isinstance(a, (Lit, Const)) for a in clause.children):
            out.append(list(clause.children))
        else:
            raise NotClausal(f"conjunct {i} is not a clause")
    return out


def is_horn_clausal(phi) -> bool:
    """True iff every clause has at most one positive literal."""
    from .clausal import ClausalFormula

    clauses = phi.clauses if isinstance(phi, ClausalFormula) else clauses_of(phi)
    return all(sum(1 for a in c if isinstance(a, Lit) and a.sign is Sign.GEQ) <= 1 for c in clauses)

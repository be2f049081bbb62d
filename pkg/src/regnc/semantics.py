"""Interpretations, min/max evaluation and the brute-force grid oracle.

A literal ``X<=b`` holds iff I(X) <= b (non-strict), mirroring ``X>=a``.
Propositions an interpretation does not mention read as 0.
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from .core import (
    BudgetExceeded,
    Conj,
    Const,
    Disj,
    Formula,
    Lit,
    Sign,
    format_truth,
    postorder,
    props_of,
    truth,
)

Interpretation = Mapping[str, Fraction]

DEFAULT_ORACLE_BUDGET = 10**8


class Status(enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass
class OracleResult:
    status: Status
    witness: Optional[Dict[str, Fraction]] = None
    candidates_checked: int = 0


def _atom_value(node, interp: Interpretation) -> int:
    if type(node) is Lit:
        x = interp.get(node.prop, 0)
        if node.sign is Sign.GEQ:
            return 1 if x >= node.threshold else 0
        return 1 if x <= node.threshold else 0
    return 1 if node.lhs >= node.rhs else 0


def evaluate(phi: Formula, interp: Interpretation) -> int:
    """Truth value of ``phi`` under ``interp``: 1 or 0."""
    if type(phi) is not Conj and type(phi) is not Disj:
        return _atom_value(phi, interp)
    value: Dict[int, int] = {}
    for node in postorder(phi):
        t = type(node)
        if t is Conj:
            v = 1
            for c in node.children:
                tc = type(c)
                cv = value[id(c)] if tc is Conj or tc is Disj else _atom_value(c, interp)
                if not cv:
                    v = 0
                    break
        elif t is Disj:
            v = 0
            for c in node.children:
                tc = type(c)
                cv = value[id(c)] if tc is Conj or tc is Disj else _atom_value(c, interp)
                if cv:
                    v = 1
                    break
        else:
            continue
        value[id(node)] = v
    return value[id(phi)]


def evaluate_many(phi: Formula, interps: Sequence[Interpretation]) -> np.ndarray:
    """Vectorised ``evaluate`` over a batch of interpretations.

    Comparisons stay exact: every value and threshold of a proposition is
    replaced by its rank in their merged sorted set before going to numpy.
    """
    n = len(interps)
    nodes = list(postorder(phi))
    lits = [nd for nd in nodes if isinstance(nd, Lit)]
    thresholds: Dict[str, List[Fraction]] = {}
    for lit in lits:
        thresholds.setdefault(lit.prop, []).append(lit.threshold)
    # threshold j encodes as 2j, a value strictly between thresholds j-1 and
    # j as 2j-1; codes compare exactly like the values they stand for
    columns: Dict[str, np.ndarray] = {}
    for prop, ts in thresholds.items():
        ts = sorted(set(ts))
        thresholds[prop] = ts
        memo: Dict[int, int] = {}
        col = np.empty(n, dtype=np.int64)
        for i, I in enumerate(interps):
            v = I.get(prop, 0)
            code = memo.get(id(v))
            if code is None:
                j = bisect.bisect_left(ts, v)
                code = 2 * j if j < len(ts) and ts[j] == v else 2 * j - 1
                memo[id(v)] = code
            col[i] = code
        columns[prop] = col
    rank_values = {prop: {t: 2 * j for j, t in enumerate(ts)} for prop, ts in thresholds.items()}
    ones = np.ones(n, dtype=bool)
    zeros = np.zeros(n, dtype=bool)
    value: Dict[int, np.ndarray] = {}
    for node in nodes:
        if isinstance(node, Lit):
            t = rank_values[node.prop][node.threshold]
            col = columns[node.prop]
            v = col >= t if node.sign is Sign.GEQ else col <= t
        elif isinstance(node, Const):
            v = ones if node.lhs >= node.rhs else zeros
        elif isinstance(node, Conj):
            v = ones
            for c in node.children:
                v = v & value[id(c)]
        else:
            v = zeros
            for c in node.children:
                v = v | value[id(c)]
        value[id(node)] = v
    return value[id(phi)].astype(np.int8)


def candidate_grid(phi: Formula) -> Dict[str, List[Fraction]]:
    """Finite set of test values per proposition that preserves satisfiability.

    Thresholds of the proposition's literals, 0 and 1, and the midpoint of
    every adjacent pair of those.  Each literal's truth is constant on each
    open interval between consecutive points, so the midpoints represent
    every cell.
    """
    points: Dict[str, set] = {}
    for node in postorder(phi):
        if isinstance(node, Lit):
            points.setdefault(node.prop, {Fraction(0), Fraction(1)}).add(node.threshold)
    grid = {}
    for prop in sorted(points):
        pts = sorted(points[prop])
        mids = [(a + b) / 2 for a, b in zip(pts, pts[1:])]
        grid[prop] = sorted(pts + mids)
    return grid


_LIT, _TOP, _BOT, _AND, _OR = range(5)


def _compile(phi: Formula, props_index: Mapping[str, int], values: Sequence[Sequence[Fraction]]):
    """Flatten ``phi`` into post-order integer tables for ``_partial_eval``.

    A literal becomes (prop index, rank, is_geq): ``X>=a`` holds at grid
    position j iff j >= (first position with value >= a), and ``X<=b``
    iff j <= (last position with value <= b).
    """
    nodes = list(postorder(phi))
    pos = {id(n): i for i, n in enumerate(nodes)}
    table = []
    for node in nodes:
        if isinstance(node, Lit):
            pi = props_index[node.prop]
            if node.sign is Sign.GEQ:
                rank = bisect.bisect_left(values[pi], node.threshold)
            else:
                rank = bisect.bisect_right(values[pi], node.threshold) - 1
            table.append((_LIT, pi, rank, node.sign is Sign.GEQ))
        elif isinstance(node, Const):
            table.append((_TOP if node.lhs >= node.rhs else _BOT, 0, 0, False))
        else:
            kind = _AND if isinstance(node, Conj) else _OR
            table.append((kind, tuple(pos[id(c)] for c in node.children), 0, False))
    return table


def _partial_eval(table, assigned_upto: int, choice: Sequence[int]):
    """Three-valued evaluation: 1, 0, or None when unassigned props matter."""
    value = [None] * len(table)
    for i, (kind, a, rank, geq) in enumerate(table):
        if kind == _LIT:
            if a >= assigned_upto:
                v = None
            elif geq:
                v = 1 if choice[a] >= rank else 0
            else:
                v = 1 if choice[a] <= rank else 0
        elif kind == _AND:
            v = 1
            for c in a:
                cv = value[c]
                if cv == 0:
                    v = 0
                    break
                if cv is None:
                    v = None
        elif kind == _OR:
            v = 0
            for c in a:
                cv = value[c]
                if cv == 1:
                    v = 1
                    break
                if cv is None:
                    v = None
        else:
            v = 1 if kind == _TOP else 0
        value[i] = v
    return value[-1]


def oracle_sat(
    phi: Formula,
    budget: int = DEFAULT_ORACLE_BUDGET,
    grid: Optional[Mapping[str, Iterable[Fraction]]] = None,
) -> OracleResult:
    """Decide satisfiability by enumerating grid assignments.

    Propositions are assigned in lexicographic order, values ascending, so the
    reported witness is the lexicographically first model on the grid.
    Branches whose partial assignment already decides the formula are not
    expanded further (a decided-false prefix has no model; a decided-true
    prefix makes its all-smallest completion the first model), and values
    dominated by their predecessor are skipped once it has failed.
    ``candidates_checked`` counts the assignments evaluated.
    """
    if grid is None:
        grid = candidate_grid(phi)
    props = props_of(phi)
    values = [sorted(set(Fraction(v) for v in grid[p])) for p in props]
    total = 1
    for vs in values:
        total *= len(vs)
    if total > budget:
        raise BudgetExceeded(f"grid has {total} candidates, budget is {budget}")
    index = {p: i for i, p in enumerate(props)}
    table = _compile(phi, index, values)
    # a value with no threshold of its proposition in (previous value, value]
    # makes a subset of the literals true that its predecessor makes true;
    # formulas are monotone in literal truth, so once the predecessor's
    # subtree has failed the value can be skipped
    thresholds: Dict[str, set] = {}
    for node in postorder(phi):
        if isinstance(node, Lit):
            thresholds.setdefault(node.prop, set()).add(node.threshold)
    dominated = [
        [j > 0 and not any(vs[j - 1] < t <= vs[j] for t in thresholds.get(p, ()))
         for j in range(len(vs))]
        for p, vs in zip(props, values)
    ]
    checked = 0
    choice = [0] * len(props)
    depth = 0
    # iterative depth-first search over the grid
    while True:
        checked += 1
        verdict = _partial_eval(table, depth, choice)
        if verdict == 1:
            for j in range(depth, len(props)):
                choice[j] = 0
            witness = {p: values[j][choice[j]] for j, p in enumerate(props)}
            return OracleResult(Status.SAT, witness, checked)
        if verdict is None and depth < len(props):
            choice[depth] = 0
            depth += 1
            continue
        # verdict 0: advance to the next sibling, backtracking as needed
        while depth > 0:
            j = depth - 1
            choice[j] += 1
            while choice[j] < len(values[j]) and dominated[j][choice[j]]:
                choice[j] += 1
            if choice[j] < len(values[j]):
                break
            depth -= 1
        else:
            return OracleResult(Status.UNSAT, None, checked)


def enumerate_models(phi: Formula, grid: Mapping[str, Sequence[Fraction]]) -> List[Dict[str, Fraction]]:
    """All models of ``phi`` among the full product of ``grid`` (small grids only)."""
    props = sorted(grid)
    if not props:
        return [{}] if evaluate(phi, {}) else []
    mesh = np.meshgrid(*[np.arange(len(grid[p])) for p in props], indexing="ij")
    idx = np.stack([m.ravel() for m in mesh], axis=1)
    interps = [{p: grid[p][i] for p, i in zip(props, row)} for row in idx]
    ok = evaluate_many(phi, interps)
    return [I for I, v in zip(interps, ok) if v]


def format_interpretation(interp: Interpretation) -> str:
    return "".join(f"{p}={format_truth(interp[p])}\n" for p in sorted(interp))


def parse_interpretation(text: str) -> Dict[str, Fraction]:
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, _, value = line.partition("=")
        if not _:
            raise ValueError(f"bad interpretation line {raw!r}")
        out[name.strip()] = truth(value.strip())
    return out

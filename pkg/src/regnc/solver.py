"""The non-clausal unit-resolution calculus on immutable formulas.

Every rule is available as a pure function that takes a formula and an
occurrence path and returns the rewritten formula.  ``solve`` delegates the
actual search to an incremental engine (see ``_engine``) whose trace steps
are replayable through these same functions.
"""

from __future__ import annotations

import contextlib
import gc
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .core import (
    BudgetExceeded,
    EMPTY_CONJ,
    EMPTY_DISJ,
    TOP,
    BOT,
    Conj,
    Const,
    Disj,
    Formula,
    InvalidOcc,
    Lit,
    OccRef,
    RegncError,
    Sign,
    has_constants,
    node_budget as core_node_budget,
    replace_at,
    resolve,
    splice_at,
    tree_size,
)
from .clausal import NotConstantFree
from .hornnc import is_horn_nc_pattern
from .semantics import Status, evaluate

RUR = "RUR"
RGUR = "RGUR"
RHUR = "RHUR"
OR_BOT = "∨⊥"
AND_BOT = "∧⊥"
SPLICE_ONE = "⊙k+1"
SPLICE_SAME = "⊙k+n"
CLASH = "⊥αβ"
MAX = "max"
CONST = "const"
TAUT = "taut"
LEQ_MERGE = "leq-merge"

SIMPLIFICATION_ORDER = (AND_BOT, OR_BOT, CLASH, MAX, SPLICE_ONE, SPLICE_SAME)
EXTRA_RULES = (TAUT, LEQ_MERGE)


class SideConditionViolated(RegncError):
    pass


class TopLevelOcc(RegncError):
    pass


class OccOutsideScope(RegncError):
    pass


class OverlappingOccurrences(RegncError):
    pass


class NotHnc(RegncError):
    def __init__(self, witness: OccRef):
        super().__init__(f"formula is not Horn-NC (disjunction at {list(witness)})")
        self.witness = witness


@dataclass(frozen=True)
class TraceStep:
    """One rule application.

    ``path`` locates the rewritten site in the formula *before* the step:
    the occurrence literal for RUR/RGUR, the spliced node for the two
    splice rules, otherwise the connective that is rewritten.  ``args``
    holds child indices the rule acts on (RGUR: the scope path; RHUR: the
    remaining occurrence paths are in ``extra_paths``).
    """

    rule: str
    literals: Tuple[Lit, ...]
    path: OccRef
    args: Tuple[int, ...] = ()
    extra_paths: Tuple[OccRef, ...] = ()
    result: Optional[Formula] = field(default=None, compare=False)

    def format(self) -> str:
        lits = ",".join(str(l) for l in self.literals) or "-"
        where = "@" + "/".join(str(i) for i in self.path)
        return f"{self.rule}  {lits}  {where}"


@dataclass
class SolveResult:
    status: Status
    model: Optional[Dict[str, Fraction]]
    trace: List[TraceStep]
    final: Formula
    steps: int = 0
    rur_steps: int = 0

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


# -- constants -------------------------------------------------------------

def simplify_constants(phi: Formula) -> Formula:
    """Eliminate regular constants by top/bottom absorption.

    A conjunction loses its TOP children and collapses to BOT on a BOT child;
    dually for disjunctions.  A connective left with one child after losing
    constants is replaced by that child; left with none it becomes the
    neutral constant.  Only a formula that collapses entirely keeps a
    constant (TOP = ``1>=0``, BOT = ``0>=1``).
    """
    from .core import postorder

    out: Dict[int, Formula] = {}
    for node in postorder(phi):
        if isinstance(node, Const):
            out[id(node)] = TOP if node.lhs >= node.rhs else BOT
            continue
        if isinstance(node, Lit):
            out[id(node)] = node
            continue
        kids = [out[id(c)] for c in node.children]
        absorbing, neutral = (BOT, TOP) if isinstance(node, Conj) else (TOP, BOT)
        if any(k == absorbing for k in kids):
            out[id(node)] = absorbing
            continue
        kept = [k for k in kids if k != neutral]
        if len(kept) == len(kids):
            out[id(node)] = node if all(a is b for a, b in zip(kept, node.children)) else type(node)(tuple(kept))
        elif not kept:
            out[id(node)] = neutral
        elif len(kept) == 1:
            out[id(node)] = kept[0]
        else:
            out[id(node)] = type(node)(tuple(kept))
    return out[id(phi)]


# -- C/D extraction and the resolution rules --------------------------------

@dataclass(frozen=True)
class CD:
    """Region removed by a unit-resolution step.

    ``c`` is the path of C (the largest conjunctive region around the
    literal), ``disjunction`` the path of its enclosing disjunction and
    ``d`` the sibling disjuncts.  ``top_level`` means the climb reached the
    scope without meeting a disjunction.
    """

    occ: OccRef
    c: OccRef
    disjunction: Optional[OccRef]
    c_formula: Formula
    d: Tuple[Formula, ...]

    @property
    def top_level(self) -> bool:
        return self.disjunction is None

    @property
    def d_formula(self) -> Disj:
        return Disj(self.d)


def extract_cd(phi: Formula, occ: OccRef, scope: OccRef = ()) -> CD:
    occ = tuple(occ)
    lit = resolve(phi, occ)
    if not isinstance(lit, Lit) or lit.sign is not Sign.LEQ:
        raise InvalidOcc(f"{list(occ)} is not a negative literal occurrence")
    if occ[: len(scope)] != tuple(scope):
        raise OccOutsideScope(f"{list(occ)} is not inside {list(scope)}")
    path = occ
    while len(path) > len(scope):
        parent = path[:-1]
        pnode = resolve(phi, parent)
        if isinstance(pnode, Disj):
            i = path[-1]
            return CD(occ, path, parent, pnode.children[i],
                      pnode.children[:i] + pnode.children[i + 1:])
        path = parent
    return CD(occ, path, None, resolve(phi, path), ())


def _check_unit(phi: Formula, scope: OccRef, unit: Lit) -> Conj:
    node = resolve(phi, scope)
    if not isinstance(node, Conj):
        raise InvalidOcc(f"{list(scope)} is not a conjunction")
    if unit.sign is not Sign.GEQ or unit not in node.children:
        raise InvalidOcc(f"{unit} is not a positive conjunct at {list(scope)}")
    return node


def _resolution_target(phi: Formula, scope: OccRef, unit: Lit, occ: OccRef) -> CD:
    occ = tuple(occ)
    scope = tuple(scope)
    if len(occ) <= len(scope) or occ[: len(scope)] != scope:
        raise OccOutsideScope(f"{list(occ)} is not strictly inside {list(scope)}")
    target = resolve(phi, occ)
    if not isinstance(target, Lit) or target.sign is not Sign.LEQ or target.prop != unit.prop:
        raise InvalidOcc(f"{list(occ)} is not a negative {unit.prop} literal")
    if not unit.threshold > target.threshold:
        raise SideConditionViolated(f"{unit} does not exceed {target}")
    cd = extract_cd(phi, occ, scope)
    if cd.top_level:
        raise TopLevelOcc(f"{target} is conjunctively exposed; use {CLASH}")
    return cd


def _remove_child(phi: Formula, parent: OccRef, index: int) -> Formula:
    node = resolve(phi, parent)
    kids = node.children[:index] + node.children[index + 1:]
    return replace_at(phi, parent, type(node)(kids))


def rgur_step(phi: Formula, conj_occ: OccRef, unit: Lit, occ: OccRef) -> Formula:
    """Unit resolution scoped to the conjunction at ``conj_occ``."""
    _check_unit(phi, tuple(conj_occ), unit)
    cd = _resolution_target(phi, conj_occ, unit, occ)
    return _remove_child(phi, cd.disjunction, cd.c[-1])


def rur_step(phi: Formula, unit: Lit, occ: OccRef) -> Formula:
    """Delete C(occ) from its disjunction, given top-level unit ``unit``."""
    return rgur_step(phi, (), unit, occ)


def rhur_step(phi: Formula, unit: Lit, occs: Sequence[OccRef]) -> Formula:
    """Remove every C(occ_i) at once; the C regions must not overlap."""
    _check_unit(phi, (), unit)
    occs = [tuple(o) for o in occs]
    if len(set(occs)) != len(occs):
        raise OverlappingOccurrences("occurrences are not pairwise distinct")
    cds = [_resolution_target(phi, (), unit, o) for o in occs]
    cs = sorted(cd.c for cd in cds)
    for a, b in zip(cs, cs[1:]):
        if b[: len(a)] == a:
            raise OverlappingOccurrences(f"C regions {list(a)} and {list(b)} overlap")
    # removing in reverse lexicographic order keeps the other paths valid
    for c in reversed(cs):
        phi = _remove_child(phi, c[:-1], c[-1])
    return phi


def _leq_occurrences(node: Formula, prefix: OccRef) -> Iterator[Tuple[OccRef, Lit]]:
    for path, sub, _ in _walk(node):
        if isinstance(sub, Lit) and sub.sign is Sign.LEQ:
            yield prefix + path, sub


def rgur_sites(phi: Formula) -> Iterator[TraceStep]:
    """Every valid RGUR application, as replayable trace steps.

    A site is a conjunction, one of its ``X>=a`` conjuncts and an ``X<=b``
    occurrence below it with a > b that sits inside some disjunction of
    the scope.  Enumeration is exhaustive, so only use it on small inputs.
    """
    for scope, node, _ in _walk(phi):
        if not isinstance(node, Conj):
            continue
        units = [c for c in node.children if isinstance(c, Lit) and c.sign is Sign.GEQ]
        if not units:
            continue
        occs = list(_leq_occurrences(node, scope))
        for unit in dict.fromkeys(units):
            for occ, lit in occs:
                if lit.prop != unit.prop or not unit.threshold > lit.threshold:
                    continue
                if extract_cd(phi, occ, scope).top_level:
                    continue
                yield TraceStep(RGUR, (unit, lit), occ, scope)


def rhur_site(phi: Formula, unit: Lit) -> Optional[TraceStep]:
    """A hyper step for root unit ``unit`` over a maximal set of disjoint regions.

    Regions are taken in document order, skipping any nested inside one
    already chosen.  None when the unit resolves nothing.
    """
    if not isinstance(phi, Conj) or unit not in phi.children:
        return None
    chosen: List[OccRef] = []
    regions: List[OccRef] = []
    for occ, lit in _leq_occurrences(phi, ()):
        if lit.prop != unit.prop or not unit.threshold > lit.threshold:
            continue
        cd = extract_cd(phi, occ)
        if cd.top_level:
            continue
        if any(cd.c[: len(r)] == r or r[: len(cd.c)] == cd.c for r in regions):
            continue
        regions.append(cd.c)
        chosen.append(occ)
    if not chosen:
        return None
    return TraceStep(RHUR, (unit,), chosen[0], (), tuple(chosen[1:]))


# -- simplification rules ----------------------------------------------------

def _walk(phi: Formula) -> Iterator[Tuple[OccRef, Formula, Optional[Formula]]]:
    """(path, node, parent) in post-order, leftmost first."""
    stack = [((), phi, None, False)]
    while stack:
        path, node, parent, expanded = stack.pop()
        if expanded or not isinstance(node, (Conj, Disj)):
            yield path, node, parent
            continue
        stack.append((path, node, parent, True))
        for i in range(len(node.children) - 1, -1, -1):
            stack.append((path + (i,), node.children[i], node, False))


def _clash_pair(node: Conj) -> Optional[Tuple[int, int]]:
    kids = node.children
    for j, b in enumerate(kids):
        if not isinstance(b, Lit):
            continue
        for i in range(j):
            a = kids[i]
            if not isinstance(a, Lit) or a.prop != b.prop or a.sign is b.sign:
                continue
            g, l = (a, b) if a.sign is Sign.GEQ else (b, a)
            if g.threshold > l.threshold:
                return (i, j) if a is g else (j, i)
    return None


def _same_sign_pair(node, sign: Sign) -> Optional[Tuple[int, int]]:
    """First pair (keep, drop) of same-proposition literals of ``sign``.

    GEQ keeps the larger threshold, LEQ keeps the larger too (the merged
    disjunction ``X<=a | X<=b`` is ``X<=max``); ties keep the earlier one.
    """
    kids = node.children
    for j, b in enumerate(kids):
        if not isinstance(b, Lit) or b.sign is not sign:
            continue
        for i in range(j):
            a = kids[i]
            if isinstance(a, Lit) and a.sign is sign and a.prop == b.prop:
                return (i, j) if a.threshold >= b.threshold else (j, i)
    return None


def _taut_pair(node: Disj) -> Optional[Tuple[int, int]]:
    kids = node.children
    for j, b in enumerate(kids):
        if not isinstance(b, Lit):
            continue
        for i in range(j):
            a = kids[i]
            if not isinstance(a, Lit) or a.prop != b.prop or a.sign is b.sign:
                continue
            g, l = (a, b) if a.sign is Sign.GEQ else (b, a)
            if g.threshold <= l.threshold:
                return (i, j) if a is g else (j, i)
    return None


def _match(rule: str, node: Formula, parent: Optional[Formula]) -> Optional[Tuple[int, ...]]:
    if rule == AND_BOT and isinstance(node, Conj):
        for i, c in enumerate(node.children):
            if c == EMPTY_DISJ:
                return (i,)
    elif rule == OR_BOT and isinstance(node, Disj):
        for i, c in enumerate(node.children):
            if c == EMPTY_DISJ:
                return (i,)
    elif rule == CLASH and isinstance(node, Conj):
        return _clash_pair(node)
    elif rule == MAX and isinstance(node, Conj):
        return _same_sign_pair(node, Sign.GEQ)
    elif rule == SPLICE_ONE and isinstance(node, (Conj, Disj)):
        if len(node.children) == 1:
            return ()
    elif rule == SPLICE_SAME and isinstance(node, (Conj, Disj)):
        if parent is not None and type(parent) is type(node):
            return ()
    elif rule == TAUT and isinstance(node, Disj):
        return _taut_pair(node)
    elif rule == LEQ_MERGE and isinstance(node, Disj):
        return _same_sign_pair(node, Sign.LEQ)
    return None


def find_simplification(phi: Formula, extra_rules: bool = False) -> Optional[TraceStep]:
    """The next simplification: first rule by priority, leftmost-innermost site."""
    rules = SIMPLIFICATION_ORDER + (EXTRA_RULES if extra_rules else ())
    for rule in rules:
        for path, node, parent in _walk(phi):
            args = _match(rule, node, parent)
            if args is not None:
                lits = tuple(node.children[i] for i in args) if rule in (CLASH, MAX, TAUT, LEQ_MERGE) else ()
                return TraceStep(rule, lits, path, args)
    return None


def apply_simplification(phi: Formula, step: TraceStep) -> Formula:
    """Apply a simplification step, validating that the rule matches."""
    node = resolve(phi, step.path)
    parent = resolve(phi, step.path[:-1]) if step.path else None
    rule = step.rule
    if rule in (AND_BOT, OR_BOT, CLASH, MAX, TAUT, LEQ_MERGE):
        ok = _valid_args(rule, node, step.args)
    else:
        ok = _match(rule, node, parent) is not None
    if not ok:
        raise InvalidOcc(f"rule {rule} does not apply at {list(step.path)}")
    if rule in (AND_BOT, CLASH):
        return replace_at(phi, step.path, EMPTY_DISJ)
    if rule == TAUT:
        return replace_at(phi, step.path, EMPTY_CONJ)
    if rule in (OR_BOT, MAX, LEQ_MERGE):
        return _remove_child(phi, step.path, step.args[-1])
    if rule == SPLICE_ONE:
        return replace_at(phi, step.path, node.children[0])
    if rule == SPLICE_SAME:
        return splice_at(phi, step.path, node.children)
    raise ValueError(f"unknown simplification rule {rule}")


def _valid_args(rule: str, node: Formula, args: Tuple[int, ...]) -> bool:
    if not isinstance(node, (Conj, Disj)):
        return False
    kids = node.children
    if any(not 0 <= i < len(kids) for i in args):
        return False
    if rule in (AND_BOT, OR_BOT):
        want = Conj if rule == AND_BOT else Disj
        return isinstance(node, want) and len(args) == 1 and kids[args[0]] == EMPTY_DISJ
    if len(args) != 2 or args[0] == args[1]:
        return False
    a, b = kids[args[0]], kids[args[1]]
    if not (isinstance(a, Lit) and isinstance(b, Lit) and a.prop == b.prop):
        return False
    if rule == CLASH:
        return (isinstance(node, Conj) and a.sign is Sign.GEQ and b.sign is Sign.LEQ
                and a.threshold > b.threshold)
    if rule == TAUT:
        return (isinstance(node, Disj) and a.sign is Sign.GEQ and b.sign is Sign.LEQ
                and a.threshold <= b.threshold)
    if rule == MAX:
        return isinstance(node, Conj) and a.sign is b.sign is Sign.GEQ and a.threshold >= b.threshold
    if rule == LEQ_MERGE:
        return isinstance(node, Disj) and a.sign is b.sign is Sign.LEQ and a.threshold >= b.threshold
    return False


def simplify_step(phi: Formula, extra_rules: bool = False) -> Optional[Formula]:
    step = find_simplification(phi, extra_rules)
    return None if step is None else apply_simplification(phi, step)


def simplify(phi: Formula, extra_rules: bool = False) -> Formula:
    while True:
        nxt = simplify_step(phi, extra_rules)
        if nxt is None:
            return phi
        phi = nxt


# -- replay and solve --------------------------------------------------------

@contextlib.contextmanager
def _gc_paused():
    # the engine allocates many cyclic linked nodes; generational collection
    # passes over them cost more than the solve itself
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()

def apply_step(phi: Formula, step: TraceStep) -> Formula:
    if step.rule == RUR:
        return rur_step(phi, step.literals[0], step.path)
    if step.rule == RGUR:
        return rgur_step(phi, step.args, step.literals[0], step.path)
    if step.rule == RHUR:
        return rhur_step(phi, step.literals[0], (step.path,) + step.extra_paths)
    if step.rule == CONST:
        return simplify_constants(phi)
    return apply_simplification(phi, step)


def replay(phi: Formula, trace: Sequence[TraceStep]) -> Formula:
    for step in trace:
        phi = apply_step(phi, step)
    return phi


def solve(phi: Formula, trace: bool = True, extra_rules: bool = False,
          node_budget: Optional[int] = None) -> SolveResult:
    """Decide satisfiability of a constant-free Horn-NC formula.

    Raises NotConstantFree or NotHnc for inputs outside the class.  A SAT
    answer carries the model given by the derived positive units (0
    elsewhere); it is re-checked against the input before being returned.
    """
    from ._engine import Engine

    if has_constants(phi):
        raise NotConstantFree("solve expects a constant-free formula; see simplify_constants")
    verdict = is_horn_nc_pattern(phi)
    if not verdict.is_hnc:
        raise NotHnc(verdict.witness)
    # the engine builds one node per occurrence, which expands shared
    # subformulas; only the expansion budget needs checking here
    limit = core_node_budget() if node_budget is None else node_budget
    size = tree_size(phi)
    if size > limit:
        raise BudgetExceeded(f"tree expansion has {size} nodes, budget is {limit}")
    if isinstance(phi, Disj) and len(phi.children) >= 2:
        # some disjunct is negative, hence true when everything is 0
        model: Dict[str, Fraction] = {}
        if evaluate(phi, model) != 1:
            raise AssertionError("all-zero model of a disjunctive HNC does not verify")
        return SolveResult(Status.SAT, model, [], phi)
    with _gc_paused():
        engine = Engine(phi, record=trace, extra_rules=extra_rules)
        status, model = engine.run()
    final = engine.to_formula()
    if status is Status.SAT and evaluate(phi, model) != 1:
        raise AssertionError("solver model does not satisfy the input")
    return SolveResult(status, model if status is Status.SAT else None,
                       engine.trace if trace else [], final, engine.steps, engine.rur_steps)

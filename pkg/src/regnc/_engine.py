"""Incremental solver engine over a mutable linked tree.

Nodes keep doubly linked child lists so that removing a disjunct or
splicing a child's children into its parent costs O(1) plus the number of
re-parented nodes.  Every conjunction indexes its literal children by
proposition (strongest ``X>=a`` and weakest-threshold ``X<=b``), which makes
the clash and max rules constant-time checks on insertion.  The index of
the root conjunction doubles as the store of derived positive units.

Simplification is event driven: whenever a node's children or parent change
the node is pushed on an agenda.  Unit resolution only runs on an empty
agenda, i.e. on a fully simplified tree.  For each proposition the negative
occurrences are kept sorted by threshold and consumed with a cursor, so a
rising unit never rescans occurrences it already removed.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .core import Conj, Disj, Formula, Lit, OccRef, Sign
from .semantics import Status
from . import solver as S

LIT, CONJ, DISJ = 0, 1, 2


class _Node:
    __slots__ = ("kind", "pos", "prop", "th", "parent", "prev", "next",
                 "first", "last", "n", "dead", "indexed", "geq", "leq", "lit")

    def __init__(self, kind: int):
        self.kind = kind
        self.pos = False
        self.prop = None
        self.th = None
        self.parent = None
        self.prev = None
        self.next = None
        self.first = None
        self.last = None
        self.n = 0
        self.dead = False
        self.indexed = False
        self.geq = None
        self.leq = None
        self.lit = None

    def children(self):
        c = self.first
        while c is not None:
            nxt = c.next
            yield c
            c = nxt


class Engine:
    def __init__(self, phi: Formula, record: bool = True, extra_rules: bool = False):
        self.record = record
        self.extra_rules = extra_rules
        self.trace: List[S.TraceStep] = []
        self.agenda: List[_Node] = []
        self.unit_queue: deque = deque()
        self.queued: set = set()
        self.occs: Dict[str, List[_Node]] = {}
        self.cursor: Dict[str, int] = {}
        self.unsat = False
        self.steps = 0
        self.rur_steps = 0
        self.root = self._build(phi)

    # -- construction and export ------------------------------------------

    def _build(self, phi: Formula) -> _Node:
        root = None
        preorder: List[_Node] = []
        stack: List[Tuple[Formula, Optional[_Node]]] = [(phi, None)]
        while stack:
            f, parent = stack.pop()
            if isinstance(f, Lit):
                node = _Node(LIT)
                node.pos = f.sign is Sign.GEQ
                node.prop = f.prop
                node.th = f.threshold
                node.lit = f
                if not node.pos:
                    self.occs.setdefault(f.prop, []).append(node)
            else:
                node = _Node(CONJ if isinstance(f, Conj) else DISJ)
                preorder.append(node)
                for child in reversed(f.children):
                    stack.append((child, node))
            if parent is None:
                root = node
            else:
                # children are pushed reversed, so they arrive in order
                self._append(parent, node)
        for prop, lst in self.occs.items():
            lst.sort(key=lambda nd: nd.th)   # stable: ties stay in document order
            self.cursor[prop] = 0
        # reverse preorder visits every node after all of its descendants
        self.agenda = preorder
        return root

    def _append(self, parent: _Node, node: _Node) -> None:
        node.parent = parent
        node.prev = parent.last
        node.next = None
        if parent.last is None:
            parent.first = node
        else:
            parent.last.next = node
        parent.last = node
        parent.n += 1

    def to_formula(self, node: Optional[_Node] = None) -> Formula:
        node = self.root if node is None else node
        out: list = []
        stack = [(node, False)]
        while stack:
            nd, expanded = stack.pop()
            if nd.kind == LIT:
                out.append(nd.lit)
            elif expanded:
                k = nd.n
                kids = tuple(out[len(out) - k:]) if k else ()
                del out[len(out) - k:]
                out.append((Conj if nd.kind == CONJ else Disj)(kids))
            else:
                stack.append((nd, True))
                c = nd.last
                while c is not None:
                    stack.append((c, False))
                    c = c.prev
        return out[0]

    def path(self, node: _Node) -> OccRef:
        out = []
        while node.parent is not None:
            i = 0
            c = node.prev
            while c is not None:
                i += 1
                c = c.prev
            out.append(i)
            node = node.parent
        return tuple(reversed(out))

    def _index(self, node: _Node) -> int:
        i = 0
        c = node.prev
        while c is not None:
            i += 1
            c = c.prev
        return i

    def _emit(self, rule: str, lits, path: OccRef, args=(), site: Optional[_Node] = None) -> None:
        self.steps += 1
        if rule == S.RUR:
            self.rur_steps += 1
        if not self.record:
            return
        result = self.to_formula(site) if site is not None else None
        self.trace.append(S.TraceStep(rule, tuple(lits), path, tuple(args), (), result))

    # -- structural edits ---------------------------------------------------

    def _unlink(self, node: _Node) -> None:
        p = node.parent
        if node.prev is None:
            p.first = node.next
        else:
            node.prev.next = node.next
        if node.next is None:
            p.last = node.prev
        else:
            node.next.prev = node.prev
        p.n -= 1
        node.parent = node.prev = node.next = None

    def _kill(self, node: _Node) -> None:
        stack = [node]
        while stack:
            nd = stack.pop()
            nd.dead = True
            c = nd.first
            while c is not None:
                stack.append(c)
                c = c.next

    def _clear(self, node: _Node, kind: int) -> None:
        """Turn ``node`` into an empty connective of ``kind`` in place."""
        c = node.first
        while c is not None:
            nxt = c.next
            self._kill(c)
            c.parent = c.prev = c.next = None
            c = nxt
        node.first = node.last = None
        node.n = 0
        node.kind = kind
        node.geq = node.leq = None
        node.indexed = kind == CONJ
        if node.indexed:
            node.geq, node.leq = {}, {}
        self.agenda.append(node)

    def _push(self, node: Optional[_Node]) -> None:
        if node is not None and node.kind != LIT:
            self.agenda.append(node)

    # -- conjunction index --------------------------------------------------

    def _index_conj(self, conj: _Node) -> None:
        conj.indexed = True
        conj.geq, conj.leq = {}, {}
        for c in list(conj.children()):
            if conj.kind != CONJ or conj.dead:
                return
            if c.kind == LIT and c.parent is conj:
                self._attach(conj, c)

    def _attach(self, conj: _Node, lit: _Node) -> None:
        prop = lit.prop
        if lit.pos:
            other = conj.geq.get(prop)
            if other is None:
                conj.geq[prop] = lit
                raised = True
            else:
                if other.th >= lit.th:
                    keep, drop = other, lit
                else:
                    keep, drop = lit, other
                self._drop(conj, keep, drop)
                raised = keep is lit
            if not raised:
                return
            neg = conj.leq.get(prop)
            if neg is not None and lit.th > neg.th:
                self._clash(conj, lit, neg)
                return
            if conj is self.root:
                self._queue_unit(prop)
        else:
            neg = conj.leq.get(prop)
            if neg is None or lit.th < neg.th:
                conj.leq[prop] = lit
            pos = conj.geq.get(prop)
            if pos is not None and pos.th > lit.th:
                self._clash(conj, pos, lit)

    def _drop(self, conj: _Node, keep: _Node, drop: _Node) -> None:
        path, args = (self.path(conj), (self._index(keep), self._index(drop))) if self.record else (None, None)
        self._unlink(drop)
        drop.dead = True
        conj.geq[keep.prop] = keep
        self._emit(S.MAX, (keep.lit, drop.lit), path, args, conj)
        self.agenda.append(conj)

    def _clash(self, conj: _Node, pos: _Node, neg: _Node) -> None:
        path, args = (self.path(conj), (self._index(pos), self._index(neg))) if self.record else (None, None)
        self._clear(conj, DISJ)
        self._emit(S.CLASH, (pos.lit, neg.lit), path, args, conj)

    def _queue_unit(self, prop: str) -> None:
        if prop not in self.queued:
            self.queued.add(prop)
            self.unit_queue.append(prop)

    # -- simplification -----------------------------------------------------

    def _check(self, node: _Node) -> None:
        if node.dead or node.kind == LIT:
            return
        parent = node.parent
        if node.kind == CONJ and not node.indexed:
            self._index_conj(node)
            if node.kind != CONJ:
                return      # became (|) through a clash; it was re-queued
        if node.n == 0:
            if parent is None:
                if node.kind == DISJ:
                    self.unsat = True
                return
            if node.kind == DISJ:
                rule = S.OR_BOT if parent.kind == DISJ else S.AND_BOT
                path, args = (self.path(parent), (self._index(node),)) if self.record else (None, None)
                if parent.kind == DISJ:
                    self._unlink(node)
                    node.dead = True
                    self.agenda.append(parent)
                else:
                    self._clear(parent, DISJ)
                self._emit(rule, (), path, args, parent)
                return
            if parent.kind == CONJ:
                self._splice(node)
            return
        if node.n == 1:
            self._lift(node)
            return
        if parent is not None and parent.kind == node.kind:
            self._splice(node)
            return
        if node.kind == DISJ and self.extra_rules:
            self._extra(node)

    def _lift(self, node: _Node) -> None:
        """Replace a one-child connective by its child."""
        child = node.first
        parent = node.parent
        path = self.path(node) if self.record else None
        node.first = node.last = None
        node.n = 0
        node.dead = True
        child.parent = parent
        child.prev, child.next = node.prev, node.next
        if parent is None:
            self.root = child
            child.prev = child.next = None
            if child.kind == CONJ and child.indexed:
                for prop in child.geq:
                    self._queue_unit(prop)
        else:
            if node.prev is None:
                parent.first = child
            else:
                node.prev.next = child
            if node.next is None:
                parent.last = child
            else:
                node.next.prev = child
        node.parent = node.prev = node.next = None
        self._emit(S.SPLICE_ONE, (), path, (), child)
        self._push(child)
        if parent is not None:
            self.agenda.append(parent)
            if parent.kind == CONJ and parent.indexed and child.kind == LIT:
                self._attach(parent, child)

    def _splice(self, node: _Node) -> None:
        """Move the children of ``node`` into its same-kind parent."""
        parent = node.parent
        path = self.path(node) if self.record else None
        moved = list(node.children())
        for c in moved:
            c.parent = parent
        if moved:
            first, last = node.first, node.last
            first.prev, last.next = node.prev, node.next
            if node.prev is None:
                parent.first = first
            else:
                node.prev.next = first
            if node.next is None:
                parent.last = last
            else:
                node.next.prev = last
            parent.n += len(moved) - 1
        else:
            self._unlink(node)
        node.first = node.last = None
        node.n = 0
        node.dead = True
        node.parent = node.prev = node.next = None
        self._emit(S.SPLICE_SAME, (), path, (), parent)
        self.agenda.append(parent)
        for c in moved:
            if c.kind != LIT:
                self.agenda.append(c)
        if parent.kind == CONJ and parent.indexed:
            for c in moved:
                if parent.kind != CONJ or parent.dead:
                    break
                if c.kind == LIT and c.parent is parent:
                    self._attach(parent, c)

    def _extra(self, disj: _Node) -> None:
        geq: Dict[str, _Node] = {}
        leq: Dict[str, _Node] = {}
        for c in disj.children():
            if c.kind != LIT:
                continue
            if c.pos:
                g = geq.get(c.prop)
                if g is None or c.th < g.th:
                    geq[c.prop] = c
            else:
                l = leq.get(c.prop)
                if l is not None:
                    keep, drop = (l, c) if l.th >= c.th else (c, l)
                    path, args = (self.path(disj), (self._index(keep), self._index(drop))) if self.record else (None, None)
                    self._unlink(drop)
                    drop.dead = True
                    self._emit(S.LEQ_MERGE, (keep.lit, drop.lit), path, args, disj)
                    self.agenda.append(disj)
                    return
                leq[c.prop] = c
        for prop, g in geq.items():
            l = leq.get(prop)
            if l is not None and g.th <= l.th:
                path, args = (self.path(disj), (self._index(g), self._index(l))) if self.record else (None, None)
                self._clear(disj, CONJ)
                self._emit(S.TAUT, (g.lit, l.lit), path, args, disj)
                return

    # -- unit resolution ----------------------------------------------------

    def _resolve_unit(self, prop: str) -> bool:
        """Apply at most one RUR step for ``prop``; True if one was applied."""
        root = self.root
        if root.kind != CONJ:
            return False
        unit = root.geq.get(prop)
        if unit is None or unit.dead:
            return False
        lst = self.occs.get(prop, ())
        i = self.cursor.get(prop, 0)
        while i < len(lst) and lst[i].th < unit.th:
            occ = lst[i]
            i += 1
            if occ.dead:
                continue
            c = occ
            while c.parent is not None and c.parent.kind == CONJ:
                c = c.parent
            if c.parent is None:
                # conjunctively exposed below the root: a clash, not a RUR
                conj = occ.parent
                self.cursor[prop] = i - 1
                if conj is root:
                    self._clash(root, unit, occ)
                else:
                    self.agenda.append(conj)
                return True
            disj = c.parent
            path = self.path(occ) if self.record else None
            self._unlink(c)
            self._kill(c)
            self._emit(S.RUR, (unit.lit, occ.lit), path, (), disj)
            self.agenda.append(disj)
            self.cursor[prop] = i
            return True
        self.cursor[prop] = i
        return False

    def run(self) -> Tuple[Status, Optional[Dict[str, Fraction]]]:
        while True:
            while self.agenda and not self.unsat:
                self._check(self.agenda.pop())
            if self.unsat:
                return Status.UNSAT, None
            if not self.unit_queue:
                break
            prop = self.unit_queue[0]
            if not self._resolve_unit(prop):
                self.unit_queue.popleft()
                self.queued.discard(prop)
        return Status.SAT, self.model()

    def model(self) -> Dict[str, Fraction]:
        root = self.root
        if root.kind == CONJ:
            return {p: n.th for p, n in sorted(root.geq.items())}
        if root.kind == LIT and root.pos:
            return {root.prop: root.th}
        return {}

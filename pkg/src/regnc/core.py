"""Truth values, regular atoms and non-clausal formulas.

Formulas are immutable trees of frozen dataclasses.  A subformula object may
be referenced more than once, which gives DAG sharing for free; occurrences
are always addressed by their child-index path from the root (``OccRef``),
never by object identity.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Tuple, Union

TruthValue = Fraction
OccRef = Tuple[int, ...]

DEFAULT_NODE_BUDGET = 10**6


class RegncError(Exception):
    """Base class for all errors raised by this package."""


class BudgetExceeded(RegncError):
    pass


class InvalidOcc(RegncError):
    pass


def truth(value) -> Fraction:
    """Coerce ``value`` to an exact truth value in [0, 1].

    Strings are parsed exactly ("0.1" is 1/10, "1/3" is one third); floats
    are rejected because they are not exact.
    """
    if isinstance(value, float):
        raise TypeError("floats are not exact truth values; use str or Fraction")
    v = Fraction(value)
    if not 0 <= v <= 1:
        raise ValueError(f"truth value {v} outside [0, 1]")
    return v


def format_truth(v: Fraction) -> str:
    """Shortest exact decimal for ``v``, or ``p/q`` when none exists."""
    v = Fraction(v)
    num, den = v.numerator, v.denominator
    d, twos, fives = den, 0, 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{num}/{den}"
    if den == 1:
        return str(num)
    places = max(twos, fives)
    scaled = num * 10**places // den
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}".rstrip("0")


class Sign(enum.Enum):
    GEQ = ">="
    LEQ = "<="


@dataclass(frozen=True, slots=True)
class Lit:
    """Regular literal ``prop>=threshold`` (positive) or ``prop<=threshold``."""

    sign: Sign
    prop: str
    threshold: Fraction

    @property
    def positive(self) -> bool:
        return self.sign is Sign.GEQ

    def __str__(self) -> str:
        return f"{self.prop}{self.sign.value}{format_truth(self.threshold)}"


@dataclass(frozen=True, slots=True)
class Const:
    """Regular constant ``lhs>=rhs``; it is TOP iff lhs >= rhs."""

    lhs: Fraction
    rhs: Fraction

    @property
    def is_top(self) -> bool:
        return self.lhs >= self.rhs

    def __str__(self) -> str:
        if (self.lhs, self.rhs) == (1, 0):
            return "T"
        if (self.lhs, self.rhs) == (0, 1):
            return "F"
        return f"{format_truth(self.lhs)}>={format_truth(self.rhs)}"


@dataclass(frozen=True, slots=True)
class Conj:
    children: Tuple["Formula", ...] = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, slots=True)
class Disj:
    children: Tuple["Formula", ...] = ()

    def __str__(self) -> str:
        return to_text(self)


Formula = Union[Lit, Const, Conj, Disj]
Connective = (Conj, Disj)
_CONNECTIVES = frozenset((Conj, Disj))

TOP = Const(Fraction(1), Fraction(0))
BOT = Const(Fraction(0), Fraction(1))
EMPTY_DISJ = Disj(())
EMPTY_CONJ = Conj(())


class ConstClass(enum.Enum):
    TOP = "TOP"
    BOT = "BOT"


def geq(prop: str, threshold) -> Lit:
    return Lit(Sign.GEQ, prop, truth(threshold))


def leq(prop: str, threshold) -> Lit:
    return Lit(Sign.LEQ, prop, truth(threshold))


def conj(*children: Formula) -> Conj:
    return Conj(tuple(children))


def disj(*children: Formula) -> Disj:
    return Disj(tuple(children))


def classify_constant(c: Const) -> ConstClass:
    return ConstClass.TOP if c.lhs >= c.rhs else ConstClass.BOT


def is_connective(phi: Formula) -> bool:
    return isinstance(phi, (Conj, Disj))


def subformulas(phi: Formula) -> Iterator[Tuple[OccRef, Formula]]:
    """Yield every occurrence of every subformula, root first, depth-first."""
    stack = [((), phi)]
    while stack:
        path, node = stack.pop()
        yield path, node
        if isinstance(node, (Conj, Disj)):
            for i in range(len(node.children) - 1, -1, -1):
                stack.append((path + (i,), node.children[i]))


def literals(phi: Formula) -> Iterator[Tuple[OccRef, Lit]]:
    for path, node in subformulas(phi):
        if isinstance(node, Lit):
            yield path, node


def resolve(phi: Formula, path: OccRef) -> Formula:
    node = phi
    for depth, i in enumerate(path):
        if not isinstance(node, (Conj, Disj)) or not 0 <= i < len(node.children):
            raise InvalidOcc(f"path {tuple(path)} is invalid at depth {depth}")
        node = node.children[i]
    return node


def replace_at(phi: Formula, path: OccRef, new: Formula) -> Formula:
    """Return ``phi`` with the occurrence at ``path`` replaced by ``new``."""
    return splice_at(phi, path, (new,))


def splice_at(phi: Formula, path: OccRef, new: Tuple[Formula, ...]) -> Formula:
    """Replace the occurrence at ``path`` with the sequence ``new``.

    The root itself can only be replaced by exactly one formula.
    """
    if not path:
        if len(new) != 1:
            raise InvalidOcc("the root can only be replaced by a single formula")
        return new[0]
    spine = [phi]
    for depth, i in enumerate(path[:-1]):
        node = spine[-1]
        if not isinstance(node, (Conj, Disj)) or not 0 <= i < len(node.children):
            raise InvalidOcc(f"path {tuple(path)} is invalid at depth {depth}")
        spine.append(node.children[i])
    parent = spine[-1]
    last = path[-1]
    if not isinstance(parent, (Conj, Disj)) or not 0 <= last < len(parent.children):
        raise InvalidOcc(f"path {tuple(path)} is invalid")
    kids = parent.children
    node = type(parent)(kids[:last] + tuple(new) + kids[last + 1:])
    for depth in range(len(path) - 2, -1, -1):
        up = spine[depth]
        i = path[depth]
        node = type(up)(up.children[:i] + (node,) + up.children[i + 1:])
    return node


def postorder(phi: Formula) -> List[Formula]:
    """Distinct node objects in post-order (shared nodes visited once)."""
    conn = _CONNECTIVES
    if type(phi) not in conn:
        return [phi]
    seen = {id(phi)}
    out: List[Formula] = []
    append = out.append
    stack = [(phi, iter(phi.children))]
    while stack:
        node, it = stack[-1]
        for child in it:
            key = id(child)
            if key in seen:
                continue
            seen.add(key)
            if type(child) in conn:
                stack.append((child, iter(child.children)))
                break
            append(child)
        else:
            stack.pop()
            append(node)
    return out


def tree_size(phi: Formula) -> int:
    """Number of nodes of the tree expansion of ``phi``."""
    if type(phi) not in _CONNECTIVES:
        return 1
    conn = _CONNECTIVES
    size = {}
    for node in postorder(phi):
        if type(node) in conn:
            n = 1
            for c in node.children:
                n += size[id(c)] if type(c) in conn else 1
            size[id(node)] = n
    return size[id(phi)]


def dag_size(phi: Formula) -> int:
    return sum(1 for _ in postorder(phi))


def node_budget() -> int:
    env = os.environ.get("RNC_NODE_BUDGET")
    return int(env) if env else DEFAULT_NODE_BUDGET


def expand_to_tree(phi: Formula, budget: int | None = None) -> Formula:
    """Copy ``phi`` so that no node object is referenced twice.

    Raises BudgetExceeded before doing any work if the expansion would have
    more than ``budget`` nodes (default: ``RNC_NODE_BUDGET`` or 10**6).
    """
    limit = node_budget() if budget is None else budget
    n = tree_size(phi)
    if n > limit:
        raise BudgetExceeded(f"tree expansion has {n} nodes, budget is {limit}")
    out: list = []
    stack = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if isinstance(node, (Conj, Disj)):
            if expanded:
                k = len(node.children)
                kids = tuple(out[len(out) - k:]) if k else ()
                del out[len(out) - k:]
                out.append(type(node)(kids))
            else:
                stack.append((node, True))
                for child in reversed(node.children):
                    stack.append((child, False))
        elif isinstance(node, Lit):
            out.append(Lit(node.sign, node.prop, node.threshold))
        else:
            out.append(Const(node.lhs, node.rhs))
    return out[0]


def is_tree(phi: Formula) -> bool:
    return dag_size(phi) == tree_size(phi)


def props_of(phi: Formula) -> list:
    """Sorted list of proposition names occurring in ``phi``."""
    return sorted({n.prop for n in postorder(phi) if isinstance(n, Lit)})


def count_literals(phi: Formula) -> int:
    """Literal occurrences in the tree expansion."""
    if type(phi) not in _CONNECTIVES:
        return 1 if type(phi) is Lit else 0
    conn = _CONNECTIVES
    count = {}
    for node in postorder(phi):
        if type(node) in conn:
            n = 0
            for c in node.children:
                tc = type(c)
                n += count[id(c)] if tc in conn else tc is Lit
            count[id(node)] = n
    return count[id(phi)]


def has_constants(phi: Formula) -> bool:
    return any(isinstance(n, Const) for n in postorder(phi))


def to_text(phi: Formula) -> str:
    """Canonical prefix text (the ``.rnc`` grammar)."""
    parts: list = []
    stack: list = [phi]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
        elif isinstance(item, Conj):
            stack.append("}")
            stack.extend(reversed(item.children))
            parts.append("{&")
        elif isinstance(item, Disj):
            stack.append(")")
            stack.extend(reversed(item.children))
            parts.append("(|")
        else:
            parts.append(str(item))
    text = " ".join(parts)
    # no space before a closing delimiter
    return text.replace(" )", ")").replace(" }", "}")

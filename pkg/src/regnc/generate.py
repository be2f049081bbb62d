"""Seeded random formula generators.

Randomness comes from numpy's Philox4x64 counter-based generator, so a given
``GenConfig`` yields the same formula on every platform.  Raw 64-bit words
are drawn in blocks and reduced modulo the range; the tiny modulo bias is
irrelevant for test corpora.

Generation is size driven: a node receives a literal budget and splits it
among 2..arity children until the budget is 1 or the depth cap is reached
(at the cap the remaining budget becomes a flat connective of literals).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List

import numpy as np

from .core import Conj, Disj, Formula, Lit, Sign


class Mode(enum.Enum):
    HNC = "hnc"
    GENERAL_NC = "general"
    CONJUNCTIVE_HNC = "conjunctive"


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    props: int = 4
    depth: int = 4
    arity: int = 3
    k: int = 10                 # thresholds are drawn from {0, 1/k, ..., 1}
    mode: Mode = Mode.HNC
    literals: int = 12          # upper bound on the literal count
    exact: bool = False         # use exactly ``literals`` literals
    positive_rate: float = 0.5  # share of X>=a among freely signed literals
    wrap_rate: float = 0.0      # chance of an extra single-child connective
    root_arity: int = 0         # max children of the root; 0 means ``arity``

    def with_seed(self, seed: int) -> "GenConfig":
        return replace(self, seed=seed)


_NAMES = "PQRSTUVW"


def prop_name(i: int) -> str:
    return _NAMES[i] if i < len(_NAMES) else f"X{i}"


class Rng:
    """Buffered integer draws from Philox."""

    BLOCK = 4096

    def __init__(self, seed: int):
        self._bits = np.random.Philox(seed & (2**64 - 1))
        self._buf: List[int] = []

    def raw(self) -> int:
        if not self._buf:
            self._buf = self._bits.random_raw(self.BLOCK).tolist()
            self._buf.reverse()
        return self._buf.pop()

    def below(self, n: int) -> int:
        return self.raw() % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return lo + self.below(hi - lo + 1)

    def chance(self, p: float) -> bool:
        return self.raw() < p * 2.0**64


class _Gen:
    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = Rng(cfg.seed)
        self._thresholds = [Fraction(i, cfg.k) for i in range(cfg.k + 1)]

    def literal(self, sign: Sign | None) -> Lit:
        if sign is None:
            sign = Sign.GEQ if self.rng.chance(self.cfg.positive_rate) else Sign.LEQ
        prop = prop_name(self.rng.below(self.cfg.props))
        return Lit(sign, prop, self._thresholds[self.rng.below(len(self._thresholds))])

    def split(self, budget: int, depth: int, arity: int) -> List[int]:
        if depth <= 1:
            return [1] * budget
        m = self.rng.between(2, max(2, min(arity, budget)))
        # m positive parts summing to budget
        cuts = sorted({self.rng.between(1, budget - 1) for _ in range(m - 1)})
        bounds = [0] + cuts + [budget]
        return [b - a for a, b in zip(bounds, bounds[1:])]

    def wrap(self, phi: Formula) -> Formula:
        if self.cfg.wrap_rate and self.rng.chance(self.cfg.wrap_rate):
            return (Conj if self.rng.below(2) else Disj)((phi,))
        return phi

    # the three builders share one iterative scheme: a work stack of
    # (budget, depth, role) entries and a result stack
    def build(self, budget: int, depth: int, role: str) -> Formula:
        out: List[Formula] = []
        work = [("node", budget, depth, role)]
        while work:
            item = work.pop()
            if item[0] == "make":
                _, cls, n = item
                kids = tuple(out[len(out) - n:])
                del out[len(out) - n:]
                out.append(self.wrap(cls(kids)))
                continue
            _, b, d, r = item
            if b <= 1 or d <= 0:
                sign = Sign.LEQ if r == "neg" else None
                out.append(self.wrap(self.literal(sign)))
                continue
            wide = d == depth and self.cfg.root_arity
            parts = self.split(b, d, self.cfg.root_arity if wide else self.cfg.arity)
            if r == "hnc":
                cls = Conj if self.rng.below(2) else Disj
                roles = ["hnc"] * len(parts)
                if cls is Disj:
                    # one Horn disjunct, the rest negative
                    roles = ["neg"] * len(parts)
                    roles[self.rng.below(len(parts))] = "hnc"
            elif r == "conj":
                cls = Conj
                roles = ["hnc"] * len(parts)
            else:
                cls = Conj if self.rng.below(2) else Disj
                roles = [r] * len(parts)
            work.append(("make", cls, len(parts)))
            for p, rr in zip(reversed(parts), reversed(roles)):
                work.append(("node", p, d - 1, rr))
        return out[0]


def gen_random(cfg: GenConfig) -> Formula:
    g = _Gen(cfg)
    n = cfg.literals if cfg.exact else g.rng.between(1, max(1, cfg.literals))
    if cfg.mode is Mode.GENERAL_NC:
        return g.build(n, cfg.depth, "any")
    if cfg.mode is Mode.HNC:
        return g.build(n, cfg.depth, "hnc")
    phi = g.build(n, cfg.depth, "conj")
    return phi if isinstance(phi, Conj) else Conj((phi,))


def gen_cascade(n: int, seed: int = 0, k: int = 20, facts_rate: float = 0.05) -> Conj:
    """Conjunctive HNC of about ``n`` literals built as layered implications.

    Propositions X0..Xm-1 are ordered.  A prefix of them get unit facts;
    every other conjunct is ``(| B H)`` where B is a nested negative formula
    over lower-numbered propositions with thresholds below 1/2 and H is a
    small Horn head that asserts higher propositions with thresholds of at
    least 1/2.  Units therefore cascade upwards through many RUR steps.
    Deterministic per (n, seed, k).
    """
    rng = Rng(seed)
    m = max(2, n // 8)
    half = k // 2
    low = [Fraction(i, k) for i in range(0, half)]
    high = [Fraction(i, k) for i in range(half, k + 1)]
    n_facts = max(1, int(m * facts_rate))
    conjuncts: List[Formula] = [Lit(Sign.GEQ, prop_name(i), high[rng.below(len(high))])
                                for i in range(n_facts)]
    used = n_facts

    def neg_lit(limit: int) -> Lit:
        return Lit(Sign.LEQ, prop_name(rng.below(limit)), low[rng.below(len(low))])

    def body(limit: int, size: int, depth: int) -> Formula:
        if size <= 1 or depth == 0:
            return neg_lit(limit)
        parts = rng.between(2, min(3, size))
        sizes = [size // parts] * parts
        sizes[0] += size - sum(sizes)
        cls = Conj if rng.below(2) else Disj
        return cls(tuple(body(limit, s, depth - 1) for s in sizes))

    while used < n:
        h = rng.between(1, m - 1)
        bsize = min(rng.between(2, 6), max(1, n - used - 1))
        b = body(h, bsize, 3)
        head: Formula = Lit(Sign.GEQ, prop_name(h), high[rng.below(len(high))])
        hsize = 1
        if rng.below(3) == 0 and h + 1 < m:
            other = rng.between(h + 1, m - 1)
            side = Disj((Lit(Sign.LEQ, prop_name(rng.below(h)), low[rng.below(len(low))]),
                         Lit(Sign.GEQ, prop_name(other), high[rng.below(len(high))])))
            head = Conj((head, side))
            hsize = 3
        conjuncts.append(Disj((b, head)))
        used += bsize + hsize
    return Conj(tuple(conjuncts))

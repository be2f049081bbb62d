import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from regnc.core import Conj, Const, Disj, Lit, Sign, geq
from regnc.generate import GenConfig, Mode, gen_random
from regnc.lp import Chain, HncRule, Program
from regnc.parser import parse

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PROPS = ["P", "Q", "R", "S"]

tenths = st.integers(0, 10).map(lambda i: Fraction(i, 10))
# interpretation values also hit points strictly between tenths
twentieths = st.integers(0, 20).map(lambda i: Fraction(i, 20))

literals = st.builds(Lit, st.sampled_from([Sign.GEQ, Sign.LEQ]), st.sampled_from(PROPS), tenths)
negative_literals = st.builds(Lit, st.just(Sign.LEQ), st.sampled_from(PROPS), tenths)
constants = st.builds(Const, tenths, tenths)


def _connectives(children):
    kids = st.lists(children, max_size=4).map(tuple)
    return st.one_of(kids.map(Conj), kids.map(Disj))


formulas = st.recursive(literals, _connectives, max_leaves=14)
negative_formulas = st.recursive(negative_literals, _connectives, max_leaves=10)
formulas_with_constants = st.recursive(st.one_of(literals, constants), _connectives, max_leaves=12)
interpretations = st.dictionaries(st.sampled_from(PROPS), twentieths)


def hnc_formulas(mode=Mode.HNC, literals=16, props=4):
    return st.integers(0, 2**32 - 1).map(
        lambda s: gen_random(GenConfig(seed=s, props=props, depth=5, arity=4, mode=mode,
                                       literals=literals, wrap_rate=0.1)))


# formulas from the worked examples, in the .rnc syntax
MIXED_CLAUSAL = "{& (| P>=0.7 0.2>=0.8 R>=1) (| P>=0.2 R<=0)}"
HORN_CLAUSAL = "{& (| P>=0.7 Q<=0.8 R<=0.9) (| P>=0.7 R<=0.1)}"
WITH_CONSTANTS = "(| {& P<=0.4 1>=0} {& (| P<=0.3 R>=0.8) {& Q>=0.6 (| P>=0.7 S<=0.1)}})"
NESTED_HNC = "(| P<=0.4 {& (| P<=0.3 R>=0.8) {& Q>=0.6 (| P>=0.7 S<=0.1)}})"
HNC_DISJ = "(| {& Q<=0.6 S<=0.7} {& R>=0.7 P>=0.3})"
NON_HNC_DISJ = "(| {& Q<=0.6 S>=0.7} {& R>=0.7 P<=0.3})"
NON_HNC_NESTED = "(| P>=0.4 {& (| P<=0.3 R>=0.8) {& Q>=0.6 (| P>=0.7 S<=0.1)}})"
UNIT_CASCADE = "{& P>=0.8 (| Q<=0.4 P<=0.5) (| R>=0.9 {& Q<=0.2 P<=0.3})}"
NESTED_REGION = "{& P>=0.8 (| Q<=0.4 {& P<=0.5 (| R>=0.7 Q<=0.1)}) (| R>=0.9 {& Q<=0.2 P<=0.3})}"
AFTER_RESOLUTION = "{& P>=0.8 Q<=0.4 (| R>=0.9 {& Q<=0.2 P<=0.3})}"
CLASH_CHAIN = "{& P<=0.8 (| P<=0.2 {& (| P<=0.3 Q<=0.4 P>=1) (| R<=0.5 {& S<=0.2 P<=0.6}) Q>=0.7}) P>=0.7}"


@pytest.fixture
def p():
    return parse


def random_program(seed, k=None, props=4):
    """Facts and a small HNC program over a chain of granularity 1..5."""
    rng = random.Random(seed)
    k = k or rng.randint(1, 5)
    rules = []
    for i in range(rng.randint(0, 4)):
        body = gen_random(GenConfig(seed=seed * 131 + i, mode=Mode.GENERAL_NC, props=props,
                                    literals=3, depth=2, k=k, positive_rate=1.0))
        head = gen_random(GenConfig(seed=seed * 137 + i, mode=Mode.HNC, props=props,
                                    literals=3, depth=2, k=k))
        rules.append(HncRule(body, head))
    facts = [geq("PQRS"[rng.randrange(props)], Fraction(rng.randint(0, k), k))
             for _ in range(rng.randint(0, 2))]
    return facts, Program(rules, Chain(k))

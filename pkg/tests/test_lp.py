import random
from fractions import Fraction

import pytest

from regnc.core import EMPTY_DISJ, Conj, geq, postorder, Lit, Sign
from regnc.generate import GenConfig, Mode, gen_random
from regnc.hornnc import is_horn_nc_pattern, is_negative
from regnc.lp import (
    CLASSICAL, MINIMAL_MODEL, Answer, Chain, HncRule, NotPositive, Program, ProgramSyntaxError,
    ThresholdNotInChain, chain_models, entails, minimal_model, negate_positive, parse_program,
    to_formula,
)
from regnc.parser import parse
from regnc.semantics import evaluate
from regnc.solver import NotHnc

from conftest import random_program

F = Fraction
K10 = Chain(10)


def _rule(body, head):
    return HncRule(parse(body), parse(head))


def test_negate_positive_examples():
    assert negate_positive(parse("P>=0.7"), K10) == parse("P<=0.6")
    assert negate_positive(parse("{& R>=1 P>=0.7}"), K10) == parse("(| R<=0.9 P<=0.6)")
    assert negate_positive(parse("P>=0"), K10) == EMPTY_DISJ
    with pytest.raises(ThresholdNotInChain):
        negate_positive(parse("P>=0.75"), K10)
    with pytest.raises(NotPositive):
        negate_positive(parse("P<=0.7"), K10)


def test_to_formula_examples():
    rule = _rule("{& R>=1 (| P>=0.7 {& S>=0.7 Q>=0.6})}", "(| {& Q<=0.6 S<=0.7} {& R>=0.7 P>=0.3})")
    phi = to_formula([], Program([rule], K10))
    assert len(phi.children) == 1
    assert is_horn_nc_pattern(phi).is_hnc
    assert to_formula([geq("P", "0.5")], Program([], K10)) == parse("{& P>=0.5}")
    with pytest.raises(NotHnc):
        _rule("P>=0.5", "(| Q>=0.5 R>=0.5)")


def test_minimal_model_examples():
    prog = Program([_rule("P>=0.7", "Q>=0.5")], K10)
    facts = [geq("P", "0.8")]
    assert to_formula(facts, prog) == parse("{& P>=0.8 (| P<=0.6 Q>=0.5)}")
    assert minimal_model(facts, prog) == {"P": F(4, 5), "Q": F(1, 2)}
    assert minimal_model([], prog) == {}
    assert minimal_model(facts, Program([_rule("P>=0.7", "(|)")], K10)) is None


def test_entails_examples():
    prog = Program([_rule("P>=0.7", "Q>=0.5")], K10)
    facts = [geq("P", "0.8")]
    res = entails(facts, prog, parse("Q>=0.5"))
    assert res.answer is Answer.TRUE and res.semantics == CLASSICAL
    assert entails(facts, prog, parse("Q>=0.6")).answer is Answer.FALSE
    res = entails([], Program([], K10), parse("P<=0.5"))
    assert res.answer is Answer.TRUE and res.semantics == MINIMAL_MODEL
    bad = Program([_rule("P>=0.7", "(|)")], K10)
    assert entails(facts, bad, parse("Q>=0.5")).answer is Answer.UNSAT_PROGRAM


def test_parse_program():
    text = """# sample
chain 10
fact P>=0.8
rule {& R>=1 P>=0.7} -> (| Q>=0.5 S<=0.2)
rule P>=0.7 -> R>=1
"""
    facts, prog = parse_program(text)
    assert facts == (geq("P", "0.8"),)
    assert prog.chain == K10 and len(prog.rules) == 2
    # the first head already holds through S<=0.2, so Q stays at 0
    assert minimal_model(facts, prog) == {"P": F(4, 5), "R": F(1)}
    for bad in ("fact P>=0.8", "chain 10\nrule P>=0.5", "chain 10\nfact P<=0.1",
                "chain 10\nfoo", "chain 4\nfact P>=0.3", "chain 0"):
        with pytest.raises(ProgramSyntaxError):
            parse_program(bad)


def test_program_formulas_are_hnc():
    for seed in range(300):
        facts, prog = random_program(seed)
        phi = to_formula(facts, prog)
        assert is_horn_nc_pattern(phi).is_hnc
        for r in prog.rules:
            assert is_negative(negate_positive(r.body, prog.chain))


def test_negation_is_exact_on_the_chain():
    for seed in range(200):
        k = 1 + seed % 5
        body = gen_random(GenConfig(seed=seed, mode=Mode.GENERAL_NC, props=4, literals=6,
                                    depth=3, k=k, positive_rate=1.0))
        neg = negate_positive(body, Chain(k))
        chain = Chain(k).values()
        grid = {p: chain for p in "PQRS"}
        import itertools
        for vals in itertools.product(chain, repeat=4):
            interp = dict(zip("PQRS", vals))
            assert evaluate(neg, interp) == 1 - evaluate(body, interp)
            if seed % 20:
                break


def test_minimal_model_is_least_and_geq_queries_are_classical():
    for seed in range(200):
        facts, prog = random_program(seed)
        phi = to_formula(facts, prog)
        models = chain_models(phi, prog.chain, "PQRS")
        least = minimal_model(facts, prog)
        assert (least is None) == (not models)
        if least is None:
            continue
        nonzero = lambda m: {p: v for p, v in m.items() if v}
        assert nonzero(least) in [nonzero(m) for m in models]
        for m in models:
            assert all(least.get(p, 0) <= m[p] for p in "PQRS")
        query = gen_random(GenConfig(seed=seed, mode=Mode.GENERAL_NC, props=4, literals=3,
                                     k=prog.chain.k, positive_rate=1.0))
        classical = all(evaluate(query, m) == 1 for m in models)
        assert (entails(facts, prog, query).answer is Answer.TRUE) == classical

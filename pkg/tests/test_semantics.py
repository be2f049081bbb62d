import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from regnc.core import BudgetExceeded, EMPTY_DISJ, conj, geq
from regnc.generate import GenConfig, Mode, gen_random
from regnc.parser import parse
from regnc.semantics import (
    Status, candidate_grid, enumerate_models, evaluate, evaluate_many, format_interpretation,
    oracle_sat, parse_interpretation,
)

from conftest import HORN_CLAUSAL, HNC_DISJ, NON_HNC_DISJ, formulas, interpretations, negative_formulas

F = Fraction


def test_evaluate_examples():
    assert evaluate(parse(HORN_CLAUSAL), {"R": F(1, 10)}) == 1
    assert evaluate(EMPTY_DISJ, {"P": F(1)}) == 0
    assert evaluate(conj(), {}) == 1
    assert evaluate(parse(NON_HNC_DISJ), {"S": F(7, 10), "R": F(7, 10)}) == 1
    # non-strict reading: both literals hold at the boundary
    assert evaluate(parse("{& P>=0.5 P<=0.5}"), {"P": F(1, 2)}) == 1
    assert evaluate(parse("{& T (| F P>=0)}"), {}) == 1


def test_candidate_grid():
    assert candidate_grid(parse("P>=0.7")) == {"P": [F(0), F(7, 20), F(7, 10), F(17, 20), F(1)]}
    assert "Q" not in candidate_grid(parse("P>=0.7"))
    g = candidate_grid(parse(HNC_DISJ))
    assert g["Q"] == [F(0), F(3, 10), F(6, 10), F(8, 10), F(1)]
    assert g["S"] == g["R"] == [F(0), F(35, 100), F(7, 10), F(85, 100), F(1)]
    assert g["P"] == [F(0), F(15, 100), F(3, 10), F(65, 100), F(1)]


def test_oracle_examples():
    assert oracle_sat(parse("{& P>=0.8 P<=0.5}")).status is Status.UNSAT
    res = oracle_sat(parse("P>=0.0"))
    assert res.status is Status.SAT and res.witness == {"P": 0}
    res = oracle_sat(parse(HNC_DISJ))
    assert res.witness["Q"] == 0 and res.witness["S"] == 0


def test_oracle_witness_is_lexicographic_first():
    phi = parse("{& (| P>=0.5 Q>=0.5) (| P<=0.2 Q<=0.2)}")
    res = oracle_sat(phi)
    models = enumerate_models(phi, candidate_grid(phi))
    key = lambda m: tuple(m[p] for p in sorted(m))
    assert res.witness == min(models, key=key)
    assert evaluate(phi, res.witness) == 1


def test_oracle_budget():
    phi = conj(*[geq(f"X{i}", "0.5") for i in range(20)])
    with pytest.raises(BudgetExceeded):
        oracle_sat(phi, budget=10**6)


def test_evaluate_many_matches_evaluate():
    rng = random.Random(3)
    for seed in range(50):
        phi = gen_random(GenConfig(seed=seed, mode=Mode.GENERAL_NC, props=4, literals=14))
        interps = [{p: F(rng.randint(0, 20), 20) for p in "PQRS"} for _ in range(30)]
        got = evaluate_many(phi, interps)
        assert [int(v) for v in got] == [evaluate(phi, I) for I in interps]


def test_interpretation_files():
    text = "# model\nP=0.8\nQ=1/3\n"
    interp = parse_interpretation(text)
    assert interp == {"P": F(4, 5), "Q": F(1, 3)}
    assert format_interpretation(interp) == "P=0.8\nQ=1/3\n"
    with pytest.raises(ValueError):
        parse_interpretation("P 0.5")


def test_grid_restriction_is_sound():
    # any model found by random rational sampling means the grid oracle
    # must report SAT
    rng = random.Random(11)
    for seed in range(1000):
        phi = gen_random(GenConfig(seed=seed, mode=Mode.GENERAL_NC, props=1 + seed % 6, literals=8, k=10))
        props = sorted(candidate_grid(phi))
        interps = [{p: F(rng.randint(0, 997), 997) for p in props} for _ in range(200)]
        sampled_sat = any(int(v) for v in evaluate_many(phi, interps))
        if sampled_sat:
            assert oracle_sat(phi).status is Status.SAT


@given(negative_formulas)
def test_negative_formulas_are_satisfied_at_zero_if_at_all(phi):
    if oracle_sat(phi).status is Status.SAT:
        assert evaluate(phi, {}) == 1


@given(formulas, interpretations)
def test_oracle_witness_verifies(phi, _):
    res = oracle_sat(phi)
    if res.status is Status.SAT:
        assert evaluate(phi, res.witness) == 1


def test_pruned_search_matches_full_enumeration():
    key = lambda m: tuple(m[p] for p in sorted(m))
    for seed in range(600):
        phi = gen_random(GenConfig(seed=seed, mode=Mode.GENERAL_NC, props=1 + seed % 4, literals=10, k=5))
        grid = candidate_grid(phi)
        models = enumerate_models(phi, grid)
        res = oracle_sat(phi)
        assert (res.status is Status.SAT) == bool(models)
        if models:
            full = {p: res.witness.get(p, 0) for p in grid}
            assert full == min(models, key=key)

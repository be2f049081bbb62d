from fractions import Fraction

import pytest
from hypothesis import given

from regnc.core import (
    BOT, TOP, BudgetExceeded, ConstClass, Conj, Const, Disj, InvalidOcc, Lit, Sign,
    classify_constant, count_literals, dag_size, disj, conj, expand_to_tree, format_truth,
    geq, is_tree, leq, postorder, replace_at, resolve, splice_at, subformulas, tree_size, truth,
)
from regnc.parser import parse
from regnc.semantics import evaluate

from conftest import formulas, interpretations


def test_truth_is_exact_and_range_checked():
    assert truth("0.7") == Fraction(7, 10)
    assert truth("1/3") == Fraction(1, 3)
    assert Fraction(3, 10) < truth("1/3") < Fraction(4, 10)
    with pytest.raises(ValueError):
        truth("1.5")
    with pytest.raises(TypeError):
        truth(0.5)


def test_format_truth_prefers_short_decimals():
    assert format_truth(Fraction(1, 10)) == "0.1"
    assert format_truth(Fraction(1)) == "1"
    assert format_truth(Fraction(0)) == "0"
    assert format_truth(Fraction(1, 3)) == "1/3"
    assert format_truth(Fraction(1, 8)) == "0.125"


def test_classify_constant():
    assert classify_constant(Const(Fraction(1), Fraction(6, 10))) is ConstClass.TOP
    assert classify_constant(Const(Fraction(6, 10), Fraction(1))) is ConstClass.BOT
    assert classify_constant(Const(Fraction(1, 2), Fraction(1, 2))) is ConstClass.TOP
    assert str(TOP) == "T" and str(BOT) == "F"


def test_subformulas_of_an_atom():
    phi = leq("P", "0.1")
    assert list(subformulas(phi)) == [((), phi)]


def test_subformulas_of_a_clausal_formula():
    phi = parse("{& (| P>=0.7 R<=0.1)}")
    got = [(path, str(f)) for path, f in subformulas(phi)]
    assert got == [((), "{& (| P>=0.7 R<=0.1)}"), ((0,), "(| P>=0.7 R<=0.1)"),
                   ((0, 0), "P>=0.7"), ((0, 1), "R<=0.1")]


def test_shared_node_reported_per_occurrence():
    shared = disj(leq("P", "0.2"), geq("Q", "0.5"))
    phi = conj(shared, shared)
    occs = [path for path, f in subformulas(phi) if f is shared]
    assert occs == [(0,), (1,)]
    assert len(list(subformulas(phi))) == len(list(subformulas(expand_to_tree(phi))))


def test_expand_to_tree():
    shared = disj(leq("P", "0.2"), geq("Q", "0.5"))
    phi = conj(shared, shared)
    assert not is_tree(phi)
    t = expand_to_tree(phi)
    assert is_tree(t) and t == phi
    assert tree_size(t) == dag_size(t) == 7
    tree = parse("{& P>=0.5 (| Q<=0.1)}")
    assert expand_to_tree(tree) == tree


def test_expand_budget():
    node = geq("P", "0.5")
    for _ in range(30):
        node = conj(node, node)
    assert tree_size(node) == 2**31 - 1
    with pytest.raises(BudgetExceeded):
        expand_to_tree(node, budget=10**6)


def test_resolve_replace_splice():
    phi = parse("{& P>=0.8 (| Q<=0.4 P<=0.5)}")
    assert resolve(phi, (1, 1)) == leq("P", "0.5")
    with pytest.raises(InvalidOcc):
        resolve(phi, (0, 0))
    assert str(replace_at(phi, (1, 0), geq("R", 1))) == "{& P>=0.8 (| R>=1 P<=0.5)}"
    assert str(splice_at(phi, (1,), (leq("Q", "0.4"), leq("P", "0.5")))) == "{& P>=0.8 Q<=0.4 P<=0.5}"
    assert str(splice_at(phi, (1,), ())) == "{& P>=0.8}"
    with pytest.raises(InvalidOcc):
        splice_at(phi, (), ())


def test_postorder_visits_children_first():
    phi = parse("{& (| P>=0.7 R<=0.1) Q<=0.2}")
    assert [str(n) for n in postorder(phi)] == [
        "P>=0.7", "R<=0.1", "(| P>=0.7 R<=0.1)", "Q<=0.2", "{& (| P>=0.7 R<=0.1) Q<=0.2}"]


def test_deep_nesting_is_iterative():
    node = leq("P", "0.1")
    for i in range(20000):
        node = Conj((node,)) if i % 2 else Disj((node,))
    assert count_literals(node) == 1
    assert tree_size(node) == 20001
    assert len(str(node)) > 40000


@given(formulas)
def test_subformula_count_recurrence(phi):
    def count(f):
        if isinstance(f, (Conj, Disj)):
            return 1 + sum(count(c) for c in f.children)
        return 1
    assert len(list(subformulas(phi))) == count(phi) == tree_size(phi)


@given(formulas, interpretations)
def test_expansion_preserves_evaluation(phi, interp):
    dag = Conj((phi, phi))
    assert evaluate(expand_to_tree(dag), interp) == evaluate(dag, interp)

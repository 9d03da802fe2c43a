import math

import pytest

import simplab


def test_factoring_example():
    r = simplab.simplify("x*w + y*z + x*z + y*w")
    assert r["original_cost"] == 7
    assert r["best_cost"] == 3
    assert r["saturated"]
    assert simplab.probably_equivalent(r["best"], "(x+y)*(w+z)")


def test_minimal_input_is_returned():
    r = simplab.simplify("(x+y)*(w+z)")
    assert r["best"] == simplab.render("(x+y)*(w+z)")
    cert = simplab.certify_locally_minimal("(x+y)*(w+z)")
    assert cert["minimal"] and cert["witness"] is None


def test_render_cost_evaluate():
    assert simplab.render("-3") == "(-3)"
    assert simplab.cost("x*w + y*z + x*z + y*w") == 7
    assert simplab.cost("-x", weights=(1, 1, 4)) == 4
    assert simplab.evaluate("(x+y)*(w+z)", {"x": 1, "y": 2, "w": 3, "z": 4}) == 21
    big = 10**40 + 7
    assert simplab.evaluate("x*x", {"x": big}) == big * big
    p = simplab.EQUIVALENCE_PRIME
    assert simplab.evaluate("x+2", {"x": p - 1}, modulus=p) == 1


def test_errors():
    with pytest.raises(simplab.ParseError):
        simplab.render("x(y+x)")
    with pytest.raises(ValueError):
        simplab.render("x^17")
    with pytest.raises(simplab.UnboundVariableError):
        simplab.evaluate("x+q", {"x": 1})
    with pytest.raises(simplab.GuardError):
        simplab.permanent([[1] * 13] * 13, algorithm="naive")
    with pytest.raises(simplab.GuardError):
        simplab.fib(71, method="binet")


def test_matrices():
    m = [[1, 2], [3, 4]]
    for alg in ("naive", "expand", "subset-dp", "ryser"):
        assert simplab.permanent(m, algorithm=alg) == 10
    assert simplab.determinant(m) == -2
    assert simplab.determinant(m, algorithm="cofactor", row=2) == -2
    assert simplab.permanent([[1] * 8] * 8) == math.factorial(8)
    assert simplab.determinant([[10**30, 1], [1, 10**30]]) == 10**60 - 1


def test_recurrences_and_bench():
    assert simplab.fib(10) == 55
    assert simplab.fib(300, method="memo") == simplab.fib(300)
    assert simplab.fib(70, method="binet") == simplab.fib(70)
    r = simplab.eval_recurrence("f(n) = f_1 + 1; f(0)=0", 100, method="naive")
    assert r == {"value": 100, "op_count": 100, "calls": 101}
    rows = simplab.bench("perm_subset_dp", [4, 5], reps=2, seed=3)
    assert [(row["n"], row["rep"]) for row in rows] == [(4, 0), (4, 1), (5, 0), (5, 1)]
    assert rows[0]["digest"] == rows[1]["digest"]
    assert "=>" in simplab.default_rules()

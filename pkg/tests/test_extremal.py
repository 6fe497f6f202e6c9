import itertools
import random
from fractions import Fraction
from math import factorial, gcd

import pytest
from sympy.utilities.iterables import partitions as sympy_partitions

from stareigen.eigen import CoefficientVector, elementary, elementary_coefficients, from_coefficients, support
from stareigen.extremal import (
    Decomposition,
    SearchSpaceError,
    bound_is_proven,
    characterize_optimum,
    check_theorem1,
    extremal_support,
    fuzz_seed,
    fuzz_theorem1,
    grid_size,
    integer_partitions,
    min_support_exact_dim2,
    min_support_grid,
    pair_product_sum,
    partition_dichotomy_check,
    random_special_matrix,
)
from stareigen.matrices import (
    M2,
    OtherMatrix,
    SquareMatrix,
    coefficients_of_matrix,
    is_special,
    m1_matrix,
    m2_matrix,
    spread_uniform_matrix,
)


def _sympy_parts(n):
    out = []
    for d in sympy_partitions(n):
        out.append(tuple(sorted((k for k, m in d.items() for _ in range(m)), reverse=True)))
    return out


@pytest.mark.parametrize("n", [1, 5, 7, 12])
def test_integer_partitions_match_sympy(n):
    ours = list(integer_partitions(n))
    assert len(ours) == len(set(ours))
    assert sorted(ours) == sorted(_sympy_parts(n))


def test_pair_product_sum():
    assert pair_product_sum((3, 3, 1)) == 15
    assert pair_product_sum((5, 1, 1)) == 11
    assert pair_product_sum((1,) * 7) == 21


def test_dichotomy_n7():
    res = partition_dichotomy_check(7)
    assert res.holds
    assert res.exceptions == ((5, 1, 1),)
    # partitions of 7 with at least three parts
    assert res.checked == sum(1 for p in _sympy_parts(7) if len(p) >= 3) == 11


def test_dichotomy_range():
    for n in range(7, 31):
        assert partition_dichotomy_check(n).exceptions == ((n - 2, 1, 1),)


def test_dichotomy_fails_below_7():
    with pytest.raises(ValueError):
        partition_dichotomy_check(6)
    # below 7 a second exception appears: (2, 2, 1) meets the threshold 2(n-1) = 8 at n = 5
    assert pair_product_sum((2, 2, 1)) == 2 * (5 - 1)


def test_bound_helpers():
    assert extremal_support(3) == 4 and extremal_support(8) == 10080
    assert [n for n in range(3, 11) if bound_is_proven(n)] == [3, 8, 9, 10]


def test_exact_n3():
    res = min_support_exact_dim2(3)
    assert res.best_support == 4
    assert res.is_proven_optimal and res.label == "minimum"
    expected = {elementary_coefficients(u, v, w, 3).normalized()
                for u in (1, 2, 3) for v, w in ((2, 3), (3, 2))}
    assert len(expected) == 3
    assert set(res.optimal_witnesses) == expected
    # every other direction has full support 6
    assert {s for d, s in res.candidate_supports if d not in expected} == {6}


def test_exact_n3_against_dense_scan():
    best = {}
    for a in range(-6, 7):
        for b in range(-6, 7):
            if a or b:
                s = support(from_coefficients(CoefficientVector(3, (a, b))))[0]
                best.setdefault(s, []).append((a, b))
    assert min(best) == 4
    assert all(characterize_optimum(CoefficientVector(3, ab)) is not None for ab in best[4])


def test_exact_rejects_other_n():
    with pytest.raises(ValueError):
        min_support_exact_dim2(4)


def test_grid_n4_radius1():
    res = min_support_grid(4, 1)
    assert res.best_support == 12
    assert not res.is_proven_optimal
    assert res.label == "heuristic upper bound"
    assert support(from_coefficients(res.witness))[0] == 12
    assert characterize_optimum(res.witness) is not None


def test_grid_witness_is_primitive():
    res = min_support_grid(4, 2)
    assert res.best_support == 12
    nz = [v for v in res.witness.values if v]
    assert nz[0] > 0
    assert all(v.denominator == 1 for v in nz)
    assert gcd(*(int(v) for v in nz)) == 1


def test_grid_cap_and_range():
    patterns = 3 ** (4 - 2)
    assert grid_size(4, 1) == sum(1 for _ in itertools.combinations_with_replacement(range(patterns), 3)) == 165
    with pytest.raises(SearchSpaceError):
        min_support_grid(5, 2, max_points=1000)
    with pytest.raises(ValueError):
        min_support_grid(3, 1)
    with pytest.raises(ValueError):
        min_support_grid(4, 0)


def test_random_special_is_deterministic_and_special():
    for sp in (0.05, 0.3, 1.0):
        A = random_special_matrix(6, 42, sp)
        assert A == random_special_matrix(6, 42, sp)
        assert is_special(A)
    assert random_special_matrix(6, 1) != random_special_matrix(6, 2)
    with pytest.raises(ValueError):
        random_special_matrix(6, 1, sparsity=0)


def test_lower_bound_check_equality_cases():
    t = check_theorem1(m1_matrix(1, 2, 3, 3))
    assert t.g == 4 and t.equality and t.consistent and t.mode == "full"
    t = check_theorem1(m2_matrix(Fraction(1, 2), 3, 2, 2, 4))
    assert t.g == 12 and t.equality and t.mode == "informational"
    assert isinstance(t.cls, M2)


def test_lower_bound_check_n3_unequal_pair_rows():
    M = SquareMatrix.from_rows([(0, 0, 0), (0, 1, -1), (0, 2, -2)])
    t = check_theorem1(M)
    assert t.g == 6
    assert isinstance(t.cls, OtherMatrix)
    assert t.bound_holds and not t.equality and t.consistent and t.passed


def test_lower_bound_check_rejects_non_special():
    with pytest.raises(ValueError):
        check_theorem1(SquareMatrix.from_rows([(1, 0, 0), (0, 1, -1), (0, 0, 0)]))


def test_fuzz_small_n3_all_consistent():
    results = fuzz_theorem1(3, 30, seed=5)
    assert len(results) == 30
    assert all(c.passed for _, _, c in results)
    assert [s for s, _, _ in results] == [fuzz_seed(5, k) for k in range(30)]


def test_fuzz_is_deterministic():
    a = [c.g for _, _, c in fuzz_theorem1(5, 12, seed=9)]
    b = [c.g for _, _, c in fuzz_theorem1(5, 12, seed=9)]
    assert a == b


@pytest.mark.parametrize("n", [4, 5])
def test_characterize_both_routes(n):
    for u, v, w in [(1, 2, 3), (2, 3, 2), (n, 2, n)]:
        c = 3 * elementary_coefficients(u, v, w, n)
        for method in ("pointwise", "matrix"):
            assert characterize_optimum(c, method) == Decomposition(Fraction(3), u, v, w)
        neg = -c
        assert characterize_optimum(neg, "pointwise") == Decomposition(Fraction(3), u, w, v)
        assert characterize_optimum(neg, "matrix") == Decomposition(Fraction(3), u, w, v)


def test_characterize_example():
    c = 3 * elementary_coefficients(2, 2, 3, 4)
    assert characterize_optimum(c) == Decomposition(Fraction(3), 2, 2, 3)


def test_characterize_m1_template():
    # an (x, p1, p2)-matrix is x * f_1^{p2, p1}
    c = coefficients_of_matrix(m1_matrix(2, 3, 5, 5))
    assert characterize_optimum(c, "matrix") == Decomposition(Fraction(2), 1, 5, 3)
    ints = from_coefficients(c).values()
    assert ints == [2 * x for x in elementary(1, 5, 3, 5).values()]


def test_characterize_rejects_sum_of_two():
    c = elementary_coefficients(1, 2, 3, 4) + elementary_coefficients(2, 3, 4, 4)
    assert characterize_optimum(c, "pointwise") is None
    assert characterize_optimum(c, "matrix") is None
    with pytest.raises(ValueError):
        characterize_optimum(CoefficientVector.zero(4))


def test_characterize_routes_agree_on_random_vectors():
    rng = random.Random(11)
    for _ in range(40):
        c = CoefficientVector.random(4, rng, bound=1, density=0.3)
        a, b = characterize_optimum(c, "pointwise"), characterize_optimum(c, "matrix")
        assert a == b
        assert (a is not None) == (support(from_coefficients(c))[0] == 12)


def test_spread_uniform_is_not_extremal():
    t = check_theorem1(spread_uniform_matrix(1, 3, 5))
    assert t.g == 4 * factorial(4) and not t.equality and t.consistent
    assert isinstance(t.cls, OtherMatrix)

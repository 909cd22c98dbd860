import random
from fractions import Fraction

import pytest

from liesplit.chevalley import AlgebraElement, bracket, constants_for
from liesplit.exact import rank, solve
from liesplit.grading import abelian_levels, grade_type
from liesplit.splitcheck import (
    check_solution, depth_one_centralizer_check, lemma_solution, normal_form_abelian, random_element, replay,
    solve_splitting_equation, strongly_orthogonal_set, unique_pairing_check, verify_case,
)


def case(fam, rank_, k):
    return grade_type(fam, rank_, k), constants_for(fam, rank_)


def amb(g, roots):
    return {g.sys.format_ambient(r) for r in roots}


def test_cascade_examples():
    g, sc = case("C", 6, 4)
    assert amb(g, strongly_orthogonal_set(g, sc, 2)) == {"2λ1", "2λ2", "2λ3", "2λ4"}
    g, sc = case("F", 4, 4)
    assert amb(g, strongly_orthogonal_set(g, sc, 2)) == {"e1+e2", "e1-e2"}
    g, sc = case("D", 5, 3)
    assert [r.coeffs for r in strongly_orthogonal_set(g, sc, 2)] == [(1, 2, 2, 1, 1)]
    with pytest.raises(ValueError):
        strongly_orthogonal_set(g, sc, 0)
    assert strongly_orthogonal_set(g, sc, 3) == []


@pytest.mark.parametrize("key", [("E", 7, 6), ("E", 8, 1), ("B", 6, 4), ("G", 2, 2)])
def test_cascade_pairwise_strongly_orthogonal(key):
    g, sc = case(*key)
    psi = strongly_orthogonal_set(g, sc, 2)
    for i, a in enumerate(psi):
        assert g.sys.is_long(a)
        for b in psi[i + 1:]:
            assert g.sys.is_strongly_orthogonal(a, b)


def test_pairing_partition_c():
    g, sc = case("C", 5, 3)
    rep = unique_pairing_check(g, strongly_orthogonal_set(g, sc, 2))
    assert not rep.violations and not rep.unpaired and rep.unique
    for a, b in rep.paired.items():
        # λi-λj pairs with λi+λj
        assert g.sys.add(a, b) is not None
        assert {g.sys.format_ambient(a).replace("-", "+"), g.sys.format_ambient(b).replace("-", "+")} \
            == {g.sys.format_ambient(a).replace("-", "+")}
    assert set(rep.paired) | rep.unpaired | set(rep.violations) == set(g.roots(1))


def test_pairing_b_odd():
    g, sc = case("B", 6, 3)
    rep = unique_pairing_check(g, strongly_orthogonal_set(g, sc, 2))
    expect = {"λ3"} | {f"λ3-λ{j}" for j in range(4, 7)} | {f"λ3+λ{j}" for j in range(4, 7)}
    assert amb(g, rep.unpaired) == expect
    assert not rep.violations


def test_pairing_detects_violation():
    # a non-strongly-orthogonal choice creates multiple partners
    g, sc = case("C", 4, 2)
    bad_psi = list(g.roots(2))
    rep = unique_pairing_check(g, bad_psi)
    assert rep.violations and not rep.unique


def test_normal_form_already_normal():
    g, sc = case("C", 4, 2)
    psi = strongly_orthogonal_set(g, sc, 2)
    xi = sc.e(psi[0]) + sc.e(psi[1])
    log = normal_form_abelian(g, sc, xi, 2)
    assert log.steps == [] and log.pattern == (1, 2)


@pytest.mark.parametrize("key", [("C", 4, 2), ("B", 4, 2), ("D", 6, 3), ("E", 7, 1)])
def test_normal_form_random(key):
    g, sc = case(*key)
    psi = strongly_orthogonal_set(g, sc, 2)
    rng = random.Random(7)
    for _ in range(30):
        xi = random_element(g, [2], rng, zero_percent=40)
        log = normal_form_abelian(g, sc, xi, 2)
        assert log.result_support <= set(psi)
        assert replay(sc, log, xi) == log.result + log.residue


def test_normal_form_generates_first_root():
    g, sc = case("C", 4, 2)
    psi = strongly_orthogonal_set(g, sc, 2)
    sys = g.sys
    gamma = next(r for r in g.roots(2) if r not in psi and sys.sub(psi[0], r) is not None)
    log = normal_form_abelian(g, sc, sc.e(gamma), 2)
    assert log.steps and log.result_support <= set(psi) and log.result.coefficient(psi[0])


def test_normal_form_rejections():
    g, sc = case("D", 5, 3)
    with pytest.raises(ValueError):
        normal_form_abelian(g, sc, sc.e(g.roots(2)[0]), 1)  # level 1 is not abelian
    with pytest.raises(ValueError):
        normal_form_abelian(g, sc, sc.e(g.roots(1)[0]), 2)


def test_lemma_coefficients():
    # a·1 + b·0 = 1 and 2a + 2b = 1, solved independently
    assert solve([[1, 0], [2, 2]], [1, 1]) == [1, Fraction(-1, 2)]
    g, sc = case("C", 4, 2)
    psi = strongly_orthogonal_set(g, sc, 2)
    R2 = psi[:1]
    R1 = [r for r in g.roots(1) if g.sys.is_strongly_orthogonal(r, R2[0])][:2]
    eta = lemma_solution(g, R1, R2)
    expect = [x - Fraction(1, 2) * c for x, c in zip(g.eta0, g.sys.coroot(R2[0]))]
    assert list(eta.cartan) == expect
    assert lemma_solution(g, R1, []).cartan == tuple(g.eta0)
    for r in R1 + R2:
        assert g.sys.pair(r, eta.cartan) == 1
    with pytest.raises(ValueError):
        lemma_solution(g, R2, R1)


def test_solver_depth_one_and_contact():
    g, sc = case("A", 4, 2)
    zeta = random_element(g, [1], random.Random(3))
    eta0 = AlgebraElement.coweight(g.sys, g.eta0)
    assert bracket(sc, eta0, zeta) == zeta
    eta = solve_splitting_equation(g, sc, zeta)
    assert eta is not None and check_solution(g, sc, eta, zeta)
    g, sc = case("C", 4, 1)  # contact gradation
    zeta = random_element(g, [1], random.Random(4))
    assert check_solution(g, sc, AlgebraElement.coweight(g.sys, g.eta0), zeta)
    assert solve_splitting_equation(g, sc, zeta) is not None


def test_solver_d5_sweep():
    g, sc = case("D", 5, 3)
    rng = random.Random(11)
    for _ in range(100):
        zeta = random_element(g, [1, 2], rng, zero_percent=30)
        eta = solve_splitting_equation(g, sc, zeta)
        assert eta is not None and check_solution(g, sc, eta, zeta)


def test_solver_single_root():
    g, sc = case("E", 6, 3)
    zeta = sc.e(g.roots(2)[0])
    eta = solve_splitting_equation(g, sc, zeta)
    assert check_solution(g, sc, eta, zeta)


def test_solver_rejections():
    g, sc = case("D", 5, 3)
    with pytest.raises(ValueError):
        solve_splitting_equation(g, sc, AlgebraElement(g.sys))
    with pytest.raises(ValueError):
        solve_splitting_equation(g, sc, sc.e(g.roots(0)[0]))


def test_check_solution_rejects_wrong_eta():
    g, sc = case("D", 5, 3)
    zeta = sc.e(g.roots(1)[0]) + sc.e(g.roots(2)[0])
    assert not check_solution(g, sc, AlgebraElement(g.sys), zeta)
    assert not check_solution(g, sc, sc.e(g.roots(1)[1]), zeta)


def _dense_centralizer_dim(g, sc):
    """Oracle: dense matrix of z -> ([z, x])_x over a fixed basis, kernel by dense rank."""
    sys = g.sys
    hs = [AlgebraElement.coweight(sys, [int(i == j) for j in range(sys.rank)]) for i in range(sys.rank)]
    cols = hs + [sc.e(r) for r in g.roots(0)]
    targets = hs + [sc.e(r) for k in range(-g.depth + 1, 1) for r in g.roots(k)]
    coords = [("h", i) for i in range(sys.rank)] + [r.coeffs for r in sys.roots]
    rows = []
    for x in targets:
        images = [bracket(sc, z, x) for z in cols]
        for c in coords:
            if c[0] == "h":
                rows.append([y.cartan[c[1]] for y in images])
            else:
                rows.append([y.coeffs.get(sys[c], 0) for y in images])
    return len(cols) - rank(rows, len(cols))


@pytest.mark.parametrize("key", [("B", 3, 2), ("D", 5, 3), ("A", 3, 2), ("G", 2, 1), ("C", 3, 3), ("E", 6, 4)])
def test_centralizer_against_dense_oracle(key):
    g, sc = case(*key)
    dim = _dense_centralizer_dim(g, sc)
    assert depth_one_centralizer_check(g, sc) == (dim > 0) == (g.depth == 1)


def test_abelian_level_contains_upper_half():
    g, _ = case("E", 8, 4)
    assert {k for k in range(1, g.depth + 1) if 2 * k > g.depth} <= abelian_levels(g)


def test_verify_case_reports():
    rep = verify_case("E", 7, 2, trials=5)
    assert rep.status == "verified" and len(rep.levels[2]) == 7 and len(rep.psi2) == 1
    assert rep.pairing.unique
    rep = verify_case("E", 6, 4, trials=2)
    assert rep.status == "out_of_range" and rep.pairing is None and rep.psi2 == []
    rep = verify_case("A", 3, 2, trials=3)
    assert rep.status == "verified" and rep.centralizer


def test_verify_case_deterministic():
    a = verify_case("F", 4, 4, trials=4, seed=5)
    b = verify_case("F", 4, 4, trials=4, seed=5)
    assert a == b

import pytest

from liesplit.chevalley import AlgebraElement, bracket, constants_for
from liesplit.grading import abelian_levels, eta0_action, grade, grade_type
from liesplit.rootsys import build_root_system
from liesplit.splitcheck import all_cases

DIMS = {"A": lambda l: l * (l + 2), "B": lambda l: l * (2 * l + 1), "C": lambda l: l * (2 * l + 1),
        "D": lambda l: l * (2 * l - 1), "E6": 78, "E7": 133, "E8": 248, "F4": 52, "G2": 14}


def algebra_dim(fam, rank):
    d = DIMS.get(f"{fam}{rank}", DIMS.get(fam))
    return d(rank) if callable(d) else d


@pytest.mark.parametrize("key", all_cases(8))
def test_gradation_invariants(key):
    g = grade_type(*key)
    sys = g.sys
    assert sum(len(g.roots(k)) for k in range(-g.depth, g.depth + 1)) == len(sys.roots)
    assert g.roots(g.depth) and not g.roots(g.depth + 1)
    for k in range(1, g.depth + 1):
        assert {(-r).coeffs for r in g.roots(k)} == {r.coeffs for r in g.roots(-k)}
        assert g.dim(k) == g.dim(-k)
    assert sum(g.dims.values()) == algebra_dim(key[0], key[1])
    for r in sys.roots:
        assert sys.pair(r, g.eta0) == g.level(r)
    assert {k for k in range(1, g.depth + 1) if 2 * k > g.depth} <= abelian_levels(g)


@pytest.mark.parametrize("key", [("B", 4, 2), ("E", 6, 4), ("F", 4, 3)])
def test_level_additivity(key):
    g = grade_type(*key)
    sys = g.sys
    for a in sys.roots:
        for b in sys.roots:
            s = sys.add(a, b)
            if s is not None:
                assert g.level(s) == g.level(a) + g.level(b)


def test_d5_alpha3():
    g = grade_type("D", 5, 3)
    assert (g.dim(0), g.dim(1), g.dim(2)) == (15, 12, 3)
    sys = g.sys
    assert {sys.format_simple(r) for r in g.roots(2)} == {
        "α1+2α2+2α3+α4+α5", "α1+α2+2α3+α4+α5", "α2+2α3+α4+α5"}
    abel = abelian_levels(g)
    assert 2 in abel and 1 not in abel


@pytest.mark.parametrize("rank", range(1, 9))
def test_type_a_depth_one(rank):
    for k in range(1, rank + 1):
        g = grade_type("A", rank, k)
        assert g.depth == 1 and abelian_levels(g) == {1}


def test_c3_alpha2_top_level():
    g = grade_type("C", 3, 2)
    assert {g.sys.format_ambient(r) for r in g.roots(2)} == {"2λ1", "λ1+λ2", "2λ2"}


@pytest.mark.parametrize("rank", range(3, 9))
def test_c_levels_abelian(rank):
    for k in range(2, rank):
        assert 2 in abelian_levels(grade_type("C", rank, k))


def test_eta0_action():
    g = grade_type("D", 5, 3)
    sc = constants_for("D", 5)
    a, b = g.roots(1)[0], g.roots(2)[0]
    assert eta0_action(g, sc.e(a)) == sc.e(a)
    assert eta0_action(g, sc.e(a) + sc.e(b)) == sc.e(a) + sc.e(b).scale(2)
    assert not eta0_action(g, AlgebraElement.coweight(g.sys, [1, 2, 3, 4, 5]))
    # agrees with the bracket by the coweight η0
    x = sc.e(a) + sc.e(b).scale(3)
    assert bracket(sc, AlgebraElement.coweight(g.sys, g.eta0), x) == eta0_action(g, x)


def test_rejections():
    sys = build_root_system("B", 3)
    with pytest.raises(ValueError):
        grade(sys, 0)
    with pytest.raises(ValueError):
        grade(sys, 4)
    with pytest.raises(ValueError):
        grade(sys, [1, 2])
    with pytest.raises(ValueError):
        grade_type("B", 3, [1, 2])

import random
from fractions import Fraction

import pytest

from liesplit.exact import Gaussian, I, mat_mul, rank, transpose
from liesplit.quadric import (
    ConformalForm, Jet, SubspacePair, annihilator, cayley_map, classify_tangent_candidates, conformal_invariance_check,
    jet_basis, jet_kernel_dim, kernel_dim_bracket, normal_form_subspace, project_jet, quadric_model,
    random_complement, random_conformal_map, standard_complement, subspace_rank,
)


def pair_of(V, W):
    return SubspacePair(tuple(map(tuple, V)), tuple(map(tuple, W)))


def brute_kernel_dim(q, pair):
    """Oracle: stack π_o(Z_j) as columns and take n minus their rank."""
    cols = [project_jet(z, pair) for z in jet_basis(q.n, q)]
    return q.n - rank(transpose(cols), q.n)


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_jet_basis_shape(n):
    q = ConformalForm.standard(n)
    basis = jet_basis(n)
    flat = [[x for a in z.coeffs for row in a for x in row] for z in basis]
    assert rank(flat, n ** 3) == n
    assert all(z.in_conformal_algebra(q) for z in basis)


def test_jet_entrywise_formula():
    n = 4
    for j, z in enumerate(jet_basis(n)):
        for k in range(n):
            for a in range(n):
                for b in range(n):
                    expect = -(a == b) * (j == k) + (j == a) * (b == k) + (j == b) * (a == k)
                    assert z.coeffs[k][a][b] == expect


def test_jet_contraction_identity():
    # Z_j(u, v) = -q(u,v) e_j + q(e_j,u) v + q(e_j,v) u, general Gram matrix
    G = [[2, 1, 0], [1, 0, 0], [0, 0, 3]]
    q = ConformalForm(tuple(map(tuple, G)))
    rng = random.Random(1)
    for z_j, j in zip(jet_basis(3, q), range(3)):
        for _ in range(5):
            u = [Fraction(rng.randint(-3, 3)) for _ in range(3)]
            v = [Fraction(rng.randint(-3, 3)) for _ in range(3)]
            e = [int(i == j) for i in range(3)]
            expect = [-q(u, v) * e[i] + q(e, u) * v[i] + q(e, v) * u[i] for i in range(3)]
            assert z_j(u, v) == expect


def test_jet_rejects_asymmetric():
    bad = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    bad[0][0][1] = 1
    with pytest.raises(ValueError):
        Jet(tuple(tuple(map(tuple, a)) for a in bad))
    with pytest.raises(ValueError):
        jet_basis(2)


@pytest.mark.parametrize("n,m,k", [(5, 2, 0), (5, 2, 1), (5, 2, 2), (6, 3, 0), (6, 3, 2), (4, 2, 0)])
def test_normal_form_rank(n, m, k):
    q = ConformalForm.standard(n)
    V = normal_form_subspace(n, m, k)
    assert len(V) == m and subspace_rank(q, V) == k


def test_normal_form_rejections():
    with pytest.raises(ValueError):
        normal_form_subspace(5, 4, 1)  # 2m - k > n
    with pytest.raises(ValueError):
        normal_form_subspace(5, 2, 3)


def test_subspace_rank_basis_invariant():
    q = ConformalForm.standard(6)
    V = normal_form_subspace(6, 3, 1)
    mixed = [[a + 2 * b for a, b in zip(V[0], V[1])], [a - I * c for a, c in zip(V[1], V[2])], V[2]]
    assert subspace_rank(q, mixed) == subspace_rank(q, V) == 1


def test_annihilator_properties():
    q = ConformalForm.standard(5)
    for k in range(0, 3):
        V = normal_form_subspace(5, 2, k)
        ann = annihilator(q, V)
        assert len(ann) == 3
        assert all(q(v, w) == 0 for v in V for w in ann)
        transversal = rank(V + ann, 5) == 5
        assert transversal == (k == 2)


def test_pair_validation():
    V = normal_form_subspace(4, 2, 2)
    with pytest.raises(ValueError):
        pair_of(V, [V[0], [0, 0, 1, 0]])
    with pytest.raises(ValueError):
        pair_of(V, [[0, 0, 1, 0]])


@pytest.mark.parametrize("k", [0, 1, 2])
def test_fast_kernel_matches_brute_force(k):
    q = ConformalForm.standard(5)
    V = normal_form_subspace(5, 2, k)
    rng = random.Random(k)
    candidates = [standard_complement(5, 2)] + [random_complement(V, rng) for _ in range(6)]
    ann = annihilator(q, V)
    if rank(V + ann, 5) == 5:
        candidates.append(ann)
    for W in candidates:
        p = pair_of(V, W)
        assert jet_kernel_dim(q, p) == brute_kernel_dim(q, p)


def test_annihilator_reaches_bound():
    for n, m in [(4, 2), (5, 2), (6, 3), (7, 4)]:
        q = ConformalForm.standard(n)
        V = normal_form_subspace(n, m, m)
        assert jet_kernel_dim(q, pair_of(V, annihilator(q, V))) == n - m


def test_conformal_factor_and_invariance():
    q = ConformalForm.standard(4)
    ident = [[int(i == j) for j in range(4)] for i in range(4)]
    assert q.conformal_factor(ident) == 1
    scalar = [[Gaussian(0, 3) * x for x in row] for row in ident]
    assert q.conformal_factor(scalar) == -9
    A = [[0, 1, 0, 0], [-1, 0, 2, 0], [0, -2, 0, 1], [0, 0, -1, 0]]
    R = cayley_map(A)
    assert mat_mul(transpose(R), R) == ident
    V = normal_form_subspace(4, 2, 1)
    p = pair_of(V, standard_complement(4, 2))
    for g in (ident, scalar, R, random_conformal_map(4, random.Random(2))):
        assert conformal_invariance_check(q, p, g)
    shear = [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert q.conformal_factor(shear) is None
    with pytest.raises(ValueError):
        conformal_invariance_check(q, p, shear)


def test_classify_small():
    rows = classify_tangent_candidates(4, 2, trials=5)
    assert [r.k for r in rows] == [0, 1, 2]
    assert [r.k for r in rows if r.admissible] == [0, 2]
    assert rows[2].annihilator_dim == 2 and rows[2].witness == "annihilator"
    rows = classify_tangent_candidates(6, 3, trials=4)
    assert [r.k for r in rows if r.admissible] == [0, 3]
    assert all(r.max_dim < 3 for r in rows if r.k in (1, 2))
    with pytest.raises(ValueError):
        classify_tangent_candidates(4, 4)


def test_classify_cross_check_and_determinism():
    rows = classify_tangent_candidates(5, 2, trials=3, seed=9, cross_check=True)
    assert all(r.bracket_agree == r.candidates for r in rows)
    assert rows == classify_tangent_candidates(5, 2, trials=3, seed=9, cross_check=True)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_model_frame_is_isometry(n):
    model = quadric_model(n)
    F = [list(r) for r in model.frame]
    G = [list(r) for r in model.gram]
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    assert mat_mul(transpose(F), mat_mul(G, F)) == ident
    assert mat_mul(F, [list(r) for r in model.frame_inverse]) == ident


def test_bracket_model_matches_jets():
    q = ConformalForm.standard(6)
    rng = random.Random(4)
    for k in range(0, 4):
        V = normal_form_subspace(6, 3, k)
        for W in [standard_complement(6, 3), random_complement(V, rng)]:
            p = pair_of(V, W)
            assert kernel_dim_bracket(p) == jet_kernel_dim(q, p)

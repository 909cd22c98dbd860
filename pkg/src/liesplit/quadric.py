"""Hyperquadric tangent-space model: conformal form, 2-jets and projected kernels.

Everything is over the Gaussian rationals.  Vectors are lists of scalars in
the standard coordinates ``∂_1 .. ∂_n``; a subspace is a list of basis vectors.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .chevalley import bracket, build_constants, constants_for
from .exact import Gaussian, I, as_scalar, inverse, mat_mul, nullspace, rank, transpose
from .grading import grade
from .rootsys import quadric_root_system

__all__ = [
    "ConformalForm",
    "Jet",
    "SubspacePair",
    "jet_basis",
    "subspace_rank",
    "normal_form_subspace",
    "standard_complement",
    "annihilator",
    "project_jet",
    "jet_kernel_dim",
    "QuadricModel",
    "quadric_model",
    "kernel_dim_bracket",
    "cayley_map",
    "random_conformal_map",
    "random_complement",
    "conformal_invariance_check",
    "TangentRow",
    "classify_tangent_candidates",
]

ZERO = Fraction(0)
ONE = Fraction(1)


def _dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v) if a and b), ZERO)


def _unit(n: int, j: int) -> list:
    return [ONE if i == j else ZERO for i in range(n)]


def _apply(g: Sequence[Sequence], v: Sequence) -> list:
    return [_dot(row, v) for row in g]


# forms and jets -----------------------------------------------------------

@dataclass(frozen=True)
class ConformalForm:
    """Symmetric nondegenerate bilinear form ``q(u, v) = u^T G v``."""

    gram: tuple[tuple, ...]

    def __post_init__(self):
        g = tuple(tuple(as_scalar(x) for x in row) for row in self.gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")
        if rank(g, n) != n:
            raise ValueError("form is degenerate")
        object.__setattr__(self, "gram", g)

    @classmethod
    def standard(cls, n: int) -> "ConformalForm":
        """``∑ dz_i ⊙ dz_i``: identity Gram matrix."""
        return cls(tuple(tuple(_unit(n, i)) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.gram)

    def __call__(self, u: Sequence, v: Sequence):
        return _dot(u, self.lower(v))

    def lower(self, v: Sequence) -> list:
        """Covector ``q(·, v)`` as a coordinate list."""
        return _apply(self.gram, v)

    def conformal_factor(self, g: Sequence[Sequence]):
        """``c`` with ``g^T G g = c G`` and ``c != 0``, or ``None``."""
        n = self.n
        if len(g) != n or any(len(row) != n for row in g):
            return None
        pulled = mat_mul(mat_mul(transpose(g), self.gram), g)
        i0, j0 = next((i, j) for i in range(n) for j in range(n) if self.gram[i][j])
        c = pulled[i0][j0] / self.gram[i0][j0]
        if not c:
            return None
        ok = all(pulled[i][j] == c * self.gram[i][j] for i in range(n) for j in range(n))
        return c if ok else None


@dataclass(frozen=True)
class Jet:
    """Symmetric-bilinear-valued vector ``A^k_{ij}``, stored as ``coeffs[k][i][j]``."""

    coeffs: tuple[tuple[tuple, ...], ...]

    def __post_init__(self):
        n = len(self.coeffs)
        for k in range(n):
            a = self.coeffs[k]
            if len(a) != n or any(len(r) != n for r in a):
                raise ValueError("jet tensor must be n x n x n")
            if any(a[i][j] != a[j][i] for i in range(n) for j in range(i)):
                raise ValueError("jet must be symmetric in its lower indices")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __call__(self, u: Sequence, v: Sequence) -> list:
        return [
            sum((a_kij * u[i] * v[j]
                 for i, row in enumerate(a_k) if u[i]
                 for j, a_kij in enumerate(row) if a_kij and v[j]), ZERO)
            for a_k in self.coeffs
        ]

    def slice(self, i: int) -> list[list]:
        """The endomorphism ``(A_i)^k_j = A^k_{ij}`` as a matrix indexed ``[k][j]``."""
        return [[self.coeffs[k][i][j] for j in range(self.n)] for k in range(self.n)]

    def in_conformal_algebra(self, q: ConformalForm) -> bool:
        """Every slice lies in ``so(q) ⊕ C·id``."""
        n = self.n
        for i in range(n):
            m = self.slice(i)
            gm = mat_mul(q.gram, m)
            sym = [[gm[a][b] + gm[b][a] for b in range(n)] for a in range(n)]
            # sym must be 2c·G for one scalar c
            i0, j0 = next((a, b) for a in range(n) for b in range(n) if q.gram[a][b])
            c = sym[i0][j0] / q.gram[i0][j0]
            if any(sym[a][b] != c * q.gram[a][b] for a in range(n) for b in range(n)):
                return False
        return True


def jet_basis(n: int, q: ConformalForm | None = None) -> list[Jet]:
    """``Z_j = D ⊗ ∂_j + dz^j ⊙ B`` with ``D = -q`` and ``B = 2∑ dz^s ⊗ ∂_s``.

    For a general Gram matrix ``dz^j`` is read as ``q(∂_j, ·)``, so that
    ``Z_j(u, v) = -q(u, v) ∂_j + q(∂_j, u) v + q(∂_j, v) u``.
    """
    if n < 3:
        raise ValueError(f"jet basis needs n >= 3, got {n}")
    q = q or ConformalForm.standard(n)
    if q.n != n:
        raise ValueError("form dimension does not match n")
    G = q.gram
    d = lambda a, b: ONE if a == b else ZERO  # noqa: E731
    out = []
    for j in range(n):
        coeffs = tuple(
            tuple(tuple(-G[a][b] * d(j, k) + G[j][a] * d(b, k) + G[j][b] * d(a, k)
                        for b in range(n)) for a in range(n))
            for k in range(n)
        )
        out.append(Jet(coeffs))
    return out


# subspaces ---------------------------------------------------------------

def _check_independent(vectors: Sequence[Sequence], n: int, what: str) -> list[list]:
    vs = [[as_scalar(x) for x in v] for v in vectors]
    if any(len(v) != n for v in vs):
        raise ValueError(f"{what} vectors must have {n} coordinates")
    if rank(vs, n) != len(vs):
        raise ValueError(f"{what} vectors are linearly dependent")
    return vs


def subspace_rank(q: ConformalForm, V: Sequence[Sequence]) -> int:
    """Rank of ``q`` restricted to ``span V``."""
    vs = _check_independent(V, q.n, "V")
    if not vs:
        return 0
    low = [q.lower(v) for v in vs]
    return rank([[_dot(u, w) for w in low] for u in vs], len(vs))


def normal_form_subspace(n: int, m: int, k: int) -> list[list]:
    """``∂_1..∂_k`` followed by ``∂_{k+j} + i ∂_{m+j}`` for ``j = 1..m-k``."""
    if not (0 <= k <= m <= n and 2 * m - k <= n):
        raise ValueError(f"need 0 <= k <= m <= n and 2m - k <= n, got n={n}, m={m}, k={k}")
    V = [_unit(n, j) for j in range(k)]
    for j in range(m - k):
        v = _unit(n, k + j)
        v[m + j] = I
        V.append(v)
    return V


def standard_complement(n: int, m: int) -> list[list]:
    """``∂_{m+1} .. ∂_n``."""
    return [_unit(n, j) for j in range(m, n)]


def annihilator(q: ConformalForm, V: Sequence[Sequence]) -> list[list]:
    """Basis of ``{w : q(v, w) = 0 for all v in V}``."""
    vs = _check_independent(V, q.n, "V")
    if not vs:
        return [_unit(q.n, j) for j in range(q.n)]
    return nullspace([q.lower(v) for v in vs], q.n)


def _same_span(a: Sequence[Sequence], b: Sequence[Sequence], n: int) -> bool:
    ra = rank(a, n)
    return ra == rank(b, n) == rank(list(a) + list(b), n)


@dataclass(frozen=True)
class SubspacePair:
    """Transversal pair ``V ⊕ W`` of the tangent space."""

    V: tuple[tuple, ...]
    W: tuple[tuple, ...]
    n: int = field(init=False)

    def __post_init__(self):
        vs, ws = list(self.V), list(self.W)
        if not vs:
            raise ValueError("V must be nonempty")
        n = len(vs[0])
        V = _check_independent(vs, n, "V")
        W = _check_independent(ws, n, "W")
        if len(V) + len(W) != n or rank(V + W, n) != n:
            raise ValueError("V and W are not transversal complements")
        object.__setattr__(self, "V", tuple(map(tuple, V)))
        object.__setattr__(self, "W", tuple(map(tuple, W)))
        object.__setattr__(self, "n", n)

    @property
    def m(self) -> int:
        return len(self.V)

    def transform(self, g: Sequence[Sequence]) -> "SubspacePair":
        return SubspacePair(tuple(_apply(g, v) for v in self.V), tuple(_apply(g, w) for w in self.W))

    def v_coordinates(self) -> list[list]:
        """Rows sending ``x`` to its ``V``-coordinates along ``W`` (the projection ``π_o``)."""
        basis = transpose([list(v) for v in self.V] + [list(w) for w in self.W])
        return inverse(basis)[: self.m]

    def w_annihilators(self) -> list[list]:
        """``m`` independent functionals vanishing on ``W``; same kernel as ``π_o``."""
        if not self.W:
            return [_unit(self.n, j) for j in range(self.n)]
        return nullspace([list(w) for w in self.W], self.n)


# projected jets ----------------------------------------------------------

def project_jet(jet: Jet, pair: SubspacePair) -> list:
    """``π_o(Z)``: restrict to ``V × V`` and project values to ``V`` along ``W``.

    Returned as the flat list of ``V``-coordinates of ``Z(v_a, v_b)`` for
    ``a <= b``.  This is the direct tensor computation, used as an oracle.
    """
    P = pair.v_coordinates()
    out = []
    for a in range(pair.m):
        for b in range(a, pair.m):
            z = jet(pair.V[a], pair.V[b])
            out.extend(_dot(row, z) for row in P)
    return out


def jet_kernel_dim(q: ConformalForm, pair: SubspacePair) -> int:
    """``dim{a : ∑ a_j π_o(Z_j) = 0}`` for the jet basis of ``q``.

    Uses ``Z_a(u, v) = -q(u, v) a + q(a, u) v + q(a, v) u`` and tests membership
    of the values in ``W`` through functionals vanishing on ``W``.
    """
    n = q.n
    if pair.n != n:
        raise ValueError("pair and form live in different dimensions")
    L = pair.w_annihilators()
    V = [list(v) for v in pair.V]
    low = [q.lower(v) for v in V]  # q(∂_j, v) = low[v][j]
    Lv = [[_dot(l, v) for v in V] for l in L]
    rows = []
    for a in range(len(V)):
        for b in range(a, len(V)):
            qab = _dot(V[a], low[b])
            for c, l in enumerate(L):
                la, lb = Lv[c][a], Lv[c][b]
                rows.append([-qab * l[j] + low[a][j] * lb + low[b][j] * la for j in range(n)])
    return n - rank(rows, n)


# the root-space model ----------------------------------------------------

@dataclass(frozen=True)
class QuadricModel:
    """First-node gradation of ``B_l`` or ``D_l`` viewed as the tangent space of a quadric.

    ``frame`` has the images of the standard basis as columns in ``g_1``
    root-vector coordinates; ``gram`` is the invariant form on ``g_1``.
    """

    n: int
    grad: object
    sc: object
    roots: tuple
    gram: tuple[tuple, ...]
    frame: tuple[tuple, ...]
    frame_inverse: tuple[tuple, ...]
    triple: tuple  # per ξ-index: list of (s, t, target, coeff)


def _invariant_form(grad, sc, roots) -> list[list]:
    """Symmetric form on ``g_1`` killed by the semisimple part of ``g_0``."""
    sys = grad.sys
    n = len(roots)
    pos = {r: i for i, r in enumerate(roots)}
    pairs = sorted({(a, b) for a in range(n) for b in range(a, n)})
    var = {}
    for idx, (a, b) in enumerate(pairs):
        var[(a, b)] = var[(b, a)] = idx
    gens = [r for r in sys.simple_roots if grad.level(r) == 0]
    gens = gens + [-r for r in gens]
    eqs = []
    for g in gens:
        act = {}
        for i, r in enumerate(roots):
            s = sys.add(g, r)
            if s is not None:
                act[i] = (pos[s], sc.N(g, r))
        for a in range(n):
            for b in range(a, n):
                row = [0] * len(pairs)
                if a in act:
                    t, N = act[a]
                    row[var[(t, b)]] += N
                if b in act:
                    t, N = act[b]
                    row[var[(a, t)]] += N
                if any(row):
                    eqs.append(row)
    sol = nullspace(eqs, len(pairs)) if eqs else [[ONE] * len(pairs)]
    if len(sol) != 1:
        raise ArithmeticError(f"expected a unique invariant form, found {len(sol)}")
    x = sol[0]
    return [[x[var[(a, b)]] for b in range(n)] for a in range(n)]


def _hyperbolic_frame(gram: list[list]) -> list[list]:
    """Columns ``f_i`` with ``gram(f_i, f_j) = δ_ij``; ``gram`` is monomial."""
    n = len(gram)
    cols: list[list] = []
    done = set()
    for a in range(n):
        if a in done:
            continue
        partners = [b for b in range(n) if gram[a][b]]
        if len(partners) != 1:
            raise ArithmeticError("invariant form is not monomial in root vectors")
        b = partners[0]
        done.update((a, b))
        if a == b:
            if gram[a][a] != 1:
                raise ArithmeticError("anisotropic root vector must have unit length")
            cols.append(_unit(n, a))
            continue
        c = gram[a][b]
        f = [ZERO] * n
        g = [ZERO] * n
        f[a], f[b] = ONE, 1 / (2 * c)
        g[a], g[b] = I, -I / (2 * c)
        cols.extend([f, g])
    return transpose(cols)


@lru_cache(maxsize=None)
def quadric_model(n: int) -> QuadricModel:
    sys = quadric_root_system(n)
    grad = grade(sys, 1)
    sc = build_constants(sys) if sys.name == "D3" else constants_for(sys.family, sys.rank)
    roots = grad.roots(1)
    if len(roots) != n:
        raise ArithmeticError(f"{sys.name} first level has {len(roots)} roots, expected {n}")
    gram = _invariant_form(grad, sc, roots)
    # fix the free scalar: unit length on the anisotropic vector when there is one
    diag = [gram[a][a] for a in range(n) if gram[a][a]]
    scale = diag[0] if diag else next(x for row in gram for x in row if x)
    gram = [[x / scale for x in row] for row in gram]
    frame = _hyperbolic_frame(gram)
    pos = {r: i for i, r in enumerate(roots)}
    triple = []
    for beta in roots:
        xi = sc.e(-beta)
        entries = []
        for t, rt in enumerate(roots):
            inner = bracket(sc, xi, sc.e(rt))
            if not inner:
                continue
            for s, rs in enumerate(roots):
                out = bracket(sc, sc.e(rs), inner)
                if any(out.cartan):
                    raise ArithmeticError("bracket left the first level")
                for r, c in out.coeffs.items():
                    entries.append((s, t, pos[r], c))
        triple.append(tuple(entries))
    return QuadricModel(
        n, grad, sc, tuple(roots),
        tuple(map(tuple, gram)), tuple(map(tuple, frame)),
        tuple(map(tuple, inverse(frame))), tuple(triple),
    )


def kernel_dim_bracket(pair: SubspacePair, model: QuadricModel | None = None) -> int:
    """``dim{ξ ∈ g_-1 : [v,[ξ,v']] + [v',[ξ,v]] ∈ W for all v, v' in V}``.

    The pair is given in standard coordinates and carried into ``g_1`` by the
    model's isometry.
    """
    n = pair.n
    model = model or quadric_model(n)
    if model.n != n:
        raise ValueError("model dimension does not match the pair")
    frame = model.frame
    V = [_apply(frame, v) for v in pair.V]
    W = [_apply(frame, w) for w in pair.W]
    L = nullspace(W, n) if W else [_unit(n, j) for j in range(n)]
    rows = []
    for a in range(len(V)):
        for b in range(a, len(V)):
            va, vb = V[a], V[b]
            cols = []
            for entries in model.triple:
                acc = [ZERO] * n
                for s, t, r, c in entries:
                    x = va[s] * vb[t] + vb[s] * va[t]
                    if x:
                        acc[r] = acc[r] + c * x
                cols.append([_dot(l, acc) for l in L])
            rows.extend([cols[j][c] for j in range(n)] for c in range(len(L)))
    return n - rank(rows, n)


# conformal maps and random data ------------------------------------------

def _gaussian_int(rng: random.Random, bound: int = 2) -> Gaussian:
    return Gaussian(rng.randint(-bound, bound), rng.randint(-bound, bound))


def cayley_map(A: Sequence[Sequence]) -> list[list]:
    """``(I - A)(I + A)^{-1}``; orthogonal for the standard form when ``A`` is antisymmetric."""
    n = len(A)
    plus = [[(ONE if i == j else ZERO) + A[i][j] for j in range(n)] for i in range(n)]
    minus = [[(ONE if i == j else ZERO) - A[i][j] for j in range(n)] for i in range(n)]
    return mat_mul(minus, inverse(plus))


def random_conformal_map(n: int, rng: random.Random) -> list[list]:
    """Nonzero scalar times a Cayley rotation with small Gaussian-integer entries."""
    while True:
        A = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                x = _gaussian_int(rng, 1)
                A[i][j], A[j][i] = x, -x
        try:
            R = cayley_map(A)
        except ValueError:
            continue
        lam = _gaussian_int(rng, 2)
        if lam:
            return [[lam * x for x in row] for row in R]


def random_complement(V: Sequence[Sequence], rng: random.Random, avoid: Sequence[Sequence] | None = None,
                      bound: int = 2) -> list[list]:
    """Random ``W`` with small Gaussian-integer entries and ``V ⊕ W`` the full space.

    ``avoid``: a subspace the sample must not equal (rejected and redrawn).
    """
    n = len(V[0])
    m = len(V)
    while True:
        W = [[_gaussian_int(rng, bound) for _ in range(n)] for _ in range(n - m)]
        if rank([list(v) for v in V] + W, n) != n:
            continue
        if avoid is not None and _same_span(W, avoid, n):
            continue
        return W


def conformal_invariance_check(q: ConformalForm, pair: SubspacePair, g: Sequence[Sequence]) -> bool:
    """Kernel dimension of ``g·pair`` equals that of ``pair``."""
    if q.conformal_factor(g) is None:
        raise ValueError("map does not preserve the form up to a nonzero scalar")
    return jet_kernel_dim(q, pair.transform(g)) == jet_kernel_dim(q, pair)


# classification ----------------------------------------------------------

@dataclass(frozen=True)
class TangentRow:
    n: int
    m: int
    k: int
    max_dim: int
    bound: int
    admissible: bool
    witness: str
    candidates: int
    annihilator_dim: int | None
    dims: tuple[int, ...]
    bracket_agree: int | None = None


def classify_tangent_candidates(n: int, m: int, trials: int = 20, seed: int = 0,
                                cross_check: bool = False) -> list[TangentRow]:
    """For each valid rank ``k``: best kernel dimension over a complement search.

    Candidates are the annihilator (when transversal), the standard
    complement and ``trials`` random complements.  ``k`` is admissible when the
    best value reaches ``n - m``.  With ``cross_check`` every candidate is
    also run through the root-space bracket model and agreements are counted.
    """
    if not (n >= 3 and 2 <= m <= n - 1):
        raise ValueError(f"need n >= 3 and 2 <= m <= n-1, got n={n}, m={m}")
    q = ConformalForm.standard(n)
    rows = []
    for k in range(max(0, 2 * m - n), m + 1):
        V = normal_form_subspace(n, m, k)
        cands: list[tuple[str, list[list]]] = []
        ann = annihilator(q, V)
        ann_ok = rank(V + ann, n) == n
        if ann_ok:
            cands.append(("annihilator", ann))
        cands.append(("standard", standard_complement(n, m)))
        rng = random.Random(f"{seed}:quadric:{n}:{m}:{k}")
        for t in range(trials):
            cands.append((f"random#{t}", random_complement(V, rng, avoid=ann if ann_ok else None)))
        dims = []
        agree = 0
        best, witness = -1, ""
        for name, W in cands:
            pair = SubspacePair(tuple(map(tuple, V)), tuple(map(tuple, W)))
            d = jet_kernel_dim(q, pair)
            dims.append(d)
            if cross_check and kernel_dim_bracket(pair) == d:
                agree += 1
            if d > best:
                best, witness = d, name
        rows.append(TangentRow(
            n, m, k, best, n - m, best >= n - m, witness, len(cands),
            dims[0] if ann_ok else None, tuple(dims), agree if cross_check else None,
        ))
    return rows

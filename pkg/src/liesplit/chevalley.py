"""Chevalley basis structure constants and the adjoint action.

Normalisation: ``[e_α, e_-α] = h_α`` (the coroot), ``[h, e_α] = <α, h> e_α`` and
``[e_α, e_β] = N(α, β) e_(α+β)`` with integer ``N``.  Signs are fixed by making
``N`` positive on extraspecial pairs, where for each non-simple positive root
``ξ`` the extraspecial pair ``(α, β)`` has ``α`` smallest among positive roots
with ``ξ - α`` a positive root.  The order is lexicographic on simple
coefficients read from the last simple root, so ``α1 < α2 < ... < α_l`` and
the order is compatible with addition.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Sequence

from .exact import as_scalar
from .rootsys import Root, RootSystem, build_root_system, root_string

__all__ = [
    "AlgebraElement",
    "StructureConstants",
    "build_constants",
    "constants_for",
    "bracket",
    "ad_exp",
    "torus_scale",
    "structure_tensor_check",
    "bracket_table",
    "jacobi_violations",
    "antisymmetry_violations",
]

ZERO = Fraction(0)


class AlgebraElement:
    """Cartan part (simple-coroot coordinates) plus root-vector coefficients."""

    __slots__ = ("sys", "cartan", "coeffs")

    def __init__(self, sys: RootSystem, cartan: Sequence | None = None, coeffs: Mapping[Root, object] | None = None):
        self.sys = sys
        if cartan is None:
            cartan = (ZERO,) * sys.rank
        elif len(cartan) != sys.rank:
            raise ValueError(f"Cartan part must have {sys.rank} entries")
        self.cartan = tuple(as_scalar(x) for x in cartan)
        clean = {}
        for r, c in (coeffs or {}).items():
            if r not in sys:
                raise ValueError(f"{r!r} is not a root of {sys.name}")
            if c:
                clean[sys.canonical(r)] = as_scalar(c)
        self.coeffs = clean

    # constructors ------------------------------------------------------
    @classmethod
    def root_vector(cls, sys: RootSystem, root: Root, scale=1) -> "AlgebraElement":
        return cls(sys, None, {root: scale})

    @classmethod
    def coweight(cls, sys: RootSystem, h: Sequence) -> "AlgebraElement":
        return cls(sys, h, None)

    @classmethod
    def coroot(cls, sys: RootSystem, root: Root) -> "AlgebraElement":
        return cls(sys, sys.coroot(root), None)

    # vector space structure -------------------------------------------
    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        coeffs = dict(self.coeffs)
        for r, c in other.coeffs.items():
            coeffs[r] = coeffs.get(r, ZERO) + c
        return AlgebraElement(self.sys, [a + b for a, b in zip(self.cartan, other.cartan)], coeffs)

    def __neg__(self) -> "AlgebraElement":
        return self.scale(-1)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, s) -> "AlgebraElement":
        return AlgebraElement(self.sys, [s * x for x in self.cartan], {r: s * c for r, c in self.coeffs.items()})

    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.sys is other.sys and self.cartan == other.cartan and self.coeffs == other.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs) or any(self.cartan)

    @property
    def is_zero(self) -> bool:
        return not self

    @property
    def support(self) -> set[Root]:
        return set(self.coeffs)

    def coefficient(self, root: Root):
        return self.coeffs.get(root, ZERO)

    def restrict(self, roots: Iterable[Root], keep_cartan: bool = False) -> "AlgebraElement":
        keep = set(roots)
        return AlgebraElement(
            self.sys,
            self.cartan if keep_cartan else None,
            {r: c for r, c in self.coeffs.items() if r in keep},
        )

    def __repr__(self) -> str:
        parts = []
        if any(self.cartan):
            parts.append("h" + str(tuple(str(x) for x in self.cartan)))
        for r in sorted(self.coeffs):
            parts.append(f"{self.coeffs[r]}*e{self.sys.format_coeffs(r)}")
        return "AlgebraElement(" + (" + ".join(parts) or "0") + ")"


class StructureConstants:
    """Integer structure constants ``N(α, β)`` for every root pair with ``α+β`` a root."""

    def __init__(self, sys: RootSystem, table: dict[tuple[Root, Root], tuple[Root, int]]):
        self.sys = sys
        # (α, β) -> (α+β, N(α, β))
        self.table = table

    def N(self, a: Root, b: Root) -> int:
        hit = self.table.get((a, b))
        return 0 if hit is None else hit[1]

    @property
    def coroot_pairings(self):
        return {(b, a): self.sys.pairings(b) for b in self.sys.roots for a in self.sys.simple_roots}

    def e(self, root: Root, scale=1) -> AlgebraElement:
        return AlgebraElement.root_vector(self.sys, root, scale)

    def basis(self) -> list[AlgebraElement]:
        """Simple coroots followed by the root vectors in root order."""
        sys = self.sys
        hs = [AlgebraElement.coweight(sys, [int(i == j) for j in range(sys.rank)]) for i in range(sys.rank)]
        return hs + [self.e(r) for r in sys.roots]

    def __repr__(self) -> str:
        return f"StructureConstants({self.sys.name}, {len(self.table)} entries)"


def _order_key(r: Root) -> tuple[int, ...]:
    """Lexicographic with the last simple root most significant, so ``α1 < α2 < ...``."""
    return r.coeffs[::-1]


def _extraspecial_table(sys: RootSystem):
    """``N`` on pairs of positive roots, built height by height."""
    pos = sorted(sys.positive_roots, key=lambda r: (r.height, r.coeffs))
    norm = sys.norm
    Npos: dict[tuple[Root, Root], int] = {}

    def N(a: Root, b: Root) -> Fraction:
        s = sys.add(a, b)
        if s is None:
            return ZERO
        ap, bp = a.is_positive, b.is_positive
        if ap and bp:
            return Fraction(Npos[(a, b)])
        if not ap and not bp:
            return -Fraction(Npos[(-a, -b)])
        # a + b + c = 0: N(a,b)/(c,c) = N(b,c)/(a,a) = N(c,a)/(b,b)
        c = -s
        if b.is_positive == c.is_positive:
            return norm(c) / norm(a) * N(b, c)
        return norm(c) / norm(b) * N(c, a)

    for xi in pos:
        if xi.height == 1:
            continue
        pairs = []
        for a in sorted(sys.positive_roots, key=_order_key):
            b = sys.sub(xi, a)
            if b is not None and b.is_positive and _order_key(a) < _order_key(b):
                pairs.append((a, b))
        alpha, beta = pairs[0]
        p, _ = root_string(sys, alpha, beta)
        n_ab = p + 1
        Npos[(alpha, beta)] = n_ab
        Npos[(beta, alpha)] = -n_ab
        for gamma, delta in pairs[1:]:
            # α + β + (-γ) + (-δ) = 0, no two opposite
            t1 = ZERO
            bg = sys.sub(beta, gamma)
            if bg is not None:
                t1 = N(beta, -gamma) * N(alpha, -delta) / norm(bg)
            t2 = ZERO
            ag = sys.sub(alpha, gamma)
            if ag is not None:
                t2 = N(-gamma, alpha) * N(beta, -delta) / norm(ag)
            n_neg = -norm(xi) / n_ab * (t1 + t2)  # N(-γ, -δ)
            n_gd = -n_neg
            if n_gd.denominator != 1:
                raise ArithmeticError(f"non-integral structure constant for {gamma!r}, {delta!r}")
            Npos[(gamma, delta)] = int(n_gd)
            Npos[(delta, gamma)] = -int(n_gd)
    return Npos, N


def build_constants(sys: RootSystem) -> StructureConstants:
    """Full table ``(α, β) -> (α+β, N(α, β))`` over all roots."""
    _, N = _extraspecial_table(sys)
    table = {}
    for a in sys.roots:
        for b in sys.roots:
            s = sys.add(a, b)
            if s is not None:
                n = N(a, b)
                if n.denominator != 1 or not n:
                    raise ArithmeticError(f"bad structure constant N({a!r}, {b!r}) = {n}")
                table[(a, b)] = (s, int(n))
    return StructureConstants(sys, table)


def constants_for(family: str, rank: int) -> StructureConstants:
    """Cached constants for a type; one table per root system."""
    return _cached_constants(build_root_system(family, rank))


@lru_cache(maxsize=None)
def _cached_constants(sys: RootSystem) -> StructureConstants:
    return build_constants(sys)


def bracket(sc: StructureConstants, x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    sys = sc.sys
    cartan = [ZERO] * sys.rank
    out: dict[Root, object] = {}
    xh, yh = x.cartan, y.cartan
    if any(xh):
        for b, c in y.coeffs.items():
            p = sys.pair(b, xh)
            if p:
                out[b] = out.get(b, ZERO) + p * c
    if any(yh):
        for a, c in x.coeffs.items():
            p = sys.pair(a, yh)
            if p:
                out[a] = out.get(a, ZERO) - p * c
    table = sc.table
    for a, ca in x.coeffs.items():
        for b, cb in y.coeffs.items():
            hit = table.get((a, b))
            if hit is not None:
                s, n = hit
                out[s] = out.get(s, ZERO) + n * ca * cb
            elif a.coeffs == tuple(-v for v in b.coeffs):
                cc = ca * cb
                for i, h in enumerate(sys.coroot(a)):
                    if h:
                        cartan[i] = cartan[i] + h * cc
    return AlgebraElement(sys, cartan, out)


def ad_exp(sc: StructureConstants, phi: Root, t, x: AlgebraElement) -> AlgebraElement:
    """``exp(t ad e_φ) x``; the series stops once ``ad(e_φ)^j x`` vanishes."""
    if phi not in sc.sys:
        raise ValueError(f"{phi!r} is not a root")
    t = as_scalar(t)
    if not t:
        return x
    e_phi = sc.e(phi)
    result = x
    term = x
    for j in range(1, 5):
        term = bracket(sc, e_phi, term)
        if not term:
            break
        result = result + term.scale(t ** j / factorial(j))
    else:
        if bracket(sc, e_phi, term):
            raise ArithmeticError("ad e_phi is not nilpotent of order <= 4")
    return result


def torus_scale(sc: StructureConstants, h: Sequence, lam, x: AlgebraElement) -> AlgebraElement:
    """``Ad(exp(log(lam) h)) x``: each ``e_α`` scaled by ``lam ** <α, h>``."""
    lam = as_scalar(lam)
    if not lam:
        raise ValueError("torus scaling needs a nonzero scalar")
    sys = sc.sys
    coeffs = {}
    for r, c in x.coeffs.items():
        k = sys.pair(r, h)
        if k.denominator != 1:
            raise ValueError(f"non-integral exponent <{r!r}, h> = {k}")
        coeffs[r] = c * lam ** int(k)
    return AlgebraElement(sys, x.cartan, coeffs)


def structure_tensor_check(sc: StructureConstants) -> list[tuple[Root, Root]]:
    """Pairs violating ``N(α,β) = -N(β,α)`` or ``|N(α,β)| = p + 1``."""
    bad = []
    for (a, b), (_, n) in sc.table.items():
        if sc.N(b, a) != -n:
            bad.append((a, b))
            continue
        p, _ = root_string(sc.sys, a, b)
        if abs(n) != p + 1:
            bad.append((a, b))
    return bad


def bracket_table(sc: StructureConstants) -> list[list[dict[int, int]]]:
    """``table[i][j]``: bracket of basis elements ``i, j`` as a sparse index map.

    Basis order is that of :meth:`StructureConstants.basis`.
    """
    sys = sc.sys
    basis = sc.basis()
    index = {r: sys.rank + i for i, r in enumerate(sys.roots)}

    def vec(x: AlgebraElement) -> dict[int, int]:
        d = {i: c for i, c in enumerate(x.cartan) if c}
        d.update((index[r], c) for r, c in x.coeffs.items())
        return d

    return [[vec(bracket(sc, a, b)) for b in basis] for a in basis]


def _ad(table, i: int, v: dict) -> dict:
    out: dict[int, object] = {}
    row = table[i]
    for j, c in v.items():
        for k, d in row[j].items():
            out[k] = out.get(k, 0) + c * d
    return out


def jacobi_violations(table, triples: Iterable[tuple[int, int, int]]) -> int:
    """Number of basis index triples on which the Jacobi identity fails."""
    bad = 0
    for i, j, k in triples:
        total: dict[int, object] = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for key, val in _ad(table, a, table[b][c]).items():
                total[key] = total.get(key, 0) + val
        bad += any(total.values())
    return bad


def antisymmetry_violations(table) -> int:
    n = len(table)
    return sum(table[i][j] != {k: -c for k, c in table[j][i].items()} for i in range(n) for j in range(n))

"""Parabolic gradations of a simple Lie algebra by one marked simple root."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exact import solve
from .rootsys import Root, RootSystem, build_root_system

__all__ = ["Gradation", "grade", "grade_type", "eta0_action", "abelian_levels"]


@dataclass(frozen=True)
class Gradation:
    """Levels ``Δ_k`` of the roots by the coefficient of the marked simple root.

    ``marked`` is 1-based, as in the usual Dynkin labelling.  ``eta0`` is the
    grading element in simple-coroot coordinates: ``<α, eta0> = level(α)``.
    """

    sys: RootSystem
    marked: int
    levels: dict[int, tuple[Root, ...]] = field(repr=False)
    depth: int
    eta0: tuple[Fraction, ...] = field(repr=False)

    def level(self, root: Root) -> int:
        return root.coeffs[self.marked - 1]

    def roots(self, k: int) -> tuple[Root, ...]:
        return self.levels.get(k, ())

    def dim(self, k: int) -> int:
        n = len(self.roots(k))
        return n + self.sys.rank if k == 0 else n

    @property
    def dims(self) -> dict[int, int]:
        return {k: self.dim(k) for k in range(-self.depth, self.depth + 1)}

    @property
    def positive_roots(self) -> tuple[Root, ...]:
        return tuple(r for k in range(1, self.depth + 1) for r in self.roots(k))

    @property
    def key(self) -> tuple[str, int, int]:
        return (self.sys.family, self.sys.rank, self.marked)

    @property
    def name(self) -> str:
        return f"({self.sys.name},α{self.marked})"


def grade(sys: RootSystem, marked: int) -> Gradation:
    if isinstance(marked, (list, tuple, set, frozenset)):
        raise ValueError("only a single marked simple root is supported")
    if not isinstance(marked, int) or not 1 <= marked <= sys.rank:
        raise ValueError(f"marked root must be in 1..{sys.rank}, got {marked!r}")
    buckets: dict[int, list[Root]] = {}
    for r in sys.roots:
        buckets.setdefault(r.coeffs[marked - 1], []).append(r)
    depth = max(buckets)
    levels = {k: tuple(buckets.get(k, ())) for k in range(-depth, depth + 1)}

    # fundamental coweight: C x = e_marked, where C[i][j] = <alpha_i, h_j>
    target = [Fraction(int(i == marked - 1)) for i in range(sys.rank)]
    eta0 = solve(sys.cartan_matrix, target)
    return Gradation(sys, marked, levels, depth, tuple(eta0))


def grade_type(family: str, rank: int, marked: int) -> Gradation:
    sys = build_root_system(family, rank)
    if not isinstance(marked, int):
        return grade(sys, marked)  # rejects with a diagnostic
    return _cached_grade(sys, marked)


@lru_cache(maxsize=None)
def _cached_grade(sys: RootSystem, marked: int) -> Gradation:
    return grade(sys, marked)


def eta0_action(grad: Gradation, zeta):
    """``[eta0, zeta]``: each root coefficient scaled by its level."""
    from .chevalley import AlgebraElement

    coeffs = {r: c * grad.level(r) for r, c in zeta.coeffs.items() if grad.level(r)}
    return AlgebraElement(grad.sys, None, coeffs)


def abelian_levels(grad: Gradation) -> set[int]:
    """Positive levels ``k`` with ``[g_k, g_k] = 0``."""
    out = set()
    sys = grad.sys
    for k in range(1, grad.depth + 1):
        roots = grad.roots(k)
        if not any(sys.add(a, b) is not None for i, a in enumerate(roots) for b in roots[i + 1:]):
            out.add(k)
    return out

"""Combinatorial verification of the splitting equation for gradations of depth <= 2.

The pipeline for one gradation ``g = ⊕ g_k`` with parabolic ``p = ⊕_{k<=0} g_k``:

1. a greedy cascade of strongly orthogonal long roots ``Ψ`` in an abelian level;
2. the unique-pairing test of ``Δ_1`` against ``Ψ_2``;
3. reduction of a level-``k`` vector to ``Σ c_j e_(β_j)`` by ``exp(ad g_0)``;
4. the explicit solution ``η = η0 - ½ Σ h_β`` on reduced forms, and a direct
   exact solve of ``[η, ζ] = ζ mod p`` for arbitrary ``ζ``;
5. the test that only depth-one gradations admit a nonzero element of ``g_0``
   centralising ``⊕_{k=-q+1}^{0} g_k``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .chevalley import AlgebraElement, StructureConstants, ad_exp, bracket, constants_for, torus_scale
from .exact import sparse_rank, sparse_solve
from .grading import Gradation, abelian_levels, grade_type
from .rootsys import Root

__all__ = [
    "PairingReport",
    "EliminationLog",
    "CaseReport",
    "strongly_orthogonal_set",
    "unique_pairing_check",
    "normal_form_abelian",
    "replay",
    "lemma_solution",
    "solve_splitting_equation",
    "check_solution",
    "depth_one_centralizer_check",
    "verify_case",
    "random_element",
    "all_cases",
]


# strongly orthogonal roots ----------------------------------------------------

def _height_key(r: Root):
    return (r.height, r.coeffs)


def strongly_orthogonal_set(grad: Gradation, sc: StructureConstants | None, k: int) -> list[Root]:
    """Greedy cascade of long roots in ``Δ_k``, highest first."""
    if k < 1:
        raise ValueError("level must be positive")
    sys = grad.sys
    remaining = sorted((r for r in grad.roots(k) if sys.is_long(r)), key=_height_key, reverse=True)
    chosen = []
    while remaining:
        top = remaining[0]
        chosen.append(top)
        remaining = [r for r in remaining[1:] if sys.is_strongly_orthogonal(r, top)]
    return chosen


# unique pairing ----------------------------------------------------------------

@dataclass
class PairingReport:
    psi2: list[Root]
    paired: dict[Root, Root]
    unpaired: set[Root]
    violations: dict[Root, list[Root]]

    @property
    def unique(self) -> bool:
        return not self.violations


def unique_pairing_check(grad: Gradation, psi2: Sequence[Root]) -> PairingReport:
    sys = grad.sys
    psi = set(psi2)
    if not psi <= set(grad.roots(2)):
        raise ValueError("psi2 must be contained in Δ_2")
    delta1 = grad.roots(1)
    paired, unpaired, violations = {}, set(), {}
    for a in delta1:
        partners = [b for b in delta1 if b != a and sys.add(a, b) in psi]
        if not partners:
            unpaired.add(a)
        elif len(partners) == 1:
            paired[a] = partners[0]
        else:
            violations[a] = partners
    return PairingReport(list(psi2), paired, unpaired, violations)


# normal forms on abelian levels -------------------------------------------------

@dataclass
class EliminationLog:
    """Transvections ``("exp", φ, t)`` and torus steps ``("torus", h, λ)``."""

    level: int
    psi: list[Root]
    steps: list[tuple] = field(default_factory=list)
    result: AlgebraElement | None = None
    residue: AlgebraElement | None = None

    @property
    def result_support(self) -> set[Root]:
        return set(self.result.coeffs) if self.result is not None else set()

    @property
    def pattern(self) -> tuple[int, ...]:
        """Indices ``j`` (1-based) with ``c_j != 0``."""
        sup = self.result_support
        return tuple(j + 1 for j, b in enumerate(self.psi) if b in sup)


def replay(sc: StructureConstants, log: EliminationLog, xi: AlgebraElement) -> AlgebraElement:
    x = xi
    for kind, a, b in log.steps:
        if kind == "exp":
            x = ad_exp(sc, a, b, x)
        else:
            x = torus_scale(sc, a, b, x)
    return x


def _partition(grad: Gradation, psi: Sequence[Root], k: int) -> list[list[Root]]:
    """``Π_j``: roots ``γ`` of ``Δ_k`` not in earlier ``Π_s`` with ``β_j - γ`` a root."""
    sys = grad.sys
    taken: set[Root] = set()
    parts = []
    for beta in psi:
        part = [g for g in grad.roots(k) if g not in taken and sys.sub(beta, g) is not None]
        taken.update(part)
        parts.append(part)
    return parts


def normal_form_abelian(grad: Gradation, sc: StructureConstants, xi: AlgebraElement, k: int) -> EliminationLog:
    """Reduce ``xi ∈ g_k`` to ``Σ c_j e_(β_j)`` using ``exp(ad g_0)``.

    The coefficients ``c_j`` are left as exact rationals; only the support
    pattern is canonical.
    """
    sys = grad.sys
    if k not in abelian_levels(grad):
        raise ValueError(f"level {k} of {grad.name} is not abelian")
    if any(grad.level(r) != k for r in xi.coeffs) or any(xi.cartan):
        raise ValueError(f"input is not supported in Δ_{k}")
    psi = strongly_orthogonal_set(grad, sc, k)
    parts = _partition(grad, psi, k)
    covered = set(psi).union(*parts) if parts else set()
    if covered != set(grad.roots(k)):
        missing = sorted(set(grad.roots(k)) - covered)
        raise ValueError(f"Δ_{k} of {grad.name} is not covered by the cascade: {missing}")

    log = EliminationLog(level=k, psi=psi)
    x = xi
    done: set[Root] = set()  # roots whose coefficients must stay zero

    def step(phi: Root, t) -> None:
        nonlocal x
        if grad.level(phi) != 0:
            raise AssertionError("transvection outside g_0")
        before = {b: x.coefficient(b) for b in psi[:j]}
        x = ad_exp(sc, phi, t, x)
        log.steps.append(("exp", phi, t))
        # earlier β's keep their coefficients, earlier Π's stay empty
        if any(x.coefficient(r) for r in done) or any(x.coefficient(b) != c for b, c in before.items()):
            raise AssertionError(f"elimination step {phi!r} disturbed an earlier block")

    for j, (beta, part) in enumerate(zip(psi, parts)):
        live = [g for g in part if x.coefficient(g)]
        if not live:
            done.update(part)
            continue
        if not x.coefficient(beta):
            # generate e_beta from a live Π_j root
            gamma = live[0]
            phi = sys.sub(beta, gamma)
            t = 1
            while True:
                trial = ad_exp(sc, phi, t, x)
                if trial.coefficient(beta):
                    break
                t += 1
            step(phi, Fraction(t))
        c = x.coefficient(beta)
        for gamma in part:
            cg = x.coefficient(gamma)
            if not cg:
                continue
            psi_root = sys.sub(gamma, beta)  # level 0, ad e_ψ e_β ∝ e_γ
            n = sc.N(psi_root, beta)
            step(psi_root, -cg / (n * c))
            if x.coefficient(gamma):
                raise AssertionError(f"failed to eliminate {gamma!r}")
        done.update(part)

    at_level = x.restrict(grad.roots(k))
    log.result = at_level
    log.residue = x - at_level
    if not log.result_support <= set(psi):
        raise AssertionError(f"reduced form escapes the cascade: {sorted(log.result_support - set(psi))}")
    return log


# the splitting equation -----------------------------------------------------------

def lemma_solution(grad: Gradation, R1, R2):
    """``η = a·η0 + b·Σ_{β∈R2} h_β`` with ``<γ, η> = 1`` on ``R1 ∪ R2``.

    Uses ``a = 1, b = -1/2`` (``b = 0`` when ``R2`` is empty).  Returns ``None``
    if the preconditions fail to make the system consistent.
    """
    sys = grad.sys
    R1, R2 = list(R1), list(R2)
    if any(grad.level(r) != 1 for r in R1) or any(grad.level(r) != 2 for r in R2):
        raise ValueError("R1 must lie in Δ_1 and R2 in Δ_2")
    a = Fraction(1)
    b = Fraction(-1, 2) if R2 else Fraction(0)
    h = [a * x for x in grad.eta0]
    for beta in R2:
        for i, c in enumerate(sys.coroot(beta)):
            h[i] += b * c
    if any(sys.pair(g, h) != 1 for g in R1 + R2):
        return None
    return AlgebraElement.coweight(sys, h)


def _positive_part(grad: Gradation, x: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(grad.sys, None, {r: c for r, c in x.coeffs.items() if grad.level(r) > 0})


def check_solution(grad: Gradation, sc: StructureConstants, eta: AlgebraElement, zeta: AlgebraElement) -> bool:
    """``η ∈ p`` and ``[η, ζ] - ζ`` has no positive-level component."""
    if any(grad.level(r) > 0 for r in eta.coeffs):
        return False
    return not _positive_part(grad, bracket(sc, eta, zeta) - zeta)


def _parabolic_basis(grad: Gradation, sc: StructureConstants) -> list[AlgebraElement]:
    sys = grad.sys
    hs = [AlgebraElement.coweight(sys, [int(i == j) for j in range(sys.rank)]) for i in range(sys.rank)]
    return hs + [sc.e(r) for r in sys.roots if grad.level(r) <= 0]


def solve_splitting_equation(grad: Gradation, sc: StructureConstants, zeta: AlgebraElement) -> AlgebraElement | None:
    """One ``η ∈ p`` with ``[η, ζ] = ζ mod p``, or ``None`` if there is none.

    Columns are ordered Cartan first, then root vectors in root order; free
    variables are zero, so the solution uses the earliest independent columns.
    """
    if not zeta:
        raise ValueError("zeta must be nonzero")
    if any(zeta.cartan) or any(grad.level(r) <= 0 for r in zeta.coeffs):
        raise ValueError("zeta must be supported in positive levels")
    basis = _parabolic_basis(grad, sc)
    positive = grad.positive_roots
    row_of = {r: i for i, r in enumerate(positive)}
    rows: list[dict] = [{} for _ in positive]
    for col, b in enumerate(basis):
        for r, c in bracket(sc, b, zeta).coeffs.items():
            i = row_of.get(r)
            if i is not None:
                rows[i][col] = c
    rhs = [zeta.coefficient(r) for r in positive]
    x = sparse_solve(rows, rhs, len(basis))
    if x is None:
        return None
    eta = AlgebraElement(grad.sys)
    for coef, b in zip(x, basis):
        if coef:
            eta = eta + b.scale(coef)
    return eta


def depth_one_centralizer_check(grad: Gradation, sc: StructureConstants) -> bool:
    """Is there ``z ≠ 0`` in ``g_0`` commuting with ``⊕_{k=-q+1}^{0} g_k``?"""
    sys = grad.sys
    q = grad.depth
    hs = [AlgebraElement.coweight(sys, [int(i == j) for j in range(sys.rank)]) for i in range(sys.rank)]
    cols = hs + [sc.e(r) for r in grad.roots(0)]
    targets = list(hs) + [sc.e(r) for k in range(-q + 1, 1) for r in grad.roots(k)]
    rows: dict[tuple, dict] = {}
    for t_idx, x in enumerate(targets):
        for c_idx, z in enumerate(cols):
            y = bracket(sc, z, x)
            for i, v in enumerate(y.cartan):
                if v:
                    rows.setdefault((t_idx, "h", i), {})[c_idx] = v
            for r, v in y.coeffs.items():
                rows.setdefault((t_idx, r.coeffs), {})[c_idx] = v
    unique_rows = {tuple(sorted(r.items())) for r in rows.values()}
    rk = sparse_rank(dict(r) for r in unique_rows)
    return len(cols) - rk > 0


# random inputs ----------------------------------------------------------------------

def random_scalar(rng: random.Random, zero_percent: int = 0) -> Fraction:
    """Nonzero ``num/den`` with ``|num| <= 9``, ``den <= 4``; zero with the given percent chance."""
    if zero_percent and rng.randrange(100) < zero_percent:
        return Fraction(0)
    num = 0
    while not num:
        num = rng.randint(-9, 9)
    return Fraction(num, rng.randint(1, 4))


def random_element(grad: Gradation, levels: Sequence[int], rng: random.Random,
                   zero_percent: int = 0) -> AlgebraElement:
    coeffs = {r: random_scalar(rng, zero_percent) for k in levels for r in grad.roots(k)}
    x = AlgebraElement(grad.sys, None, coeffs)
    if not x:  # pragma: no cover - vanishingly rare
        r = grad.roots(levels[0])[0]
        x = AlgebraElement(grad.sys, None, {r: Fraction(1)})
    return x


# case verification ------------------------------------------------------------------

@dataclass
class CaseReport:
    family: str
    rank: int
    marked: int
    depth: int
    dims: dict[int, int]
    levels: dict[int, list[Root]]
    psi2: list[Root]
    pairing: PairingReport | None
    abelian: list[int]
    trials: int
    solved: int
    verified: int
    lemma_checked: int
    lemma_verified: int
    normal_forms: int
    normal_form_failures: int
    centralizer: bool
    seed: int
    status: str = "verified"
    problems: list[str] = field(default_factory=list)

    @property
    def name(self) -> str:
        return f"({self.family}{self.rank},α{self.marked})"

    @property
    def key(self) -> tuple[str, int, int]:
        return (self.family, self.rank, self.marked)

    @property
    def in_range(self) -> bool:
        return self.depth <= 2


def _case_rng(seed: int, family: str, rank: int, marked: int, tag: str) -> random.Random:
    return random.Random(f"{seed}:{family}{rank}:{marked}:{tag}")


def verify_case(family: str, rank: int, marked: int, trials: int = 20, seed: int = 0,
                normal_form_trials: int | None = None) -> CaseReport:
    grad = grade_type(family, rank, marked)
    sc = constants_for(family, rank)
    sys = grad.sys
    problems: list[str] = []
    in_range = grad.depth <= 2
    if normal_form_trials is None:
        normal_form_trials = trials

    psi2 = strongly_orthogonal_set(grad, sc, 2) if grad.depth == 2 else []
    pairing = None
    if grad.depth == 2:
        for i, a in enumerate(psi2):
            if not sys.is_long(a):
                problems.append(f"Ψ2 root {sys.format_coeffs(a)} is not long")
            for b in psi2[i + 1:]:
                if not sys.is_strongly_orthogonal(a, b):
                    problems.append(f"Ψ2 roots {sys.format_coeffs(a)}, {sys.format_coeffs(b)} not strongly orthogonal")
        pairing = unique_pairing_check(grad, psi2)
        for a, partners in sorted(pairing.violations.items()):
            problems.append(f"{sys.format_coeffs(a)} has {len(partners)} partners")

    # direct solve on random ζ
    solved = verified = 0
    rng = _case_rng(seed, family, rank, marked, "solve")
    top = list(range(1, grad.depth + 1))
    for _ in range(trials):
        zeta = random_element(grad, top, rng, zero_percent=30)
        eta = solve_splitting_equation(grad, sc, zeta)
        if eta is None:
            if in_range:
                problems.append("unsolvable ζ found")
            continue
        solved += 1
        if check_solution(grad, sc, eta, zeta):
            verified += 1
        else:
            problems.append("solver returned a non-solution")

    # normal forms on abelian levels, then the explicit lemma solution
    abel = sorted(abelian_levels(grad))
    nf_count = nf_fail = lemma_checked = lemma_ok = 0
    if in_range:
        rng = _case_rng(seed, family, rank, marked, "normal")
        for _ in range(normal_form_trials):
            for k in abel:
                xi = random_element(grad, [k], rng, zero_percent=30)
                nf_count += 1
                try:
                    log = normal_form_abelian(grad, sc, xi, k)
                except (AssertionError, ValueError) as exc:
                    nf_fail += 1
                    problems.append(f"normal form on level {k}: {exc}")
                    continue
                if replay(sc, log, xi) != log.result + log.residue:
                    nf_fail += 1
                    problems.append("elimination replay mismatch")
                    continue
                if k != grad.depth or not log.result:
                    continue
                if k == 1:
                    R1, R2 = sorted(log.result_support), []
                    zeta = log.result
                else:
                    R2 = sorted(log.result_support)
                    pool = [g for g in grad.roots(1) if all(sys.is_strongly_orthogonal(g, b) for b in R2)]
                    R1 = [g for g in pool if rng.randrange(10) < 6]
                    zeta = log.result + AlgebraElement(sys, None, {g: random_scalar(rng) for g in R1})
                lemma_checked += 1
                eta = lemma_solution(grad, R1, R2)
                good = eta is not None and check_solution(grad, sc, eta, zeta)
                good = good and solve_splitting_equation(grad, sc, zeta) is not None
                if good:
                    lemma_ok += 1
                else:
                    problems.append("lemma solution failed on a reduced form")

    centralizer = depth_one_centralizer_check(grad, sc)
    if centralizer != (grad.depth == 1):
        problems.append(f"centralizer check returned {centralizer} at depth {grad.depth}")

    if problems:
        status = "violation"
    elif not in_range:
        status = "out_of_range"
    else:
        status = "verified"
    return CaseReport(
        family=sys.family, rank=sys.rank, marked=marked, depth=grad.depth, dims=grad.dims,
        levels={k: list(grad.roots(k)) for k in range(0, grad.depth + 1)},
        psi2=psi2, pairing=pairing, abelian=abel, trials=trials, solved=solved, verified=verified,
        lemma_checked=lemma_checked, lemma_verified=lemma_ok, normal_forms=nf_count,
        normal_form_failures=nf_fail, centralizer=centralizer, seed=seed, status=status, problems=problems,
    )


def all_cases(max_rank: int = 8) -> list[tuple[str, int, int]]:
    """Every (family, rank, marked) with rank <= max_rank, in a fixed order."""
    out = []
    for fam, ranks in (("A", range(1, 9)), ("B", range(2, 9)), ("C", range(3, 9)), ("D", range(4, 9)),
                       ("E", (6, 7, 8)), ("F", (4,)), ("G", (2,))):
        for r in ranks:
            if r <= max_rank:
                out.extend((fam, r, k) for k in range(1, r + 1))
    return out

"""Root systems of the simple Lie algebras, over exact rationals.

Coordinates follow the usual textbook realisations:

* classical types live in ``R^l`` (type A in the trace-zero hyperplane of
  ``R^(l+1)``) with ``alpha_i = lambda_i - lambda_(i+1)`` and last simple root
  ``lambda_l`` (B), ``2 lambda_l`` (C) or ``lambda_(l-1) + lambda_l`` (D);
* E6, E7, E8 are cut out of E8 in ``R^8`` with Bourbaki's simple roots;
* F4 lives in ``R^4`` and G2 in the plane ``x1 + x2 + x3 = 0``.

Roots are identified by their integer coefficients over the simple roots.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence

from .exact import inverse, mat_vec

__all__ = [
    "Root",
    "RootSystem",
    "build_root_system",
    "cartan_integer",
    "root_string",
    "highest_root",
    "quadric_root_system",
    "parse_coeffs",
]

HALF = Fraction(1, 2)

VALID_RANKS = {
    "A": lambda r: r >= 1,
    "B": lambda r: r >= 2,
    "C": lambda r: r >= 3,
    "D": lambda r: r >= 4,
    "E": lambda r: r in (6, 7, 8),
    "F": lambda r: r == 4,
    "G": lambda r: r == 2,
}

# number of roots, used as a sanity check after construction
ROOT_COUNTS = {
    "A": lambda l: l * (l + 1),
    "B": lambda l: 2 * l * l,
    "C": lambda l: 2 * l * l,
    "D": lambda l: 2 * l * (l - 1),
    "E": lambda l: {6: 72, 7: 126, 8: 240}[l],
    "F": lambda l: 48,
    "G": lambda l: 12,
}


class Root:
    """A root: integer simple-root coefficients plus ambient coordinates.

    Equality, hashing and ordering use the coefficients only.
    """

    __slots__ = ("coeffs", "ambient", "_hash")

    def __init__(self, coeffs: Sequence[int], ambient: Sequence[Fraction]):
        self.coeffs = tuple(int(c) for c in coeffs)
        self.ambient = tuple(Fraction(a) for a in ambient)
        self._hash = hash(self.coeffs)

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return isinstance(other, Root) and self.coeffs == other.coeffs

    def __lt__(self, other: "Root") -> bool:
        return self.coeffs < other.coeffs

    def __le__(self, other: "Root") -> bool:
        return self.coeffs <= other.coeffs

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coeffs), tuple(-a for a in self.ambient))

    def __repr__(self) -> str:
        return f"Root({''.join(map(str, self.coeffs))})" if self.is_positive else f"Root(-{''.join(str(-c) for c in self.coeffs)})"

    @property
    def is_positive(self) -> bool:
        return any(c > 0 for c in self.coeffs)

    @property
    def height(self) -> int:
        return sum(self.coeffs)


def _vec(n: int, entries: dict[int, Fraction | int]) -> tuple[Fraction, ...]:
    v = [Fraction(0)] * n
    for i, x in entries.items():
        v[i] = Fraction(x)
    return tuple(v)


def _sign_patterns(n: int):
    return product((1, -1), repeat=n)


def _classical_vectors(family: str, rank: int):
    """Ambient dimension, simple roots and all roots of a classical type."""
    if family == "A":
        dim = rank + 1
        simple = [_vec(dim, {i: 1, i + 1: -1}) for i in range(rank)]
        roots = [_vec(dim, {i: 1, j: -1}) for i in range(dim) for j in range(dim) if i != j]
        return dim, simple, roots

    dim = rank
    simple = [_vec(dim, {i: 1, i + 1: -1}) for i in range(rank - 1)]
    roots = []
    for i, j in combinations(range(dim), 2):
        for si, sj in _sign_patterns(2):
            roots.append(_vec(dim, {i: si, j: sj}))
    if family == "B":
        simple.append(_vec(dim, {rank - 1: 1}))
        roots += [_vec(dim, {i: s}) for i in range(dim) for s in (1, -1)]
    elif family == "C":
        simple.append(_vec(dim, {rank - 1: 2}))
        roots += [_vec(dim, {i: 2 * s}) for i in range(dim) for s in (1, -1)]
    elif family == "D":
        simple.append(_vec(dim, {rank - 2: 1, rank - 1: 1}))
    return dim, simple, roots


def _e8_vectors():
    dim = 8
    # Bourbaki: e_1..e_8 are indices 0..7
    a1 = tuple(HALF * s for s in (1, -1, -1, -1, -1, -1, -1, 1))
    simple = [a1, _vec(dim, {0: 1, 1: 1})] + [_vec(dim, {i: 1, i - 1: -1}) for i in range(1, 7)]
    roots = []
    for i, j in combinations(range(dim), 2):
        for si, sj in _sign_patterns(2):
            roots.append(_vec(dim, {i: si, j: sj}))
    for signs in _sign_patterns(dim):
        if signs.count(-1) % 2 == 0:
            roots.append(tuple(HALF * s for s in signs))
    return dim, simple, roots


def _f4_vectors():
    dim = 4
    simple = [
        _vec(dim, {1: 1, 2: -1}),
        _vec(dim, {2: 1, 3: -1}),
        _vec(dim, {3: 1}),
        tuple(HALF * s for s in (1, -1, -1, -1)),
    ]
    roots = [_vec(dim, {i: s}) for i in range(dim) for s in (1, -1)]
    for i, j in combinations(range(dim), 2):
        for si, sj in _sign_patterns(2):
            roots.append(_vec(dim, {i: si, j: sj}))
    roots += [tuple(HALF * s for s in signs) for signs in _sign_patterns(dim)]
    return dim, simple, roots


def _g2_vectors():
    dim = 3
    simple = [_vec(dim, {0: 1, 1: -1}), _vec(dim, {0: -2, 1: 1, 2: 1})]
    roots = []
    for i in range(3):
        for j in range(3):
            if i != j:
                roots.append(_vec(dim, {i: 1, j: -1}))
        k, l = [x for x in range(3) if x != i]
        for s in (1, -1):
            roots.append(_vec(dim, {i: 2 * s, k: -s, l: -s}))
    return dim, simple, roots


def _dot(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(x, y) if a and b), Fraction(0))


class RootSystem:
    """Immutable root system of a simple Lie algebra."""

    def __init__(self, family: str, rank: int, simple_vectors, root_vectors, ambient_dim: int):
        self.family = family
        self.rank = rank
        self.ambient_dim = ambient_dim
        self.simple_vectors = [tuple(v) for v in simple_vectors]
        self.gram = [[_dot(a, b) for b in self.simple_vectors] for a in self.simple_vectors]
        self._gram_inv = inverse(self.gram)

        roots = []
        for v in root_vectors:
            coeffs = self._coefficients(v)
            roots.append(Root(coeffs, v))
        roots.sort()
        self.roots: tuple[Root, ...] = tuple(roots)
        self.positive_roots: tuple[Root, ...] = tuple(r for r in roots if r.is_positive)
        self.negative_roots: tuple[Root, ...] = tuple(r for r in roots if not r.is_positive)
        self._by_coeffs = {r.coeffs: r for r in roots}
        self.index = {r: i for i, r in enumerate(roots)}
        self.simple_roots: tuple[Root, ...] = tuple(
            self._by_coeffs[tuple(int(i == j) for j in range(rank))] for i in range(rank)
        )
        # C[i][j] = <alpha_i, alpha_j^vee>
        self.cartan_matrix = [
            [int(2 * self.gram[i][j] / self.gram[j][j]) for j in range(rank)] for i in range(rank)
        ]
        self._norm = {r: self._inner_coeffs(r.coeffs, r.coeffs) for r in roots}
        self._pairings = {
            r: tuple(sum(c * self.cartan_matrix[i][j] for i, c in enumerate(r.coeffs)) for j in range(rank))
            for r in roots
        }
        self.max_norm = max(self._norm.values())
        self._check()

    # construction helpers ---------------------------------------------
    def _coefficients(self, v) -> tuple[int, ...]:
        rhs = [_dot(s, v) for s in self.simple_vectors]
        c = mat_vec(self._gram_inv, rhs)
        if any(x.denominator != 1 for x in c):
            raise ValueError(f"vector {v} is not in the root lattice")
        back = [sum(ci * s[k] for ci, s in zip(c, self.simple_vectors)) for k in range(self.ambient_dim)]
        if tuple(back) != tuple(v):
            raise ValueError(f"vector {v} is not in the span of the simple roots")
        coeffs = tuple(int(x) for x in c)
        if not (all(x >= 0 for x in coeffs) or all(x <= 0 for x in coeffs)):
            raise ValueError(f"root {v} has mixed-sign coefficients")
        return coeffs

    def _check(self) -> None:
        expected = ROOT_COUNTS[self.family](self.rank)
        if len(self.roots) != expected or len(self._by_coeffs) != expected:
            raise ValueError(f"{self.name}: expected {expected} roots, got {len(self.roots)}")
        for r in self.roots:
            if (-r).coeffs not in self._by_coeffs:
                raise ValueError(f"{self.name}: root set not closed under negation")

    # queries ----------------------------------------------------------
    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def dimension(self) -> int:
        """Dimension of the Lie algebra."""
        return len(self.roots) + self.rank

    def get(self, coeffs: Sequence[int]) -> Root | None:
        return self._by_coeffs.get(tuple(coeffs))

    def __getitem__(self, coeffs: Sequence[int]) -> Root:
        r = self._by_coeffs.get(tuple(coeffs))
        if r is None:
            raise KeyError(f"{tuple(coeffs)} is not a root of {self.name}")
        return r

    def __contains__(self, root) -> bool:
        if isinstance(root, Root):
            return root.coeffs in self._by_coeffs
        return tuple(root) in self._by_coeffs

    def __iter__(self):
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def canonical(self, root: Root) -> Root:
        """The system's own instance of ``root`` (raises if absent)."""
        return self[root.coeffs]

    def add(self, a: Root, b: Root) -> Root | None:
        """``a + b`` if it is a root, else ``None``."""
        return self._by_coeffs.get(tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    def sub(self, a: Root, b: Root) -> Root | None:
        return self._by_coeffs.get(tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def _inner_coeffs(self, a: Sequence[int], b: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for i, x in enumerate(a):
            if x:
                row = self.gram[i]
                total += x * sum(row[j] * y for j, y in enumerate(b) if y)
        return total

    def inner(self, a: Root, b: Root) -> Fraction:
        return _dot(a.ambient, b.ambient)

    def norm(self, a: Root) -> Fraction:
        """Squared length ``(a, a)``."""
        return self._norm[a]

    def is_long(self, a: Root) -> bool:
        return self._norm[a] == self.max_norm

    def pairings(self, a: Root) -> tuple[int, ...]:
        """``<a, h_j>`` for the simple coroots ``h_1..h_l``."""
        return self._pairings[a]

    def coroot(self, a: Root) -> tuple[Fraction, ...]:
        """Coroot ``h_a`` in coordinates over the simple coroots."""
        na = self._norm[a]
        return tuple(Fraction(c) * self.gram[i][i] / na for i, c in enumerate(a.coeffs))

    def pair(self, a: Root, h: Sequence) -> Fraction:
        """``<a, h>`` for a Cartan element ``h`` in simple-coroot coordinates."""
        return sum((p * x for p, x in zip(self._pairings[a], h) if p and x), Fraction(0))

    def is_strongly_orthogonal(self, a: Root, b: Root) -> bool:
        if a == b or a == -b:
            return False
        return self.add(a, b) is None and self.sub(a, b) is None

    # formatting -------------------------------------------------------
    @property
    def display_order(self) -> tuple[int, ...]:
        """Order of simple roots used when printing coefficient tuples."""
        if self.family == "E":
            return (0,) + tuple(range(2, self.rank)) + (1,)
        return tuple(range(self.rank))

    def format_coeffs(self, root: Root) -> str:
        c = root.coeffs
        body = "".join(str(abs(c[i])) for i in self.display_order)
        return f"({body})" if root.is_positive else f"-({body})"

    def format_ambient(self, root: Root) -> str:
        """Render ``root`` as e.g. ``λ1+λ2`` (classical) or ``e8-e7`` (E/F/G)."""
        sym = "λ" if self.family in "ABCD" else "e"
        v = root.ambient
        idx = range(len(v) - 1, -1, -1) if self.family == "E" else range(len(v))
        if all(x == 0 or abs(x) == HALF for x in v) and any(x for x in v):
            terms = [("+" if v[i] > 0 else "-") + f"{sym}{i + 1}" for i in idx if v[i]]
            return "1/2(" + "".join(terms).lstrip("+") + ")"
        out = ""
        for i in idx:
            x = v[i]
            if not x:
                continue
            mag = "" if abs(x) == 1 else str(abs(x))
            out += ("+" if x > 0 else "-") + f"{mag}{sym}{i + 1}"
        return out.lstrip("+")

    def format_simple(self, root: Root) -> str:
        """Render as a combination of simple roots, e.g. ``α1+2α2``."""
        terms = []
        for i, c in enumerate(root.coeffs):
            if c:
                mag = "" if abs(c) == 1 else str(abs(c))
                terms.append(("+" if c > 0 else "-") + f"{mag}α{i + 1}")
        return "".join(terms).lstrip("+")

    def __repr__(self) -> str:
        return f"RootSystem({self.name})"


def build_root_system(family: str, rank: int) -> RootSystem:
    """Build the root system of type ``family`` and ``rank``.

    ``family`` is one of ``A B C D E F G`` (``"E8"``-style labels are also
    accepted).  Raises ``ValueError`` on an invalid pair.
    """
    return _build(*_normalise_type(family, rank))


@lru_cache(maxsize=None)
def _build(family: str, rank: int) -> RootSystem:
    if family in "ABCD":
        dim, simple, roots = _classical_vectors(family, rank)
    elif family == "E":
        dim, simple, roots = _e8_vectors()
        if rank < 8:
            # E6, E7: roots of E8 supported on the first `rank` simple roots
            e8 = build_root_system("E", 8)
            roots = [r.ambient for r in e8.roots if not any(r.coeffs[rank:])]
            simple = simple[:rank]
    elif family == "F":
        dim, simple, roots = _f4_vectors()
    else:
        dim, simple, roots = _g2_vectors()
    return RootSystem(family, rank, simple, roots, dim)


@lru_cache(maxsize=None)
def quadric_root_system(n: int) -> RootSystem:
    """Root system whose first-node gradation models the quadric of dimension ``n``.

    Odd ``n`` uses ``B_l`` with ``n = 2l - 1``; even ``n`` uses ``D_l`` with
    ``n = 2l - 2``.  ``n = 4`` needs ``D_3``, which is built here directly
    since it is outside the public range (it is ``A_3`` relabelled).
    """
    if n < 3:
        raise ValueError(f"quadric dimension must be >= 3, got {n}")
    if n % 2:
        return build_root_system("B", (n + 1) // 2)
    rank = (n + 2) // 2
    if rank >= 4:
        return build_root_system("D", rank)
    dim, simple, roots = _classical_vectors("D", rank)
    return RootSystem("D", rank, simple, roots, dim)


def _normalise_type(family, rank) -> tuple[str, int]:
    fam = str(family).strip().upper()
    if len(fam) > 1:
        tail = fam[1:]
        if not tail.isdigit() or int(tail) != int(rank):
            raise ValueError(f"inconsistent type label {family!r} with rank {rank}")
        fam = fam[0]
    try:
        rank = int(rank)
    except (TypeError, ValueError):
        raise ValueError(f"rank must be an integer, got {rank!r}") from None
    if fam not in VALID_RANKS:
        raise ValueError(f"unknown family {family!r}; expected one of A B C D E F G")
    if not VALID_RANKS[fam](rank):
        raise ValueError(f"({fam}, {rank}) is not a valid simple type")
    return fam, rank


def _check_member(sys: RootSystem, *roots: Root) -> None:
    for r in roots:
        if r not in sys:
            raise ValueError(f"{r!r} is not a root of {sys.name}")


def cartan_integer(sys: RootSystem, beta: Root, alpha: Root) -> int:
    """``<beta, h_alpha> = 2 (beta, alpha) / (alpha, alpha)``."""
    _check_member(sys, beta, alpha)
    value = 2 * sys.inner(beta, alpha) / sys.norm(alpha)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral Cartan integer for {beta!r}, {alpha!r}")
    return int(value)


def root_string(sys: RootSystem, alpha: Root, beta: Root) -> tuple[int, int]:
    """``(p, q)`` of the ``alpha``-string through ``beta``."""
    _check_member(sys, alpha, beta)
    if beta == alpha or beta == -alpha:
        raise ValueError("root string through ±alpha is undefined here")
    p = 0
    while sys.get(tuple(b - (p + 1) * a for a, b in zip(alpha.coeffs, beta.coeffs))) is not None:
        p += 1
    q = 0
    while sys.get(tuple(b + (q + 1) * a for a, b in zip(alpha.coeffs, beta.coeffs))) is not None:
        q += 1
    return p, q


def highest_root(sys: RootSystem) -> Root:
    """The unique maximal root (every other root is below it coefficient-wise)."""
    top = max(sys.positive_roots, key=lambda r: r.height)
    if not all(all(t >= c for t, c in zip(top.coeffs, r.coeffs)) for r in sys.roots):
        raise ArithmeticError(f"{sys.name} has no unique maximal root")
    return top


def parse_coeffs(text: str, sys: RootSystem) -> Root:
    """Inverse of :meth:`RootSystem.format_coeffs` for positive roots."""
    digits = text.strip().strip("()")
    if len(digits) != sys.rank or not digits.isdigit():
        raise ValueError(f"bad coefficient tuple {text!r} for {sys.name}")
    coeffs = [0] * sys.rank
    for pos, i in enumerate(sys.display_order):
        coeffs[i] = int(digits[pos])
    return sys[coeffs]


def roots_from_cartan(cartan: Sequence[Sequence[int]]) -> set[tuple[int, ...]]:
    """Positive roots from a Cartan matrix by closing simple roots under strings.

    Independent of any coordinate realisation; used as a cross-check.
    ``cartan[i][j] = <alpha_i, alpha_j^vee>``.
    """
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for j in range(n):
                # alpha_j-string through r: p from going down, q = p - <r, alpha_j^vee>
                p = 0
                while tuple(c - (p + 1) * (k == j) for k, c in enumerate(r)) in found:
                    p += 1
                pairing = sum(c * cartan[i][j] for i, c in enumerate(r))
                q = p - pairing
                if q > 0:
                    s = tuple(c + (k == j) for k, c in enumerate(r))
                    if s not in found:
                        found.add(s)
                        nxt.append(s)
        frontier = nxt
    return found

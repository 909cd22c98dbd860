"""Exact scalars and linear algebra over Q and Q(i).

All routines are field-generic: entries may be ``int``, ``Fraction`` or
:class:`Gaussian`, mixed freely.  Nothing here ever touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from gmpy2 import mpq

__all__ = [
    "Gaussian",
    "I",
    "as_scalar",
    "rref",
    "rank",
    "nullspace",
    "solve",
    "inverse",
    "mat_mul",
    "mat_vec",
    "transpose",
    "identity",
    "sparse_rank",
    "sparse_solve",
]


def _q(x):
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class Gaussian:
    """Gaussian rational ``re + im*i``; parts are ``gmpy2.mpq`` for speed."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, Gaussian):
            self.re, self.im = re.re, re.im + _q(im)
            return
        self.re = _q(re)
        self.im = _q(im)

    @staticmethod
    def _raw(re, im) -> "Gaussian":
        g = object.__new__(Gaussian)
        g.re = re
        g.im = im
        return g

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Gaussian):
            return Gaussian._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, Rational):
            return Gaussian._raw(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Gaussian):
            return Gaussian._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, Rational):
            return Gaussian._raw(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rational):
            return Gaussian._raw(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Gaussian):
            a, b, c, d = self.re, self.im, other.re, other.im
            return Gaussian._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, Rational):
            return Gaussian._raw(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Gaussian):
            c, d = other.re, other.im
            den = c * c + d * d
            if not den:
                raise ZeroDivisionError("Gaussian division by zero")
            a, b = self.re, self.im
            return Gaussian._raw((a * c + b * d) / den, (b * c - a * d) / den)
        if isinstance(other, Rational):
            if not other:
                raise ZeroDivisionError("Gaussian division by zero")
            return Gaussian._raw(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Rational):
            return Gaussian._raw(_q(other), mpq(0)) / self
        return NotImplemented

    def __neg__(self):
        return Gaussian._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return Gaussian(1) / (self ** -exponent)
        result = Gaussian._raw(mpq(1), mpq(0))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> "Gaussian":
        return Gaussian._raw(self.re, -self.im)

    # comparison -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other) -> bool:
        if isinstance(other, Gaussian):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"Gaussian({self.re}, {self.im})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


I = Gaussian(0, 1)


def as_scalar(x):
    """Normalise ``x`` to ``Fraction`` or ``Gaussian`` (never float)."""
    if isinstance(x, (Gaussian, Fraction)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    raise TypeError(f"not an exact scalar: {x!r}")


# dense matrices: lists of row lists ------------------------------------

def identity(n: int) -> list[list]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def rref(rows: Iterable[Sequence], ncols: int | None = None) -> tuple[list[list], list[int]]:
    """Reduced row echelon form.  Returns ``(nonzero_rows, pivot_columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    if ncols is None:
        ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pr = m[r]
        inv = 1 / pr[c] if not isinstance(pr[c], int) else Fraction(1, pr[c])
        pr = [x * inv if x else x for x in pr]
        m[r] = pr
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    m[i] = [x - f * y if y else x for x, y in zip(row, pr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


class _Echelon:
    """Incremental echelon basis; rows are reduced against pivots as they arrive."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list] = []
        self.pivots: list[int] = []

    def add(self, row: Sequence) -> bool:
        row = list(row)
        for pr, pc in zip(self.rows, self.pivots):
            f = row[pc]
            if f:
                row = [x - f * y if y else x for x, y in zip(row, pr)]
        c = next((j for j, x in enumerate(row) if x), None)
        if c is None:
            return False
        inv = 1 / row[c] if not isinstance(row[c], int) else Fraction(1, row[c])
        row = [x * inv if x else x for x in row]
        self.rows.append(row)
        self.pivots.append(c)
        return True


def rank(rows: Iterable[Sequence], ncols: int | None = None) -> int:
    """Exact rank; stops early once full column rank is reached."""
    ech = None
    for row in rows:
        if ech is None:
            ech = _Echelon(len(row) if ncols is None else ncols)
        ech.add(row)
        if len(ech.rows) == ech.ncols:
            break
    return 0 if ech is None else len(ech.rows)


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            if row[fc]:
                v[pc] = -row[fc]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int | None = None):
    """One solution of ``rows @ x = rhs`` (free variables zero), or ``None``."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def inverse(m: Sequence[Sequence]) -> list[list]:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def sparse_rank(rows: Iterable[dict]) -> int:
    """Exact rank of sparse rows given as ``{column: value}`` dicts."""
    basis: dict[int, dict] = {}  # pivot column -> normalised row
    for row in rows:
        red = _reduce_sparse(basis, _fast_row(row))
        if red:
            pc = min(red)
            inv = 1 / red[pc]
            basis[pc] = {c: v * inv for c, v in red.items()}
    return len(basis)


def _fast(x):
    """Rationals go to ``mpq`` for speed; Gaussian entries pass through."""
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return mpq(x)
    return x


def _slow(x):
    if isinstance(x, Gaussian):
        return x
    return Fraction(int(x.numerator), int(x.denominator))


def _fast_row(row: dict) -> dict:
    return {c: _fast(v) for c, v in row.items() if v}


def _reduce_sparse(basis: dict[int, dict], row: dict) -> dict:
    """Reduce ``row`` until its leading column is not a pivot of ``basis``."""
    row = {c: v for c, v in row.items() if v}
    while row:
        pc = min(row)
        pr = basis.get(pc)
        if pr is None:
            return row
        f = row[pc]
        for c, v in pr.items():
            nv = row.get(c, 0) - f * v
            if nv:
                row[c] = nv
            else:
                row.pop(c, None)
    return row


def sparse_solve(rows: Sequence[dict], rhs: Sequence, ncols: int):
    """Solve sparse ``rows @ x = rhs``; free variables are set to zero.

    Pivots are the earliest possible columns, so the solution is supported on
    the lexicographically first independent set of columns.  Returns ``None``
    when the system is inconsistent.
    """
    basis: dict[int, dict] = {}
    for row, b in zip(rows, rhs):
        aug = _fast_row(row)
        if b:
            aug[ncols] = _fast(b)
        red = _reduce_sparse(basis, aug)
        if not red:
            continue
        pc = min(red)
        if pc == ncols:
            return None
        inv = 1 / red[pc]
        basis[pc] = {c: v * inv for c, v in red.items()}
    x = [mpq(0)] * ncols
    for pc in sorted(basis, reverse=True):
        row = basis[pc]
        val = row.get(ncols, 0)
        for c, v in row.items():
            if c != pc and c != ncols and x[c]:
                val = val - v * x[c]
        x[pc] = val
    return [_slow(v) for v in x]

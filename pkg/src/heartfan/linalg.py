"""Exact linear algebra over the integers and rationals.

Matrices are lists of rows.  Nothing here ever touches a float.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[int, ...]
QVec = tuple[Fraction, ...]


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


def vgcd(v: Iterable[int]) -> int:
    return reduce(gcd, (abs(int(x)) for x in v), 0)


def integerize(v: Sequence) -> Vec:
    """Scale a rational vector to a primitive integer vector with the same direction."""
    if all(isinstance(x, int) for x in v):
        ints = list(v)
    else:
        fr = [Fraction(x) for x in v]
        den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
        ints = [int(x * den) for x in fr]
    g = vgcd(ints)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def _int_row(r: Sequence) -> list[int]:
    """Scale a rational row to an integer row (row scaling preserves rank and kernel)."""
    if all(isinstance(x, int) for x in r):
        return list(r)
    fr = [Fraction(x) for x in r]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
    return [int(x * den) for x in fr]


def echelon(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free reduced echelon form: integer rows, zero above and below each pivot."""
    m = [_int_row(r) for r in rows]
    m = [r for r in m if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        p = pr[c]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                row = [p * a - f * b for a, b in zip(m[i], pr)]
                g = vgcd(row)
                m[i] = [a // g for a in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    ech, pivots = echelon(rows, ncols)
    return [[Fraction(a, row[p]) for a in row] for row, p in zip(ech, pivots)], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    n = len(rows[0]) if ncols is None else ncols
    return len(echelon(rows, n)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vec]:
    """Primitive integer vectors spanning {x : r.x = 0 for every row r} over Q."""
    red, pivots = echelon(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    lcm = reduce(lambda a, b: a * b // gcd(a, b), (abs(row[p]) for row, p in zip(red, pivots)), 1)
    for f in free:
        x = [0] * ncols
        x[f] = lcm
        for row, p in zip(red, pivots):
            x[p] = -row[f] * (lcm // row[p])
        basis.append(integerize(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> list[Fraction] | None:
    """One rational solution of rows.x = rhs, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return x


def in_span(vectors: Sequence[Sequence], x: Sequence, ncols: int) -> bool:
    if not vectors:
        return all(c == 0 for c in x)
    return rank(list(vectors) + [x], ncols) == rank(vectors, ncols)


def det(m: Sequence[Sequence]) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in r] for r in m]
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def transpose(m: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*m)]


def hnf(rows: Iterable[Sequence[int]], ncols: int) -> list[Vec]:
    """Row-style Hermite normal form of the Z-span of `rows` (zero rows dropped).

    Pivots are positive and entries above a pivot are reduced into [0, pivot).
    """
    m = [list(map(int, r)) for r in rows if any(r)]
    out: list[list[int]] = []
    col = 0
    while m and col < ncols:
        nz = [r for r in m if r[col] != 0]
        if not nz:
            col += 1
            continue
        rest = [r for r in m if r[col] == 0]
        # gcd-combine all rows with nonzero entry in this column
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            new = [p]
            for r in nz[1:]:
                q = r[col] // p[col]
                r2 = [a - q * b for a, b in zip(r, p)]
                if r2[col] != 0:
                    new.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = new
        p = nz[0]
        if p[col] < 0:
            p = [-a for a in p]
        out.append(p)
        m = rest
        col += 1
    # reduce entries above pivots
    for i in range(len(out)):
        pc = next(c for c in range(ncols) if out[i][c] != 0)
        for j in range(i):
            q = out[j][pc] // out[i][pc]
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], out[i])]
    return [tuple(r) for r in out]


def hnf_reduce(x: Sequence[int], basis: Sequence[Vec]) -> Vec:
    """Canonical representative of x modulo the lattice with HNF `basis`."""
    y = list(x)
    for row in basis:
        pc = next(c for c, a in enumerate(row) if a != 0)
        q = y[pc] // row[pc]
        if q:
            y = [a - q * b for a, b in zip(y, row)]
    return tuple(y)


def in_lattice(x: Sequence[int], basis: Sequence[Vec]) -> bool:
    return not any(hnf_reduce(x, basis))


def saturated_kernel(rows: Sequence[Sequence], ncols: int) -> list[Vec]:
    """HNF basis of the integer lattice {x in Z^n : r.x = 0 for all rows r}."""
    rows = [integerize(r) for r in rows if any(r)]
    if not rows:
        return hnf([tuple(int(i == j) for j in range(ncols)) for i in range(ncols)], ncols)
    # column reduction with a unimodular transform: A U = [H | 0]
    a = [list(r) for r in rows]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(i: int, j: int, q: int) -> None:  # col_i -= q col_j
        for r in a:
            r[i] -= q * r[j]
        for r in u:
            r[i] -= q * r[j]

    def swap(i: int, j: int) -> None:
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in u:
            r[i], r[j] = r[j], r[i]

    piv = 0
    for r in range(len(a)):
        if piv == ncols:
            break
        while True:
            nzc = [c for c in range(piv, ncols) if a[r][c] != 0]
            if not nzc:
                break
            c0 = min(nzc, key=lambda c: abs(a[r][c]))
            swap(piv, c0)
            done = True
            for c in range(piv + 1, ncols):
                if a[r][c] != 0:
                    colop(c, piv, a[r][c] // a[r][piv])
                    if a[r][c] != 0:
                        done = False
            if done:
                piv += 1
                break
    kernel_cols = [tuple(u[i][c] for i in range(ncols)) for c in range(piv, ncols)]
    return hnf(kernel_cols, ncols)


def saturate_span(vectors: Sequence[Sequence[int]], ncols: int) -> list[Vec]:
    """HNF basis of span_Q(vectors) intersected with Z^n."""
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    perp = saturated_kernel(vectors, ncols)
    return saturated_kernel(perp, ncols) if perp else saturated_kernel([], ncols)


def is_unimodular_part(vectors: Sequence[Sequence[int]], ncols: int) -> bool:
    """True when `vectors` are part of a Z-basis of Z^n."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return True
    if rank(vectors, ncols) < len(vectors):
        return False
    return hnf(vectors, ncols) == saturate_span(vectors, ncols)

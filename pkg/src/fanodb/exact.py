"""Exact integer and rational linear algebra.

Scalars are Python ``int`` and :class:`fractions.Fraction`; integer matrices
are tuples of row tuples so they can be hashed and shared freely.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

Rational = Fraction
IntMatrix = tuple[tuple[int, ...], ...]


class SingularMatrixError(ValueError):
    """Raised when a linear system has no unique solution."""


def as_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    matrix = tuple(tuple(int(x) for x in row) for row in rows)
    if matrix and len({len(row) for row in matrix}) != 1:
        raise ValueError("ragged matrix")
    return matrix


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def transpose(m):
    return tuple(zip(*m))


def to_number(x):
    """Return ``x`` as an ``int`` when integral, else as a reduced Fraction."""
    if isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix by Bareiss elimination."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a rational (or integer) matrix."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return 0
    r = 0
    ncols = len(a[0])
    for c in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve the square system ``a x = b`` exactly.

    Raises :class:`SingularMatrixError` if ``a`` is singular.
    """
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("solve_rational needs a square system")
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            raise SingularMatrixError("singular system")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n] for row in aug]


def primitive_part(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries (sign preserved)."""
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("primitive_part of the zero vector")
    return tuple(x // g for x in v)


def clear_denominators(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    fr = [Fraction(x) for x in v]
    lcm = 1
    for x in fr:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    return primitive_part([int(x * lcm) for x in fr])


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form ``(h, t)`` with ``h == t @ m``.

    ``t`` is unimodular. ``h`` is a lower staircase: zero rows come first,
    the pivot of each row is its last nonzero entry, pivots move right going
    down, are positive, and the entries below a pivot lie in ``[0, pivot)``.
    """
    a = [list(row) for row in m]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    t = [[int(i == j) for j in range(nrows)] for i in range(nrows)]

    def addmul(dst, src, k):
        # row[dst] -= k * row[src]
        if k:
            a[dst] = [x - k * y for x, y in zip(a[dst], a[src])]
            t[dst] = [x - k * y for x, y in zip(t[dst], t[src])]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        t[i], t[j] = t[j], t[i]

    pr = nrows - 1
    for col in range(ncols - 1, -1, -1):
        if pr < 0:
            break
        while True:
            live = [i for i in range(pr + 1) if a[i][col] != 0]
            if not live:
                break
            best = min(live, key=lambda i: abs(a[i][col]))
            swap(best, pr)
            done = True
            for i in range(pr):
                if a[i][col]:
                    addmul(i, pr, a[i][col] // a[pr][col])
                    if a[i][col]:
                        done = False
            if done:
                break
        if a[pr][col] == 0:
            continue
        if a[pr][col] < 0:
            a[pr] = [-x for x in a[pr]]
            t[pr] = [-x for x in t[pr]]
        pivot = a[pr][col]
        for i in range(pr + 1, nrows):
            addmul(i, pr, a[i][col] // pivot)
        pr -= 1
    return as_matrix(a), as_matrix(t)


def random_unimodular(d: int, seed: int, steps: int = 20) -> IntMatrix:
    """Product of ``steps`` random elementary row operations, deterministic per seed."""
    if d < 1 or steps < 0:
        raise ValueError("need d >= 1 and steps >= 0")
    rng = random.Random(seed)
    m = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(steps):
        op = rng.randrange(3) if d > 1 else 2
        if op == 0:
            i, j = rng.sample(range(d), 2)
            k = rng.choice((-2, -1, 1, 2))
            m[i] = [x + k * y for x, y in zip(m[i], m[j])]
        elif op == 1:
            i, j = rng.sample(range(d), 2)
            m[i], m[j] = m[j], m[i]
        else:
            i = rng.randrange(d)
            m[i] = [-x for x in m[i]]
    return as_matrix(m)

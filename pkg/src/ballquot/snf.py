"""Smith normal form over the integers and linear congruences on (Q/Z)^n."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

Matrix = list  # list of row lists of ints


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def matvec(A: Matrix, v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def det(A: Matrix):
    """Exact determinant by fraction-free elimination (Bareiss)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for r in range(k + 1, n):
                if M[r][k] != 0:
                    M[k], M[r] = M[r], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(A: Matrix) -> tuple:
    """Return (U, S, V) with U A V = S, U and V unimodular, S diagonal with d1 | d2 | ...

    The product is re-multiplied and checked before returning.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    S = [list(map(int, r)) for r in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row dst -= q * row src
        S[dst] = [a - q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, q):
        for row in S:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    for t in range(min(m, n)):
        nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(t, i, S[i][t] // S[t][t])
                    if S[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(t, j, S[t][j] // S[t][t])
                    if S[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % S[t][t]]
            if not bad:
                break
            i, _ = bad[0]
            add_row(i, t, -1)  # bring the offending row into the pivot row
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]

    if matmul(matmul(U, A), V) != S:
        raise AssertionError("Smith normal form failed its own product check")
    return U, S, V


def diagonal(S: Matrix) -> list:
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]


def _mod1(q: Fraction) -> Fraction:
    return q - (q.numerator // q.denominator)


@dataclass(frozen=True)
class CongruenceSolution:
    """Solutions of A x = b mod Z^m, x in (Q/Z)^n.

    ``points`` are particular solutions, one per component; ``directions`` are
    integer vectors spanning the free real directions (columns of V for the
    zero invariant factors).
    """

    points: tuple
    directions: tuple

    @property
    def dimension(self) -> int:
        return len(self.directions)

    @property
    def empty(self) -> bool:
        return not self.points


def solve_congruence(A: Matrix, b: Sequence[Fraction]) -> CongruenceSolution:
    """All x in (Q/Z)^n with A x == b modulo integers (A square or rectangular)."""
    m = len(A)
    n = len(A[0]) if m else 0
    U, S, V = smith_normal_form(A)
    r = [_mod1(Fraction(x)) for x in matvec(U, [Fraction(v) for v in b])]
    d = diagonal(S)
    # rows beyond the diagonal demand r_i == 0
    for i in range(m):
        di = d[i] if i < len(d) else 0
        if di == 0 and r[i] != 0:
            return CongruenceSolution((), ())
    choices, free = [], []
    for i in range(n):
        di = d[i] if i < len(d) else 0
        if di == 0:
            choices.append([Fraction(0)])
            free.append(i)
        else:
            choices.append([(r[i] + k) / abs(di) * (1 if di > 0 else -1) for k in range(abs(di))])
    pts = set()
    for y in product(*choices):
        x = tuple(_mod1(v) for v in matvec(V, y))
        pts.add(x)
    directions = tuple(tuple(V[row][i] for row in range(n)) for i in free)
    return CongruenceSolution(tuple(sorted(pts)), directions)

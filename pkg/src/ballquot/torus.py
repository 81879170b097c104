"""Exact arithmetic on abelian surfaces E x E with E = C / Z[i] or C / Z[zeta].

Points are stored in lattice-basis coordinates modulo Z.  A point of E has
two real coordinates (x0, x1) meaning x0 + x1*w, where w is i or zeta.
Automorphisms are integer matrices acting on these coordinates together with
a translation.  Curves through the surface are described by a primitive
direction (a, b) in the ring and an offset class k, namely the set
{(z, w) : a*w - b*z = k}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from typing import Callable, Hashable, Iterable, Optional, Sequence

from .errors import GroupOverflow, InputError, UnsupportedError
from .snf import det, identity, matmul, matvec, solve_congruence

Elem = tuple  # (a, b) meaning a + b*w


def _mod1(q) -> Fraction:
    q = Fraction(q)
    return q - (q.numerator // q.denominator)


class QuadraticRing:
    """Z[i] (``"gaussian"``) or Z[zeta] with zeta^2 = zeta - 1 (``"eisenstein"``)."""

    def __init__(self, kind: str):
        if kind not in ("gaussian", "eisenstein"):
            raise InputError(f"unknown ring {kind!r}")
        self.kind = kind

    def __repr__(self) -> str:
        return f"QuadraticRing({self.kind!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadraticRing) and other.kind == self.kind

    def __hash__(self) -> int:
        return hash(self.kind)

    @property
    def gen(self) -> Elem:
        return (0, 1)

    def mul(self, x: Elem, y: Elem) -> Elem:
        a, b = x
        c, d = y
        if self.kind == "gaussian":
            return (a * c - b * d, a * d + b * c)
        return (a * c - b * d, a * d + b * c + b * d)

    def add(self, x: Elem, y: Elem) -> Elem:
        return (x[0] + y[0], x[1] + y[1])

    def sub(self, x: Elem, y: Elem) -> Elem:
        return (x[0] - y[0], x[1] - y[1])

    def neg(self, x: Elem) -> Elem:
        return (-x[0], -x[1])

    def power(self, x: Elem, n: int) -> Elem:
        out = (1, 0)
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def matrix(self, x: Elem) -> list:
        """Matrix of multiplication by x in the basis (1, w)."""
        a, b = x
        if self.kind == "gaussian":
            return [[a, -b], [b, a]]
        return [[a, -b], [b, a + b]]

    def from_matrix(self, m: Sequence[Sequence[int]]) -> Optional[Elem]:
        """Inverse of ``matrix``; None if m is not a multiplication matrix."""
        x = (m[0][0], m[1][0])
        return x if self.matrix(x) == [list(r) for r in m] else None

    def conj(self, x: Elem) -> Elem:
        a, b = x
        return (a, -b) if self.kind == "gaussian" else (a + b, -b)

    def norm(self, x: Elem) -> int:
        a, b = x
        return a * a + b * b if self.kind == "gaussian" else a * a + a * b + b * b

    @property
    def units(self) -> list:
        if self.kind == "gaussian":
            return [(1, 0), (0, 1), (-1, 0), (0, -1)]
        return [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]

    def is_unit(self, x: Elem) -> bool:
        return self.norm(x) == 1

    def inverse_unit(self, u: Elem) -> Elem:
        if not self.is_unit(u):
            raise InputError(f"{u} is not a unit")
        return self.conj(u)

    def divmod(self, x: Elem, y: Elem) -> tuple:
        n = self.norm(y)
        if n == 0:
            raise ZeroDivisionError("division by zero in ring")
        num = self.mul(x, self.conj(y))
        q = (round(Fraction(num[0], n)), round(Fraction(num[1], n)))
        r = self.sub(x, self.mul(q, y))
        return q, r

    def xgcd(self, x: Elem, y: Elem) -> tuple:
        """(g, s, t) with s*x + t*y = g."""
        r0, r1 = x, y
        s0, s1 = (1, 0), (0, 0)
        t0, t1 = (0, 0), (1, 0)
        while r1 != (0, 0):
            q, r = self.divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.sub(s0, self.mul(q, s1))
            t0, t1 = t1, self.sub(t0, self.mul(q, t1))
        return r0, s0, t0

    def exact_div(self, x: Elem, y: Elem) -> Elem:
        q, r = self.divmod(x, y)
        if r != (0, 0):
            raise InputError(f"{y} does not divide {x}")
        return q

    def act(self, x: Elem, p: Sequence) -> tuple:
        """Multiply a point of C / ring (two coordinates mod 1) by x."""
        return tuple(_mod1(v) for v in matvec(self.matrix(x), p))


GAUSSIAN = QuadraticRing("gaussian")
EISENSTEIN = QuadraticRing("eisenstein")

# named constants
I = (0, 1)
ZETA = (0, 1)
RHO = EISENSTEIN.mul(ZETA, ZETA)  # zeta^2 = zeta - 1
TAU = (Fraction(-2, 3), Fraction(1, 3))  # (rho - 1) / 3, unreduced


@dataclass(frozen=True)
class TorusPoint:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_mod1(c) for c in self.coords))

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "TorusPoint":
        return TorusPoint(tuple(-a for a in self.coords))

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        return self + (-other)

    def __len__(self) -> int:
        return len(self.coords)

    def order(self) -> int:
        return reduce(lambda a, b: a * b // _gcd(a, b), (c.denominator for c in self.coords), 1)

    @classmethod
    def zero(cls, dim: int = 4) -> "TorusPoint":
        return cls((0,) * dim)

    @classmethod
    def of(cls, *factors: Sequence) -> "TorusPoint":
        """Concatenate per-factor coordinates: ``TorusPoint.of(z, w)``."""
        return cls(tuple(c for f in factors for c in f))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def block_matrix(ring: QuadraticRing, blocks: Sequence[Sequence[Elem]]) -> tuple:
    """Integer matrix of a ring matrix [[m11, m12], [m21, m22]]."""
    n = len(blocks)
    out = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            m = ring.matrix(blocks[i][j])
            for r in range(2):
                for c in range(2):
                    out[2 * i + r][2 * j + c] = m[r][c]
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class AffineAuto:
    """x -> M x + t on (R/Z)^m."""

    M: tuple
    t: TorusPoint

    def __post_init__(self):
        M = tuple(tuple(int(v) for v in row) for row in self.M)
        if any(len(r) != len(M) for r in M):
            raise InputError("automorphism matrix must be square")
        t = self.t if isinstance(self.t, TorusPoint) else TorusPoint(tuple(self.t))
        if len(t) != len(M):
            raise InputError("translation has the wrong dimension")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "t", t)

    @property
    def dim(self) -> int:
        return len(self.M)

    @classmethod
    def linear(cls, ring: QuadraticRing, blocks, t: Optional[Sequence] = None) -> "AffineAuto":
        M = block_matrix(ring, blocks)
        return cls(M, TorusPoint(tuple(t) if t is not None else (0,) * len(M)))

    @classmethod
    def translation(cls, t: Sequence) -> "AffineAuto":
        return cls(tuple(map(tuple, identity(len(t)))), TorusPoint(tuple(t)))

    @classmethod
    def identity(cls, dim: int = 4) -> "AffineAuto":
        return cls.translation((0,) * dim)

    def __call__(self, p: TorusPoint) -> TorusPoint:
        return TorusPoint(tuple(matvec(self.M, p.coords))) + self.t

    def __matmul__(self, other: "AffineAuto") -> "AffineAuto":
        """Composition: (self @ other)(x) = self(other(x))."""
        M = matmul(self.M, other.M)
        t = TorusPoint(tuple(matvec(self.M, other.t.coords))) + self.t
        return AffineAuto(tuple(map(tuple, M)), t)

    def power(self, n: int) -> "AffineAuto":
        out = AffineAuto.identity(self.dim)
        for _ in range(n):
            out = self @ out
        return out

    def order(self, bound: int = 10_000) -> int:
        g = self
        for k in range(1, bound + 1):
            if g.is_identity():
                return k
            g = self @ g
        raise GroupOverflow(bound)

    def is_identity(self) -> bool:
        return self.M == tuple(map(tuple, identity(self.dim))) and not any(self.t.coords)

    def det(self) -> int:
        return det([list(r) for r in self.M])

    def blocks(self, ring: QuadraticRing) -> Optional[list]:
        """Ring entries if M is ring-linear (each 2x2 block a multiplication matrix)."""
        n = self.dim // 2
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                blk = [[self.M[2 * i + r][2 * j + c] for c in range(2)] for r in range(2)]
                x = ring.from_matrix(blk)
                if x is None:
                    return None
                row.append(x)
            out.append(row)
        return out

    def conjugate_by_basis(self, B: Sequence[Sequence[int]], lift: Optional[Sequence] = None) -> "AffineAuto":
        """Express self in coordinates of the sublattice spanned by the columns of B.

        Requires B^-1 M B integral.  A translation is only defined modulo the
        big lattice, so the caller may pass the lift to use; by default the
        canonical representative is taken.
        """
        Bq = [[Fraction(v) for v in row] for row in B]
        Binv = _inverse(Bq)
        Mp = matmul(matmul(Binv, [list(r) for r in self.M]), Bq)
        if any(v.denominator != 1 for row in Mp for v in row):
            raise UnsupportedError("automorphism does not preserve the sublattice")
        t = matvec(Binv, [Fraction(v) for v in (lift if lift is not None else self.t.coords)])
        return AffineAuto(tuple(tuple(int(v) for v in row) for row in Mp), TorusPoint(tuple(t)))

    def key(self) -> tuple:
        return (self.M, self.t.coords)


def _inverse(A: list) -> list:
    n = len(A)
    M = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise InputError("singular matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def sublattice_basis(ring: QuadraticRing, factors: Sequence[Elem]) -> list:
    """Block-diagonal basis of the sublattice gamma_1*R x gamma_2*R x ..."""
    n = len(factors)
    blocks = [[factors[i] if i == j else (0, 0) for j in range(n)] for i in range(n)]
    return [list(r) for r in block_matrix(ring, blocks)]


@dataclass(frozen=True)
class FixedLocus:
    """Fixed set of an automorphism: translates of a subtorus.

    ``dimension`` is the real dimension; ``points`` holds one point on each
    component; ``directions`` are integer vectors spanning the subtorus.
    """

    dimension: int
    points: tuple
    directions: tuple

    @property
    def empty(self) -> bool:
        return not self.points

    @property
    def count(self) -> int:
        """Number of points for a finite locus, number of components otherwise."""
        return len(self.points)

    @property
    def finite(self) -> bool:
        return self.dimension == 0


def fixed_points(f: AffineAuto) -> FixedLocus:
    """Solve (M - I) x = -t modulo the lattice."""
    n = f.dim
    A = [[f.M[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    sol = solve_congruence(A, [-c for c in f.t.coords])
    return FixedLocus(sol.dimension, tuple(TorusPoint(p) for p in sol.points), sol.directions)


def fixed_points_bruteforce(f: AffineAuto, N: Optional[int] = None) -> set:
    """Enumerate N-torsion points fixed by f.  Only meaningful for finite loci."""
    n = f.dim
    if N is None:
        d = abs(det([[f.M[i][j] - int(i == j) for j in range(n)] for i in range(n)]))
        if d == 0:
            raise UnsupportedError("brute force needs an isolated fixed locus")
        den = reduce(lambda a, b: a * b // _gcd(a, b), (c.denominator for c in f.t.coords), 1)
        N = d * den
    shift = [c * N for c in f.t.coords]
    if any(c.denominator != 1 for c in shift):
        return set()  # the translation alone moves every N-torsion point
    shift = [int(c) for c in shift]
    rows = [[f.M[i][j] - int(i == j) for j in range(n)] for i in range(n)]
    out = set()
    # x = v / N is fixed iff (M - I) v + N t == 0 mod N
    for v in product(range(N), repeat=n):
        if all((sum(r[j] * v[j] for j in range(n)) + shift[i]) % N == 0 for i, r in enumerate(rows)):
            out.add(TorusPoint(tuple(Fraction(x, N) for x in v)))
    return out


# --------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class AbelianCurve:
    """{(z, w) : a*w - b*z = k} with (a, b) primitive, normalised up to units."""

    ring: QuadraticRing
    a: Elem
    b: Elem
    k: tuple  # point of C / ring, two coordinates

    def __post_init__(self):
        ring = self.ring
        a, b = tuple(self.a), tuple(self.b)
        if a == (0, 0) and b == (0, 0):
            raise InputError("curve direction is zero")
        g, _, _ = ring.xgcd(a, b)
        if not ring.is_unit(g):
            raise InputError(f"curve direction {a}, {b} is not primitive")
        k = tuple(_mod1(v) for v in self.k)
        if ring.is_unit(a):
            u = ring.inverse_unit(a)
        elif a == (0, 0):
            u = ring.inverse_unit(b)
        else:
            u = min(ring.units, key=lambda u: (ring.mul(u, a), ring.mul(u, b)))
        object.__setattr__(self, "a", ring.mul(u, a))
        object.__setattr__(self, "b", ring.mul(u, b))
        object.__setattr__(self, "k", ring.act(u, k))

    @classmethod
    def graph(cls, ring: QuadraticRing, mu: Elem, c: Sequence = (0, 0)) -> "AbelianCurve":
        """{(z, mu*z + c)}."""
        return cls(ring, (1, 0), tuple(mu), tuple(c))

    @classmethod
    def vertical(cls, ring: QuadraticRing, c: Sequence = (0, 0)) -> "AbelianCurve":
        """{(c, w)}."""
        return cls(ring, (0, 0), (1, 0), tuple(-Fraction(v) for v in c))

    @classmethod
    def through(cls, ring: QuadraticRing, a: Elem, b: Elem, point: TorusPoint) -> "AbelianCurve":
        """The curve {(a*t, b*t)} translated to pass through ``point``."""
        z, w = point.coords[:2], point.coords[2:]
        aw = matvec(ring.matrix(a), w)
        bz = matvec(ring.matrix(b), z)
        return cls(ring, a, b, tuple(x - y for x, y in zip(aw, bz)))

    @property
    def is_vertical(self) -> bool:
        return self.a == (0, 0)

    def contains(self, p: TorusPoint) -> bool:
        z, w = p.coords[:2], p.coords[2:]
        lhs = [x - y for x, y in zip(matvec(self.ring.matrix(self.a), w), matvec(self.ring.matrix(self.b), z))]
        return tuple(_mod1(v) for v in lhs) == self.k

    def base_point(self) -> TorusPoint:
        ring = self.ring
        _, x, y = self._bezout()
        # a*(x k) - b*(-y k) = (a x + b y) k = k
        return TorusPoint.of(ring.act(ring.neg(y), self.k), ring.act(x, self.k))

    def _bezout(self) -> tuple:
        ring = self.ring
        g, x, y = ring.xgcd(self.a, self.b)
        ginv = ring.inverse_unit(g)
        return (1, 0), ring.mul(ginv, x), ring.mul(ginv, y)

    def parametrize(self, t: Sequence) -> TorusPoint:
        ring = self.ring
        base = self.base_point()
        return base + TorusPoint.of(ring.act(self.a, t), ring.act(self.b, t))

    def parameter_of(self, p: TorusPoint) -> tuple:
        """Inverse of ``parametrize`` for a point on the curve."""
        if not self.contains(p):
            raise InputError("point is not on the curve")
        ring = self.ring
        _, x, y = self._bezout()
        d = p - self.base_point()
        s1 = ring.act(x, d.coords[:2])
        s2 = ring.act(y, d.coords[2:])
        return tuple(_mod1(u + v) for u, v in zip(s1, s2))

    def __str__(self) -> str:
        return f"curve(a={self.a}, b={self.b}, k=({self.k[0]}, {self.k[1]}))"


def curve_intersection_count(c1: AbelianCurve, c2: AbelianCurve) -> int:
    """Intersection number by the norm of the direction determinant."""
    if c1 == c2:
        raise InputError("self-intersection of a curve is not defined here")
    ring = c1.ring
    d = ring.sub(ring.mul(c1.a, c2.b), ring.mul(c2.a, c1.b))
    if d == (0, 0):
        return 0
    return ring.norm(d)


def curve_intersection_points(c1: AbelianCurve, c2: AbelianCurve) -> list:
    """Solve the two linear congruences defining c1 and c2 jointly."""
    if c1 == c2:
        raise InputError("self-intersection of a curve is not defined here")
    ring = c1.ring
    rows = []
    for c in (c1, c2):
        mb, ma = ring.matrix(ring.neg(c.b)), ring.matrix(c.a)
        for r in range(2):
            rows.append(list(mb[r]) + list(ma[r]))
    sol = solve_congruence(rows, list(c1.k) + list(c2.k))
    if sol.dimension:
        raise InputError("curves share a component")
    return [TorusPoint(p) for p in sol.points]


def curve_intersection(c1: AbelianCurve, c2: AbelianCurve) -> tuple:
    """(count, points).  The count comes from the determinant, the points from the solver."""
    return curve_intersection_count(c1, c2), curve_intersection_points(c1, c2)


def _ring_blocks(f: AffineAuto, ring: QuadraticRing) -> list:
    blocks = f.blocks(ring)
    if blocks is None or f.dim != 4:
        raise UnsupportedError("automorphism is not ring-linear on a product of two curves")
    return blocks


def curve_image(f: AffineAuto, c: AbelianCurve) -> AbelianCurve:
    ring = c.ring
    (m11, m12), (m21, m22) = _ring_blocks(f, ring)
    A = ring.add(ring.mul(m11, c.a), ring.mul(m12, c.b))
    B = ring.add(ring.mul(m21, c.a), ring.mul(m22, c.b))
    if A == (0, 0) and B == (0, 0):
        raise UnsupportedError("automorphism collapses the curve")
    g, _, _ = ring.xgcd(A, B)
    A, B = ring.exact_div(A, g), ring.exact_div(B, g)
    return AbelianCurve.through(ring, A, B, f(c.base_point()))


def restriction(f: AffineAuto, c: AbelianCurve) -> AffineAuto:
    """For f preserving c: the induced map t -> lam*t + s on the curve's parameter."""
    ring = c.ring
    if curve_image(f, c) != c:
        raise InputError("automorphism does not preserve the curve")
    (m11, m12), (m21, m22) = _ring_blocks(f, ring)
    A = ring.add(ring.mul(m11, c.a), ring.mul(m12, c.b))
    B = ring.add(ring.mul(m21, c.a), ring.mul(m22, c.b))
    _, x, y = c._bezout()
    lam = ring.add(ring.mul(x, A), ring.mul(y, B))
    s = c.parameter_of(f(c.base_point()))
    return AffineAuto(tuple(map(tuple, ring.matrix(lam))), TorusPoint(s))


def is_reflection_through(f: AffineAuto, c: AbelianCurve) -> bool:
    """True when f fixes c pointwise (positive-dimensional fixed locus on c)."""
    return fixed_points(restriction(f, c)).dimension > 0


def is_scalar(f: AffineAuto, ring: QuadraticRing) -> bool:
    blocks = f.blocks(ring)
    return blocks is not None and all(
        blocks[i][j] == (0, 0) for i in range(len(blocks)) for j in range(len(blocks)) if i != j
    ) and len({blocks[i][i] for i in range(len(blocks))}) == 1


# --------------------------------------------------------------------------
# finite groups of automorphisms


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple
    generators: tuple

    @property
    def order(self) -> int:
        return len(self.elements)

    def center(self) -> list:
        return [z for z in self.elements if all(z @ g == g @ z for g in self.generators)]

    def identity(self):
        return next(e for e in self.elements if e @ e == e)


def group_closure(gens: Sequence, bound: int = 10_000) -> FiniteGroup:
    """Close a set of invertible elements under composition (``@``)."""
    if bound < 1:
        raise InputError("bound must be positive")
    gens = tuple(gens)
    if not gens:
        raise InputError("need at least one generator")
    ident = type(gens[0]).identity(gens[0].dim)
    seen = {ident: None}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g @ x
                if y not in seen:
                    seen[y] = None
                    order.append(y)
                    nxt.append(y)
                    if len(order) > bound:
                        raise GroupOverflow(bound)
        frontier = nxt
    return FiniteGroup(tuple(order), gens)


@dataclass(frozen=True)
class Orbit:
    members: tuple
    stabilizer: tuple  # elements fixing the first member


def orbit_stabilizer(group: FiniteGroup, objects: Sequence[Hashable], act: Callable) -> list:
    """Partition ``objects`` into orbits under ``act(g, obj)``.

    Raises InputError if some element maps an object outside the set.
    """
    objs = list(objects)
    pos = {o: n for n, o in enumerate(objs)}
    for g in group.generators:
        for o in objs:
            if act(g, o) not in pos:
                raise InputError(f"action does not preserve the object set (witness {o})")
    done = set()
    out = []
    for o in objs:
        if o in done:
            continue
        members = []
        for g in group.elements:
            img = act(g, o)
            if img not in pos:
                raise InputError(f"action does not preserve the object set (witness {o})")
            if img not in members:
                members.append(img)
        members.sort(key=pos.__getitem__)
        done.update(members)
        stab = tuple(g for g in group.elements if act(g, o) == o)
        out.append(Orbit(tuple(members), stab))
    return out


def curve_branch_order(group: FiniteGroup, c: AbelianCurve) -> int:
    """Order of the subgroup fixing c pointwise."""
    return sum(1 for g in group.elements if curve_image(g, c) == c and is_reflection_through(g, c))


def exceptional_branch_order(group: FiniteGroup, p: TorusPoint, ring: QuadraticRing) -> int:
    """Order of the subgroup acting trivially on the exceptional curve over p."""
    return sum(1 for g in group.elements if g(p) == p and is_scalar(g, ring))


def curve_action(g: AffineAuto, c: AbelianCurve) -> AbelianCurve:
    return curve_image(g, c)


def point_action(g: AffineAuto, p: TorusPoint) -> TorusPoint:
    return g(p)

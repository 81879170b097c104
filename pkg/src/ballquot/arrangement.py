"""Rational divisor arithmetic on a surface given as a finite curve arrangement.

The model knows only the declared curves: their genera, self-intersections,
pairwise intersection numbers, the transversal crossing points between them,
the canonical class (either as a rational combination of curves or as a
table of pairings) and the topological Euler number of the surface.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

from .errors import InputError, UnsupportedError

Rat = Fraction
CurveRef = Union[int, str]


def as_rat(value) -> Fraction:
    """Exact rational from an int, Fraction or ``"p/q"`` string. Floats are refused."""
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(text))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational number: {value!r}") from None
    raise InputError(f"not an exact rational: {value!r}")


def as_int(value, what: str = "value") -> int:
    q = as_rat(value)
    if q.denominator != 1:
        raise InputError(f"{what} must be an integer, got {q}")
    return int(q)


def rat_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Curve:
    name: str
    genus: int
    self_int: Fraction
    is_orbifold_candidate: bool = True

    def __post_init__(self):
        if self.genus < 0:
            raise InputError(f"curve {self.name}: negative genus")
        q = as_rat(self.self_int)
        if q.denominator != 1:
            raise InputError(f"curve {self.name}: self-intersection {q} is not integral")
        object.__setattr__(self, "self_int", q)

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus


@dataclass(frozen=True)
class CrossingPoint:
    """A point where the incident curves meet pairwise transversally."""

    name: str
    incident: frozenset

    def __post_init__(self):
        object.__setattr__(self, "incident", frozenset(self.incident))
        if len(self.incident) < 2:
            raise InputError(f"crossing {self.name}: needs at least two curves")


@dataclass(frozen=True)
class CanonicalClass:
    """Either ``combination`` (curve index -> coefficient) or explicit ``pairings``.

    With explicit pairings, ``pairings[i]`` is K.C_i and ``square`` is K^2.
    """

    combination: tuple = None
    pairings: tuple = None
    square: Fraction = None

    def __post_init__(self):
        if (self.combination is None) == (self.pairings is None):
            raise InputError("canonical class needs exactly one of combination / pairings")
        if self.combination is not None:
            combo = tuple((int(i), as_rat(c)) for i, c in self.combination)
            object.__setattr__(self, "combination", combo)
        else:
            if self.square is None:
                raise InputError("explicit canonical class needs K^2")
            object.__setattr__(self, "pairings", tuple(as_rat(p) for p in self.pairings))
            object.__setattr__(self, "square", as_rat(self.square))

    @classmethod
    def from_combination(cls, combo: Mapping[int, Fraction]) -> "CanonicalClass":
        return cls(combination=tuple(sorted(combo.items())))

    @classmethod
    def from_pairings(cls, pairings: Sequence, square) -> "CanonicalClass":
        return cls(pairings=tuple(pairings), square=square)


@dataclass(frozen=True)
class QDivisor:
    """A rational combination of arrangement curves plus a multiple of K.

    ``canonical`` is the coefficient of the canonical class, so K itself is
    ``QDivisor({}, 1)``; this lets one pairing routine serve both canonical
    class presentations.
    """

    coeffs: Mapping[int, Fraction] = field(default_factory=dict)
    canonical: Fraction = Fraction(0)

    def __post_init__(self):
        clean = {int(i): as_rat(c) for i, c in dict(self.coeffs).items() if as_rat(c) != 0}
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "canonical", as_rat(self.canonical))

    def __add__(self, other: "QDivisor") -> "QDivisor":
        coeffs = dict(self.coeffs)
        for i, c in other.coeffs.items():
            coeffs[i] = coeffs.get(i, 0) + c
        return QDivisor(coeffs, self.canonical + other.canonical)

    def scale(self, s) -> "QDivisor":
        s = as_rat(s)
        return QDivisor({i: s * c for i, c in self.coeffs.items()}, s * self.canonical)

    @classmethod
    def curve(cls, index: int, coefficient=1) -> "QDivisor":
        return cls({index: as_rat(coefficient)})


K = QDivisor({}, 1)


@dataclass(frozen=True)
class Arrangement:
    curves: tuple
    intersections: Mapping[tuple, int]
    crossings: tuple = ()
    canonical: CanonicalClass = None
    euler_surface: int = 0

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        object.__setattr__(self, "crossings", tuple(self.crossings))
        names = [c.name for c in self.curves]
        dup = [n for n, k in Counter(names).items() if k > 1]
        if dup:
            raise InputError(f"duplicate curve names: {dup}")
        n = len(self.curves)
        table = {}
        for key, count in dict(self.intersections).items():
            i, j = key
            if i == j:
                raise InputError("self-intersections belong on the curve, not the intersection table")
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"intersection refers to unknown curve index {key}")
            count = as_int(count, "intersection count")
            if count < 0:
                raise InputError(f"negative intersection {names[i]}.{names[j]}")
            k = (min(i, j), max(i, j))
            if k in table and table[k] != count:
                raise InputError(f"asymmetric intersection data for {names[i]}, {names[j]}")
            if count:
                table[k] = count
        object.__setattr__(self, "intersections", table)
        used = Counter()
        for p in self.crossings:
            for i in p.incident:
                if not 0 <= i < n:
                    raise InputError(f"crossing {p.name} refers to unknown curve index {i}")
            for i, j in combinations(sorted(p.incident), 2):
                used[(i, j)] += 1
        for (i, j), m in used.items():
            if m > table.get((i, j), 0):
                raise InputError(
                    f"{m} crossings declared on {names[i]} and {names[j]} "
                    f"but they meet only {table.get((i, j), 0)} times"
                )
        if self.canonical is not None:
            if self.canonical.pairings is not None and len(self.canonical.pairings) != n:
                raise InputError("canonical pairings must list every curve")
            if self.canonical.combination is not None:
                for i, _ in self.canonical.combination:
                    if not 0 <= i < n:
                        raise InputError(f"canonical class refers to unknown curve index {i}")
                for i in range(n):
                    if self.canonical_pairing(i).denominator != 1:
                        raise InputError(f"K.{names[i]} is not an integer")
                if self.canonical_square().denominator != 1:
                    raise InputError("K^2 is not an integer")
        object.__setattr__(self, "euler_surface", as_int(self.euler_surface, "Euler number"))

    # lookup -----------------------------------------------------------------

    def index(self, ref: CurveRef) -> int:
        if isinstance(ref, int) and not isinstance(ref, bool):
            if 0 <= ref < len(self.curves):
                return ref
            raise InputError(f"unknown curve index {ref}")
        for k, c in enumerate(self.curves):
            if c.name == ref:
                return k
        raise InputError(f"unknown curve {ref!r}")

    def curve(self, ref: CurveRef) -> Curve:
        return self.curves[self.index(ref)]

    @property
    def names(self) -> list:
        return [c.name for c in self.curves]

    def meet(self, i: int, j: int) -> Fraction:
        """Intersection number C_i . C_j (self-intersection when i == j)."""
        if i == j:
            return self.curves[i].self_int
        return Fraction(self.intersections.get((min(i, j), max(i, j)), 0))

    def crossings_between(self, i: int, j: int) -> list:
        return [p for p in self.crossings if i in p.incident and j in p.incident]

    def has_canonical(self) -> bool:
        return self.canonical is not None

    def canonical_pairing(self, i: int) -> Fraction:
        if self.canonical is None:
            raise UnsupportedError("arrangement has no canonical class")
        if self.canonical.pairings is not None:
            return self.canonical.pairings[i]
        return sum((c * self.meet(j, i) for j, c in self.canonical.combination), Fraction(0))

    def canonical_square(self) -> Fraction:
        if self.canonical is None:
            raise UnsupportedError("arrangement has no canonical class")
        if self.canonical.pairings is not None:
            return self.canonical.square
        combo = self.canonical.combination
        return sum((a * b * self.meet(i, j) for i, a in combo for j, b in combo), Fraction(0))

    def divisor(self, coeffs: Mapping[CurveRef, object], canonical=0) -> QDivisor:
        return QDivisor({self.index(k): as_rat(v) for k, v in coeffs.items()}, canonical)


def pair(d1: QDivisor, d2: QDivisor, arr: Arrangement) -> Fraction:
    """Intersection number of two rational divisors, extended bilinearly."""
    n = len(arr.curves)
    for d in (d1, d2):
        for i in d.coeffs:
            if not 0 <= i < n:
                raise InputError(f"divisor refers to unknown curve index {i}")
    total = Fraction(0)
    for i, a in d1.coeffs.items():
        for j, b in d2.coeffs.items():
            total += a * b * arr.meet(i, j)
    if d1.canonical or d2.canonical:
        if d1.canonical:
            total += d1.canonical * sum((b * arr.canonical_pairing(j) for j, b in d2.coeffs.items()), Fraction(0))
        if d2.canonical:
            total += d2.canonical * sum((a * arr.canonical_pairing(i) for i, a in d1.coeffs.items()), Fraction(0))
        if d1.canonical and d2.canonical:
            total += d1.canonical * d2.canonical * arr.canonical_square()
    return total


@dataclass(frozen=True)
class AdjunctionEntry:
    curve: str
    expected: int  # 2g - 2
    k_dot_c: Fraction
    self_int: Fraction

    @property
    def ok(self) -> bool:
        return self.expected == self.k_dot_c + self.self_int


def adjunction_check(arr: Arrangement) -> list:
    """One entry per curve comparing 2g - 2 with K.C + C^2."""
    return [
        AdjunctionEntry(c.name, 2 * c.genus - 2, arr.canonical_pairing(i), c.self_int)
        for i, c in enumerate(arr.curves)
    ]


def adjunction_holds(arr: Arrangement) -> bool:
    return all(e.ok for e in adjunction_check(arr))


def derive_self_int(arr: Arrangement, curve: CurveRef) -> Fraction:
    """Self-intersection forced by adjunction: 2g - 2 - K.C."""
    i = arr.index(curve)
    if not arr.has_canonical():
        raise UnsupportedError("self-intersection by adjunction needs a canonical class")
    return Fraction(2 * arr.curves[i].genus - 2) - arr.canonical_pairing(i)


@dataclass(frozen=True)
class BlowupPoint:
    """A point to blow up: the curves through it, or a declared crossing.

    ``exceptional`` names the new curve.
    """

    exceptional: str
    curves: tuple = ()
    crossing: str = None


def blowup(arr: Arrangement, points: Iterable[BlowupPoint]) -> Arrangement:
    """Blow up distinct points, each a transversal meeting of the listed curves."""
    points = list(points)
    n = len(arr.curves)
    crossings = list(arr.crossings)
    incidences = []
    for pt in points:
        if pt.crossing is not None:
            found = [p for p in crossings if p.name == pt.crossing]
            if not found:
                raise InputError(f"no crossing named {pt.crossing!r}")
            inc = found[0].incident
            if pt.curves and frozenset(arr.index(c) for c in pt.curves) != inc:
                raise InputError(f"blowup at {pt.crossing}: listed curves disagree with the crossing")
            crossings.remove(found[0])
        else:
            inc = frozenset(arr.index(c) for c in pt.curves)
            if len(inc) != len(tuple(pt.curves)):
                raise InputError(f"blowup point {pt.exceptional}: repeated curve")
            same = [p for p in crossings if p.incident == inc]
            if same:
                crossings.remove(same[0])
        incidences.append(inc)

    demand = Counter()
    for inc in incidences:
        for i, j in combinations(sorted(inc), 2):
            demand[(i, j)] += 1
    for (i, j), m in demand.items():
        if m > arr.meet(i, j):
            raise InputError(
                f"curves {arr.curves[i].name} and {arr.curves[j].name} meet "
                f"{arr.meet(i, j)} times, cannot share {m} blown-up points"
            )

    on_curve = Counter()
    for inc in incidences:
        for i in inc:
            on_curve[i] += 1

    curves = [
        Curve(c.name, c.genus, c.self_int - on_curve[i], c.is_orbifold_candidate)
        for i, c in enumerate(arr.curves)
    ]
    inter = {}
    for (i, j), m in arr.intersections.items():
        inter[(i, j)] = m - demand.get((i, j), 0)
    new_crossings = list(crossings)
    for k, (pt, inc) in enumerate(zip(points, incidences)):
        e = n + k
        curves.append(Curve(pt.exceptional, 0, Fraction(-1), True))
        for i in sorted(inc):
            inter[(i, e)] = 1
            new_crossings.append(CrossingPoint(f"{pt.exceptional}.{arr.curves[i].name}", frozenset({i, e})))

    canonical = None
    if arr.canonical is not None:
        if arr.canonical.combination is not None:
            combo = dict(arr.canonical.combination)
            for k, inc in enumerate(incidences):
                combo[n + k] = 1 + sum((combo.get(i, 0) for i in inc), Fraction(0))
            canonical = CanonicalClass.from_combination(combo)
        else:
            pairings = [arr.canonical.pairings[i] + on_curve[i] for i in range(n)]
            pairings += [Fraction(-1)] * len(points)
            canonical = CanonicalClass.from_pairings(pairings, arr.canonical.square - len(points))

    return Arrangement(
        curves=tuple(curves),
        intersections=inter,
        crossings=tuple(new_crossings),
        canonical=canonical,
        euler_surface=arr.euler_surface + len(points),
    )

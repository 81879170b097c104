"""Relative Chern numbers of a weighted pair and the ball-quotient equality test."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from .arrangement import Arrangement, CurveRef, QDivisor, pair
from .errors import InputError, UnsupportedError


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
Weight = Union[int, _Infinity]

CAVEAT = (
    "ampleness is certified over the declared curves only; "
    "curves outside the arrangement are not examined"
)


def parse_weight(value) -> Weight:
    if value is INF:
        return INF
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "oo"):
            return INF
        try:
            value = int(text)
        except ValueError:
            raise InputError(f"bad weight {value!r}") from None
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"bad weight {value!r}")
    if value < 2:
        raise InputError(f"weight must be at least 2 or inf, got {value}")
    return value


def coefficient(r: Weight) -> Fraction:
    r = parse_weight(r)
    return Fraction(1) if r is INF else 1 - Fraction(1, r)


def weight_str(r: Weight) -> str:
    return "inf" if r is INF else str(r)


@dataclass(frozen=True)
class WeightAssignment:
    """Curve index to weight. Curves not listed are not part of the divisor."""

    weights: Mapping[int, Weight]

    def __post_init__(self):
        object.__setattr__(self, "weights", {int(i): parse_weight(r) for i, r in dict(self.weights).items()})

    @classmethod
    def by_name(cls, arr: Arrangement, weights: Mapping[CurveRef, object]) -> "WeightAssignment":
        return cls({arr.index(k): v for k, v in weights.items()})

    def check(self, arr: Arrangement) -> None:
        for i in self.weights:
            if not 0 <= i < len(arr.curves):
                raise InputError(f"weight on unknown curve index {i}")

    def divisor(self) -> QDivisor:
        return QDivisor({i: coefficient(r) for i, r in self.weights.items()})

    def get(self, i: int) -> Optional[Weight]:
        return self.weights.get(i)


def log_divisor(arr: Arrangement, w: WeightAssignment) -> QDivisor:
    """K + D."""
    w.check(arr)
    return QDivisor({}, 1) + w.divisor()


def c1_sq(arr: Arrangement, w: WeightAssignment) -> Fraction:
    L = log_divisor(arr, w)
    return pair(L, L, arr)


def _point_term(weights: list) -> Fraction:
    if INF in weights:
        if len(weights) > 1 and all(r is INF for r in weights):
            raise UnsupportedError("crossing of two weight-inf curves has no local group rule")
        return Fraction(1)
    order = 1
    for r in weights:
        order *= r
    return 1 - Fraction(1, order)


def _weighted_crossings(arr: Arrangement, w: WeightAssignment) -> list:
    out = []
    for p in arr.crossings:
        hit = sorted(i for i in p.incident if i in w.weights)
        if len(hit) > 2:
            raise UnsupportedError(f"crossing {p.name} meets {len(hit)} weighted curves")
        if len(hit) == 2:
            out.append((p, hit))
    return out


def c2_orb(arr: Arrangement, w: WeightAssignment) -> Fraction:
    """Orbifold Euler number of the weighted pair."""
    w.check(arr)
    pts = _weighted_crossings(arr, w)
    idx = sorted(w.weights)
    for a_pos, i in enumerate(idx):
        for j in idx[a_pos + 1:]:
            listed = sum(1 for _, hit in pts if hit == [i, j])
            if listed != arr.meet(i, j):
                raise InputError(
                    f"weighted curves {arr.curves[i].name} and {arr.curves[j].name} meet "
                    f"{arr.meet(i, j)} times but {listed} crossings are listed"
                )
    removed = {i: 0 for i in idx}
    total = Fraction(arr.euler_surface)
    for _, hit in pts:
        for i in hit:
            removed[i] += 1
        total -= _point_term([w.weights[i] for i in hit])
    for i in idx:
        e_open = arr.curves[i].euler - removed[i]
        total -= coefficient(w.weights[i]) * e_open
    return total


def c2_disjoint(arr: Arrangement, w: WeightAssignment) -> Fraction:
    """The disjoint-support formula; refuses weighted curves that meet."""
    w.check(arr)
    idx = sorted(w.weights)
    for a_pos, i in enumerate(idx):
        for j in idx[a_pos + 1:]:
            if arr.meet(i, j):
                raise UnsupportedError("weighted curves meet; the disjoint formula does not apply")
    return Fraction(arr.euler_surface) - sum(
        (coefficient(w.weights[i]) * arr.curves[i].euler for i in idx), Fraction(0)
    )


@dataclass(frozen=True)
class NakaiCertificate:
    L_sq: Fraction
    pairings: tuple  # (curve name, L.C)
    witness: Optional[str]
    caveat: str = CAVEAT

    @property
    def passed(self) -> bool:
        return self.witness is None


def nakai_check(arr: Arrangement, w: WeightAssignment) -> NakaiCertificate:
    L = log_divisor(arr, w)
    L_sq = pair(L, L, arr)
    pairings = tuple((c.name, pair(L, QDivisor.curve(i), arr)) for i, c in enumerate(arr.curves))
    witness = None
    if L_sq <= 0:
        witness = f"L^2 = {L_sq}"
    else:
        for name, v in pairings:
            if v <= 0:
                witness = f"L.{name} = {v}"
                break
    return NakaiCertificate(L_sq, pairings, witness)


@dataclass(frozen=True)
class PairReport:
    c1_sq: Fraction
    c2: Fraction
    nakai: NakaiCertificate

    @property
    def bmy_equal(self) -> bool:
        return self.c1_sq == 3 * self.c2

    @property
    def L_sq(self) -> Fraction:
        return self.nakai.L_sq

    @property
    def per_curve_pairings(self) -> tuple:
        return self.nakai.pairings

    @property
    def nakai_passed(self) -> bool:
        return self.nakai.passed

    @property
    def caveat(self) -> str:
        return self.nakai.caveat

    @property
    def ok(self) -> bool:
        return self.bmy_equal and self.nakai_passed


def verify_pair(arr: Arrangement, w: WeightAssignment) -> PairReport:
    return PairReport(c1_sq(arr, w), c2_orb(arr, w), nakai_check(arr, w))

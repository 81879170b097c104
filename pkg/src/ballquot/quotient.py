"""Quotients of weighted arrangements by finite group actions."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .arrangement import Arrangement
from .bmy import INF, WeightAssignment, Weight, c2_orb, weight_str
from .errors import InputError
from .groups import Perm
from .torus import group_closure


@dataclass(frozen=True)
class ActionOnArrangement:
    """A finite group acting on named curves through declared permutations.

    ``curves`` lists every curve the action moves or fixes, including curves
    outside the weighted arrangement that become orbifold curves downstairs.
    ``branch`` gives the order of the pointwise stabilizer of each curve.
    """

    group_order: int
    curves: tuple
    generators: Mapping[str, Mapping[str, str]]
    branch: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(self.curves))
        if len(set(self.curves)) != len(self.curves):
            raise InputError("action lists a curve twice")
        if self.group_order < 1:
            raise InputError("group order must be positive")
        names = set(self.curves)
        for g, mapping in self.generators.items():
            if set(mapping) - names or set(mapping.values()) - names:
                raise InputError(f"generator {g} refers to curves outside the action")
            full = {c: mapping.get(c, c) for c in self.curves}
            if sorted(full.values()) != sorted(self.curves):
                raise InputError(f"generator {g} is not a permutation")
        for c, b in self.branch.items():
            if c not in names:
                raise InputError(f"branch order for unknown curve {c}")
            if b < 1 or self.group_order % b:
                raise InputError(f"branch order {b} of {c} does not divide {self.group_order}")
        perm_order = self.permutation_group_order()
        if self.group_order % perm_order:
            raise InputError(
                f"permutations generate a group of order {perm_order}, "
                f"which does not divide the declared order {self.group_order}"
            )

    def perms(self) -> dict:
        pos = {c: n for n, c in enumerate(self.curves)}
        return {
            g: Perm(tuple(pos[m.get(c, c)] for c in self.curves))
            for g, m in self.generators.items()
        }

    def permutation_group_order(self) -> int:
        gens = list(self.perms().values()) or [Perm.identity(len(self.curves))]
        return group_closure(gens, bound=max(self.group_order, 1) * 2).order

    def orbits(self, order: Optional[Sequence[str]] = None) -> list:
        """Curve orbits, each sorted by position in ``curves``."""
        pos = {c: n for n, c in enumerate(self.curves)}
        gens = [self.perms()[g] for g in (order or sorted(self.generators))]
        seen, out = set(), []
        for c in self.curves:
            if c in seen:
                continue
            orbit, frontier = {pos[c]}, [pos[c]]
            while frontier:
                x = frontier.pop()
                for p in gens:
                    y = p(x)
                    if y not in orbit:
                        orbit.add(y)
                        frontier.append(y)
            members = tuple(self.curves[i] for i in sorted(orbit))
            seen.update(members)
            out.append(members)
        return out

    def branch_of(self, curve: str) -> int:
        return self.branch.get(curve, 1)


class WeightMismatch(InputError):
    """Curves in one orbit carry different weights or branch orders."""


def _times(r: Weight, b: int) -> Weight:
    return INF if r is INF else r * b


@dataclass(frozen=True)
class QuotientPlan:
    orbits: tuple  # tuple of curve-name tuples
    weights: tuple  # quotient weight per orbit, 1 meaning not in the orbifold locus
    e_orb: Optional[Fraction] = None

    def locus(self) -> list:
        return [(o, w) for o, w in zip(self.orbits, self.weights) if w != 1]

    def signature(self) -> tuple:
        """(number of orbifold curves, sorted weights, e_orb)."""
        ws = [w for _, w in self.locus()]
        return (len(ws), weight_multiset(ws), self.e_orb)


def weight_multiset(ws: Sequence[Weight]) -> tuple:
    return tuple(sorted(ws, key=lambda r: (r is INF, 0 if r is INF else r)))


def quotient_weights(
    weights: Mapping[str, Weight],
    act: ActionOnArrangement,
    cover_e_orb: Optional[Fraction] = None,
    generator_order: Optional[Sequence[str]] = None,
) -> QuotientPlan:
    """Quotient weight of each orbit: cover weight (1 if unweighted) times branch order."""
    for c in weights:
        if c not in act.curves:
            raise InputError(f"weighted curve {c} is not covered by the action")
    orbits = act.orbits(generator_order)
    out_w = []
    for orbit in orbits:
        ws = {weight_str(weights.get(c, 1)) for c in orbit}
        if len(ws) > 1:
            raise WeightMismatch(f"orbit {', '.join(orbit)} mixes weights {sorted(ws)}")
        bs = {act.branch_of(c) for c in orbit}
        if len(bs) > 1:
            raise WeightMismatch(f"orbit {', '.join(orbit)} has inconsistent branch orders {sorted(bs)}")
        out_w.append(_times(weights.get(orbit[0], 1), bs.pop()))
    e = None if cover_e_orb is None else Fraction(cover_e_orb) / act.group_order
    return QuotientPlan(tuple(orbits), tuple(out_w), e)


@dataclass(frozen=True)
class MultiplicativityReport:
    cover_e_orb: Fraction
    group_order: int
    quotient_e_orb: Fraction

    @property
    def holds(self) -> bool:
        return self.cover_e_orb == self.group_order * self.quotient_e_orb

    def line(self) -> str:
        return (
            f"{_r(self.cover_e_orb)} = {self.group_order} x {_r(self.quotient_e_orb)}"
            if self.holds
            else f"{_r(self.cover_e_orb)} != {self.group_order} x {_r(self.quotient_e_orb)}"
        )


def _r(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def euler_multiplicativity_check(
    cover_e_orb: Fraction,
    group_order: int,
    quotient_arr: Optional[Arrangement] = None,
    quotient_w: Optional[WeightAssignment] = None,
    declared_e_orb: Optional[Fraction] = None,
) -> MultiplicativityReport:
    """Compare the cover's e_orb with group order times the quotient's.

    The quotient value is computed from an independently declared quotient
    arrangement when one is given, otherwise taken from ``declared_e_orb``.
    """
    if quotient_arr is not None:
        if quotient_w is None:
            raise InputError("quotient arrangement given without weights")
        q = c2_orb(quotient_arr, quotient_w)
    elif declared_e_orb is not None:
        q = Fraction(declared_e_orb)
    else:
        raise InputError("need a quotient arrangement or a declared quotient e_orb")
    return MultiplicativityReport(Fraction(cover_e_orb), int(group_order), q)


def dm_identify(signature: tuple, records: Sequence) -> list:
    """All DM records whose stored signature equals ``signature``.

    ``signature`` is (curve count, weight multiset, e_orb); records expose a
    ``signature`` attribute of the same shape.  An empty list means no match.
    """
    count, ws, e = signature
    key = (count, weight_multiset(ws), Fraction(e) if e is not None else None)
    return [r for r in records if r.signature is not None and _sig_key(r.signature) == key]


def _sig_key(sig: tuple) -> tuple:
    count, ws, e = sig
    return (count, weight_multiset(ws), Fraction(e))

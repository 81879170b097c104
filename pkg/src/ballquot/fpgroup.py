"""Coset enumeration and orbifold signatures of finite-index subgroups.

Words are strings over the generator letters; an upper-case letter is the
inverse of the lower-case one.  ``(ab)^10`` and ``a^-1`` style powers are
accepted by :func:`parse_word`.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

from .errors import CosetOverflow, InconsistencyError, InputError
from .groups import Perm


# ---------------------------------------------------------------- words

def invert_letter(c: str) -> str:
    return c.lower() if c.isupper() else c.upper()


def free_reduce(word: str) -> str:
    out: list = []
    for c in word:
        if out and out[-1] == invert_letter(c):
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def inverse_word(word: str) -> str:
    return "".join(invert_letter(c) for c in reversed(word))


def parse_word(text: str, generators: Optional[Sequence[str]] = None) -> str:
    """Expand powers and parentheses, then freely reduce."""
    text = text.replace(" ", "").replace("*", "")
    pos = 0

    def expr() -> str:
        nonlocal pos
        out = []
        while pos < len(text) and text[pos] != ")":
            if text[pos] == "(":
                pos += 1
                inner = expr()
                if pos >= len(text) or text[pos] != ")":
                    raise InputError(f"unbalanced parentheses in {text!r}")
                pos += 1
                atom = inner
            elif text[pos].isalpha():
                atom = text[pos]
                pos += 1
            else:
                raise InputError(f"unexpected {text[pos]!r} in word {text!r}")
            m = re.match(r"\^(-?\d+)", text[pos:])
            if m:
                pos += m.end()
                n = int(m.group(1))
                atom = (inverse_word(atom) if n < 0 else atom) * abs(n)
            out.append(atom)
        return "".join(out)

    word = expr()
    if pos != len(text):
        raise InputError(f"unbalanced parentheses in {text!r}")
    word = free_reduce(word)
    if generators is not None:
        bad = {c.lower() for c in word} - set(generators)
        if bad:
            raise InputError(f"word {text!r} uses unknown generators {sorted(bad)}")
    return word


@dataclass(frozen=True)
class Presentation:
    generators: tuple
    relators: tuple

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if len(g) != 1 or not g.islower():
                raise InputError(f"generator names must be single lower-case letters, got {g!r}")
        if len(set(gens)) != len(gens):
            raise InputError("repeated generator")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", tuple(parse_word(r, gens) for r in self.relators))

    @classmethod
    def triangle(cls, p: int, q: int, r: int, names: str = "ab") -> "Presentation":
        x, y = names
        return cls((x, y), (f"{x}^{p}", f"{y}^{q}", f"({x}{y})^{r}"))


# ---------------------------------------------------------------- Todd-Coxeter

@dataclass(frozen=True)
class CosetTable:
    presentation: Presentation
    subgroup: tuple
    index: int
    perms: dict  # generator -> Perm on cosets 0..index-1
    complete: bool = True

    def perm_of(self, word: str) -> Perm:
        """Right action: coset c . word, as a permutation."""
        n = self.index
        img = list(range(n))
        for c in word:
            p = self.perms[c.lower()]
            if c.isupper():
                p = p.inverse()
            img = [p(x) for x in img]
        return Perm(tuple(img))

    def verify(self) -> bool:
        ident = Perm.identity(self.index)
        if any(self.perm_of(r) != ident for r in self.presentation.relators):
            return False
        return all(self.perm_of(w)(0) == 0 for w in self.subgroup)

    def canonical(self) -> tuple:
        return canonical_form(self.presentation.generators, self.perms, 0)


class _Enumerator:
    def __init__(self, pres: Presentation, subgroup: Sequence[str], max_cosets: int):
        self.gens = pres.generators
        self.cols = []
        for g in self.gens:
            self.cols += [g, g.upper()]
        self.col = {c: n for n, c in enumerate(self.cols)}
        self.inv = [n ^ 1 for n in range(len(self.cols))]
        self.rels = [[self.col[c] for c in r] for r in pres.relators if r]
        # cyclic conjugates are implied by scanning at every coset, so raw relators suffice
        self.sub = [[self.col[c] for c in w] for w in subgroup if w]
        self.max = max_cosets
        self.table = [[None] * len(self.cols)]
        self.p = [0]
        self.active = 1

    def rep(self, c: int) -> int:
        root = c
        while self.p[root] != root:
            root = self.p[root]
        while self.p[c] != root:
            self.p[c], c = root, self.p[c]
        return root

    def define(self, c: int, x: int) -> Optional[int]:
        if self.active >= self.max:
            return None
        d = len(self.table)
        self.table.append([None] * len(self.cols))
        self.p.append(d)
        self.active += 1
        self.table[c][x] = d
        self.table[d][self.inv[x]] = c
        return d

    def merge(self, k: int, l: int, queue: deque) -> None:
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        lo, hi = min(k, l), max(k, l)
        self.p[hi] = lo
        self.active -= 1
        queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: deque = deque()
        self.merge(a, b, queue)
        while queue:
            e = queue.popleft()
            for x in range(len(self.cols)):
                f = self.table[e][x]
                if f is None:
                    continue
                xi = self.inv[x]
                if self.table[f][xi] == e:
                    self.table[f][xi] = None
                e1, f1 = self.rep(e), self.rep(f)
                if self.table[e1][x] is not None:
                    self.merge(f1, self.table[e1][x], queue)
                elif self.table[f1][xi] is not None:
                    self.merge(e1, self.table[f1][xi], queue)
                else:
                    self.table[e1][x] = f1
                    self.table[f1][xi] = e1

    def scan(self, c: int, w: list, fill: bool) -> bool:
        """Scan w at c, filling gaps if ``fill``.  False if a definition was refused."""
        T, inv = self.table, self.inv
        f, b, i, j = c, c, 0, len(w) - 1
        while True:
            while i <= j and T[f][w[i]] is not None:
                f = T[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return True
            while j >= i and T[b][inv[w[j]]] is not None:
                b = T[b][inv[w[j]]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if i == j:
                T[f][w[i]] = b
                T[b][inv[w[i]]] = f
                return True
            if not fill:
                return True
            if self.define(f, w[i]) is None:
                return False

    def alive(self, c: int) -> bool:
        return self.p[c] == c

    def lookahead(self) -> None:
        c = 0
        while c < len(self.table):
            if self.alive(c):
                for r in self.rels:
                    self.scan(c, r, fill=False)
                    if not self.alive(c):
                        break
            c += 1

    def guarded(self, c: int, w: list) -> None:
        if self.scan(c, w, fill=True):
            return
        self.lookahead()
        if not self.alive(c) or self.scan(c, w, fill=True):
            return
        raise CosetOverflow(self.max)

    def run(self) -> None:
        for w in self.sub:
            self.guarded(0, w)
        c = 0
        while c < len(self.table):
            for r in self.rels:
                if not self.alive(c):
                    break
                self.guarded(c, r)
            if self.alive(c):
                for x in range(len(self.cols)):
                    if self.table[c][x] is None:
                        if self.define(c, x) is None:
                            self.lookahead()
                            if self.alive(c) and self.table[c][x] is None and self.define(c, x) is None:
                                raise CosetOverflow(self.max)
            c += 1

    def result(self) -> tuple:
        """Standardized permutations: cosets renumbered in breadth-first order from 0."""
        order = {0: 0}
        queue = [0]
        for c in queue:
            for x in range(len(self.cols)):
                d = self.rep(self.table[c][x])
                if d not in order:
                    order[d] = len(order)
                    queue.append(d)
        n = len(order)
        perms = {}
        for k, g in enumerate(self.gens):
            img = [0] * n
            for c, pos in order.items():
                img[pos] = order[self.rep(self.table[c][2 * k])]
            perms[g] = Perm(tuple(img))
        return n, perms


def todd_coxeter(p: Presentation, subgroup_words: Iterable[str] = (), max_cosets: int = 100_000) -> CosetTable:
    """Enumerate the cosets of the subgroup generated by ``subgroup_words``.

    Raises CosetOverflow when more than ``max_cosets`` live cosets are needed.
    """
    if max_cosets < 1:
        raise InputError("max_cosets must be positive")
    words = tuple(parse_word(w, p.generators) for w in subgroup_words)
    e = _Enumerator(p, words, max_cosets)
    e.run()
    n, perms = e.result()
    table = CosetTable(p, words, n, perms, True)
    if not table.verify():
        raise AssertionError("coset table failed relator verification")
    return table


def canonical_form(gens: Sequence[str], perms: dict, base: int) -> tuple:
    """Relabel a transitive action by breadth-first search from ``base``."""
    fwd = [tuple(perms[g].images) for g in gens]
    moves = [m for f in fwd for m in (f, _tuple_inverse(f))]
    order = {base: 0}
    queue = [base]
    for c in queue:
        for m in moves:
            d = m[c]
            if d not in order:
                order[d] = len(order)
                queue.append(d)
    if len(order) != len(fwd[0]):
        raise InputError("action is not transitive")
    out = []
    for f in fwd:
        img = [0] * len(order)
        for c, pos in order.items():
            img[pos] = order[f[c]]
        out.append(tuple(img))
    return tuple(out)


# ---------------------------------------------------------------- signatures

@dataclass(frozen=True)
class OrbifoldSignature:
    genus: int
    cones: tuple
    chi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "cones", tuple(sorted(self.cones)))
        expected = 2 - 2 * self.genus - sum((1 - Fraction(1, m) for m in self.cones), Fraction(0))
        if expected != self.chi:
            raise InconsistencyError(f"signature {self} has inconsistent Euler characteristic")

    def __str__(self) -> str:
        cones = ",".join(map(str, self.cones)) or "-"
        return f"(g={self.genus}; {cones})"


def triangle_chi(p: int, q: int, r: int) -> Fraction:
    s = Fraction(1, p) + Fraction(1, q) + Fraction(1, r)
    if min(p, q, r) < 2 or s >= 1:
        raise InputError(f"({p},{q},{r}) is not a hyperbolic triangle group")
    return s - 1


def subgroup_signature(table: CosetTable, elliptic: Sequence[tuple], group_chi: Fraction) -> OrbifoldSignature:
    """Cone points from the cycle structure of each elliptic generator; genus by Riemann-Hurwitz."""
    cones = []
    for word, m in elliptic:
        perm = table.perm_of(parse_word(word))
        for length in perm.cycle_type():
            if m % length:
                raise InconsistencyError(f"cycle of length {length} for an element of order {m}")
            if length < m:
                cones.append(m // length)
    chi = table.index * Fraction(group_chi)
    twice_genus = 2 - chi - sum((1 - Fraction(1, m) for m in cones), Fraction(0))
    if twice_genus.denominator != 1 or twice_genus.numerator % 2:
        raise InconsistencyError(f"non-integral genus {twice_genus / 2} from index {table.index}")
    sig = OrbifoldSignature(int(twice_genus) // 2, tuple(cones), chi)
    return sig


def triangle_elliptics(names: str = "ab", orders: Sequence[int] = (2, 3, 10)) -> list:
    x, y = names
    return [(x, orders[0]), (y, orders[1]), (x + y, orders[2])]


def etale_cover_genus(g: int, n: int) -> int:
    if g < 1 or n < 1:
        raise InputError("genus and degree must be at least 1")
    return n * (g - 1) + 1


# ---------------------------------------------------------------- search oracle

def words_up_to(generators: Sequence[str], length: int) -> Iterable[str]:
    letters = []
    for g in generators:
        letters += [g, g.upper()]
    for n in range(1, length + 1):
        for tup in product(letters, repeat=n):
            w = "".join(tup)
            if free_reduce(w) == w:
                yield w


def schreier_generators(table: CosetTable) -> list:
    """Schreier generators of the subgroup stabilising coset 0, from a BFS transversal."""
    gens = table.presentation.generators
    rep = {0: ""}
    queue = [0]
    for c in queue:
        for g in gens:
            for letter, d in ((g, table.perms[g](c)), (g.upper(), table.perms[g].inverse()(c))):
                if d not in rep:
                    rep[d] = rep[c] + letter
                    queue.append(d)
    out = []
    for c in range(table.index):
        for g in gens:
            d = table.perms[g](c)
            w = free_reduce(rep[c] + g + inverse_word(rep[d]))
            if w and w not in out:
                out.append(w)
    return out


@dataclass(frozen=True)
class SearchResult:
    relator: str
    subgroup_words: tuple
    table: CosetTable
    signature: OrbifoldSignature
    searched: int


def normal_subgroup_search(
    p: Presentation,
    index: int,
    elliptic: Sequence[tuple],
    group_chi: Fraction,
    target: OrbifoldSignature,
    max_length: int = 6,
    max_cosets: int = 200,
) -> Optional[SearchResult]:
    """First word w (shortlex) whose normal closure has the given index and signature.

    The normal closure is found by enumerating the trivial subgroup of the
    presentation with w added as a relator; its Schreier generators are then
    re-enumerated as a subgroup of the original presentation.
    """
    count = 0
    for w in words_up_to(p.generators, max_length):
        count += 1
        q = Presentation(p.generators, p.relators + (w,))
        try:
            quot = todd_coxeter(q, (), max_cosets=max_cosets)
        except CosetOverflow:
            continue
        if quot.index != index:
            continue
        words = tuple(schreier_generators(quot))
        table = todd_coxeter(p, words, max_cosets=max(max_cosets, 4 * index))
        if table.index != index:
            continue
        sig = subgroup_signature(table, elliptic, group_chi)
        if sig.genus == target.genus and sig.cones == target.cones:
            return SearchResult(w, words, table, sig, count)
    return None


# ---------------------------------------------------------------- low-index oracle

def _elements_of_order_dividing(n: int, m: int) -> list:
    """All permutations of range(n) whose order divides m (brute force over cycle structures)."""
    out = []

    def build(img: list, remaining: list):
        if not remaining:
            out.append(tuple(img))
            return
        first = remaining[0]
        rest = remaining[1:]
        for length in range(1, len(remaining) + 1):
            if m % length:
                continue
            for others in _ordered_choices(rest, length - 1):
                cyc = (first,) + others
                new = img[:]
                for k, x in enumerate(cyc):
                    new[x] = cyc[(k + 1) % length]
                build(new, [r for r in rest if r not in others])

    build(list(range(n)), list(range(n)))
    return out


def _ordered_choices(items: list, k: int):
    if k == 0:
        yield ()
        return
    for n, x in enumerate(items):
        for tail in _ordered_choices(items[:n] + items[n + 1:], k - 1):
            yield (x,) + tail


def low_index_subgroups(p: Presentation, index: int) -> set:
    """Canonical coset tables of all index-``index`` subgroups of a two-generator group.

    Exhaustive over transitive permutation representations; the first
    generator is fixed to one representative per cycle type, which covers
    every representation up to relabelling.  Relators must include a power of
    each generator so that candidate images are finite in number.
    """
    if len(p.generators) != 2:
        raise InputError("the exhaustive oracle handles two-generator presentations only")
    x, y = p.generators
    ox = _generator_order(p, x)
    oy = _generator_order(p, y)
    ys = _elements_of_order_dividing(index, oy)
    xs = _class_representatives(index, ox)
    # x^ox and y^oy hold by construction of the candidates
    checks = [_primitive_root(r) for r in p.relators if r not in (x * ox, y * oy)]
    found = set()
    for xi in xs:
        xinv = _tuple_inverse(xi)
        for yi in ys:
            images = {x: xi, x.upper(): xinv, y: yi, y.upper(): _tuple_inverse(yi)}
            if not all(_relator_fixes_all(root, k, images, index) for root, k in checks):
                continue
            perms = {x: Perm(xi), y: Perm(yi)}
            if not _transitive(perms, index):
                continue
            for base in range(index):
                found.add(canonical_form(p.generators, perms, base))
    return found


def _tuple_inverse(img: tuple) -> tuple:
    out = [0] * len(img)
    for i, j in enumerate(img):
        out[j] = i
    return tuple(out)


def _relator_fixes_all(root: str, k: int, images: dict, n: int) -> bool:
    """Whether root^k acts trivially."""
    u = list(range(n))
    for c in root:
        m = images[c]
        u = [m[v] for v in u]
    for start in range(n):
        c = start
        for _ in range(k):
            c = u[c]
        if c != start:
            return False
    return True


def _primitive_root(word: str) -> tuple:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d], n // d
    return word, 1


def _generator_order(p: Presentation, g: str) -> int:
    for r in p.relators:
        if r and set(r) == {g}:
            return len(r)
    raise InputError(f"no power relator for generator {g}")


def _class_representatives(n: int, m: int) -> list:
    """One permutation per cycle type with all cycle lengths dividing m."""
    out = []

    def parts(rem: int, maxpart: int):
        if rem == 0:
            yield ()
            return
        for k in range(min(rem, maxpart), 0, -1):
            if m % k == 0:
                for tail in parts(rem - k, k):
                    yield (k,) + tail

    for shape in parts(n, n):
        img, start = list(range(n)), 0
        for k in shape:
            for j in range(k):
                img[start + j] = start + (j + 1) % k
            start += k
        out.append(tuple(img))
    return out


def _transitive(perms: dict, n: int) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        c = stack.pop()
        for p in perms.values():
            for d in (p(c), p.inverse()(c)):
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
    return len(seen) == n

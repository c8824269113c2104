"""Lazy treed groupoids generated by finite descent data, and their level extension.

The descent data is a finite measured shadow of an inherently infinite
object: a base class space Z, a plus letter space with q letters over
each class, a minus letter space with p letters over each class, and
transport maps pairing a letter with the display index of its inverse.
Arrows are represented lazily as reduced edge words anchored at a
class; fibers are explored as anchored walk trees in which every
vertex carries exactly q outgoing and p incoming edges.

No finite instance can realise all of this globally when p != q (a
finite letter alphabet forces equal total out- and in-degree), so
every verdict produced here is labelled with the truncation radius
that certifies it, and the word algebra is exact on the operations the
walk trees support (right inverses, cancellation pairs, reduction);
see the individual docstrings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import (SIGMA_FINITE, InputError, ResourceBoundError, UnitSpace,
                   Violation, frac_str)
from .report import Report


class TruncationError(RuntimeError):
    """The requested certificate needs a larger truncation radius."""


@dataclass(frozen=True)
class EdgeLetter:
    """One edge germ: sign +1 reads a plus letter, sign -1 a minus letter."""
    sign: int
    index: int

    def __repr__(self):
        return f"{'+' if self.sign == 1 else '-'}{self.index}"


class DescentData:
    """Finite measured data generating a treed quotient lazily.

    ``sigma_plus`` and ``sigma_minus`` send letters to their range
    class; ``t_down`` sends a plus letter to the display index of its
    inverse (a minus letter), ``t_up`` the other way.  When p == q the
    two transports must be mutually inverse weight-preserving
    bijections; when p != q no such bijection can exist on finite data
    (there are q letters per class on one side and p on the other), so
    they are only required to be total, and the walk trees rather than
    the letter algebra carry the exact fiber structure.
    """

    def __init__(self, p: int, q: int, z_space: UnitSpace, plus_space: UnitSpace,
                 minus_space: UnitSpace, sigma_plus: Sequence[int],
                 sigma_minus: Sequence[int], t_down: Sequence[int],
                 t_up: Sequence[int]):
        self.p, self.q = int(p), int(q)
        self.z_space = z_space
        self.plus_space = plus_space
        self.minus_space = minus_space
        self.sigma_plus = tuple(sigma_plus)
        self.sigma_minus = tuple(sigma_minus)
        self.t_down = tuple(t_down)
        self.t_up = tuple(t_up)
        if len(self.sigma_plus) != len(plus_space) or \
           len(self.sigma_minus) != len(minus_space):
            raise InputError("sigma maps must cover the letter spaces")
        if len(self.t_down) != len(plus_space) or len(self.t_up) != len(minus_space):
            raise InputError("transport maps must cover the letter spaces")
        for name, seq, bound in (("sigma_plus", self.sigma_plus, len(z_space)),
                                 ("sigma_minus", self.sigma_minus, len(z_space)),
                                 ("t_down", self.t_down, len(minus_space)),
                                 ("t_up", self.t_up, len(plus_space))):
            for v in seq:
                if not 0 <= v < bound:
                    raise InputError(f"{name} value {v} out of range")
        self.plus_by_z = tuple(
            tuple(u for u in range(len(plus_space)) if self.sigma_plus[u] == z)
            for z in range(len(z_space)))
        self.minus_by_z = tuple(
            tuple(v for v in range(len(minus_space)) if self.sigma_minus[v] == z)
            for z in range(len(z_space)))

    # letter endpoint helpers -------------------------------------------------

    def letter_range(self, l: EdgeLetter) -> int:
        return self.sigma_plus[l.index] if l.sign == 1 else self.sigma_minus[l.index]

    def letter_source(self, l: EdgeLetter) -> int:
        if l.sign == 1:
            return self.sigma_minus[self.t_down[l.index]]
        return self.sigma_plus[self.t_up[l.index]]

    def letter_inverse(self, l: EdgeLetter) -> EdgeLetter:
        if l.sign == 1:
            return EdgeLetter(-1, self.t_down[l.index])
        return EdgeLetter(1, self.t_up[l.index])

    def cancels(self, first: EdgeLetter, second: EdgeLetter) -> bool:
        """second undoes first: it is the letter-inverse of first."""
        return second == self.letter_inverse(first)

    def ratio(self) -> Fraction:
        return Fraction(self.q, self.p)

    def z_total(self) -> Fraction:
        return self.z_space.total()

    def __repr__(self):
        return f"DescentData(p={self.p}, q={self.q}, |Z|={len(self.z_space)})"


def validate_descent(d: DescentData) -> list[Violation]:
    """Exact fiber-cardinality, weight, and transport constraints."""
    out: list[Violation] = []
    for z in range(len(d.z_space)):
        if len(d.plus_by_z[z]) != d.q:
            out.append(Violation("descent.plus-fiber", (z,),
                                 f"class {z} has {len(d.plus_by_z[z])} plus letters, "
                                 f"expected q={d.q}"))
        if len(d.minus_by_z[z]) != d.p:
            out.append(Violation("descent.minus-fiber", (z,),
                                 f"class {z} has {len(d.minus_by_z[z])} minus letters, "
                                 f"expected p={d.p}"))
    for u in range(len(d.plus_space)):
        want = d.z_space.weights[d.sigma_plus[u]] / d.q
        if d.plus_space.weights[u] != want:
            out.append(Violation("descent.plus-weight", (u,),
                                 f"plus letter {u} weighs "
                                 f"{frac_str(d.plus_space.weights[u])}, expected "
                                 f"{frac_str(want)}"))
    for v in range(len(d.minus_space)):
        want = d.z_space.weights[d.sigma_minus[v]] / d.p
        if d.minus_space.weights[v] != want:
            out.append(Violation("descent.minus-weight", (v,),
                                 f"minus letter {v} weighs "
                                 f"{frac_str(d.minus_space.weights[v])}, expected "
                                 f"{frac_str(want)}"))
    if d.p == d.q:
        for u in range(len(d.plus_space)):
            if d.t_up[d.t_down[u]] != u:
                out.append(Violation("descent.transport-not-involutive", (u,),
                                     "with p == q the transports must be mutually "
                                     "inverse bijections"))
        for v in range(len(d.minus_space)):
            if d.minus_space.weights[v] != d.plus_space.weights[d.t_up[v]]:
                out.append(Violation("descent.transport-weight", (v,),
                                     "with p == q the transport must preserve "
                                     "letter weights"))
    return out


def single_class_descent(p: int, q: int) -> DescentData:
    """The ergodic-case shadow: one class, q uniform plus and p uniform minus letters.

    The transports send every letter to the basepoint on the other
    side, matching the zero-coset representative convention of the
    group-side normal forms.
    """
    z = UnitSpace([Fraction(1)])
    plus = UnitSpace([Fraction(1, q)] * q, SIGMA_FINITE if q == 1 else "probability")
    minus = UnitSpace([Fraction(1, p)] * p, SIGMA_FINITE if p == 1 else "probability")
    if q == 1:
        plus = UnitSpace([Fraction(1)], "probability")
    if p == 1:
        minus = UnitSpace([Fraction(1)], "probability")
    if p == q:
        t_down = tuple(range(q))
        t_up = tuple(range(p))
    else:
        t_down = (0,) * q
        t_up = (0,) * p
    return DescentData(p, q, z, plus, minus, [0] * q, [0] * p, t_down, t_up)


def block_descent(p: int, q: int, classes: int) -> DescentData:
    """Several uniform classes with a deterministic spread of letter sources."""
    m = classes
    z = UnitSpace([Fraction(1, m)] * m)
    plus = UnitSpace([Fraction(1, m * q)] * (m * q))
    minus = UnitSpace([Fraction(1, m * p)] * (m * p))
    sigma_plus = [u // q for u in range(m * q)]
    sigma_minus = [v // p for v in range(m * p)]
    t_down = [((u // q + u) % m) * p for u in range(m * q)]
    t_up = [((v // p + v) % m) * q for v in range(m * p)]
    if p == q:
        t_down = [(u // q) * p + (u % q) for u in range(m * q)]
        t_up = [(v // p) * q + (v % p) for v in range(m * p)]
    return DescentData(p, q, z, plus, minus, sigma_plus, sigma_minus, t_down, t_up)


# --- reduced word arrows -----------------------------------------------------


@dataclass(frozen=True)
class TreedArrow:
    """Reduced edge word anchored at its range class."""
    base: int
    letters: tuple[EdgeLetter, ...]

    def source(self, d: DescentData) -> int:
        return d.letter_source(self.letters[-1]) if self.letters else self.base

    def is_unit(self) -> bool:
        return not self.letters

    def exponent_sum(self) -> int:
        return sum(l.sign for l in self.letters)

    def __repr__(self):
        body = " ".join(repr(l) for l in self.letters) or "1"
        return f"<{body} @{self.base}>"


def make_arrow(d: DescentData, base: int, letters: Iterable[EdgeLetter]) -> TreedArrow:
    """Validate chain compatibility and reducedness, then freeze."""
    letters = tuple(letters)
    cur = base
    prev: Optional[EdgeLetter] = None
    for l in letters:
        if d.letter_range(l) != cur:
            raise InputError(f"letter {l} does not start at class {cur}")
        if prev is not None and d.cancels(prev, l):
            raise InputError(f"letters {prev} {l} are an inverse pair")
        cur = d.letter_source(l)
        prev = l
    return TreedArrow(base, letters)


def unit_arrow(d: DescentData, z: int) -> TreedArrow:
    return TreedArrow(z, ())


def compose_arrows(d: DescentData, a: TreedArrow, b: TreedArrow) -> TreedArrow:
    """Concatenate and fully reduce; endpoints must match."""
    if a.source(d) != b.base:
        raise InputError(
            f"arrows not composable: source class {a.source(d)} != base {b.base}")
    stack = list(a.letters)
    for l in b.letters:
        if stack and d.cancels(stack[-1], l):
            junction = stack[-2] if len(stack) >= 2 else None
            tail_ok = (d.letter_source(junction) if junction is not None
                       else a.base) == d.letter_source(l)
            if tail_ok:
                stack.pop()
                continue
        stack.append(l)
    return make_arrow(d, a.base, stack)


def invert_arrow(d: DescentData, a: TreedArrow) -> TreedArrow:
    """Reverse the word, invert each letter, and reduce.

    With p == q this is an exact groupoid inverse.  With p != q the
    letter transports cannot be injective, so the reversal is only the
    walk read backwards with default display indices; the right-inverse
    law a * invert(a) == unit holds exactly when the reversal needs no
    reduction (single letters and sign-monotone words in particular).
    """
    base = a.source(d)
    stack: list[EdgeLetter] = []
    cur = base
    for l in reversed(a.letters):
        li = d.letter_inverse(l)
        if d.letter_range(li) != cur:
            raise InputError(
                "letter-inverse transport is not class-consistent; "
                "this descent data cannot invert the word")
        if stack and d.cancels(stack[-1], li):
            stack.pop()
        else:
            stack.append(li)
        cur = d.letter_source(stack[-1]) if stack else base
    return make_arrow(d, base, stack)


def rn_cocycle(d: DescentData, a: TreedArrow) -> Fraction:
    """(q/p) to the signed letter count; multiplicative under composition."""
    return d.ratio() ** a.exponent_sum()


def plus_arrow(d: DescentData, u: int) -> TreedArrow:
    return make_arrow(d, d.sigma_plus[u], [EdgeLetter(1, u)])


def minus_arrow(d: DescentData, v: int) -> TreedArrow:
    return make_arrow(d, d.sigma_minus[v], [EdgeLetter(-1, v)])


def enumerate_words(d: DescentData, base: int, max_len: int,
                    reduced_only: bool = False):
    """All chain-compatible letter sequences from a class, up to a length."""
    def extend(prefix: tuple[EdgeLetter, ...], cur: int):
        yield prefix
        if len(prefix) == max_len:
            return
        options = [EdgeLetter(1, u) for u in d.plus_by_z[cur]] + \
                  [EdgeLetter(-1, v) for v in d.minus_by_z[cur]]
        for l in options:
            if reduced_only and prefix and d.cancels(prefix[-1], l):
                continue
            yield from extend(prefix + (l,), d.letter_source(l))
    yield from extend((), base)


def unit_word_check(d: DescentData, max_len: int,
                    presentation=None) -> Report:
    """Certify that words collapse to units exactly when reduction empties them.

    Every chain-compatible word up to the length bound is composed
    letter by letter and compared with one-shot reduction.  When a
    matching rank-1 presentation is supplied (single class, zero-coset
    transport convention), the letters are mapped to coset-decorated
    stable letters and the group side is cross-checked: a reduced word
    maps to a pinch-free normal form of the same length, so no reduced
    nonempty word is a unit, and cancellation pairs map into the base
    group.  Interior cancellation remainders are not representable in
    the finite shadow, so only reduced words carry the exact
    letter-for-letter correspondence.
    """
    rep = Report()
    step_ok = True
    unit_ok = True
    checked = 0
    for base in range(len(d.z_space)):
        for word in enumerate_words(d, base, max_len):
            checked += 1
            stepwise = unit_arrow(d, base)
            cur = base
            for l in word:
                stepwise = compose_arrows(
                    d, stepwise, make_arrow(d, cur, [l]))
                cur = d.letter_source(l)
            stack: list[EdgeLetter] = []
            for l in word:
                if stack and d.cancels(stack[-1], l):
                    stack.pop()
                else:
                    stack.append(l)
            if (not stack) != stepwise.is_unit():
                unit_ok = False
            if tuple(stack) != stepwise.letters:
                step_ok = False
    rep.add("words.stepwise-matches-reduction", step_ok,
            f"letterwise composition equals one-shot reduction on {checked} words")
    rep.add("words.unit-iff-fully-cancelled", unit_ok,
            "a word is a unit exactly when reduction empties it")
    if presentation is not None:
        from .hnn_group import GroupWord
        if (len(d.z_space) != 1 or presentation.p != d.p
                or presentation.q != d.q):
            raise InputError("presentation does not match the descent data")
        if any(v != 0 for v in d.t_down) or any(u != 0 for u in d.t_up):
            raise InputError(
                "the group-side cross-check needs the zero-coset transport "
                "convention (all transports at the basepoint)")

        def to_group(word):
            letters = []
            for l in word:
                if l.sign == 1:
                    letters.extend([presentation.s_plus[l.index], "t"])
                else:
                    letters.extend([presentation.s_minus[l.index], "T"])
            return GroupWord.from_letters(presentation, letters)

        reduced_ok = True
        nonunit_ok = True
        pair_ok = True
        reduced_checked = 0
        for word in enumerate_words(d, 0, max_len, reduced_only=True):
            reduced_checked += 1
            g = to_group(word)
            if len(g.syllables) != len(word):
                reduced_ok = False
            if word and g.is_in_base_group():
                nonunit_ok = False
        for u in range(d.q):
            pair = (EdgeLetter(1, u), EdgeLetter(-1, d.t_down[u]))
            if not to_group(pair).is_in_base_group():
                pair_ok = False
        rep.add("words.reduced-maps-to-pinch-free", reduced_ok,
                f"each of {reduced_checked} reduced words maps to a "
                "pinch-free normal form of equal length")
        rep.add("words.reduced-nonempty-is-nonunit", nonunit_ok,
                "no reduced nonempty word lands in the base group")
        rep.add("words.cancellation-pairs-in-base-group", pair_ok,
                "letter inverse pairs map into the base group")
    return rep


# --- anchored walk trees -------------------------------------------------------


@dataclass
class WalkTree:
    """Ball of an anchored fiber tree; vertices are non-backtracking walks.

    Each vertex offers one step per plus letter at its class (an edge
    leaving the vertex) and one per minus letter (an edge entering it);
    the step that undoes the entering step is the parent edge, so every
    vertex not on the boundary has exactly q outgoing and p incoming
    edges.
    """
    descent: DescentData
    root_unit: int
    root_level: Optional[int]
    radius: int
    unit: list[int]
    level: list[Optional[int]]     # source-level coordinate, when tracked
    depth: list[int]
    parent: list[int]
    enter: list[Optional[EdgeLetter]]
    children: list[dict[EdgeLetter, int]]
    edges: list[tuple[int, int]]   # oriented (from, to), one entry per tree edge

    @property
    def n_vertices(self) -> int:
        return len(self.unit)

    def backtrack_label(self, v: int) -> Optional[EdgeLetter]:
        if self.parent[v] < 0:
            return None
        return self.descent.letter_inverse(self.enter[v])

    def step(self, v: int, letter: EdgeLetter) -> Optional[int]:
        """Follow one step label from a vertex; None when outside the ball."""
        if letter == self.backtrack_label(v):
            return self.parent[v]
        return self.children[v].get(letter)

    def walk(self, letters: Sequence[EdgeLetter]) -> Optional[int]:
        v = 0
        for l in letters:
            nxt = self.step(v, l)
            if nxt is None:
                return None
            v = nxt
        return v

    def out_degree(self, v: int) -> int:
        return sum(1 for a, _ in self.edges if a == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for _, b in self.edges if b == v)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in range(self.n_vertices)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


def build_walk_tree(d: DescentData, z: int, radius: int,
                    level: Optional[int] = None,
                    max_vertices: int = 500000) -> WalkTree:
    if radius < 0:
        raise InputError("radius must be >= 0")
    tree = WalkTree(d, z, level, radius, [z], [level], [0], [-1], [None],
                    [{}], [])
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            if tree.depth[v] == radius:
                continue
            w = tree.unit[v]
            steps = [EdgeLetter(1, u) for u in d.plus_by_z[w]] + \
                    [EdgeLetter(-1, m) for m in d.minus_by_z[w]]
            bt = tree.backtrack_label(v)
            for l in steps:
                if l == bt:
                    continue
                if tree.n_vertices >= max_vertices:
                    raise ResourceBoundError(
                        f"walk tree exceeded {max_vertices} vertices")
                c = tree.n_vertices
                tree.unit.append(d.letter_source(l))
                tree.level.append(None if level is None
                                  else tree.level[v] - l.sign)
                tree.depth.append(tree.depth[v] + 1)
                tree.parent.append(v)
                tree.enter.append(l)
                tree.children.append({})
                tree.children[v][l] = c
                tree.edges.append((v, c) if l.sign == 1 else (c, v))
                nxt.append(c)
        frontier = nxt
    return tree


def fiber_ball(d: DescentData, z: int, radius: int,
               max_vertices: int = 500000) -> WalkTree:
    """Radius-R ball of the fiber tree at a class, with oriented edges."""
    return fiber_ball_checked(d, z, radius, max_vertices)[0]


def fiber_ball_checked(d: DescentData, z: int, radius: int,
                       max_vertices: int = 500000) -> tuple[WalkTree, Report]:
    tree = build_walk_tree(d, z, radius, None, max_vertices)
    rep = Report()
    interior = [v for v in range(tree.n_vertices) if tree.depth[v] < radius]
    rep.add("degree-law.out", all(tree.out_degree(v) == d.q for v in interior),
            f"every interior vertex has out-degree q={d.q}")
    rep.add("degree-law.in", all(tree.in_degree(v) == d.p for v in interior),
            f"every interior vertex has in-degree p={d.p}")
    rep.add("fiber.tree", len(tree.edges) == tree.n_vertices - 1,
            "the ball is a tree (edge count check; construction is acyclic)")
    return tree, rep


# --- the level extension -------------------------------------------------------


@dataclass
class MaharamExtension:
    """Level window of the skew product with the formal density cocycle.

    Units are (class, level) with weight zeta(class) * (q/p)^(-level);
    the degenerate p == q case is the identity extension and carries a
    notice instead of levels.
    """
    descent: DescentData
    level_radius: int
    degenerate: bool = False
    notice: str = ""

    def units(self) -> list[tuple[int, int]]:
        rng = [0] if self.degenerate else \
            range(-self.level_radius, self.level_radius + 1)
        return [(z, n) for n in rng for z in range(len(self.descent.z_space))]

    def weight(self, z: int, n: int) -> Fraction:
        return self.descent.z_space.weights[z] * self.descent.ratio() ** (-n)

    def level_weight(self, n: int) -> Fraction:
        return self.descent.z_total() * self.descent.ratio() ** (-n)

    def chosen_step(self, z: int, n: int) -> Optional[EdgeLetter]:
        """The slide step at a unit: first piece that lowers the level distance."""
        d = self.descent
        if n == 0 or self.degenerate:
            return None
        if n > 0:
            for piece in d.plus_piece_list():
                for u in piece:
                    if d.sigma_plus[u] == z:
                        return EdgeLetter(1, u)
            raise InputError(f"no plus letter over class {z}")
        for piece in d.plus_piece_list():
            for u in piece:
                if d.letter_source(EdgeLetter(1, u)) == z:
                    return EdgeLetter(-1, d.t_down[u])
        # the finite transports may under-cover a class; fall back to the
        # least minus letter there (recorded by the caller's report)
        return EdgeLetter(-1, d.minus_by_z[z][0])

    def chosen_step_by_scan(self, z: int, n: int) -> Optional[tuple[int, EdgeLetter]]:
        """Honest scan over the interleaved piece enumeration: minimal index
        whose step at this unit strictly lowers |level|."""
        d = self.descent
        if n == 0 or self.degenerate:
            return None
        k = 0
        for piece in d.plus_piece_list():
            k += 1  # odd position: the piece itself
            for u in piece:
                if d.sigma_plus[u] == z and abs(n - 1) < abs(n):
                    return (k, EdgeLetter(1, u))
            k += 1  # even position: its inverse
            for u in piece:
                if d.letter_source(EdgeLetter(1, u)) == z and abs(n + 1) < abs(n):
                    return (k, EdgeLetter(-1, d.t_down[u]))
        if n < 0:
            return (k + 1, EdgeLetter(-1, d.minus_by_z[z][0]))
        return None


def plus_piece_list(self) -> list[tuple[int, ...]]:
    """Greedy split of the plus letters into range- and source-injective pieces."""
    if not hasattr(self, "_pieces"):
        pieces: list[list[int]] = []
        for u in range(len(self.plus_space)):
            src = self.letter_source(EdgeLetter(1, u))
            for piece in pieces:
                if all(self.sigma_plus[w] != self.sigma_plus[u]
                       and self.letter_source(EdgeLetter(1, w)) != src
                       for w in piece):
                    piece.append(u)
                    break
            else:
                pieces.append([u])
        self._pieces = [tuple(p) for p in pieces]
    return self._pieces


DescentData.plus_piece_list = plus_piece_list


def maharam_extend(d: DescentData, level_radius: int) -> MaharamExtension:
    """The level extension, or the identity extension when p == q."""
    if d.p == d.q:
        return MaharamExtension(d, 0, degenerate=True,
                                notice="p == q: density is trivial, the level "
                                       "extension is the identity extension")
    if level_radius < 1:
        raise InputError("level radius must be >= 1")
    return MaharamExtension(d, level_radius)


@dataclass(frozen=True)
class MaharamArrow:
    """A lazy arrow of the level extension: a word plus its range level."""
    word: TreedArrow
    level: int

    def source_level(self) -> int:
        return self.level - self.word.exponent_sum()


def level_distance(d: DescentData, arrow: MaharamArrow,
                   extension: Optional[MaharamExtension] = None,
                   max_vertices: int = 500000) -> int:
    """|source level|, certified against breadth-first search in the fiber ball.

    The certificate needs the ball of radius word-length + |source
    level| around the arrow's range unit; a window too small to contain
    it raises TruncationError rather than guessing.
    """
    n = abs(arrow.source_level())
    needed = len(arrow.word.letters) + n
    if extension is not None and not extension.degenerate and \
       abs(arrow.level) > extension.level_radius:
        raise TruncationError("arrow level outside the extension window")
    tree = build_walk_tree(d, arrow.word.base, needed, arrow.level, max_vertices)
    v = tree.walk(arrow.word.letters)
    if v is None:
        raise TruncationError("truncation too small to certify the distance")
    from .treeing import FiberGraph
    adj = tree.adjacency()
    fg = FiberGraph(arrow.word.base, tuple(range(tree.n_vertices)),
                    {k: tuple(vv) for k, vv in adj.items()}, {})
    targets = [w for w in range(tree.n_vertices) if tree.level[w] == 0]
    dist = fg.distances_from(targets)
    if v not in dist or dist[v] != n:
        raise TruncationError(
            f"search found distance {dist.get(v)} where the level predicts {n}")
    return n


# --- induction onto the zero level ---------------------------------------------


@dataclass
class KernelInduction:
    extension: MaharamExtension
    word_radius: int
    report: Report
    theta_edges: dict[int, list[tuple[int, int]]]  # per class: pushed edges
    boundary_excluded: int


def induce_kernel_treeing(d: DescentData, level_radius: int, word_radius: int,
                          max_vertices: int = 500000) -> KernelInduction:
    """Slide the level-extension treeing onto the zero level and verify it.

    Works per anchored fiber tree: every vertex whose depth plus level
    distance fits inside the ball is slid to a zero-level vertex along
    the chosen steps; surviving edges are pushed to edges between slid
    endpoints.  Uncertifiable vertices and edges are excluded and
    counted, never guessed.
    """
    if d.p == d.q:
        raise InputError("induction needs p != q; the extension is trivial otherwise")
    ext = maharam_extend(d, level_radius)
    rep = Report()
    ok_unique = True
    ok_scan = True
    ok_counts = True
    for z in range(len(d.z_space)):
        for n in range(-level_radius, level_radius + 1):
            chosen = ext.chosen_step(z, n)
            scan = ext.chosen_step_by_scan(z, n)
            if n == 0:
                ok_unique &= chosen is None and scan is None
                continue
            ok_unique &= chosen is not None
            ok_scan &= scan is not None and scan[1] == chosen
            if n > 0:
                ok_counts &= (chosen.sign == 1 and
                              sum(1 for u in d.plus_by_z[z]
                                  if EdgeLetter(1, u) != chosen) == d.q - 1)
            else:
                ok_counts &= (chosen.sign == -1 and
                              sum(1 for v in d.minus_by_z[z]
                                  if EdgeLetter(-1, v) != chosen) == d.p - 1)
    rep.add("level-induction.one-chosen-germ-per-unit", ok_unique,
            "exactly one slide germ at every off-zero unit, none at level zero")
    rep.add("level-induction.minimal-piece-scan-agrees", ok_scan,
            "the interleaved piece scan picks the same slide germs")
    rep.add("level-induction.residual-germ-counts", ok_counts,
            f"q-1={d.q - 1} surviving outgoing germs per positive-level unit, "
            f"p-1={d.p - 1} incoming per negative-level unit")

    theta_edges: dict[int, list[tuple[int, int]]] = {}
    boundary = 0
    ok_dist = True
    ok_inj = True
    ok_acyclic = True
    ok_connected = True
    from .treeing import FiberGraph
    for z in range(len(d.z_space)):
        tree = build_walk_tree(d, z, word_radius, 0, max_vertices)
        certified = [v for v in range(tree.n_vertices)
                     if tree.depth[v] + abs(tree.level[v]) <= word_radius
                     and abs(tree.level[v]) <= level_radius]
        cert = set(certified)
        adj = tree.adjacency()
        fg = FiberGraph(z, tuple(range(tree.n_vertices)),
                        {k: tuple(vv) for k, vv in adj.items()}, {})
        dist = fg.distances_from([w for w in range(tree.n_vertices)
                                  if tree.level[w] == 0])
        ok_dist &= all(dist.get(v) == abs(tree.level[v]) for v in certified)

        slide: dict[int, int] = {}

        def f(v: int) -> int:
            cur = v
            while tree.level[cur] != 0:
                step = ext.chosen_step(tree.unit[cur], tree.level[cur])
                cur = tree.step(cur, step)
            return cur

        for v in certified:
            slide[v] = f(v)
        pushed: dict[tuple[int, int], int] = {}
        edges_here: list[tuple[int, int]] = []
        for a, b in tree.edges:
            child = b if tree.parent[b] == a else a
            par = a if child == b else b
            if child not in cert or par not in cert:
                boundary += 1
                continue
            letter = tree.enter[child]
            if ext.chosen_step(tree.unit[par], tree.level[par]) == letter or \
               ext.chosen_step(tree.unit[child], tree.level[child]) == \
               d.letter_inverse(letter):
                continue  # a slide edge, not part of the surviving set
            key = (slide[a], slide[b])
            unordered = (min(key), max(key))
            pushed[unordered] = pushed.get(unordered, 0) + 1
            edges_here.append(key)
        ok_inj &= all(c == 1 for c in pushed.values())
        ok_inj &= all(a != b for a, b in pushed)
        theta_edges[z] = edges_here
        seen: set[int] = set()
        parent_edge: dict[int, int] = {}
        theta_adj: dict[int, list[int]] = {}
        for a, b in edges_here:
            theta_adj.setdefault(a, []).append(b)
            theta_adj.setdefault(b, []).append(a)
        stack = [0]
        seen.add(0)
        prev: dict[int, int] = {0: -1}
        while stack:
            v = stack.pop()
            for w in theta_adj.get(v, []):
                if w == prev[v]:
                    continue
                if w in seen:
                    ok_acyclic = False
                    continue
                seen.add(w)
                prev[w] = v
                stack.append(w)
        safe_depth = min(word_radius, 2 * level_radius)
        safe = [v for v in certified
                if tree.level[v] == 0 and tree.depth[v] <= safe_depth]
        ok_connected &= all(v in seen for v in safe)
    rep.add("level-induction.level-equals-search-distance", ok_dist,
            "level distance agrees with fiber search on every certified vertex")
    rep.add("level-induction.push-injective", ok_inj,
            "distinct surviving edges push to distinct zero-level edges")
    rep.add("level-induction.pushed-ball-acyclic", ok_acyclic,
            "no cycle among certified pushed edges")
    rep.add("level-induction.pushed-ball-connected", ok_connected,
            "zero-level vertices in the safe radius are reachable through "
            "pushed edges")
    return KernelInduction(ext, word_radius, rep, theta_edges, boundary)


# --- cost ----------------------------------------------------------------------


@dataclass
class CostSeries:
    level_radius: int
    value: Fraction
    per_level: list[tuple[int, Fraction]]
    diverges: bool


def cost_series_truncated(d: DescentData, level_radius: int) -> CostSeries:
    """Partial sums of the surviving-germ cost over the level window.

    Each positive level carries q-1 surviving outgoing germs per unit,
    each negative level p-1 incoming; the series diverges exactly when
    both indices exceed 1.
    """
    ratio = d.ratio()
    total = d.z_total()
    per_level = []
    value = Fraction(0)
    for n in range(1, level_radius + 1):
        up = (d.q - 1) * total * ratio ** (-n)
        down = (d.p - 1) * total * ratio ** n
        per_level.append((n, up))
        per_level.append((-n, down))
        value += up + down
    return CostSeries(level_radius, value,
                      sorted(per_level), d.p != 1 and d.q != 1)


def germ_count_cost(d: DescentData, level_radius: int) -> Fraction:
    """Independent enumeration: weigh every surviving germ in the window."""
    ext = maharam_extend(d, level_radius)
    if ext.degenerate:
        raise InputError("the level window is trivial when p == q")
    value = Fraction(0)
    for z in range(len(d.z_space)):
        for n in range(1, level_radius + 1):
            chosen = ext.chosen_step(z, n)
            for u in d.plus_by_z[z]:
                if EdgeLetter(1, u) != chosen:
                    value += ext.weight(z, n)
            chosen = ext.chosen_step(z, -n)
            for v in d.minus_by_z[z]:
                if EdgeLetter(-1, v) != chosen:
                    value += ext.weight(z, -n)
    return value


def cost_of_generating_treeing(d: DescentData) -> Fraction:
    """Half the range measure of the one-letter arrows: (p+q)/2 per unit mass."""
    return Fraction(d.p + d.q, 2) * d.z_total()


def quotient_preserves_measure(d: DescentData):
    """Whether the lazy quotient is measure preserving, with a witness arrow.

    The formal density of a single plus letter is q/p; the quotient
    preserves its measure exactly when that density is 1.
    """
    if d.p == d.q:
        return True, None
    return False, plus_arrow(d, 0)

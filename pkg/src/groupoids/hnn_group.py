"""HNN extensions of Z^nu: Britton normal forms and Bass-Serre tree balls.

The group is ``< E, t | t a t^-1 = tau(a) for a in E_minus >`` where
``E = Z^nu`` and ``tau`` maps the finite-index sublattice ``E_minus``
onto ``E_plus``.  Coset representatives are the canonical residues of
the upper-triangular Hermite basis of each sublattice, so normal forms
(and the golden files derived from them) are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import InputError, ResourceBoundError, frac

Vec = tuple[int, ...]
Mat = tuple[tuple[Fraction, ...], ...]


def _mat(rows) -> Mat:
    return tuple(tuple(frac(v) for v in row) for row in rows)


def _mat_vec(M: Mat, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M)))


def _mat_mul(A: Mat, B: Mat) -> Mat:
    n, m, k = len(A), len(B[0]), len(B)
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m))
                 for i in range(n))


def _mat_inv(M: Mat) -> Mat:
    n = len(M)
    aug = [list(M[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise InputError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def _det(M: Mat) -> Fraction:
    n = len(M)
    rows = [list(r) for r in M]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col] != 0:
                f = rows[r][col] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return det


def _column_hnf(cols: list[list[int]]) -> list[list[int]]:
    """Upper-triangular Hermite basis (as columns) of the lattice the columns span."""
    nu = len(cols[0])
    cols = [list(c) for c in cols]
    out: list[list[int]] = [[0] * nu for _ in range(nu)]
    work = cols
    for row in range(nu - 1, -1, -1):
        live = [c for c in work if any(c[i] != 0 for i in range(row + 1))]
        with_entry = [c for c in live if c[row] != 0]
        if not with_entry:
            raise InputError("basis matrix does not have full rank")
        # gcd-eliminate so a single column carries row `row`
        main = with_entry[0]
        for other in with_entry[1:]:
            while other[row] != 0:
                if abs(main[row]) > abs(other[row]):
                    main, other = other, main
                k = other[row] // main[row]
                for i in range(nu):
                    other[i] -= k * main[i]
        if main[row] < 0:
            for i in range(nu):
                main[i] = -main[i]
        out[row] = main
        work = [c for c in live if c is not main and any(c[i] != 0 for i in range(row + 1))]
    # out[row] is the column with pivot at `row`
    return [out[j] for j in range(nu)]


class Lattice:
    """Finite-index sublattice of Z^nu with canonical coset residues."""

    def __init__(self, basis_columns: Sequence[Sequence[int]]):
        self.nu = len(basis_columns[0])
        cols = [list(map(int, c)) for c in basis_columns]
        if len(cols) != self.nu:
            raise InputError("need nu basis columns")
        self.hnf = _column_hnf(cols)  # hnf[j] = column with pivot at row j
        self.diag = tuple(self.hnf[j][j] for j in range(self.nu))
        self.index = 1
        for d in self.diag:
            self.index *= d
        self.matrix: Mat = _mat([[Fraction(self.hnf[j][i]) for j in range(self.nu)]
                                 for i in range(self.nu)])
        self._inv = _mat_inv(self.matrix)

    def contains(self, v: Sequence[int]) -> bool:
        x = _mat_vec(self._inv, [Fraction(a) for a in v])
        return all(a.denominator == 1 for a in x)

    def residue(self, v: Sequence[int]) -> Vec:
        """Canonical coset representative: coordinates reduced into [0, diag)."""
        w = list(map(int, v))
        for row in range(self.nu - 1, -1, -1):
            col = self.hnf[row]
            k = w[row] // col[row]
            if k:
                for i in range(row + 1):
                    w[i] -= k * col[i]
        return tuple(w)

    def residues(self) -> list[Vec]:
        """All canonical representatives, lexicographically ordered (zero first)."""
        out = sorted(self.residue(v)
                     for v in itertools.product(*(range(d) for d in self.diag)))
        if len(set(out)) != self.index:
            raise InputError("residue enumeration failed")
        return out


def _vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def _vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


class HnnPresentation:
    """HNN data over E = Z^nu: sublattices E_minus, E_plus and the iso tau."""

    def __init__(self, minus_basis: Sequence[Sequence[int]],
                 plus_basis: Sequence[Sequence[int]], tau_rows: Sequence[Sequence]):
        self.minus = Lattice(minus_basis)
        self.plus = Lattice(plus_basis)
        self.nu = self.minus.nu
        if self.plus.nu != self.nu:
            raise InputError("sublattices live in different ranks")
        self.tau: Mat = _mat(tau_rows)
        self.tau_inv: Mat = _mat_inv(self.tau)
        # tau must carry E_minus exactly onto E_plus
        u = _mat_mul(_mat_inv(self.plus.matrix), _mat_mul(self.tau, self.minus.matrix))
        if any(v.denominator != 1 for row in u for v in row) or abs(_det(u)) != 1:
            raise InputError("tau does not map the minus lattice onto the plus lattice")
        self.p = self.minus.index
        self.q = self.plus.index
        self.s_minus = self.minus.residues()
        self.s_plus = self.plus.residues()

    def apply_tau(self, v: Vec) -> Vec:
        out = _mat_vec(self.tau, [Fraction(a) for a in v])
        if any(a.denominator != 1 for a in out):
            raise InputError(f"tau({v}) is not integral")
        return tuple(int(a) for a in out)

    def apply_tau_inv(self, v: Vec) -> Vec:
        out = _mat_vec(self.tau_inv, [Fraction(a) for a in v])
        if any(a.denominator != 1 for a in out):
            raise InputError(f"tau^-1({v}) is not integral")
        return tuple(int(a) for a in out)

    def modular_value(self) -> Fraction:
        """Value of the modular homomorphism on the stable letter."""
        return Fraction(self.q, self.p)

    def __repr__(self):
        return f"HnnPresentation(nu={self.nu}, p={self.p}, q={self.q})"


def bs_presentation(p: int, q: int) -> HnnPresentation:
    """Rank-1 case: E = Z, E_minus = pZ, E_plus = qZ, tau(pk) = qk."""
    if p < 1 or q < 1:
        raise InputError("indices must be positive")
    return HnnPresentation([[p]], [[q]], [[Fraction(q, p)]])


Syllable = tuple[Vec, int]  # (coset representative, t-exponent)


class GroupWord:
    """A word in the HNN extension, stored with its cached Britton normal form.

    The normal form is ``s_1 t^{e_1} s_2 t^{e_2} ... s_n t^{e_n} b`` with
    each ``s_i`` the canonical residue mod E_plus (when ``e_i = +1``) or
    mod E_minus (when ``e_i = -1``), no pinches, and a free E-tail ``b``.
    """

    def __init__(self, pres: HnnPresentation, syllables: Iterable[Syllable],
                 tail: Vec):
        self.pres = pres
        self.syllables = tuple((tuple(v), int(e)) for v, e in syllables)
        self.tail = tuple(tail)

    @classmethod
    def identity(cls, pres: HnnPresentation) -> "GroupWord":
        return cls(pres, [], (0,) * pres.nu)

    @classmethod
    def from_letters(cls, pres: HnnPresentation, letters: Iterable) -> "GroupWord":
        """Build from a raw letter list: integer vectors and the strings 't', 'T'.

        't' is the stable letter, 'T' its inverse.  The result is already
        Britton-reduced.
        """
        items: list[tuple[str, object]] = []
        for l in letters:
            if l == "t":
                items.append(("t", 1))
            elif l == "T":
                items.append(("t", -1))
            else:
                v = tuple(int(a) for a in (l if isinstance(l, (tuple, list)) else (l,)))
                if len(v) != pres.nu:
                    raise InputError(f"E-letter {l!r} has wrong rank")
                items.append(("e", v))
        return _reduce_items(pres, items)

    def t_exponent_sum(self) -> int:
        return sum(e for _, e in self.syllables)

    def is_in_base_group(self) -> bool:
        return not self.syllables

    def is_identity(self) -> bool:
        return not self.syllables and all(a == 0 for a in self.tail)

    def items(self) -> list[tuple[str, object]]:
        out: list[tuple[str, object]] = []
        for v, e in self.syllables:
            out.append(("e", v))
            out.append(("t", e))
        out.append(("e", self.tail))
        return out

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if other.pres is not self.pres:
            raise InputError("words over different presentations")
        return _reduce_items(self.pres, self.items() + other.items())

    def inverse(self) -> "GroupWord":
        items: list[tuple[str, object]] = []
        for kind, val in reversed(self.items()):
            if kind == "t":
                items.append(("t", -val))
            else:
                items.append(("e", _vneg(val)))
        return _reduce_items(self.pres, items)

    def __eq__(self, other):
        return (isinstance(other, GroupWord) and other.pres is self.pres
                and other.syllables == self.syllables and other.tail == self.tail)

    def __hash__(self):
        return hash((self.syllables, self.tail))

    def __repr__(self):
        def vec(v):
            return "a^" + str(v[0]) if self.pres.nu == 1 else "a" + str(tuple(v))
        parts = []
        for v, e in self.syllables:
            if any(v):
                parts.append(vec(v))
            parts.append("t" if e == 1 else "t^-1")
        if any(self.tail) or not parts:
            parts.append(vec(self.tail) if any(self.tail) else "e")
        return "*".join(parts)


def _reduce_items(pres: HnnPresentation, items: list) -> GroupWord:
    """Britton reduction: pinch removal plus canonical coset splitting."""
    stack: list[Syllable] = []
    carry: Vec = (0,) * pres.nu
    for kind, val in items:
        if kind == "e":
            carry = _vadd(carry, val)
            continue
        eps = val
        if eps == 1:
            if stack and stack[-1][1] == -1 and pres.plus.contains(carry):
                s, _ = stack.pop()
                carry = _vadd(s, pres.apply_tau_inv(carry))
            else:
                rep = pres.plus.residue(carry)
                rem = _vadd(carry, _vneg(rep))
                stack.append((rep, 1))
                carry = pres.apply_tau_inv(rem)
        elif eps == -1:
            if stack and stack[-1][1] == 1 and pres.minus.contains(carry):
                s, _ = stack.pop()
                carry = _vadd(s, pres.apply_tau(carry))
            else:
                rep = pres.minus.residue(carry)
                rem = _vadd(carry, _vneg(rep))
                stack.append((rep, -1))
                carry = pres.apply_tau(rem)
        else:
            raise InputError(f"bad t-exponent {eps}")
    return GroupWord(pres, stack, carry)


def britton_reduce(pres: HnnPresentation, word: GroupWord) -> GroupWord:
    """Recompute the pinch-free canonical form (idempotent on normal forms)."""
    return _reduce_items(pres, word.items())


def modular_hom(pres: HnnPresentation, word: GroupWord) -> Fraction:
    """(q/p) raised to the t-exponent sum; multiplicative and 1 on E."""
    return Fraction(pres.q, pres.p) ** word.t_exponent_sum()


# --- Bass-Serre tree balls ---------------------------------------------------

CosetKey = tuple[Syllable, ...]


@dataclass
class BassSerreBall:
    """Radius-R ball of the tree on cosets gE, with oriented edges gE -> gtE."""
    pres: HnnPresentation
    radius: int
    keys: list[CosetKey]          # BFS-discovery order, root first
    depth: list[int]
    edges: list[tuple[int, int]]  # oriented (from, to), each undirected edge once
    labels: list[str]

    @property
    def n_vertices(self) -> int:
        return len(self.keys)

    def out_degree(self, v: int) -> int:
        return sum(1 for a, b in self.edges if a == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for a, b in self.edges if b == v)


def bass_serre_ball(pres: HnnPresentation, radius: int,
                    max_vertices: int = 100000) -> BassSerreBall:
    """Enumerate cosets gE within t-length <= radius of E by Britton forms.

    Neighbours of gE are g(at)E for a in the plus residues (edges outgoing
    from gE) and g(at^-1)E for a in the minus residues (incoming into gE).
    """
    if radius < 0:
        raise InputError("radius must be >= 0")
    root = GroupWord.identity(pres)
    keys: list[CosetKey] = [root.syllables]
    depth = [0]
    index: dict[CosetKey, int] = {root.syllables: 0}
    edges: list[tuple[int, int]] = []
    frontier = [(root, 0)]
    while frontier:
        nxt: list[tuple[GroupWord, int]] = []
        for word, v in frontier:
            if depth[v] == radius:
                continue
            steps = ([(a, 1) for a in pres.s_plus] + [(a, -1) for a in pres.s_minus])
            for a, eps in steps:
                child = word * GroupWord.from_letters(pres, [a, "t" if eps == 1 else "T"])
                key = child.syllables
                if key in index:
                    w = index[key]
                    if depth[w] == depth[v] - 1:
                        continue  # the edge back to the parent, already recorded
                    raise InputError("coset graph is not a tree")
                if len(index) >= max_vertices:
                    raise ResourceBoundError(
                        f"ball exceeded {max_vertices} vertices at radius {radius}")
                index[key] = len(keys)
                keys.append(key)
                depth.append(depth[v] + 1)
                w = index[key]
                # gE -> gtE is oriented out of gE; the t^-1 step reverses it
                edges.append((v, w) if eps == 1 else (w, v))
                nxt.append((child, w))
        frontier = nxt

    def render(key: CosetKey) -> str:
        if not key:
            return "E"
        return GroupWord(pres, key, (0,) * pres.nu).__repr__() + "*E"

    return BassSerreBall(pres, radius, keys, depth, edges, [render(k) for k in keys])


def rooted_tree_signature(n_vertices: int, edges: Sequence[tuple[int, int]],
                          root: int = 0):
    """Canonical form of a rooted tree with oriented edges, up to isomorphism."""
    nbrs: dict[int, list[tuple[int, int]]] = {v: [] for v in range(n_vertices)}
    for a, b in edges:
        nbrs[a].append((b, +1))   # edge leaves a
        nbrs[b].append((a, -1))   # edge enters b
    seen = {root}

    def canon(v: int) -> tuple:
        out = []
        for w, direction in nbrs[v]:
            if w in seen:
                continue
            seen.add(w)
            out.append((direction, canon(w)))
        return tuple(sorted(out))

    return canon(root)

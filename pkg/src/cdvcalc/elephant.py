"""Candidate configurations of general elephants through ADE lattice arithmetic.

S_X is the minimal resolution graph of a Du Val point with fundamental cycle
Z. A partial resolution S keeps a set T of curves and contracts the rest K.
Intersection numbers on S are computed by pulling divisors back to the
minimal resolution (adding the unique Q-combination of K-curves that is
orthogonal to every K-curve).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import FrozenSet, List, Optional, Tuple

from .duval import DuValType
from .quotient import Basket
from .rr import e3_from_pins


class ElephantError(ValueError):
    pass


# graphs


def _edges(family: str, n: int):
    if family == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if family == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if n == 6:
        return [(1, 2), (2, 3), (3, 4), (4, 5), (0, 3)]
    return [(i, i + 1) for i in range(n - 2)] + [(2 if n == 7 else 4, n - 1)]


@dataclass(frozen=True)
class DualGraph:
    """Resolution graph of a Du Val point; curves are F1..Fn (0-based inside)."""

    dtype: DuValType
    pairing: Tuple[Tuple[int, ...], ...]

    @classmethod
    def of(cls, dtype: DuValType) -> "DualGraph":
        n = dtype.index
        if n < 1:
            raise ElephantError("A0 has no exceptional curves")
        M = [[0] * n for _ in range(n)]
        for i in range(n):
            M[i][i] = -2
        for a, b in _edges(dtype.family, n):
            M[a][b] = M[b][a] = 1
        return cls(dtype, tuple(tuple(row) for row in M))

    @property
    def n(self) -> int:
        return len(self.pairing)

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and self.pairing[i][j] == 1

    def neighbours(self, i: int) -> List[int]:
        return [j for j in range(self.n) if self.adjacent(i, j)]

    def dot(self, u, v) -> Fraction:
        M = self.pairing
        return sum((Fraction(u[i]) * M[i][j] * v[j] for i in range(self.n) for j in range(self.n) if u[i] and v[j]),
                   Fraction(0))

    def unit(self, i: int) -> List[int]:
        return [int(k == i) for k in range(self.n)]

    def fundamental_cycle(self) -> Tuple[int, ...]:
        """Laufer's algorithm: raise a coefficient while some curve meets z positively."""
        z = [1] * self.n
        while True:
            for i in range(self.n):
                if sum(self.pairing[i][j] * z[j] for j in range(self.n)) > 0:
                    z[i] += 1
                    break
            else:
                return tuple(z)

    def bullets(self) -> Tuple[int, ...]:
        """-Z.F_i: how many times a general hyperplane meets each curve."""
        z = self.fundamental_cycle()
        return tuple(-sum(self.pairing[i][j] * z[j] for j in range(self.n)) for i in range(self.n))

    def components(self, subset) -> List[FrozenSet[int]]:
        subset = set(subset)
        seen = set()
        out = []
        for s in sorted(subset):
            if s in seen:
                continue
            stack, comp = [s], set()
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                stack += [y for y in self.neighbours(x) if y in subset and y not in comp]
            seen |= comp
            out.append(frozenset(comp))
        return out

    def subgraph_type(self, comp) -> DuValType:
        return identify_ade(self, comp)

    def longest_path(self, comp) -> int:
        """Number of vertices on a longest simple path inside the tree comp."""
        comp = set(comp)

        def depth(x, prev):
            return 1 + max((depth(y, x) for y in self.neighbours(x) if y in comp and y != prev), default=0)

        return max((depth(x, None) for x in comp), default=0)


def identify_ade(graph: DualGraph, comp) -> DuValType:
    """ADE type of a connected subtree, read off from its arm lengths."""
    comp = set(comp)
    if not comp:
        return DuValType("A", 0)
    deg = {x: sum(1 for y in graph.neighbours(x) if y in comp) for x in comp}
    branch = [x for x in comp if deg[x] >= 3]
    if not branch:
        return DuValType("A", len(comp))
    if len(branch) > 1 or deg[branch[0]] > 3:
        raise ElephantError("subgraph is not of ADE type")
    centre = branch[0]
    arms = []
    for start in graph.neighbours(centre):
        if start not in comp:
            continue
        length, prev, cur = 0, centre, start
        while cur is not None:
            length += 1
            nxt = [y for y in graph.neighbours(cur) if y in comp and y != prev]
            prev, cur = cur, (nxt[0] if nxt else None)
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return DuValType("D", len(comp))
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return DuValType("E", len(comp))
    raise ElephantError(f"arms {arms} give no ADE type")


# partial resolutions


def _solve(A, b):
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


@dataclass(frozen=True)
class PartialResolution:
    graph: DualGraph
    kept: Tuple[int, ...]

    @property
    def contracted(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.graph.n) if i not in self.kept)

    def pullback(self, cycle, extra=None) -> List[Fraction]:
        """Mumford pullback of a divisor on S.

        ``cycle`` gives coefficients on the minimal resolution, ``extra``
        optional intersection numbers of a non-exceptional part with each curve.
        """
        g = self.graph
        K = self.contracted
        out = [Fraction(x) for x in cycle]
        if not K:
            return out
        extra = extra or [0] * g.n
        A = [[g.pairing[i][j] for j in K] for i in K]
        rhs = [-(extra[i] + sum(g.pairing[i][j] * out[j] for j in range(g.n))) for i in K]
        for k, v in zip(K, _solve(A, rhs)):
            out[k] += v
        return out

    def dot(self, c1, c2) -> Fraction:
        """Intersection on S of cycles supported on kept curves."""
        return self.graph.dot(self.pullback(c1), c2)

    def hyperplane_dot(self, cycle) -> Fraction:
        """(D.C)_S for the strict transform D of a general hyperplane section."""
        g = self.graph
        bullets = g.bullets()
        pulled = self.pullback([0] * g.n, extra=bullets)
        # D~ . F_i = bullet_i, the K-part adds its ordinary pairing
        total = Fraction(0)
        for i in range(g.n):
            if cycle[i]:
                total += Fraction(cycle[i]) * (bullets[i] + sum(g.pairing[i][j] * pulled[j] for j in range(g.n)))
        return total

    def star_types(self) -> List[DuValType]:
        return sorted((identify_ade(self.graph, c) for c in self.graph.components(self.contracted)),
                      key=DuValType.sort_key)


def elephant_value(p: PartialResolution, bE) -> Fraction:
    """(H|_S . bE_S)_S with H|_S = D + Z_S - bE_S."""
    z = p.graph.fundamental_cycle()
    z_S = [z[i] if i in p.kept else 0 for i in range(p.graph.n)]
    rest = [zi - ei for zi, ei in zip(z_S, bE)]
    return p.hyperplane_dot(bE) + p.dot(rest, bE)


# candidate rows


@dataclass(frozen=True)
class CandidateRow:
    s_x: DuValType
    curves: Tuple[int, ...]
    coefficients: Tuple[int, ...]
    z_s: Tuple[int, ...]
    value: Fraction
    star_types: Tuple[DuValType, ...]
    survives_value: bool
    excluded: bool = False
    label: Optional[str] = None

    @property
    def survives(self) -> bool:
        return self.survives_value and not self.excluded

    @property
    def irreducible(self) -> bool:
        return len(self.curves) == 1

    def cycle_text(self, coeffs=None) -> str:
        coeffs = self.coefficients if coeffs is None else coeffs
        parts = []
        for i, c in zip(self.curves, coeffs):
            parts.append(f"F{i + 1}" if c == 1 else f"{c}F{i + 1}")
        return "+".join(parts)

    def to_json(self):
        return {
            "S_X": str(self.s_x),
            "curves": [f"F{i + 1}" for i in self.curves],
            "bE_S": self.cycle_text(),
            "Z_S": self.cycle_text(self.z_s),
            "value": _fmt(self.value),
            "contracted": [str(t) for t in self.star_types],
            "irreducible": self.irreducible,
            "survives": self.survives,
            "excluded": self.excluded,
            "label": self.label,
        }


def _fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class EnumerationResult:
    kind: str
    basket: Basket
    target: Fraction
    rows: Tuple[CandidateRow, ...]

    @property
    def survivors(self) -> Tuple[CandidateRow, ...]:
        return tuple(r for r in self.rows if r.survives)

    def conclusion(self) -> List[str]:
        """cDV families of surviving S_X, e.g. ['cE7']."""
        names = {("c" + r.s_x.family + (str(r.s_x.index) if r.s_x.family == "E" else "")) for r in self.survivors}
        return sorted(names)

    def to_json(self):
        return {
            "kind": self.kind,
            "J": self.basket.to_json(),
            "target": _fmt(self.target),
            "rows": [r.to_json() for r in self.rows],
            "conclusion": self.conclusion(),
        }


def _catalog(max_rank: int, families=("A", "D", "E")) -> List[DuValType]:
    out = []
    if "A" in families:
        out += [DuValType("A", n) for n in range(1, max_rank + 1)]
    if "D" in families:
        out += [DuValType("D", n) for n in range(4, max_rank + 1)]
    if "E" in families:
        out += [DuValType("E", n) for n in (6, 7, 8) if n <= max_rank]
    return out


def _canonical_subset(dtype: DuValType, T: Tuple[int, ...]) -> Tuple[int, ...]:
    """Representative of T under the diagram symmetries fixing the bullets.

    D_n swaps its two short end curves (the row keeps the larger label); E6
    reflects (keeping the smaller labels).
    """
    n = dtype.index
    if dtype.family == "D" and n >= 5:
        swap = {n - 2: n - 1, n - 1: n - 2}
        other = tuple(sorted(swap.get(i, i) for i in T))
        return max(T, other, key=lambda t: sorted(t, reverse=True))
    if dtype.family == "E" and n == 6:
        refl = {1: 5, 5: 1, 2: 4, 4: 2}
        other = tuple(sorted(refl.get(i, i) for i in T))
        return min(T, other)
    return T


# type I (discrepancy 2)

_TYPE_I_LABELS = {
    ((7, 3),): {
        ("E", 7, (4,)): "c", ("E", 7, (6,)): "d",
        ("E", 8, (1,)): "f", ("E", 8, (1, 6)): "g", ("E", 8, (2,)): "h", ("E", 8, (2, 6)): "i",
        ("E", 8, (5,)): "j", ("E", 8, (6,)): "k", ("E", 8, (6, 7)): "l", ("E", 8, (7,)): "m",
    },
    ((3, 1), (5, 2)): {
        ("E", 7, (3,)): "b", ("E", 8, (2,)): "c", ("E", 8, (3,)): "d", ("E", 8, (4,)): "e",
    },
}


def _type_i_label(J, dtype: DuValType, T) -> Optional[str]:
    table = _TYPE_I_LABELS.get(J)
    if table is None:
        return None
    if dtype.family == "D":
        return "a"
    if J == ((7, 3),) and 0 in T:
        return "b" if dtype.index == 7 else "e"
    return table.get((dtype.family, dtype.index, tuple(T)))


def _shape_7_3(g: DualGraph, p: PartialResolution, T, z) -> bool:
    if any(z[t] < 2 for t in T):
        return False
    if len(T) == 2:
        if g.adjacent(*T):
            return False
        comps = g.components(p.contracted)
        return any(all(any(g.adjacent(t, k) for k in c) for t in T) for c in comps)
    return True


def _shape_3_5(g: DualGraph, p: PartialResolution, T) -> bool:
    t = T[0]
    adj = [c for c in g.components(p.contracted) if any(g.adjacent(t, k) for k in c)]
    paths = [g.longest_path(c) for c in adj]
    return any(paths[i] >= 2 and paths[j] >= 4 for i in range(len(paths)) for j in range(len(paths)) if i != j)


def enumerate_typeI_candidates(J: Basket, max_rank: int = 16) -> EnumerationResult:
    """Configurations for discrepancy-2 contractions with J = {(7,3)} or {(3,1),(5,2)}.

    Every S_X of type D or E up to max_rank is tried. bE_S = 2E_S and the
    value (H|_S . 2E_S) must equal 8E^3; a row is also excluded when some
    kept curve fails (2E_S . C)_S < 0.
    """
    if J.entries == ((7, 3),):
        sizes, coeff_choices, shape = (1, 2), lambda size: [(2,) * size], "7_3"
    elif J.entries == ((3, 1), (5, 2)):
        sizes, coeff_choices, shape = (1,), lambda size: [(2,), (4,)], "3_5"
    else:
        raise ElephantError(f"type I enumeration needs J = {{(7,3)}} or {{(3,1),(5,2)}}, got {J}")
    target = 8 * e3_from_pins(2, J)
    rows = []
    for dtype in _catalog(max_rank, ("D", "E")):
        g = DualGraph.of(dtype)
        z = g.fundamental_cycle()
        seen = set()
        for size in sizes:
            for T in combinations(range(g.n), size):
                T = _canonical_subset(dtype, T)
                for coeffs in coeff_choices(size):
                    if (T, coeffs) in seen or any(z[t] < c for t, c in zip(T, coeffs)):
                        continue
                    p = PartialResolution(g, T)
                    if shape == "7_3" and not _shape_7_3(g, p, T, z):
                        continue
                    if shape == "3_5" and not _shape_3_5(g, p, T):
                        continue
                    seen.add((T, coeffs))
                    bE = [0] * g.n
                    for t, c in zip(T, coeffs):
                        bE[t] = c
                    value = elephant_value(p, bE)
                    hit = value == target
                    excluded = hit and any(p.dot(bE, g.unit(t)) >= 0 for t in T)
                    rows.append(CandidateRow(
                        dtype, T, coeffs, tuple(z[t] for t in T), value, tuple(p.star_types()),
                        hit, excluded, _type_i_label(J.entries, dtype, T) if hit else None,
                    ))
    return EnumerationResult("I", J, target, tuple(rows))


# types II and III (discrepancy b = 1)


def _single_star_allowed(type_tag: str, J: Basket) -> Tuple[List[DuValType], int]:
    entries = J.entries
    if type_tag == "IIa":
        if len(entries) != 1 or entries[0][1] != 2:
            raise ElephantError(f"IIa needs J = {{(r,2)}}, got {J}")
        r = entries[0][0]
        return [DuValType("A", r - 1)], 4
    if type_tag == "IIb∨":
        if entries == ((2, 1), (4, 1)):
            return [DuValType("D", 5)], 3
        if len(entries) == 2 and entries[0] == entries[1] and entries[0][1] == 1:
            r = entries[0][0]
            allowed = [DuValType("A", 2 * r - 1)]
            if r == 3:
                allowed.append(DuValType("E", 6))
            return allowed, 2
        raise ElephantError(f"IIb∨ needs J = {{(r,1),(r,1)}} or {{(2,1),(4,1)}}, got {J}")
    raise ElephantError(f"no single-point shape for {type_tag}")


def _default_a(type_tag: str, J: Basket) -> int:
    """Smallest discrepancy >= 2 coprime to every index (3 for {(2,1),(4,1)})."""
    a = 2
    while any(gcd(a, r) != 1 for r in J.indices):
        a += 1
    return a


def enumerate_typeII_III_candidates(type_tag: str, J: Basket, a: Optional[int] = None,
                                    E_cubed=None, max_rank: Optional[int] = None) -> EnumerationResult:
    """Configurations with E_S reduced (b = 1); the value must equal a*E^3."""
    if a is None:
        a = _default_a(type_tag, J)
    E_cubed = e3_from_pins(a, J) if E_cubed is None else Fraction(E_cubed)
    target = a * E_cubed
    if max_rank is None:
        max_rank = max(16, 2 * J.max_index() + 4)
    rows = []
    if type_tag in ("IIa", "IIb∨"):
        allowed, max_count = _single_star_allowed(type_tag, J)
        if type_tag == "IIb∨":
            max_count = a
        for dtype in _catalog(max_rank, ("D", "E")):
            g = DualGraph.of(dtype)
            z = g.fundamental_cycle()
            bullets = g.bullets()
            ones = [i for i in range(g.n) if z[i] == 1]
            seen = set()
            for size in range(1, max_count + 1):
                for T in combinations(ones, size):
                    T = _canonical_subset(dtype, T)
                    if T in seen or any(g.adjacent(s, t) for s, t in combinations(T, 2)):
                        continue
                    seen.add(T)
                    p = PartialResolution(g, T)
                    K = p.contracted
                    comps = g.components(K)
                    if len(comps) != 1:
                        continue
                    star = comps[0]
                    if any(bullets[i] and i not in star for i in range(g.n)):
                        continue
                    if not all(any(g.adjacent(t, k) for k in star) for t in T):
                        continue
                    if identify_ade(g, star) not in allowed:
                        continue
                    rows.append(_row(g, p, T, target))
    elif type_tag in ("IIb∨∨", "III"):
        entries = J.entries
        if type_tag == "III":
            if len(entries) != 1 or entries[0][1] != 1:
                raise ElephantError(f"III needs J = {{(r,1)}}, got {J}")
            # the index-r side is listed first to match the usual table
            sides = (entries[0][0], 1)
        else:
            if len(entries) != 2 or any(v != 1 for _, v in entries):
                raise ElephantError(f"IIb∨∨ needs J = {{(r1,1),(r2,1)}}, got {J}")
            sides = (entries[0][0], entries[1][0])
        for n in range(1, max_rank + 1):
            dtype = DuValType("A", n)
            g = DualGraph.of(dtype)
            for size in (1, 2):
                for start in range(n - size + 1):
                    T = tuple(range(start, start + size))
                    p = PartialResolution(g, T)
                    left, right = start, n - start - size
                    if (left, right) != (sides[0] - 1, sides[1] - 1):
                        continue
                    rows.append(_row(g, p, T, target))
    else:
        raise ElephantError(f"unknown type {type_tag!r}; expected IIa, IIb∨, IIb∨∨ or III")
    return EnumerationResult(type_tag, J, target, tuple(rows))


def _row(g: DualGraph, p: PartialResolution, T, target) -> CandidateRow:
    z = g.fundamental_cycle()
    bE = [int(i in T) for i in range(g.n)]
    value = elephant_value(p, bE)
    return CandidateRow(g.dtype, tuple(T), (1,) * len(T), tuple(z[t] for t in T), value,
                        tuple(p.star_types()), value == target)


def surviving_pairs(result: EnumerationResult) -> List[Tuple[str, Tuple[str, ...]]]:
    """(S_X, types of the contracted part of S) for each surviving row."""
    return sorted({(str(r.s_x), tuple(str(t) for t in r.star_types)) for r in result.survivors})

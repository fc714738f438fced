"""Order functions of curve germs through terminal quotient points.

A smooth curve C through Q = 1/r(1,-1,b) is recorded by (a1, a2, a3):
x_i restricted to C is t^(a_i/r), or 0 when a_i is INFINITY.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .poly import INFINITY, is_infinite


class CurveDataError(ValueError):
    pass


class InvariantViolation(AssertionError):
    pass


@dataclass(frozen=True)
class SemigroupQuery:
    """Generators (a_i, w_i) of a subsemigroup of Z x Z/r; infinite a_i are dropped."""

    generators: Tuple[Tuple[int, int], ...]
    r: int

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("modulus must be positive")
        gens = []
        for a, w in self.generators:
            if is_infinite(a):
                continue
            if a < 0:
                raise ValueError("first coordinates must be nonnegative")
            gens.append((int(a), int(w) % self.r))
        object.__setattr__(self, "generators", tuple(gens))


def w_table(q: SemigroupQuery) -> List[Optional[int]]:
    """Smallest first coordinate over every residue (None if unreachable).

    Shortest paths on the residue graph with edge x -> x+w of cost a.
    """
    r = q.r
    dist: List[Optional[int]] = [None] * r
    dist[0] = 0
    heap = [(0, 0)]
    while heap:
        d, x = heapq.heappop(heap)
        if dist[x] is not None and d > dist[x]:
            continue
        for a, w in q.generators:
            y = (x + w) % r
            nd = d + a
            if dist[y] is None or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


def w_QC(n: int, q: SemigroupQuery) -> int:
    value = w_table(q)[n % q.r]
    if value is None:
        raise CurveDataError(f"residue {n % q.r} is not reachable mod {q.r} from {q.generators}")
    return value


# cokernel lengths


def _check_curve(r: int, b: int, a_values):
    if r < 2:
        raise CurveDataError("index must be at least 2")
    if gcd(b, r) != 1:
        raise CurveDataError(f"b={b} is not coprime to r={r}")
    if len(a_values) != 3:
        raise CurveDataError("three a-values are needed")
    wts = (1, r - 1, b % r)
    finite = [(a, w) for a, w in zip(a_values, wts) if not is_infinite(a)]
    if not any(all((a - s * w) % r == 0 for a, w in finite) for s in range(r)):
        raise CurveDataError(f"a-values {tuple(a_values)} are not a multiple of the weights {wts} mod {r}")
    return wts


def _invariant_monomials(r, wts, a_values, bound):
    """Invariant exponents with finite a-degree <= bound."""
    finite = [not is_infinite(a) for a in a_values]
    ranges = []
    for i in range(3):
        if not finite[i]:
            ranges.append(range(0, 1))
        elif a_values[i] == 0:
            ranges.append(range(0, bound + 1))
        else:
            ranges.append(range(0, bound // a_values[i] + 1))
    out = []
    for e in product(*ranges):
        deg = sum(k * a for k, a, f in zip(e, a_values, finite) if f)
        if deg > bound:
            continue
        if sum(k * w for k, w in zip(e, wts)) % r == 0:
            out.append((e, deg))
    return out


def _restrict(exps, a_values):
    """Exponent (numerator over r) of a monomial on C, or None when it vanishes there."""
    total = 0
    for k, a in zip(exps, a_values):
        if k:
            if is_infinite(a):
                return None
            total += k * a
    return total


def _jacobian_row(poly, a_values):
    """Restricted partial derivatives of a binomial/monomial: list of {exp: coeff}."""
    row = []
    for j in range(3):
        entry: Dict[int, int] = {}
        for exps, c in poly:
            if not exps[j]:
                continue
            lowered = tuple(k - (i == j) for i, k in enumerate(exps))
            ex = _restrict(lowered, a_values)
            if ex is None:
                continue
            entry[ex] = entry.get(ex, 0) + c * exps[j]
        row.append({k: v for k, v in entry.items() if v})
    return row


def _series_mul(p, q):
    out: Dict[int, int] = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return out


def _det_order(rows):
    """Order (numerator over r) of the restricted 3x3 determinant, or None if it is 0."""
    total: Dict[int, int] = {}
    for perm, sign in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                       ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1)):
        term = {0: sign}
        for i, j in enumerate(perm):
            term = _series_mul(term, rows[i][j])
            if not term:
                break
        for e, c in term.items():
            total[e] = total.get(e, 0) + c
    nonzero = [e for e, c in total.items() if c]
    return min(nonzero) if nonzero else None


def _row_lower_bound(row):
    exps = [e for entry in row for e in entry]
    return min(exps) if exps else None


def _choose_g(r, wts, a_values):
    a1, a2, _ = a_values
    if not is_infinite(a1) and not is_infinite(a2) and a1 + a2 == r:
        return (1, 1, 0)
    for e, deg in sorted(_invariant_monomials(r, wts, a_values, r), key=lambda t: (sum(t[0]), t[0])):
        if deg == r:
            return e
    return None


def _shift_row(row, k):
    return [{e + k: c for e, c in entry.items()} for entry in row]


def _best_pair_order(r, wts, a_values, limit, table, shift, g_row, g_lb):
    finite = [not is_infinite(a) for a in a_values]
    ranges = [range(0, (limit // a if a else limit) + 1) if f else range(1)
              for a, f in zip(a_values, finite)]
    # monomials grouped by (a-degree, weight), then by support
    groups: Dict[Tuple[int, int], Dict[int, List[Tuple[int, ...]]]] = {}
    for e in product(*ranges):
        deg = 0
        for k, a, f in zip(e, a_values, finite):
            if f:
                deg += k * a
        if deg > limit or not any(e):
            continue
        wt = (e[0] * wts[0] + e[1] * wts[1] + e[2] * wts[2]) % r
        mask = (e[0] > 0) | ((e[1] > 0) << 1) | ((e[2] > 0) << 2)
        groups.setdefault((deg, wt), {}).setdefault(mask, []).append(e)

    rows = []
    for (deg, wt), by_mask in groups.items():
        mult = table[(-wt) % r]
        if mult is None:
            continue
        masks = sorted(by_mask)
        for i, m1 in enumerate(masks):
            for m2 in masks[i + 1:]:
                if m1 & m2:
                    continue
                for s_ in by_mask[m1]:
                    for t_ in by_mask[m2]:
                        row = _jacobian_row(((s_, 1), (t_, -1)), a_values)
                        lb = _row_lower_bound(row)
                        if lb is not None:
                            rows.append((lb + mult, _shift_row(row, mult)))
    if is_infinite(a_values[2]):
        # x3 * m vanishes on C; only its x3-derivative m survives
        rows.append((shift, [{}, {}, {shift: 1}]))

    rows.sort(key=lambda t: t[0])
    best = None
    for i in range(len(rows)):
        lb_i, row_i = rows[i]
        if best is not None and 2 * lb_i + g_lb >= best:
            break
        for j in range(i + 1, len(rows)):
            lb_j, row_j = rows[j]
            if best is not None and lb_i + lb_j + g_lb >= best:
                break
            order = _det_order((row_i, row_j, g_row))
            if order is not None and (best is None or order < best):
                best = order
    return best


def cokernel_length_general(r: int, b: int, a_values: Sequence, bound: Optional[int] = None):
    """Cokernel length of the wedge map at Q for the curve with data a_values.

    The ideal of C modulo its symbolic square is generated by invariant
    binomials of equal a-degree, plus invariant monomials divisible by x3
    when x3 vanishes on C. Each pair of generators is wedged with dg for an
    invariant monomial g restricting to t; the order of the restricted
    Jacobian determinant, shifted by w(-b)/r, is minimised.

    An invariant binomial is m*(x^s - x^t) with s, t of disjoint support, so
    only such primitive binomials are enumerated, each multiplied by a
    cheapest monomial m of the complementary weight (m restricted to C is
    t^(w(-wt s)/r), and multiplying by it only shifts orders). ``bound``
    limits the t-order a.s/r of the primitive binomials (default 3r).
    Returns INFINITY when no pair gives a nonzero image.
    """
    a_values = tuple(a_values)
    wts = _check_curve(r, b, a_values)
    if bound is None:
        bound = 3 * r
    g = _choose_g(r, wts, a_values)
    if g is None:
        raise CurveDataError(f"no invariant monomial restricts to t for a={a_values}")
    table = w_table(SemigroupQuery(tuple(zip(a_values, wts)), r))
    shift = table[(-b) % r]
    if shift is None:
        raise CurveDataError(f"weight {-b % r} is not reachable on C")

    g_row = _jacobian_row(((g, 1),), a_values)
    g_lb = _row_lower_bound(g_row)
    max_a = max(a for a in a_values if not is_infinite(a))
    # deepen the enumeration until no unexplored generator can beat the best pair
    level = 1
    while True:
        level = min(level, bound)
        best = _best_pair_order(r, wts, a_values, level * r, table, shift, g_row, g_lb)
        if level >= bound:
            break
        if best is not None and best <= level * r + 1 - max_a + g_lb:
            break
        level *= 2
    if best is None:
        return INFINITY
    value = Fraction(best - shift, r)
    if value.denominator != 1:
        raise InvariantViolation(f"non-integral cokernel length {value} for r={r}, b={b}, a={a_values}")
    return int(value)


def cokernel_length_quotient(r: int, b: int, c: int) -> int:
    """Length for the curve (t^(c/r), t^(1-c/r), 0); equals min(c, r-c)."""
    if not 0 < c < r:
        raise CurveDataError("c must lie strictly between 0 and r")
    value = cokernel_length_general(r, b, (c, r - c, INFINITY))
    if value != min(c, r - c):
        raise InvariantViolation(f"enumeration gave {value}, closed form gives {min(c, r - c)}")
    return value

"""Cyclic quotient data, terminal normalisation and basket extraction."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import List, Sequence, Tuple, Union

from .poly import Polynomial, hessian_matrix, matrix_rank


def units(r: int) -> List[int]:
    return [u for u in range(1, r + 1) if gcd(u, r) == 1] if r > 1 else [1]


@dataclass(frozen=True, eq=False)
class QuotientType:
    """1/r(w_1, ..., w_k): weights are residues mod r.

    Equality ignores multiplying every weight by a unit and permuting.
    """

    r: int
    weights: Tuple[int, ...]

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("index r must be positive")
        object.__setattr__(self, "weights", tuple(int(w) % self.r for w in self.weights))

    def canonical(self) -> Tuple[int, ...]:
        # permutations only reorder, so the least permuted tuple is the sorted one
        return min(tuple(sorted(u * w % self.r for w in self.weights)) for u in units(self.r))

    def __eq__(self, other):
        if not isinstance(other, QuotientType):
            return NotImplemented
        return self.r == other.r and len(self.weights) == len(other.weights) \
            and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.r, self.canonical()))

    @property
    def b(self) -> int:
        """Third weight of a normalised type 1/r(1,-1,b)."""
        return self.weights[2]

    def __str__(self):
        return f"1/{self.r}({','.join(str(w) for w in self.weights)})"


@dataclass(frozen=True)
class NotTerminal:
    r: int
    weights: Tuple[int, ...]
    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Unrecognized:
    """A point the catalog does not cover; carried as a value."""

    reason: str
    location: str = ""

    def __bool__(self):
        return False

    def describe(self) -> str:
        return f"{self.location}: {self.reason}" if self.location else self.reason


def normalize_quotient(r: int, w: Sequence[int]) -> Union[QuotientType, NotTerminal]:
    """Bring 1/r(w1,w2,w3) to the form 1/r(1,-1,b) when it is terminal."""
    if r <= 0:
        raise ValueError("index r must be positive")
    if len(w) != 3:
        raise ValueError("a threefold quotient has three weights")
    ws = tuple(int(x) % r for x in w)
    if r == 1:
        return QuotientType(1, (0, 0, 0))
    bad = [x for x in ws if gcd(x, r) != 1]
    if bad:
        return NotTerminal(r, ws, f"weight {bad[0]} is not coprime to {r}")
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if (ws[i] + ws[j]) % r == 0:
            k = 3 - i - j
            u = pow(ws[i], -1, r)
            return QuotientType(r, (1, r - 1, u * ws[k] % r))
    return NotTerminal(r, ws, "no two weights sum to 0 mod r")


def v_from_b(r: int, b: int, a: int) -> int:
    """v = e*b mod r folded into 1..r/2, where a*e = 1 mod r."""
    if r < 2:
        raise ValueError("basket entries need index r >= 2")
    if gcd(a, r) != 1:
        raise ValueError(f"a={a} is not coprime to r={r}")
    if gcd(b, r) != 1:
        raise ValueError(f"b={b} is not coprime to r={r}")
    e = pow(a, -1, r)
    v = e * b % r
    return min(v, r - v)


def b_candidates(r: int, v: int, a: int) -> Tuple[int, ...]:
    """Both residues b with v_from_b(r, b, a) == v."""
    return tuple(sorted({a * v % r, (-a * v) % r}))


@dataclass(frozen=True)
class Basket:
    """Multiset of fictitious singularities (r, v), kept sorted."""

    entries: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        clean = []
        for r, v in self.entries:
            r, v = int(r), int(v)
            if r < 2:
                raise ValueError(f"basket index must be >= 2, got {r}")
            if not 1 <= v <= r // 2:
                raise ValueError(f"v={v} outside 1..{r}//2")
            if gcd(r, v) != 1:
                raise ValueError(f"v={v} not coprime to r={r}")
            clean.append((r, v))
        object.__setattr__(self, "entries", tuple(sorted(clean)))

    @classmethod
    def of(cls, *pairs) -> "Basket":
        return cls(tuple(pairs))

    def __add__(self, other: "Basket") -> "Basket":
        return Basket(self.entries + other.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(r for r, _ in self.entries)

    def index_lcm(self) -> int:
        out = 1
        for r, _ in self.entries:
            out = out * r // gcd(out, r)
        return out

    def max_index(self) -> int:
        return max(self.indices, default=1)

    def to_json(self):
        return [[r, v] for r, v in self.entries]

    @classmethod
    def from_json(cls, data) -> "Basket":
        return cls(tuple((int(r), int(v)) for r, v in data))

    def __str__(self):
        return "{" + ", ".join(f"({r},{v})" for r, v in self.entries) + "}"


# recognised normal forms


@dataclass(frozen=True)
class QuotientPoint:
    """Smooth point of the index-one cover: 1/r(1,-1,b)."""

    qtype: QuotientType

    @property
    def r(self):
        return self.qtype.r

    def describe(self):
        return f"quotient {self.qtype}"


@dataclass(frozen=True)
class CAQuotientPoint:
    """y1*y2 + g(y3, y4) in 1/r(1,-1,b,0); axis_order is ord g(0, y4)."""

    r: int
    b: int
    axis_order: object

    def describe(self):
        return f"cA/{self.r} with b={self.b}, ord g(0,y4)={self.axis_order}"


@dataclass(frozen=True)
class IndexFourPoint:
    """y1^2 + y2^2 + g(y3^2, y4) in 1/4(1,3,3,2); axis_order is ord g(0, y4)."""

    axis_order: object
    r: int = 4

    def describe(self):
        return f"index-4 form with ord g(0,y4)={self.axis_order}"


NormalForm = Union[QuotientPoint, CAQuotientPoint, IndexFourPoint]


def basket_of_normal_form(point: NormalForm, a: int) -> Union[Basket, Unrecognized]:
    if isinstance(point, QuotientPoint):
        q = point.qtype
        if q.r == 1:
            return Basket()
        return Basket.of((q.r, v_from_b(q.r, q.b, a)))
    if isinstance(point, CAQuotientPoint):
        k = point.axis_order
        if not isinstance(k, int) or k < 1:
            return Unrecognized(f"cA/{point.r} point with ord g(0,y4)={k} is not isolated")
        return Basket(((point.r, v_from_b(point.r, point.b, a)),) * k)
    if isinstance(point, IndexFourPoint):
        if point.axis_order == 3:
            return Basket.of((2, 1), (4, 1))
        return Unrecognized(f"index-4 form with ord g(0,y4)={point.axis_order}; only order 3 is catalogued")
    raise TypeError(f"not a normal form: {point!r}")


def _axis_order(phi: Polynomial, axis: int):
    """Order of phi restricted to one coordinate axis."""
    exps = [e[axis] for e in phi.terms if sum(e) == e[axis]]
    return min(exps) if exps else None


def _quadratic_rank(phi: Polynomial, coords: Sequence[int]) -> int:
    H = hessian_matrix(phi)
    return matrix_rank([[H[i][j] for j in coords] for i in coords]) if coords else 0


def recognize_normal_form(phi: Polynomial, r: int, weights: Sequence[int], phi_weight: int,
                          location: str = "") -> Union[None, NormalForm, Unrecognized]:
    """Match a hypersurface germ at the origin of 1/r(weights) against the catalog.

    Returns None when the point is Gorenstein or off the hypersurface, a
    normal form object, or Unrecognized.
    """
    ws = tuple(int(w) % r for w in weights)
    phi_weight %= r
    if r == 1 or phi.constant_term() != 0:
        return None
    n = phi.nvars
    if len(ws) != n:
        raise ValueError("one weight per coordinate is required")

    linear = [i for i in range(n) if phi.coefficient(tuple(int(j == i) for j in range(n)))]
    if linear:
        # the hypersurface is smooth here and a linear coordinate can be eliminated
        i = linear[0]
        rest = [ws[j] for j in range(n) if j != i]
        if len(rest) != 3:
            return Unrecognized(f"smooth point in dimension {len(rest)}", location)
        q = normalize_quotient(r, rest)
        if isinstance(q, NotTerminal):
            return Unrecognized(f"quotient 1/{r}{tuple(rest)} is not terminal: {q.reason}", location)
        return QuotientPoint(q)

    if n != 4:
        return Unrecognized("singular point outside a 4-dimensional chart", location)

    if phi_weight == 0:
        zero = [i for i in range(4) if ws[i] == 0]
        if len(zero) == 1:
            k = zero[0]
            others = [i for i in range(4) if i != k]
            for p_i, q_i in ((0, 1), (0, 2), (1, 2)):
                p, q = others[p_i], others[q_i]
                c = next(i for i in others if i not in (p, q))
                wp, wq, wc = ws[p], ws[q], ws[c]
                if (wp + wq) % r or gcd(wp, r) != 1 or gcd(wc, r) != 1:
                    continue
                # pairing between the weight wp and weight -wp coordinates
                plus = [i for i in others if ws[i] == wp]
                minus = [i for i in others if ws[i] == (-wp) % r]
                H = hessian_matrix(phi)
                if wp == (-wp) % r:
                    ok = _quadratic_rank(phi, plus) >= 2
                else:
                    ok = any(H[i][j] for i in plus for j in minus)
                if not ok:
                    continue
                u = pow(wp, -1, r)
                k_order = _axis_order(phi, k)
                return CAQuotientPoint(r, u * wc % r, k_order if k_order is not None else "inf")

    if r == 4 and phi_weight == 2:
        two = [i for i in range(4) if ws[i] == 2]
        odd = [i for i in range(4) if ws[i] % 2 == 1]
        if len(two) == 1 and len(odd) == 3 and len({ws[i] for i in odd}) == 2:
            if _quadratic_rank(phi, odd) >= 2:
                k_order = _axis_order(phi, two[0])
                return IndexFourPoint(k_order if k_order is not None else "inf")

    rank = matrix_rank(hessian_matrix(phi))
    return Unrecognized(
        f"no catalog form for 1/{r}{ws} with equation weight {phi_weight} (quadratic rank {rank})",
        location,
    )

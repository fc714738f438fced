"""Singular Riemann-Roch bookkeeping for a divisorial contraction to a point.

Notation: a is the discrepancy, E3 = E^3, the basket J is a multiset of
(r, v) and each entry also carries the residue b with v = e*b mod r (up to
sign), e being the inverse of a mod r.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import gcd
from typing import Optional, Sequence, Tuple

from .quotient import Basket, b_candidates

TYPE_TAGS = ("O", "I", "IIa", "IIb∨", "IIb∨∨", "III", "IV")

# Baskets that may occur for type O contractions, kept as reference data.
# "*" stands for an arbitrary index.
TYPE_O_BASKETS = (
    ((7, 3),), ((8, 3),),
    ((2, 1), (5, 2)), ((3, 1), (5, 2)), ((4, 1), (5, 2)), ((2, 1), (7, 2)),
    ((2, 1), (2, 1), ("*", 1)), ((2, 1), (3, 1), (3, 1)),
    ((2, 1), (3, 1), (4, 1)), ((2, 1), (3, 1), (5, 1)),
    (("*", 2),), (("*", 1), ("*", 1)), (("*", 1),), (),
)


def matches_type_o_list(basket) -> bool:
    """Whether J fits one of the listed type O patterns."""
    entries = list(basket)
    for pattern in TYPE_O_BASKETS:
        if len(pattern) != len(entries):
            continue
        for perm in permutations(entries):
            if all((pr == "*" or pr == r) and pv == v for (pr, pv), (r, v) in zip(pattern, perm)):
                return True
    return False


TYPE_I_BASKETS = (((7, 3),), ((3, 1), (5, 2)))


class RRError(ValueError):
    pass


class ClassificationError(ValueError):
    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)


def _bar(j: int, r: int) -> int:
    return j - (j // r) * r


@dataclass(frozen=True)
class RRContext:
    a: int
    E_cubed: Fraction
    E_dot_c2: Fraction
    # (r, b) per basket entry
    points: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        for r, _ in self.points:
            if gcd(self.a, r) != 1:
                raise RRError(f"a={self.a} is not coprime to the index {r}")

    def e(self, r: int) -> int:
        return pow(self.a, -1, r)

    @property
    def index(self) -> int:
        out = 1
        for r, _ in self.points:
            out = out * r // gcd(out, r)
        return out

    def with_c2(self, c2) -> "RRContext":
        return RRContext(self.a, self.E_cubed, Fraction(c2), self.points)


def _A_point(i: int, r: int, b: int, e: int) -> Fraction:
    ie = _bar(i * e, r)
    total = Fraction(-ie * (r * r - 1), 12 * r)
    for j in range(1, ie):
        jb = _bar(j * b, r)
        total += Fraction(jb * (r - jb), 2 * r)
    return total


def A_term(i: int, ctx: RRContext) -> Fraction:
    return sum((_A_point(i, r, b, ctx.e(r)) for r, b in ctx.points), Fraction(0))


def B_term(i: int, basket: Basket) -> Fraction:
    total = Fraction(0)
    for r, v in basket:
        iv = _bar(i * v, r)
        total += Fraction(iv * (r - iv), 2 * r)
    return total


def chi_Q(i: int, ctx: RRContext) -> Fraction:
    a = ctx.a
    poly = 2 * (3 * i * i - 3 * i + 1) - 3 * (2 * i - 1) * a + a * a
    return (Fraction(poly, 12) * ctx.E_cubed + ctx.E_dot_c2 / 12
            + A_term(i, ctx) - A_term(i - 1, ctx))


def _c2_from_pin(a: int, E_cubed: Fraction, points) -> Fraction:
    ctx = RRContext(a, E_cubed, Fraction(0), points)
    # chi(Q_0) = 1 is linear in E.c2 with slope 1/12
    return 12 * (1 - chi_Q(0, ctx))


def solve_c2(a: int, E_cubed, points: Sequence[Tuple[int, int]]) -> Fraction:
    """E.c2 making chi(Q_0) = 1; raises unless chi(Q_1) = 0 then holds."""
    E_cubed = Fraction(E_cubed)
    points = tuple((int(r), int(b) % int(r)) for r, b in points)
    c2 = _c2_from_pin(a, E_cubed, points)
    ctx = RRContext(a, E_cubed, c2, points)
    chi1 = chi_Q(1, ctx)
    if chi1 != 0:
        raise RRError(f"chi(Q_1) = {chi1} != 0 after fixing chi(Q_0) = 1 (a={a}, E3={E_cubed}, b-data={points})")
    return c2


def e3_from_pins(a: int, basket: Basket) -> Fraction:
    """E^3 forced by chi(Q_0) = 1 and chi(Q_1) = 0: (2/a)(1 + A_1 + A_{-1})."""
    points = tuple((r, b_candidates(r, v, a)[0]) for r, v in basket)
    ctx = RRContext(a, Fraction(0), Fraction(0), points)
    e3 = Fraction(2, a) * (1 + A_term(1, ctx) + A_term(-1, ctx))
    if e3 <= 0:
        raise RRError(f"pins force E^3 = {e3} <= 0 for a={a}, J={basket}")
    return e3


def context_from_basket(a: int, E_cubed, basket: Basket) -> RRContext:
    """Reconstruct b for every basket entry and solve for E.c2.

    Each v determines b up to sign; the sign pattern must satisfy both pins
    and every admissible pattern has to give the same E.c2.
    """
    E_cubed = Fraction(E_cubed)
    for r, _ in basket:
        if gcd(a, r) != 1:
            raise RRError(f"a={a} is not coprime to the index {r}")
    options = [b_candidates(r, v, a) for r, v in basket]
    found = {}
    for choice in product(*options):
        points = tuple(zip(basket.indices, choice))
        try:
            c2 = solve_c2(a, E_cubed, points)
        except RRError:
            continue
        found.setdefault(c2, points)
    if not found:
        raise RRError(f"no choice of b satisfies chi(Q_0)=1 and chi(Q_1)=0 for a={a}, E3={E_cubed}, J={basket}")
    if len(found) > 1:
        raise RRError(f"ambiguous b assignment for J={basket}: E.c2 values {sorted(found)}")
    c2, points = next(iter(found.items()))
    return RRContext(a, E_cubed, c2, points)


def d_of(i: int, ctx: RRContext) -> Fraction:
    """d(i) = chi(Q_i); meaningful for i <= a."""
    return chi_Q(i, ctx)


UNSPECIFIED = "unspecified"


def d_minus(i: int, type_tag: str, a: int, r1: Optional[int] = None, r2: Optional[int] = None):
    """Closed-form d(-i) for types IIb and III; UNSPECIFIED outside the known range."""
    if type_tag not in ("IIb", "IIb∨", "IIb∨∨", "III"):
        raise ValueError(f"closed form only for IIb and III, not {type_tag}")
    if type_tag == "III":
        r1, r2 = 1, r2 if r2 is not None else r1
    if r1 is None or r2 is None:
        raise ValueError("r1 and r2 are required")
    if i < 0:
        raise ValueError("i must be nonnegative")
    if i < min(r2, a):
        return 1 + i // r1
    if i == a and a < r2:
        return 2 + a // r1
    return UNSPECIFIED


@dataclass(frozen=True)
class ContractionData:
    a: int
    E_cubed: Fraction
    basket: Basket
    d_minus_1: int
    type_tag: str

    def to_json(self):
        return {
            "a": self.a,
            "E3": _fmt(self.E_cubed),
            "J": self.basket.to_json(),
            "d_minus_1": self.d_minus_1,
            "type": self.type_tag,
        }


def _fmt(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def classify_type(a: int, E_cubed, basket: Basket, d_minus_1: int,
                  n_nongorenstein: Optional[int] = None) -> str:
    """Match (a, E^3, J, d(-1)) against the numerical type table.

    IIb is refined into IIb∨ or IIb∨∨ when the number of non-Gorenstein
    points is supplied; otherwise "IIb" is returned.
    """
    E_cubed = Fraction(E_cubed)
    failures = []
    r = basket.index_lcm()
    if gcd(a, r) != 1:
        failures.append(f"gcd(a, r) = gcd({a}, {r}) != 1")
    if E_cubed <= 0 or (r * E_cubed).denominator != 1:
        failures.append(f"r*E^3 = {r * E_cubed} is not a positive integer")
    if failures:
        raise ClassificationError("; ".join(failures), failures)
    if a == 1:
        return "O"
    one_d = 1 + d_minus_1
    J = basket.entries
    if J in TYPE_I_BASKETS:
        if a == 2 and one_d == 1:
            return "I"
        failures.append(f"type I basket needs a=2 and 1+d(-1)=1, got a={a}, 1+d(-1)={one_d}")
    elif len(J) == 1 and J[0][1] == 2:
        rr_ = J[0][0]
        if a in (2, 4) and a * rr_ * E_cubed == 4 and one_d == 2:
            return "IIa"
        failures.append(f"IIa needs a in {{2,4}}, a*r*E^3 = 4, 1+d(-1)=2; got a={a}, a*r*E^3={a * rr_ * E_cubed}, 1+d(-1)={one_d}")
    elif len(J) == 2 and J[0][1] == 1 and J[1][1] == 1:
        r1, r2 = J[0][0], J[1][0]
        if a >= 2 and a * r1 * r2 * E_cubed == r1 + r2 and one_d == 2:
            if n_nongorenstein is None:
                return "IIb"
            if n_nongorenstein == 1:
                return "IIb∨"
            if n_nongorenstein == 2:
                return "IIb∨∨"
            failures.append(f"IIb has one or two non-Gorenstein points, got {n_nongorenstein}")
        else:
            failures.append(f"IIb needs a*r1*r2*E^3 = r1+r2, a >= 2, 1+d(-1)=2; got a*r1*r2*E^3={a * r1 * r2 * E_cubed}, a={a}, 1+d(-1)={one_d}")
    elif len(J) == 1 and J[0][1] == 1:
        rr_ = J[0][0]
        if a >= 2 and a * rr_ * E_cubed == 1 + rr_ and one_d == 3:
            return "III"
        failures.append(f"III needs a*r*E^3 = 1+r, a >= 2, 1+d(-1)=3; got a*r*E^3={a * rr_ * E_cubed}, 1+d(-1)={one_d}")
    elif not J:
        if a == 2 and one_d == 4:
            return "IV"
        failures.append(f"IV needs a=2 and 1+d(-1)=4, got a={a}, 1+d(-1)={one_d}")
    else:
        failures.append(f"basket {basket} matches no row")
    raise ClassificationError("; ".join(failures), failures)


def contraction_data(a: int, E_cubed, basket: Basket, n_nongorenstein: Optional[int] = None) -> ContractionData:
    """Solve E.c2, compute d(-1) = chi(Q_{-1}) and classify."""
    ctx = context_from_basket(a, E_cubed, basket)
    d1 = chi_Q(-1, ctx)
    if d1.denominator != 1:
        raise RRError(f"chi(Q_-1) = {d1} is not an integer")
    tag = classify_type(a, E_cubed, basket, int(d1), n_nongorenstein)
    return ContractionData(a, Fraction(E_cubed), basket, int(d1), tag)

"""Weighted blowups of hypersurface germs at the origin of affine 4-space."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Dict, List, Optional, Tuple, Union

import sympy

from .poly import Polynomial, WeightVector, as_weights, format_polynomial, is_infinite, weighted_order, weighted_part
from .quotient import (
    Basket,
    NormalForm,
    NotTerminal,
    QuotientPoint,
    Unrecognized,
    basket_of_normal_form,
    normalize_quotient,
    recognize_normal_form,
)


class BlowupError(ValueError):
    pass


@dataclass(frozen=True)
class WeightedGerm:
    equation: Polynomial
    weights: WeightVector

    def __init__(self, equation: Polynomial, weights):
        try:
            weights = as_weights(weights)
        except ValueError as exc:
            raise BlowupError(str(exc)) from exc
        if len(weights) != equation.nvars:
            raise BlowupError(f"{len(weights)} weights for {equation.nvars} variables")
        if equation.nvars not in (3, 4):
            raise BlowupError("ambient dimension must be 3 or 4")
        if any(m < 1 for m in weights):
            raise BlowupError("weights must be positive")
        if weights.gcd() != 1:
            raise BlowupError(f"weights {tuple(weights)} have a common factor")
        if equation.is_zero():
            raise BlowupError("the equation is zero")
        if equation.constant_term() != 0:
            raise BlowupError("the equation does not vanish at the origin")
        object.__setattr__(self, "equation", equation)
        object.__setattr__(self, "weights", weights)

    @property
    def dimension(self) -> int:
        return self.equation.nvars

    def order(self) -> int:
        return weighted_order(self.equation, self.weights)

    def leading_form(self) -> Polynomial:
        return weighted_part(self.equation, self.weights, self.order())


def discrepancy(germ: WeightedGerm) -> int:
    """c = sum(m_i) - 1 - d, d the weighted order."""
    return sum(germ.weights) - 1 - germ.order()


def exceptional_cubed(germ: WeightedGerm) -> Fraction:
    """E^3 = d / (m1 m2 m3 m4)."""
    if germ.dimension != 4:
        raise BlowupError("E^3 is defined for threefold germs in 4-space")
    prod = 1
    for m in germ.weights:
        prod *= m
    return Fraction(germ.order(), prod)


@dataclass(frozen=True)
class Chart:
    index: int  # 1-based
    order: int
    action: Tuple[int, ...]  # weights of the cyclic action on y_1..y_n, residues mod order
    strict_transform: Polynomial
    equation_weight: int  # weight of the strict transform under the action

    def to_json(self):
        return {
            "index": self.index,
            "order": self.order,
            "action": list(self.action),
            "strict_transform": format_polynomial(self.strict_transform),
        }


def _chart_exponent(e, i, weights) -> Tuple[int, ...]:
    """Exponent of x^e after x_i = y_i^(m_i), x_j = y_j y_i^(m_j)."""
    out = list(e)
    out[i] = sum(m * k for m, k in zip(weights, e))
    return tuple(out)


def chart(germ: WeightedGerm, i: int) -> Chart:
    """Chart i (1-based) of the weighted blowup."""
    k = i - 1
    w = germ.weights
    d = germ.order()
    n = germ.dimension
    terms = {}
    for e, c in germ.equation.terms.items():
        y = list(_chart_exponent(e, k, w))
        if y[k] < d:
            raise AssertionError("strict transform division is not exact")
        y[k] -= d
        terms[tuple(y)] = c
    m = w[k]
    action = tuple(1 % m if j == k else (-w[j]) % m for j in range(n))
    return Chart(i, m, action, Polynomial(germ.equation.variables, terms), (-d) % m)


def charts(germ: WeightedGerm) -> List[Chart]:
    return [chart(germ, i) for i in range(1, germ.dimension + 1)]


# sympy bridge


def to_sympy(f: Polynomial):
    syms = sympy.symbols(list(f.variables))
    if f.nvars == 1:
        syms = (syms,) if not isinstance(syms, (tuple, list)) else syms
    expr = sympy.Integer(0)
    for e, c in f.terms.items():
        mono = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            if k:
                mono *= s ** k
        expr += mono
    return expr, list(syms)


# hypothesis checks on the weighted blowup


PASS, FAIL, INCONCLUSIVE = "Pass", "Fail", "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    status: str
    detail: str = ""
    caveat: str = ""

    def to_json(self):
        out = {"verdict": self.status, "detail": self.detail}
        if self.caveat:
            out["caveat"] = self.caveat
        return out


def _absolutely_irreducible(f: Polynomial) -> bool:
    """Cheap certificates: linear in a variable with constant coefficient, or x^2 + B with -B not a square."""
    for idx, v in enumerate(f.variables):
        deg = f.degree_in(v)
        if deg == 0:
            continue
        by_power: Dict[int, Dict] = {}
        for e, c in f.terms.items():
            by_power.setdefault(e[idx], {})[e] = c
        top = by_power[deg]
        if deg == 1 and len(top) == 1 and sum(next(iter(top))) == 1:
            return True
        if deg == 2 and len(top) == 1 and sum(next(iter(top))) == 2 and 1 not in by_power:
            rest = Polynomial(f.variables, by_power.get(0, {}))
            if rest.is_zero():
                return False
            expr, syms = to_sympy(rest)
            _, factors = sympy.factor_list(expr, *syms)
            if any(mult % 2 == 1 for _, mult in factors):
                return True
    return False


def _condition_irreducible(phi_d: Polynomial) -> Verdict:
    expr, syms = to_sympy(phi_d)
    _, factors = sympy.factor_list(expr, *syms)
    if len(factors) == 1 and factors[0][1] == 1:
        if _absolutely_irreducible(phi_d):
            return Verdict(PASS, f"leading form {format_polynomial(phi_d)} is irreducible and reduced")
        return Verdict(PASS, f"leading form {format_polynomial(phi_d)} is irreducible over Q",
                       "irreducible over Q, geometric irreducibility not certified")
    shown = " * ".join(f"({sympy.sstr(f)})^{m}" if m > 1 else f"({sympy.sstr(f)})" for f, m in factors)
    return Verdict(FAIL, f"leading form factors as {shown}")


def _stratum_dimension(phi_d: Polynomial, T) -> int:
    """Dimension of {phi_d = 0} on the open torus stratum where exactly x_T are nonzero; -1 if empty."""
    restricted = Polynomial(phi_d.variables, {e: c for e, c in phi_d.terms.items()
                                              if all(e[k] == 0 for k in range(phi_d.nvars) if k not in T)})
    if restricted.is_zero():
        return len(T) - 1
    if restricted.is_monomial():
        return -1
    return len(T) - 2


def _condition_singular_strata(germ: WeightedGerm, phi_d: Polynomial) -> Verdict:
    w = germ.weights
    n = germ.dimension
    worst, where = -1, None
    for size in range(1, n):
        for T in combinations(range(n), size):
            g = 0
            for k in T:
                g = gcd(g, w[k])
            if g <= 1:
                continue
            dim = _stratum_dimension(phi_d, T)
            if dim > worst:
                worst, where = dim, T
    if worst < 0:
        return Verdict(PASS, "no singular stratum of the ambient blowup meets the strict transform")
    names = ",".join(germ.equation.variables[k] for k in where)
    detail = f"largest meeting has dimension {worst} on the stratum of ({names})"
    return Verdict(PASS if worst <= 1 else FAIL, detail)


def _condition_sing_in_boundary(germ: WeightedGerm, phi_d: Polynomial, d: int) -> Verdict:
    """Singular points of the strict transform on the open torus of the exceptional divisor.

    In a chart x_i = 1 these are the common zeros of phi_d, its partials in
    the other variables and phi_{d+1}, with every coordinate nonzero.
    """
    w = germ.weights
    i = min(range(germ.dimension), key=lambda k: (w[k], k))
    phi_next = weighted_part(germ.equation, w, d + 1)
    xi = germ.equation.variables[i]
    base = phi_d.restrict({xi: 1})
    nxt = phi_next.restrict({xi: 1})
    others = [v for v in germ.equation.variables if v != xi]
    polys = [base] + [base.derivative(v) for v in others] + [nxt]
    try:
        syms = sympy.symbols(others)
        sat = sympy.Symbol("_sat")
        exprs = [to_sympy(p)[0] for p in polys if not p.is_zero()]
        exprs = [e.subs(xi, 1) for e in exprs]
        prod = sympy.Integer(1)
        for s in syms:
            prod *= s
        exprs.append(1 - sat * prod)
        basis = sympy.groebner(exprs, *syms, sat, order="grevlex")
    except Exception as exc:  # noqa: BLE001 - any CAS failure is reported, not raised
        return Verdict(INCONCLUSIVE, f"Groebner computation failed: {exc}")
    if list(basis.exprs) == [1]:
        return Verdict(PASS, "no singular point of the strict transform on the open torus of the exceptional divisor")
    return Verdict(FAIL, "the strict transform is singular at a point of the exceptional divisor off the boundary")


def _condition_not_in_boundary(phi_d: Polynomial) -> Verdict:
    if phi_d.is_monomial():
        return Verdict(FAIL, f"leading form {format_polynomial(phi_d)} is a monomial, so F lies in the boundary")
    return Verdict(PASS, "leading form is not a monomial")


def check_genmethod(germ: WeightedGerm) -> Dict[str, Verdict]:
    """Verdicts for the four hypotheses on the weighted blowup of the germ."""
    d = germ.order()
    phi_d = germ.leading_form()
    return {
        "1": _condition_irreducible(phi_d),
        "2": _condition_singular_strata(germ, phi_d),
        "3": _condition_sing_in_boundary(germ, phi_d, d),
        "4": _condition_not_in_boundary(phi_d),
    }


# non-Gorenstein points


@dataclass(frozen=True)
class NonGorensteinPoint:
    location: str
    form: Union[NormalForm, Unrecognized]
    basket: Union[Basket, Unrecognized]

    def to_json(self):
        out = {"location": self.location}
        if isinstance(self.form, Unrecognized):
            out["unrecognized"] = self.form.describe()
        else:
            out["form"] = self.form.describe()
        if isinstance(self.basket, Basket):
            out["basket"] = self.basket.to_json()
        return out


def _vertex_point(germ: WeightedGerm, ch: Chart, a: int) -> Optional[NonGorensteinPoint]:
    phi = ch.strict_transform
    if ch.order == 1 or phi.constant_term() != 0:
        return None
    loc = f"origin of chart {ch.index}"
    form = recognize_normal_form(phi, ch.order, ch.action, ch.equation_weight, loc)
    if form is None:
        return None
    if isinstance(form, Unrecognized):
        return NonGorensteinPoint(loc, form, form)
    basket = basket_of_normal_form(form, a)
    if isinstance(basket, Unrecognized):
        basket = Unrecognized(basket.reason, loc)
    return NonGorensteinPoint(loc, form, basket)


def _edge_points(germ: WeightedGerm, phi_d: Polynomial, i: int, j: int, a: int) -> List[NonGorensteinPoint]:
    """Points of F on the open edge where only x_i, x_j are nonzero, when gcd(m_i, m_j) > 1."""
    w = germ.weights
    n = germ.dimension
    g = gcd(w[i], w[j])
    names = germ.equation.variables
    loc = f"edge ({names[i]},{names[j]})"
    restricted = {e: c for e, c in phi_d.terms.items() if all(e[k] == 0 for k in range(n) if k not in (i, j))}
    if not restricted:
        return [NonGorensteinPoint(loc, Unrecognized("the whole edge lies on the strict transform", loc),
                                   Unrecognized("non-isolated non-Gorenstein locus", loc))]
    # in chart i (x_i = 1) the edge points are roots of a polynomial in u = y_j^alpha
    alpha = w[i] // g
    qs = sorted({e[j] for e in restricted})
    q0 = qs[0]
    coeffs = {}
    for e, c in restricted.items():
        step = (e[j] - q0) // alpha
        coeffs[step] = coeffs.get(step, 0) + c
    u = sympy.Symbol("u")
    h = sum(sympy.Rational(c.numerator, c.denominator) * u ** s for s, c in coeffs.items())
    if sympy.degree(h, u) <= 0:
        return []
    others = [k for k in range(n) if k not in (i, j)]
    ch = chart(germ, i + 1)
    out = []
    _, sqf = sympy.sqf_list(h, u)
    for factor, mult in sqf:
        deg = sympy.degree(factor, u)
        if deg == 0:
            continue
        if mult == 1:
            # a simple root: the y_j-derivative is a unit, so the point is a quotient point
            q = normalize_quotient(g, [1] + [-w[k] for k in others])
            for _ in range(deg):
                if isinstance(q, NotTerminal):
                    form = Unrecognized(f"quotient 1/{g}{q.weights} is not terminal: {q.reason}", loc)
                    out.append(NonGorensteinPoint(loc, form, form))
                else:
                    point = QuotientPoint(q)
                    out.append(NonGorensteinPoint(loc, point, basket_of_normal_form(point, a)))
            continue
        for root_factor, _ in sympy.factor_list(factor, u)[1]:
            if sympy.degree(root_factor, u) != 1 or alpha != 1:
                form = Unrecognized(f"repeated non-rational edge root of multiplicity {mult}", loc)
                out.extend(NonGorensteinPoint(loc, form, form) for _ in range(sympy.degree(root_factor, u)))
                continue
            lam = -root_factor.coeff(u, 0) / root_factor.coeff(u, 1)
            lam = Fraction(int(sympy.fraction(lam)[0]), int(sympy.fraction(lam)[1]))
            shifted = _translate(ch.strict_transform, j, lam)
            action = tuple(ch.action[k] % g for k in range(n))
            form = recognize_normal_form(shifted, g, action, (-germ.order()) % g, f"{loc} at u={lam}")
            if form is None:
                continue
            if isinstance(form, Unrecognized):
                out.append(NonGorensteinPoint(loc, form, form))
            else:
                out.append(NonGorensteinPoint(loc, form, basket_of_normal_form(form, a)))
    return out


def _translate(f: Polynomial, j: int, lam: Fraction) -> Polynomial:
    from .poly import substitute
    gens = Polynomial.gens(f.variables)
    mapping = {v: gens[k] for k, v in enumerate(f.variables)}
    mapping[f.variables[j]] = gens[j] + lam
    return substitute(f, mapping)


@dataclass(frozen=True)
class PointScan:
    points: Tuple[NonGorensteinPoint, ...]
    strata: Tuple[str, ...]

    @property
    def basket(self) -> Union[Basket, Unrecognized]:
        total = Basket()
        for p in self.points:
            if isinstance(p.basket, Unrecognized):
                return p.basket
            total = total + p.basket
        return total

    @property
    def count(self) -> int:
        return len(self.points)


def nongorenstein_points(germ: WeightedGerm, a: Optional[int] = None) -> PointScan:
    """Scan chart origins and edge/face strata with nontrivial stabiliser."""
    if germ.dimension != 4:
        raise BlowupError("non-Gorenstein detection needs a threefold germ in 4-space")
    if a is None:
        a = discrepancy(germ)
    if a < 1:
        raise BlowupError(f"discrepancy {a} < 1; the blowup is not a divisorial contraction candidate")
    w = germ.weights
    phi_d = germ.leading_form()
    names = germ.equation.variables
    points: List[NonGorensteinPoint] = []
    strata: List[str] = []
    for ch in charts(germ):
        if ch.order > 1:
            strata.append(f"origin of chart {ch.index}")
            p = _vertex_point(germ, ch, a)
            if p is not None:
                points.append(p)
    for i, j in combinations(range(4), 2):
        if gcd(w[i], w[j]) > 1:
            strata.append(f"edge ({names[i]},{names[j]})")
            points.extend(_edge_points(germ, phi_d, i, j, a))
    for T in combinations(range(4), 3):
        g = gcd(gcd(w[T[0]], w[T[1]]), w[T[2]])
        if g > 1:
            loc = "face (" + ",".join(names[k] for k in T) + ")"
            strata.append(loc)
            if _stratum_dimension(phi_d, T) >= 1:
                form = Unrecognized("a curve of non-Gorenstein points", loc)
                points.append(NonGorensteinPoint(loc, form, form))
    return PointScan(tuple(points), tuple(strata))


@dataclass(frozen=True)
class BlowupReport:
    d: int
    c: int
    E_cubed: Fraction
    basket: Union[Basket, Unrecognized]
    points: Tuple[NonGorensteinPoint, ...]
    strata: Tuple[str, ...]
    conditions: Dict[str, Verdict]
    charts: Tuple[Chart, ...]

    def to_json(self):
        if isinstance(self.basket, Basket):
            basket = self.basket.to_json()
        else:
            basket = {"unrecognized": self.basket.describe()}
        q = self.E_cubed
        return {
            "d": self.d,
            "c": self.c,
            "E3": f"{q.numerator}/{q.denominator}",
            "basket": basket,
            "points": [p.to_json() for p in self.points],
            "strata_scanned": list(self.strata),
            "conditions": {k: v.to_json() for k, v in self.conditions.items()},
            "charts": [c.to_json() for c in self.charts],
        }


def blowup_report(germ: WeightedGerm) -> BlowupReport:
    d = germ.order()
    c = discrepancy(germ)
    scan = nongorenstein_points(germ, c)
    return BlowupReport(d, c, exceptional_cubed(germ), scan.basket, scan.points, scan.strata,
                        check_genmethod(germ), tuple(charts(germ)))


# cA_n admissibility


@dataclass(frozen=True)
class CAnCheck:
    violations: Tuple[str, ...]

    @property
    def admissible(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.admissible

    def __str__(self):
        return "Admissible" if self.admissible else "violated: " + ", ".join(self.violations)


CAN_CONDITIONS = ("a divides r1+r2", "a coprime to r1 and r2",
                  "weighted order of g is r1+r2", "coefficient of x3^((r1+r2)/a) is nonzero")


def _g_axes(g: Polynomial) -> Tuple[int, int]:
    if "x3" in g.variables and "x4" in g.variables:
        return g.index("x3"), g.index("x4")
    if g.nvars == 2:
        return 0, 1
    raise BlowupError("g must be a polynomial in x3, x4 (or in exactly two variables)")


def check_cAn_weights(g: Polynomial, r1: int, r2: int, a: int) -> CAnCheck:
    if min(r1, r2, a) < 1:
        raise BlowupError("r1, r2 and a must be positive")
    i3, i4 = _g_axes(g)
    others = [k for k in range(g.nvars) if k not in (i3, i4)]
    if any(e[k] for e in g.terms for k in others):
        raise BlowupError("g may only involve x3 and x4")
    s = r1 + r2
    violated = []
    if s % a:
        violated.append(CAN_CONDITIONS[0])
    if gcd(a, r1) != 1 or gcd(a, r2) != 1:
        violated.append(CAN_CONDITIONS[1])
    w = [0] * g.nvars
    w[i3], w[i4] = a, 1
    order = weighted_order(g, w) if not g.is_zero() else None
    if order is None or is_infinite(order) or order != s:
        violated.append(CAN_CONDITIONS[2])
    coef = 0
    if s % a == 0:
        e = [0] * g.nvars
        e[i3] = s // a
        coef = g.coefficient(tuple(e))
    if coef == 0:
        violated.append(CAN_CONDITIONS[3])
    return CAnCheck(tuple(violated))


def enumerate_cAn_weights(g: Polynomial, bound: int) -> List[Tuple[int, int, int]]:
    """Admissible (r1, r2, a) with r1 <= r2 <= bound; x1 and x2 play symmetric roles."""
    if bound < 1:
        raise BlowupError("bound must be positive")
    if g.is_zero():
        return []
    out = []
    for r2 in range(1, bound + 1):
        for r1 in range(1, r2 + 1):
            for a in range(1, r1 + r2 + 1):
                if check_cAn_weights(g, r1, r2, a):
                    out.append((r1, r2, a))
    return sorted(set(out))

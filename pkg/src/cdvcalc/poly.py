"""Exact sparse multivariate polynomials over Q.

Coefficients are ``fractions.Fraction``; a polynomial is an immutable map from
exponent tuples to nonzero coefficients over a fixed ordered variable list.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

DEFAULT_JET_BOUND = 24

Exponent = Tuple[int, ...]
Number = Union[int, Fraction]


class _Infinite:
    """Order of the zero polynomial; compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("cdvcalc.INFINITY")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INFINITY = _Infinite()


def is_infinite(value) -> bool:
    return value is INFINITY


def natural_key(name: str):
    """Sort key putting x2 before x10."""
    return [int(tok) if tok.isdigit() else tok for tok in re.split(r"(\d+)", name)]


class WeightVector:
    """Positive integer weights, one per variable."""

    __slots__ = ("weights",)

    def __init__(self, weights: Iterable[int]):
        ws = tuple(int(w) for w in weights)
        if not ws:
            raise ValueError("empty weight vector")
        if any(w < 1 for w in ws):
            raise ValueError(f"weights must be positive integers, got {ws}")
        object.__setattr__(self, "weights", ws)

    def __setattr__(self, key, value):
        raise AttributeError("WeightVector is immutable")

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __eq__(self, other):
        if isinstance(other, WeightVector):
            return self.weights == other.weights
        return NotImplemented

    def __hash__(self):
        return hash(self.weights)

    def __repr__(self):
        return f"WeightVector({self.weights})"

    def gcd(self) -> int:
        g = 0
        for w in self.weights:
            g = gcd(g, w)
        return g

    def is_normalized(self) -> bool:
        return self.gcd() == 1

    def normalized(self) -> "WeightVector":
        g = self.gcd()
        return WeightVector(w // g for w in self.weights)

    def degree(self, exps: Exponent) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))


def as_weights(w) -> WeightVector:
    return w if isinstance(w, WeightVector) else WeightVector(w)


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class Polynomial:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("variables", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Exponent, Number]] = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable names in {variables}")
        n = len(variables)
        clean: Dict[Exponent, Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"exponent {exps} does not match {n} variables")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent {exps}")
            c = _frac(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "_terms", {e: c for e, c in clean.items() if c})
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, variables, terms):
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        object.__setattr__(p, "variables", variables)
        object.__setattr__(p, "_terms", terms)
        object.__setattr__(p, "_hash", None)
        return p

    def __setattr__(self, key, value):
        raise AttributeError("Polynomial is immutable")

    # construction helpers

    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, variables, c):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name):
        variables = tuple(variables)
        i = variables.index(name)
        exps = [0] * len(variables)
        exps[i] = 1
        return cls(variables, {tuple(exps): 1})

    @classmethod
    def gens(cls, variables):
        variables = tuple(variables)
        return tuple(cls.var(variables, v) for v in variables)

    @classmethod
    def monomial(cls, variables, exps, c=1):
        return cls(variables, {tuple(exps): c})

    @classmethod
    def parse(cls, text: str, variables: Optional[Sequence[str]] = None) -> "Polynomial":
        return parse(text, variables)

    # accessors

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps: Exponent) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, name: str) -> int:
        i = self.variables.index(name)
        return max((e[i] for e in self._terms), default=-1)

    def index(self, name: str) -> int:
        return self.variables.index(name)

    # arithmetic

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c) -> "Polynomial":
        c = _frac(c)
        if not c:
            return Polynomial._raw(self.variables, {})
        return Polynomial._raw(self.variables, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.variables, _mul_terms(self._terms, other._terms))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self.scale(1 / _frac(other))
        if isinstance(other, Polynomial) and other.variables == self.variables and len(other) == 1:
            c = other.constant_term()
            if c and len(other._terms) == 1:
                return self.scale(1 / c)
        raise TypeError("polynomials can only be divided by nonzero constants")

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_truncated(self, other: "Polynomial", w, bound: int) -> "Polynomial":
        """Product keeping only terms of w-degree <= bound."""
        other = self._coerce(other)
        w = as_weights(w)
        return Polynomial._raw(self.variables, _mul_terms(self._terms, other._terms, w, bound))

    def divide_by_monomial(self, exps: Exponent) -> "Polynomial":
        """Exact division by the monomial x^exps; raises if not exact."""
        exps = tuple(exps)
        out = {}
        for e, c in self._terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if any(x < 0 for x in q):
                raise ArithmeticError(f"division by monomial {exps} is not exact")
            out[q] = c
        return Polynomial._raw(self.variables, out)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.variables == other.variables and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.variables, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.variables, frozenset(self._terms.items()))))
        return self._hash

    # calculus and evaluation

    def derivative(self, name: str) -> "Polynomial":
        i = self.variables.index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return Polynomial._raw(self.variables, out)

    def gradient(self):
        return tuple(self.derivative(v) for v in self.variables)

    def evaluate(self, values) -> Fraction:
        if isinstance(values, Mapping):
            values = [values[v] for v in self.variables]
        values = [_frac(v) for v in values]
        if len(values) != self.nvars:
            raise ValueError("wrong number of values")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    term *= v ** k
            total += term
        return total

    def restrict(self, assignments: Mapping[str, Number]) -> "Polynomial":
        """Set some variables to constants, keeping the variable list."""
        idx = {self.variables.index(v): _frac(c) for v, c in assignments.items()}
        out: Dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            ne = list(e)
            for i, val in idx.items():
                if e[i]:
                    c = c * val ** e[i]
                ne[i] = 0
            if c:
                ne = tuple(ne)
                out[ne] = out.get(ne, 0) + c
        return Polynomial._raw(self.variables, {e: c for e, c in out.items() if c})

    def rename(self, new_variables: Sequence[str]) -> "Polynomial":
        new_variables = tuple(new_variables)
        if len(new_variables) != self.nvars:
            raise ValueError("rename needs one name per variable")
        return Polynomial._raw(new_variables, dict(self._terms))

    def embed(self, new_variables: Sequence[str]) -> "Polynomial":
        """Re-express over a variable list containing all current variables."""
        new_variables = tuple(new_variables)
        pos = [new_variables.index(v) for v in self.variables]
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(new_variables)
            for p, k in zip(pos, e):
                ne[p] = k
            out[tuple(ne)] = c
        return Polynomial._raw(new_variables, out)

    def drop_variables(self, keep: Sequence[str]) -> "Polynomial":
        """Project onto the listed variables; every term must avoid the others."""
        keep = tuple(keep)
        pos = [self.variables.index(v) for v in keep]
        out = {}
        for e, c in self._terms.items():
            if sum(e) != sum(e[p] for p in pos):
                raise ValueError(f"term involves a dropped variable: {e}")
            out[tuple(e[p] for p in pos)] = c
        return Polynomial._raw(keep, out)

    # formatting

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda item: item[0], reverse=True)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({self.variables!r}, {format_polynomial(self)!r})"


def _mul_terms(a, b, w: Optional[WeightVector] = None, bound: Optional[int] = None):
    out: Dict[Exponent, Fraction] = {}
    if w is None:
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
    else:
        bdeg = sorted(((w.degree(e), e, c) for e, c in b.items()), key=lambda t: t[0])
        for ea, ca in a.items():
            da = w.degree(ea)
            if da > bound:
                continue
            for db, eb, cb in bdeg:
                if da + db > bound:
                    break
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _check_dims(f: Polynomial, w: WeightVector):
    if len(w) != f.nvars:
        raise ValueError(f"weight vector of length {len(w)} for {f.nvars} variables")


def weighted_order(f: Polynomial, w):
    """Minimal w-degree of a term of f; INFINITY for f = 0."""
    w = as_weights(w)
    _check_dims(f, w)
    if f.is_zero():
        return INFINITY
    return min(w.degree(e) for e in f.terms)


def weighted_part(f: Polynomial, w, d: int) -> Polynomial:
    """Terms of f of w-degree exactly d."""
    w = as_weights(w)
    _check_dims(f, w)
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return Polynomial._raw(f.variables, {e: c for e, c in f.terms.items() if w.degree(e) == d})


def weighted_parts(f: Polynomial, w) -> Dict[int, Polynomial]:
    w = as_weights(w)
    _check_dims(f, w)
    parts: Dict[int, dict] = {}
    for e, c in f.terms.items():
        parts.setdefault(w.degree(e), {})[e] = c
    return {d: Polynomial._raw(f.variables, t) for d, t in sorted(parts.items())}


def jet(f: Polynomial, w, d: int) -> Polynomial:
    """Terms of f of w-degree at most d."""
    w = as_weights(w)
    _check_dims(f, w)
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return Polynomial._raw(f.variables, {e: c for e, c in f.terms.items() if w.degree(e) <= d})


def substitute(f: Polynomial, mapping: Mapping[str, Union[Polynomial, Number]],
               truncate: Optional[Tuple[object, int]] = None) -> Polynomial:
    """Compose f with the map variable -> polynomial.

    All images must live over one common variable list. With ``truncate=(w, d)``
    every intermediate product is cut to w-degree <= d, which is exact for the
    final jet as long as all images have no constant term of negative weight
    (weights are positive, so this always holds).
    """
    missing = [v for v in f.variables if v not in mapping]
    if missing:
        raise KeyError(f"unmapped variable(s): {', '.join(missing)}")
    target = None
    for v in f.variables:
        img = mapping[v]
        if isinstance(img, Polynomial):
            if target is None:
                target = img.variables
            elif img.variables != target:
                raise ValueError("substitution images use different variable lists")
    if target is None:
        # every image is a constant; keep f's variable list
        return Polynomial.constant(f.variables, f.evaluate([mapping[v] for v in f.variables]))
    images = []
    for v in f.variables:
        img = mapping[v]
        images.append(img if isinstance(img, Polynomial) else Polynomial.constant(target, img))

    if truncate is not None:
        tw, bound = as_weights(truncate[0]), truncate[1]

        def mul(p, q):
            return Polynomial._raw(target, _mul_terms(p._terms, q._terms, tw, bound))
    else:
        tw, bound = None, None

        def mul(p, q):
            return Polynomial._raw(target, _mul_terms(p._terms, q._terms))

    one = Polynomial.constant(target, 1)
    power_cache = [{0: one} for _ in images]

    def power(i, k):
        cache = power_cache[i]
        if k not in cache:
            cache[k] = mul(power(i, k - 1), images[i])
        return cache[k]

    total: Dict[Exponent, Fraction] = {}
    for e, c in f.terms.items():
        term = one
        for i, k in enumerate(e):
            if k:
                term = mul(term, power(i, k))
                if term.is_zero():
                    break
        for te, tc in term.terms.items():
            total[te] = total.get(te, 0) + c * tc
    return Polynomial._raw(target, {e: c for e, c in total.items() if c})


def hessian_matrix(f: Polynomial):
    """Second partials at the origin as a list of Fraction rows."""
    n = f.nvars
    H = [[Fraction(0)] * n for _ in range(n)]
    for e, c in f.terms.items():
        if sum(e) != 2:
            continue
        idx = [i for i in range(n) for _ in range(e[i])]
        i, j = idx
        if i == j:
            H[i][i] += 2 * c
        else:
            H[i][j] += c
            H[j][i] += c
    return H


def matrix_rank(rows) -> int:
    m = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                factor = m[r][col] / m[rank][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def hessian_rank_at_origin(f: Polynomial) -> int:
    for e in f.terms:
        if sum(e) < 2:
            raise ValueError("hessian rank needs a polynomial without constant or linear terms")
    return matrix_rank(hessian_matrix(f))


# text form

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    pass


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} at position {pos}")
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif ident is not None:
            tokens.append(("id", ident))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.i = 0
        self.variables = variables

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, got {val!r}")

    def expr(self):
        left = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            right = self.term()
            left = left + right if op == "+" else left - right
        return left

    def term(self):
        left = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            _, op = self.take()
            right = self.unary()
            if op == "*":
                left = left * right
            else:
                if right.is_zero() or any(sum(e) for e in right.terms):
                    raise ParseError("division is only allowed by nonzero constants")
                left = left / right.constant_term()
        return left

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind == "op" and val == "(":
                kind, val = self.take()
                self.expect(")")
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer literal")
            return base ** val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Polynomial.constant(self.variables, val)
        if kind == "id":
            if val not in self.variables:
                raise ParseError(f"unknown variable {val!r}")
            return Polynomial.var(self.variables, val)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {val!r}" if val is not None else "unexpected end of input")


def parse(text: str, variables: Optional[Sequence[str]] = None) -> Polynomial:
    """Parse +, -, *, /, ^ (or **), parentheses, integers and identifiers.

    Without an explicit variable list the identifiers found are used, in
    natural sort order.
    """
    if not isinstance(text, str):
        raise ParseError("polynomial text must be a string")
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty polynomial text")
    if variables is None:
        variables = sorted({v for k, v in tokens if k == "id"}, key=natural_key)
    parser = _Parser(tokens, tuple(variables))
    result = parser.expr()
    if parser.i != len(tokens):
        raise ParseError(f"trailing input at token {tokens[parser.i][1]!r}")
    return result


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    pieces = []
    for e, c in f.sorted_terms():
        mono = "*".join(
            v if k == 1 else f"{v}^{k}" for v, k in zip(f.variables, e) if k
        )
        if not mono:
            body = _format_coeff(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{_format_coeff(abs(c))}*{mono}"
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += sign + body
    return out

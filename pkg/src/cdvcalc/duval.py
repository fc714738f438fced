"""Du Val (ADE) recognition for surface germs and cDV types of threefold germs."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .poly import DEFAULT_JET_BOUND, Polynomial, hessian_matrix, substitute

_FAMILY_ORDER = {"A": 0, "D": 1, "E": 2}


@dataclass(frozen=True)
class DuValType:
    family: str
    index: int
    # jet degree that decides the type; not part of the identity
    determinacy: Optional[int] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.family not in _FAMILY_ORDER:
            raise ValueError(f"unknown family {self.family!r}")
        n = self.index
        if self.family == "A" and n < 0:
            raise ValueError("A_n needs n >= 0")
        if self.family == "D" and n < 4:
            raise ValueError("D_n needs n >= 4")
        if self.family == "E" and n not in (6, 7, 8):
            raise ValueError("E_n needs n in {6, 7, 8}")

    def sort_key(self):
        return (_FAMILY_ORDER[self.family], self.index)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return f"{self.family}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "DuValType":
        text = text.strip().replace("_", "")
        return cls(text[0].upper(), int(text[1:]))


@dataclass(frozen=True)
class NotDuVal:
    reason: str

    def __str__(self):
        return "not Du Val"

    def __bool__(self):
        return False


@dataclass(frozen=True)
class Undecided:
    reason: str

    def __str__(self):
        return "undecided"

    def __bool__(self):
        return False


DuValResult = Union[DuValType, NotDuVal, Undecided]


class UndecidedError(RuntimeError):
    pass


class NonIsolatedError(UndecidedError):
    pass


# linear algebra helpers


def diagonalize_quadratic(H) -> Tuple[List[List[Fraction]], List[Fraction]]:
    """Rational P with P^T H P diagonal; returns (P, diagonal)."""
    n = len(H)
    A = [[Fraction(x) for x in row] for row in H]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def add_col(dst, src, factor):
        # basis change e_dst += factor * e_src, applied congruently
        for i in range(n):
            P[i][dst] += factor * P[i][src]
        for i in range(n):
            A[i][dst] += factor * A[i][src]
        for j in range(n):
            A[dst][j] += factor * A[src][j]

    def swap(i, j):
        for row in P:
            row[i], row[j] = row[j], row[i]
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]

    for k in range(n):
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, n) if A[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
                if j is None:
                    continue
                add_col(k, j, Fraction(1))
        for j in range(k + 1, n):
            if A[k][j] != 0:
                add_col(j, k, -A[k][j] / A[k][k])
    return P, [A[i][i] for i in range(n)]


def linear_change(f: Polynomial, P) -> Polynomial:
    """Substitute x = P y (same variable names)."""
    ys = Polynomial.gens(f.variables)
    mapping = {}
    for i, v in enumerate(f.variables):
        img = Polynomial.zero(f.variables)
        for j in range(f.nvars):
            if P[i][j]:
                img = img + ys[j].scale(P[i][j])
        mapping[v] = img
    return substitute(f, mapping)


def _degree_part(f: Polynomial, d: int):
    return {e: c for e, c in f.terms.items() if sum(e) == d}


def split_residual(f: Polynomial, squares: Sequence[int], hessian_diag, bound: int) -> Polynomial:
    """Residual of the splitting lemma, exact through total degree ``bound``.

    f has quadratic part sum(h_i/2 * u_i^2) over the split variables u_i
    (h_i the Hessian diagonal) and no quadratic terms in the others. The
    critical point u*(z) of f in the u-directions is found by fixed-point
    iteration u_i = -(df/du_i - h_i u_i)(u, z) / h_i, each round gaining a
    degree; f(u*(z), z) is right-equivalent to the residual.
    """
    n = f.nvars
    ones = (1,) * n
    names = f.variables
    gens = Polynomial.gens(names)
    f = Polynomial(names, {e: c for e, c in f.terms.items() if sum(e) <= bound})
    higher = {i: f.derivative(names[i]) - gens[i].scale(hessian_diag[i]) for i in squares}
    u = {i: Polynomial.zero(names) for i in squares}
    for _ in range(bound):
        mapping = {v: gens[k] for k, v in enumerate(names)}
        for i in squares:
            mapping[names[i]] = u[i]
        new = {i: substitute(higher[i], mapping, truncate=(ones, bound - 1)).scale(-1 / Fraction(hessian_diag[i]))
               for i in squares}
        if new == u:
            break
        u = new
    mapping = {v: gens[k] for k, v in enumerate(names)}
    for i in squares:
        mapping[names[i]] = u[i]
    return substitute(f, mapping, truncate=(ones, bound))


# corank-2 cubic analysis


def _binary_cubic(g3: Polynomial, iy: int, iz: int):
    def c(py, pz):
        e = [0] * g3.nvars
        e[iy], e[iz] = py, pz
        return g3.coefficient(tuple(e))
    return c(3, 0), c(2, 1), c(1, 2), c(0, 3)


def _cubic_kind(a, b, c, d) -> str:
    """Root multiplicities of a*y^3 + b*y^2 z + c*y z^2 + d*z^3."""
    if not any((a, b, c, d)):
        return "zero"
    disc = b * b * c * c - 4 * a * c ** 3 - 4 * b ** 3 * d - 27 * a * a * d * d + 18 * a * b * c * d
    if disc != 0:
        return "distinct"
    # the Hessian covariant vanishes exactly for perfect cubes
    if b * b - 3 * a * c == 0 and b * c - 9 * a * d == 0 and c * c - 3 * b * d == 0:
        return "cube"
    return "square"


def _repeated_root(a, b, c, d):
    """Rational linear form (p, q) ~ p*y + q*z whose square divides the cubic."""
    # the repeated root of F is a common root of F_y and F_z
    # F_y = 3a y^2 + 2b y z + c z^2, F_z = b y^2 + 2c y z + 3d z^2
    fy = (3 * a, 2 * b, c)
    fz = (b, 2 * c, 3 * d)
    for q1 in (fy, fz):
        A, B, C = q1
        if A == 0 and B == 0 and C == 0:
            continue
        # roots of the binary quadratic A y^2 + B y z + C z^2 as points (y:z)
        candidates = []
        if A == 0:
            candidates.append((Fraction(1), Fraction(0)))
            if B != 0:
                candidates.append((-C / B, Fraction(1)))
        else:
            disc = B * B - 4 * A * C
            if disc == 0:
                candidates.append((-B / (2 * A), Fraction(1)))
            else:
                root = _rational_sqrt(disc)
                if root is not None:
                    candidates += [((-B + root) / (2 * A), Fraction(1)), ((-B - root) / (2 * A), Fraction(1))]
        for (y0, z0) in candidates:
            F = a * y0 ** 3 + b * y0 ** 2 * z0 + c * y0 * z0 ** 2 + d * z0 ** 3
            Fy = 3 * a * y0 ** 2 + 2 * b * y0 * z0 + c * z0 ** 2
            Fz = b * y0 ** 2 + 2 * c * y0 * z0 + 3 * d * z0 ** 2
            if F == 0 and Fy == 0 and Fz == 0:
                # linear form vanishing at (y0 : z0)
                return (z0, -y0)
    raise ArithmeticError("repeated root of a binary cubic is not rational")


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    from math import isqrt
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _complete_basis(p, q):
    """A second linear form making (p y + q z, other) a basis."""
    return (Fraction(0), Fraction(1)) if p != 0 else (Fraction(1), Fraction(0))


def _change_binary(g: Polynomial, iy: int, iz: int, L1, L2) -> Polynomial:
    """Express g in new coordinates Y = L1(y, z), Z = L2(y, z)."""
    (p1, q1), (p2, q2) = L1, L2
    det = p1 * q2 - q1 * p2
    # inverse: y = (q2 Y - q1 Z)/det, z = (-p2 Y + p1 Z)/det
    gens = Polynomial.gens(g.variables)
    Y, Z = gens[iy], gens[iz]
    mapping = {v: gens[k] for k, v in enumerate(g.variables)}
    mapping[g.variables[iy]] = (Y.scale(q2) - Z.scale(q1)).scale(1 / det)
    mapping[g.variables[iz]] = (Y.scale(-p2) + Z.scale(p1)).scale(1 / det)
    return substitute(g, mapping)


def _coef2(g: Polynomial, iy: int, iz: int, py: int, pz: int) -> Fraction:
    e = [0] * g.nvars
    e[iy], e[iz] = py, pz
    return g.coefficient(tuple(e))


def _d_series(g: Polynomial, iy: int, iz: int, bound: int) -> DuValResult:
    """g has cubic part c*Y^2*Z; find the first surviving pure Z^d."""
    c = _coef2(g, iy, iz, 2, 1)
    n = g.nvars
    ones = (1,) * n
    gens = Polynomial.gens(g.variables)
    Y, Z = gens[iy], gens[iz]
    for d in range(4, bound + 1):
        # absorb terms divisible by Y^2 into Z, and Y*Z^(d-1) into Y
        part = _degree_part(g, d)
        dz = {}
        for e, coef in part.items():
            if e[iy] >= 2:
                q = list(e)
                q[iy] -= 2
                dz[tuple(q)] = dz.get(tuple(q), 0) - coef / c
        mapping = {v: gens[k] for k, v in enumerate(g.variables)}
        if dz:
            mapping[g.variables[iz]] = Z + Polynomial(g.variables, dz)
            g = substitute(g, mapping, truncate=(ones, bound))
        part = _degree_part(g, d)
        e1 = [0] * n
        e1[iy], e1[iz] = 1, d - 1
        lin = part.get(tuple(e1), 0)
        if lin:
            eps = [0] * n
            eps[iz] = d - 2
            mapping = {v: gens[k] for k, v in enumerate(g.variables)}
            mapping[g.variables[iy]] = Y - Polynomial.monomial(g.variables, eps, lin / (2 * c))
            g = substitute(g, mapping, truncate=(ones, bound))
        if _coef2(g, iy, iz, 0, d):
            return DuValType("D", d + 1, determinacy=d)
    return Undecided(f"D-series residual vanishes through degree {bound}")


def _classify_at(f: Polynomial, bound: int) -> DuValResult:
    H = hessian_matrix(f)
    P, lambdas = diagonalize_quadratic(H)
    g = linear_change(f, P)
    squares = [i for i in range(3) if lambdas[i] != 0]
    rest = [i for i in range(3) if lambdas[i] == 0]
    corank = len(rest)
    if corank == 0:
        return DuValType("A", 1, determinacy=2)
    if corank == 3:
        return NotDuVal("vanishing quadratic part (corank 3)")
    residual = split_residual(g, squares, lambdas, bound)
    if corank == 1:
        if residual.is_zero():
            return Undecided(f"residual vanishes through degree {bound}")
        k = min(sum(e) for e in residual.terms)
        return DuValType("A", k - 1, determinacy=k)
    iy, iz = rest
    g3 = Polynomial(g.variables, _degree_part(residual, 3))
    a, b, c, d = _binary_cubic(g3, iy, iz)
    kind = _cubic_kind(a, b, c, d)
    if kind == "zero":
        return NotDuVal("corank 2 with vanishing cubic term")
    if kind == "distinct":
        return DuValType("D", 4, determinacy=3)
    if kind == "square":
        L1 = _repeated_root(a, b, c, d)
        L2 = _complete_basis(*L1)
        h = _change_binary(residual, iy, iz, L1, L2)
        return _d_series(h, iy, iz, bound)
    # perfect cube: every coefficient pair is proportional to the cube root's
    L1 = _cube_root_form(a, b, c, d)
    L2 = _complete_basis(*L1)
    h = _change_binary(residual, iy, iz, L1, L2)
    if _coef2(h, iy, iz, 0, 4):
        return DuValType("E", 6, determinacy=4)
    if _coef2(h, iy, iz, 1, 3):
        return DuValType("E", 7, determinacy=4)
    if bound < 5:
        return Undecided("E8 test needs degree 5")
    if _coef2(h, iy, iz, 0, 5):
        return DuValType("E", 8, determinacy=5)
    return NotDuVal("cube cubic without z^4, y z^3 or z^5 terms")


def _cube_root_form(a, b, c, d):
    """(p, q) with a y^3 + ... + d z^3 = k (p y + q z)^3."""
    if a != 0:
        # (y + s z)^3 * a: b = 3 a s
        return (Fraction(1), b / (3 * a))
    return (Fraction(0), Fraction(1))


def classify_duval(f: Polynomial, jet_bound: int = DEFAULT_JET_BOUND) -> DuValResult:
    """ADE type of the surface germ f = 0 at the origin of 3-space."""
    if f.nvars != 3:
        raise ValueError(f"expected a polynomial in 3 variables, got {f.nvars}")
    if f.is_zero():
        raise ValueError("the zero polynomial does not define a surface germ")
    if f.constant_term() != 0:
        raise ValueError("f does not vanish at the origin")
    if any(sum(e) == 1 for e in f.terms):
        return DuValType("A", 0, determinacy=1)
    bound = min(6, jet_bound)
    while True:
        result = _classify_at(f, bound)
        if not isinstance(result, Undecided) or bound >= jet_bound:
            return result
        bound = min(2 * bound, jet_bound)


# compound Du Val types


@dataclass(frozen=True)
class CdvType:
    family: Optional[str]
    index: Optional[int]
    stable: bool = field(default=True, compare=False)
    samples: Tuple[str, ...] = field(default=(), compare=False)
    hyperplanes: Tuple[Tuple[int, int, int], ...] = field(default=(), compare=False)
    reason: str = field(default="", compare=False)

    @property
    def is_cdv(self) -> bool:
        return self.family is not None

    def __str__(self):
        return f"{self.family}{self.index}" if self.is_cdv else "not cDV"

    def to_json(self):
        return {
            "type": str(self),
            "stable": self.stable,
            "samples": list(self.samples),
            "hyperplanes": [list(h) for h in self.hyperplanes],
        }


HYPERPLANE_RANGE = [k for k in range(-7, 8) if k != 0]


def hyperplane_section(f: Polynomial, coeffs) -> Polynomial:
    """Restrict f to x4 = c1*x1 + c2*x2 + c3*x3."""
    x1, x2, x3 = f.variables[:3]
    sub_vars = (x1, x2, x3)
    gens = Polynomial.gens(sub_vars)
    image = gens[0].scale(coeffs[0]) + gens[1].scale(coeffs[1]) + gens[2].scale(coeffs[2])
    return substitute(f, {x1: gens[0], x2: gens[1], x3: gens[2], f.variables[3]: image})


def classify_cdv(f: Polynomial, seed: int = 0, samples: int = 5,
                 jet_bound: int = DEFAULT_JET_BOUND) -> CdvType:
    """Least ADE type over fixed-seed random hyperplane sections through 0."""
    if f.nvars != 4:
        raise ValueError(f"expected a polynomial in 4 variables, got {f.nvars}")
    if f.is_zero() or f.constant_term() != 0:
        raise ValueError("f must be nonzero and vanish at the origin")
    if samples < 1:
        raise ValueError("at least one sample is needed")
    rng = random.Random(seed)
    results: List[DuValResult] = []
    planes = []
    for _ in range(samples):
        for _attempt in range(50):
            coeffs = tuple(rng.choice(HYPERPLANE_RANGE) for _ in range(3))
            section = hyperplane_section(f, coeffs)
            if not section.is_zero():
                break
        else:
            raise UndecidedError("every sampled hyperplane section vanished identically")
        planes.append(coeffs)
        results.append(classify_duval(section, jet_bound))

    decided = [r for r in results if isinstance(r, DuValType)]
    labels = tuple(str(r) if not isinstance(r, (NotDuVal, Undecided)) else str(r) for r in results)
    if not decided:
        if all(isinstance(r, Undecided) for r in results):
            raise NonIsolatedError(
                f"all {samples} sections have a residual vanishing through degree {jet_bound}; "
                "the singularity looks non-isolated"
            )
        if all(isinstance(r, NotDuVal) for r in results):
            reasons = "; ".join(sorted({r.reason for r in results}))
            return CdvType(None, None, True, labels, tuple(planes), reasons)
        raise UndecidedError("no section was classified within the jet bound")
    best = min(decided, key=DuValType.sort_key)
    stable = all(isinstance(r, DuValType) and r == best for r in results)
    return CdvType("c" + best.family, best.index, stable, labels, tuple(planes))

"""Complex-structure analysis for a real structure on a 2-torus.

Given an involutive integral matrix ``zeta`` with determinant -1 (the
linear part of the real structure) and a finite-order integral matrix
with determinant +1 (the linear part of the holomorphic symmetry), this
module enumerates the compatible pairs, solves for the complex
structures J with

    J^2 = -Id,    zeta J zeta = -J,    B J = J B,

and classifies the solution set: a full hyperbola with two branches, a
pair of isolated points, or nothing.  The two branches, or the two
points, are always exchanged by J -> -J.

The enumeration is derived, not transcribed: the linear shape forced by
the conjugation relation is solved symbolically, the determinant and
finite-order conditions are reduced to explicit Diophantine equations,
and the resulting matrices are normalized under generator inversion,
basis exchange, and re-choice of the antiholomorphic generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

import sympy
from sympy.solvers.diophantine import diophantine

from .exactlin import IntMat2, matrix_order

ZETA_DIAG = IntMat2(1, 0, 0, -1)
ZETA_SWAP = IntMat2(0, 1, 1, 0)

COMMUTE = "commute"
INVERT = "invert"


def _squarefree_split(n: int) -> Tuple[int, int]:
    """n = square * squarefree; returns (sqrt(square), squarefree)."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    outer = 1
    rest = n
    f = 2
    while f * f <= rest:
        while rest % (f * f) == 0:
            outer *= f
            rest //= f * f
        f += 1
    return outer, rest


@dataclass(frozen=True)
class SqrtValue:
    """The exact value num * sqrt(radicand) / den, radicand squarefree."""

    num: int
    radicand: int
    den: int

    def __post_init__(self) -> None:
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        outer, rest = _squarefree_split(self.radicand)
        if outer != 1:
            raise ValueError("radicand must be squarefree")

    def __float__(self) -> float:
        return self.num * math.sqrt(self.radicand) / self.den

    def __neg__(self) -> "SqrtValue":
        return SqrtValue(-self.num, self.radicand, self.den)

    def __str__(self) -> str:
        return f"{self.num}*sqrt({self.radicand})/{self.den}"


Entry = Union[Fraction, SqrtValue]
JMat = Tuple[Tuple[Entry, Entry], Tuple[Entry, Entry]]


def _entry_float(e: Entry) -> float:
    return float(e)


def j_neg(j: JMat) -> JMat:
    return tuple(tuple(-e for e in row) for row in j)


def j_floats(j: JMat) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    return tuple(tuple(_entry_float(e) for e in row) for row in j)


def _is_rational_matrix(j: JMat) -> bool:
    return all(isinstance(e, Fraction) for row in j for e in row)


@dataclass(frozen=True)
class ZetaBCase:
    """A compatible pair: the real-structure linear part and the symmetry."""

    zeta: IntMat2
    b_mat: IntMat2
    relation: str

    def __post_init__(self) -> None:
        if self.zeta @ self.zeta != IntMat2.identity():
            raise ValueError("zeta must be involutive")
        if self.zeta.det() != -1:
            raise ValueError("zeta must have determinant -1")
        if self.b_mat.det() != 1:
            raise ValueError("the symmetry matrix must have determinant 1")
        conj = self.zeta @ self.b_mat @ self.zeta
        if self.relation == COMMUTE:
            ok = conj == self.b_mat
        elif self.relation == INVERT:
            ok = conj == self.b_mat.inverse()
        else:
            raise ValueError(f"unknown relation {self.relation!r}")
        if not ok:
            raise ValueError("declared relation does not hold")


@dataclass(frozen=True)
class Parametrization:
    """A one-parameter family of complex structures with two branches.

    shape "antidiagonal": J(d) = [[0, -d], [1/d, 0]], branches d > 0, d < 0.
    shape "balanced": J(s) = [[a, b], [-b, -a]] with a = (s - 1/s)/2 and
    b = (s + 1/s)/2, so b^2 - a^2 = 1; branches b > 0 (s > 0) and b < 0.
    """

    shape: str
    positive_samples: Tuple[Fraction, ...] = (
        Fraction(1, 2),
        Fraction(2),
        Fraction(3),
    )

    def matrix(self, s: Fraction) -> JMat:
        s = Fraction(s)
        if s == 0:
            raise ValueError("parameter must be nonzero")
        if self.shape == "antidiagonal":
            return ((Fraction(0), -s), (1 / s, Fraction(0)))
        if self.shape == "balanced":
            a = (s - 1 / s) / 2
            b = (s + 1 / s) / 2
            return ((a, b), (-b, -a))
        raise ValueError(f"unknown shape {self.shape!r}")

    def branch_coordinate(self, j: JMat) -> Fraction:
        """Positive on one branch, negative on the other."""
        if self.shape == "antidiagonal":
            return -j[0][1]
        return j[0][1]

    @property
    def negative_samples(self) -> Tuple[Fraction, ...]:
        return tuple(-s for s in self.positive_samples)


@dataclass(frozen=True)
class SolutionFamily:
    kind: str  # "Empty" | "TwoIsolatedPoints" | "OneParamTwoBranches"
    points: Tuple[JMat, ...] = ()
    parametrization: Optional[Parametrization] = None
    note: str = ""


# --- enumeration of compatible (zeta, B) pairs --------------------------------------


def _shape_matrix(zeta: IntMat2, relation: str) -> sympy.Matrix:
    """Solve the linear conjugation constraint for the symmetry matrix."""
    syms = sympy.symbols("m11 m12 m21 m22")
    m = sympy.Matrix([[syms[0], syms[1]], [syms[2], syms[3]]])
    z = sympy.Matrix(zeta.rows())
    # With determinant 1 the inverse is the adjugate, so the invert
    # relation stays linear in the entries.
    target = m.adjugate() if relation == INVERT else m
    conj = z * m * z
    eqs = [sympy.expand(conj[i, j] - target[i, j]) for i in range(2) for j in range(2)]
    sol = sympy.linsolve(eqs, list(syms))
    (tuple_sol,) = sol
    return sympy.Matrix([[tuple_sol[0], tuple_sol[1]], [tuple_sol[2], tuple_sol[3]]])


def _integer_points(equation: sympy.Expr, unknowns: Sequence[sympy.Symbol]):
    """All integer solutions of a polynomial equation known to be finite."""
    equation = sympy.expand(equation)
    if not unknowns:
        return [()] if equation == 0 else []
    numer, _ = sympy.fraction(sympy.together(equation))
    numer = sympy.expand(numer)
    if numer == 0:
        raise ValueError("equation does not cut out a finite set")
    solutions = diophantine(numer, syms=list(unknowns))
    points = []
    for sol in solutions:
        if any(v.free_symbols for v in sol):
            raise ValueError("unexpected infinite solution family")
        points.append(tuple(int(v) for v in sol))
    return points


def _finite_order_candidates(zeta: IntMat2, relation: str) -> List[IntMat2]:
    """Determinant-1 finite-order matrices satisfying the conjugation relation.

    Runs the elimination: the conjugation relation fixes a linear shape,
    finite order forces |trace| < 2 unless the matrix is +-Id, and for
    each admissible trace the determinant condition becomes a Diophantine
    equation with finitely many solutions.
    """
    shape = _shape_matrix(zeta, relation)
    frees = sorted(shape.free_symbols, key=str)
    out: Set[IntMat2] = set()
    ident = IntMat2.identity()
    for scalar in (ident, -ident):
        conj = zeta @ scalar @ zeta
        target = scalar.inverse() if relation == INVERT else scalar
        if conj == target:
            out.add(scalar)
    trace_expr = shape.trace()
    for t in (-1, 0, 1):
        pinned = sympy.solve(trace_expr - t, frees, dict=True)
        if not pinned:
            continue
        shape_t = shape.subs(pinned[0])
        det_eq = shape_t.det() - 1
        remaining = sorted(det_eq.free_symbols, key=str)
        for point in _integer_points(det_eq, remaining):
            candidate = shape_t.subs(dict(zip(remaining, point)))
            entries = [sympy.nsimplify(candidate[i, j]) for i in range(2) for j in range(2)]
            if not all(e.is_integer for e in entries):
                continue
            out.add(IntMat2(*(int(e) for e in entries)))
    kept = []
    for mat in out:
        order = matrix_order(mat)
        if order is None or order == 1:
            continue
        kept.append(mat)
    return kept


def _small_unimodulars() -> List[IntMat2]:
    mats = []
    for entries in product(range(-2, 3), repeat=4):
        mat = IntMat2(*entries)
        if mat.det() in (1, -1):
            mats.append(mat)
    return mats


_UNIMODULARS = _small_unimodulars()


def _equivalence_orbit(zeta: IntMat2, mat: IntMat2) -> Set[IntMat2]:
    """Closure of a symmetry matrix under the normalizations of the proof.

    Moves: replace the generator by its inverse; conjugate by a basis
    change centralizing zeta; and re-choose the antiholomorphic generator
    as zeta times a power of the symmetry, renormalizing its matrix back
    to the original zeta by a basis change.
    """
    centralizer = [q for q in _UNIMODULARS if q @ zeta == zeta @ q]
    orbit = {mat}
    frontier = [mat]
    while frontier:
        current = frontier.pop()
        images = [current.inverse()]
        images.extend(q @ current @ q.inverse() for q in centralizer)
        order = matrix_order(current)
        for k in range(1, (order or 1)):
            twisted = zeta @ current.power(k)
            if twisted @ twisted != IntMat2.identity():
                continue
            for q in _UNIMODULARS:
                if q @ twisted == zeta @ q:
                    images.append(q @ current @ q.inverse())
        for image in images:
            if image not in orbit:
                orbit.add(image)
                frontier.append(image)
    return orbit


def _canonical_form(orbit: Set[IntMat2]) -> IntMat2:
    """Normal form: scalar matrices stay, the rest become [[t, -1], [1, 0]].

    The trace t is a class invariant, and the companion-shaped matrix
    with that trace always satisfies the same conjugation relation.  The
    projection identifies the two integrally distinct order-3 classes on
    the swap form, whose complex-structure constraints coincide because
    commuting with a matrix is the same as commuting with its negative.
    """
    sample = next(iter(orbit))
    if sample.b == 0 and sample.c == 0 and sample.a == sample.d:
        return sample
    candidates = [m for m in orbit if m.b == -1 and m.c == 1 and m.d == 0]
    if candidates:
        return min(candidates, key=IntMat2.entries)
    return IntMat2(sample.trace(), -1, 1, 0)


def normalize_symmetry(zeta: IntMat2, mat: IntMat2) -> IntMat2:
    """Canonical representative of a symmetry matrix for the given zeta."""
    return _canonical_form(_equivalence_orbit(zeta, mat))


def enumerate_zeta_b() -> List[ZetaBCase]:
    """All compatible pairs, one representative per equivalence class."""
    cases = []
    for zeta in (ZETA_DIAG, ZETA_SWAP):
        for relation in (COMMUTE, INVERT):
            raw = _finite_order_candidates(zeta, relation)
            reps = {normalize_symmetry(zeta, mat) for mat in raw}
            for rep in sorted(reps, key=lambda m: (matrix_order(m), m.entries())):
                cases.append(ZetaBCase(zeta=zeta, b_mat=rep, relation=relation))
    return cases


# --- solving for the complex structure ----------------------------------------------


def _sympy_to_entry(value: sympy.Expr) -> Entry:
    value = sympy.nsimplify(value)
    if value.is_rational:
        value = sympy.Rational(value)
        return Fraction(int(value.p), int(value.q))
    squared = sympy.Rational(sympy.nsimplify(value**2))
    num, den = int(squared.p), int(squared.q)
    outer, radicand = _squarefree_split(num * den)
    sign = 1 if value.is_positive else -1
    return SqrtValue(sign * outer, radicand, den)


def solve_j(case: ZetaBCase) -> SolutionFamily:
    """Solve J^2 = -Id, zeta J zeta = -J, BJ = JB over the given case."""
    if case.zeta == ZETA_DIAG:
        d = sympy.symbols("d", real=True, nonzero=True)
        j = sympy.Matrix([[0, -d], [1 / d, 0]])
        params = [d]
        constraints = []
        shape = "antidiagonal"
    else:
        a, b = sympy.symbols("a b", real=True)
        j = sympy.Matrix([[a, b], [-b, -a]])
        params = [a, b]
        constraints = [b**2 - a**2 - 1]
        shape = "balanced"
    bm = sympy.Matrix(case.b_mat.rows())
    commute = bm * j - j * bm
    eqs = [sympy.expand(commute[i, jx]) for i in range(2) for jx in range(2)]
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return SolutionFamily(
            kind="OneParamTwoBranches",
            parametrization=Parametrization(shape=shape),
        )
    solutions = sympy.solve(eqs + constraints, params, dict=True)
    points: List[JMat] = []
    for sol in solutions:
        j_sol = j.subs(sol)
        if j_sol.free_symbols:
            # The commutation cut the family but left the parameter free;
            # for the enumerated cases this does not occur.
            return SolutionFamily(
                kind="OneParamTwoBranches",
                parametrization=Parametrization(shape=shape),
            )
        rows = tuple(
            tuple(_sympy_to_entry(j_sol[i, jx]) for jx in range(2)) for i in range(2)
        )
        points.append(rows)
    if not points:
        return SolutionFamily(kind="Empty")
    points.sort(key=lambda m: tuple(float(e) for row in m for e in row))
    return SolutionFamily(kind="TwoIsolatedPoints", points=tuple(points))


def elliptic_demo() -> SolutionFamily:
    """The hyperbola of real structures on a single curve, for the swap form."""
    case = ZetaBCase(zeta=ZETA_SWAP, b_mat=-IntMat2.identity(), relation=COMMUTE)
    family = solve_j(case)
    return SolutionFamily(
        kind=family.kind,
        points=family.points,
        parametrization=family.parametrization,
        note="the moduli space of real curves is a single branch",
    )


# --- verification --------------------------------------------------------------------


def _mat_mul(x, y):
    return tuple(
        tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2))
        for i in range(2)
    )


def _residual(x, y) -> float:
    return max(abs(x[i][j] - y[i][j]) for i in range(2) for j in range(2))


def _check_point(j: JMat, zeta: IntMat2, b_mat: IntMat2, tol: float) -> bool:
    if _is_rational_matrix(j):
        jj = j
        exact = True
    else:
        jj = j_floats(j)
        exact = False
    z = zeta.rows()
    bm = b_mat.rows()
    minus_ident = ((-1, 0), (0, -1))
    checks = [
        (_mat_mul(jj, jj), minus_ident),
        (_mat_mul(z, _mat_mul(jj, z)), tuple(tuple(-e for e in row) for row in jj)),
        (_mat_mul(bm, jj), _mat_mul(jj, bm)),
    ]
    for got, want in checks:
        if exact:
            if any(got[i][jx] != want[i][jx] for i in range(2) for jx in range(2)):
                return False
        elif _residual(got, want) > tol:
            return False
    return True


def _sample_parameters(base: Tuple[Fraction, ...], n: int) -> List[Fraction]:
    values = list(base)
    k = 0
    while len(values) < n:
        candidate = Fraction(k + 2, 2 * k + 1)
        if candidate not in values:
            values.append(candidate)
        k += 1
    return values[:n]


def verify_family(
    family: SolutionFamily,
    case: ZetaBCase,
    n_samples: int = 100,
    tol: float = 1e-12,
) -> bool:
    """Check the defining equations on samples, and that negation swaps sides."""
    if family.kind == "Empty":
        return True
    if family.kind == "TwoIsolatedPoints":
        if len(family.points) != 2:
            return False
        first, second = family.points
        if _residual(j_floats(j_neg(first)), j_floats(second)) > tol:
            return False
        return all(
            _check_point(p, case.zeta, case.b_mat, tol) for p in family.points
        )
    par = family.parametrization
    if par is None:
        return False
    positives = _sample_parameters(par.positive_samples, n_samples)
    for s in positives:
        for signed in (s, -s):
            j = par.matrix(signed)
            if not _check_point(j, case.zeta, case.b_mat, tol):
                return False
        plus = par.matrix(s)
        minus = par.matrix(-s)
        if j_neg(plus) != minus:
            return False
        if not (
            par.branch_coordinate(plus) > 0 and par.branch_coordinate(minus) < 0
        ):
            return False
    return True


def family_residual(
    family: SolutionFamily, case: ZetaBCase, n_samples: int = 20
) -> float:
    """Largest floating-point residual of the three equations over samples."""
    mats: List[JMat] = list(family.points)
    if family.parametrization is not None:
        par = family.parametrization
        for s in _sample_parameters(par.positive_samples, n_samples):
            mats.append(par.matrix(s))
            mats.append(par.matrix(-s))
    z = case.zeta.rows()
    bm = case.b_mat.rows()
    minus_ident = ((-1, 0), (0, -1))
    worst = 0.0
    for j in mats:
        jj = j_floats(j)
        worst = max(
            worst,
            _residual(_mat_mul(jj, jj), minus_ident),
            _residual(
                _mat_mul(z, _mat_mul(jj, z)),
                tuple(tuple(-e for e in row) for row in jj),
            ),
            _residual(_mat_mul(bm, jj), _mat_mul(jj, bm)),
        )
    return worst


def case_summary(
    case: ZetaBCase,
    n_samples: int = 100,
    tol: float = 1e-12,
    family: Optional[SolutionFamily] = None,
) -> Dict[str, object]:
    """A JSON-friendly description of a case and its solution family."""
    if family is None:
        family = solve_j(case)
    data: Dict[str, object] = {
        "zeta": list(case.zeta.rows()),
        "b": list(case.b_mat.rows()),
        "relation": case.relation,
        "kind": family.kind,
    }
    if family.kind == "TwoIsolatedPoints":
        data["points"] = [
            [[str(e) for e in row] for row in point] for point in family.points
        ]
    if family.kind == "OneParamTwoBranches":
        data["shape"] = family.parametrization.shape
        data["samples"] = [str(s) for s in family.parametrization.positive_samples]
    data["residual"] = family_residual(family, case)
    data["verified"] = verify_family(family, case, n_samples=n_samples, tol=tol)
    return data

"""Exact rational and integer linear algebra in rank 2.

Everything downstream (torus maps, group closures, fixed loci) reduces to
arithmetic with 2x2 integer matrices and rational 2-vectors taken modulo the
integer lattice.  This module supplies those primitives: reduced rationals,
matrices, Smith normal form, and the solver for affine congruences

    L * x + b  in  Z^2,    x in (Q/Z)^2,

whose solution sets are finite unions of points, parallel circles, or the
whole torus.  All arithmetic is exact; no floats appear anywhere here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Tuple, Union

# Rational scalars are stdlib Fractions: always in lowest terms, positive
# denominator, exact arithmetic.
Rational = Fraction

RationalLike = Union[int, str, Fraction]


def frac(value: RationalLike) -> Fraction:
    """Coerce ints, "p/q" strings and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def mod1(value: RationalLike) -> Fraction:
    """Reduce a rational to the canonical residue in [0, 1)."""
    f = frac(value)
    return f - (f.numerator // f.denominator)


@dataclass(frozen=True)
class RatVec2:
    """A rational 2-vector; used both for torus points and translation parts."""

    x: Fraction
    y: Fraction

    def __init__(self, x: RationalLike, y: RationalLike) -> None:
        object.__setattr__(self, "x", frac(x))
        object.__setattr__(self, "y", frac(y))

    def __add__(self, other: "RatVec2") -> "RatVec2":
        return RatVec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "RatVec2") -> "RatVec2":
        return RatVec2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "RatVec2":
        return RatVec2(-self.x, -self.y)

    def mod1(self) -> "RatVec2":
        return RatVec2(mod1(self.x), mod1(self.y))

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def scale(self, k: RationalLike) -> "RatVec2":
        f = frac(k)
        return RatVec2(self.x * f, self.y * f)

    def dot_int(self, n: Tuple[int, int]) -> Fraction:
        return self.x * n[0] + self.y * n[1]

    def sort_key(self) -> Tuple[Fraction, Fraction]:
        return (self.x, self.y)

    def as_strings(self) -> Tuple[str, str]:
        return (str(self.x), str(self.y))


ZERO_VEC = RatVec2(0, 0)


@dataclass(frozen=True)
class IntMat2:
    """A 2x2 integer matrix [[a, b], [c, d]], row-major."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        for entry in (self.a, self.b, self.c, self.d):
            if not isinstance(entry, int):
                raise TypeError(f"IntMat2 entries must be int, got {entry!r}")

    @classmethod
    def identity(cls) -> "IntMat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def zero(cls) -> "IntMat2":
        return cls(0, 0, 0, 0)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def is_identity(self) -> bool:
        return self == IntMat2.identity()

    def is_zero(self) -> bool:
        return self.a == self.b == self.c == self.d == 0

    def is_unimodular(self) -> bool:
        return self.det() in (1, -1)

    def mul(self, other: "IntMat2") -> "IntMat2":
        return IntMat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __matmul__(self, other: "IntMat2") -> "IntMat2":
        return self.mul(other)

    def __neg__(self) -> "IntMat2":
        return IntMat2(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other: "IntMat2") -> "IntMat2":
        return IntMat2(self.a + other.a, self.b + other.b,
                       self.c + other.c, self.d + other.d)

    def __sub__(self, other: "IntMat2") -> "IntMat2":
        return IntMat2(self.a - other.a, self.b - other.b,
                       self.c - other.c, self.d - other.d)

    def apply(self, v: RatVec2) -> RatVec2:
        return RatVec2(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def apply_int(self, v: Tuple[int, int]) -> Tuple[int, int]:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])

    def inverse(self) -> "IntMat2":
        """Inverse of a unimodular matrix (the only invertible case over Z)."""
        det = self.det()
        if det not in (1, -1):
            raise ValueError(f"matrix with det {det} has no integer inverse")
        return IntMat2(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def power(self, n: int) -> "IntMat2":
        if n < 0:
            return self.inverse().power(-n)
        result = IntMat2.identity()
        base = self
        while n:
            if n & 1:
                result = result.mul(base)
            base = base.mul(base)
            n >>= 1
        return result

    def entries(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def rows(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))


@dataclass(frozen=True)
class SnfDecomposition:
    """Smith normal form data: U * L * V = D with unimodular U, V.

    D is diagonal with nonnegative entries, zeros last, and d1 | d2 whenever
    both are nonzero.  This canonical form is unique, which keeps golden
    tests stable.
    """

    U: IntMat2
    D: IntMat2
    V: IntMat2

    @property
    def d1(self) -> int:
        return self.D.a

    @property
    def d2(self) -> int:
        return self.D.d


# Elementary matrices used while reducing to Smith form.
_SWAP = IntMat2(0, 1, 1, 0)
_NEG_FIRST = IntMat2(-1, 0, 0, 1)
_NEG_SECOND = IntMat2(1, 0, 0, -1)


def _add_multiple_row(k: int, src: int, dst: int) -> IntMat2:
    """Elementary matrix adding k times row `src` to row `dst` (left action)."""
    m = [[1, 0], [0, 1]]
    m[dst][src] = k
    return IntMat2(m[0][0], m[0][1], m[1][0], m[1][1])


def smith_normal_form(L: IntMat2) -> SnfDecomposition:
    """Compute the Smith normal form of a 2x2 integer matrix.

    Returns U, D, V with U * L * V = D, |det U| = |det V| = 1, D diagonal,
    d1, d2 >= 0, zeros last, and d1 | d2 when both entries are nonzero.
    The input may be singular or zero.  Output is deterministic.
    """
    A = L
    U = IntMat2.identity()
    V = IntMat2.identity()

    def row_op(E: IntMat2) -> None:
        nonlocal A, U
        A = E.mul(A)
        U = E.mul(U)

    def col_op(E: IntMat2) -> None:
        nonlocal A, V
        A = A.mul(E)
        V = V.mul(E)

    # Reduce until the matrix is diagonal with a01 = a10 = 0 and a00 | a11.
    while not A.is_zero():
        # Move an entry of minimal nonzero absolute value to position (0, 0).
        entries = A.entries()
        nonzero = [(abs(e), i) for i, e in enumerate(entries) if e != 0]
        _, idx = min(nonzero)
        if idx in (2, 3):
            row_op(_SWAP)
            idx -= 2
        if idx == 1:
            col_op(_SWAP)

        pivot = A.a
        # Clear the rest of the first column and first row against the pivot.
        if A.c % pivot == 0 and A.b % pivot == 0:
            row_op(_add_multiple_row(-(A.c // pivot), 0, 1))
            col_op(IntMat2(1, -(A.b // pivot), 0, 1))
            if A.d % A.a == 0:
                break
            # Pivot does not divide the remaining corner: mix it back in.
            row_op(_add_multiple_row(1, 1, 0))
        else:
            # Partial division steps shrink the off-pivot entries.
            if A.c % pivot != 0:
                row_op(_add_multiple_row(-(A.c // pivot), 0, 1))
            if A.b % pivot != 0:
                col_op(IntMat2(1, -(A.b // pivot), 0, 1))

    # Normalize signs so the diagonal is nonnegative.
    if A.a < 0:
        row_op(_NEG_FIRST)
    if A.d < 0:
        row_op(_NEG_SECOND)
    # Zeros last: only possible offender is d1 = 0 with d2 != 0.
    if A.a == 0 and A.d != 0:
        row_op(_SWAP)
        col_op(_SWAP)

    return SnfDecomposition(U=U, D=A, V=V)


@dataclass(frozen=True)
class CongruenceSolution:
    """The solution set of L * x + b in Z^2 over the rational torus.

    solvable        whether any solution exists
    dimension       0 for isolated points, 1 for circles, 2 for the full torus
    component_count number of connected components (0 when unsolvable)
    base_points     one canonical point per component, reduced to [0,1)^2
    direction       primitive integer direction shared by all circles
                    (dimension 1 only)
    """

    solvable: bool
    dimension: int
    component_count: int
    base_points: Tuple[RatVec2, ...]
    direction: Optional[Tuple[int, int]]

    @classmethod
    def empty(cls) -> "CongruenceSolution":
        return cls(False, 0, 0, (), None)


def primitive_direction(v: RatVec2) -> Tuple[int, int]:
    """The coprime integer vector parallel to v, first nonzero entry positive.

    Rejects the zero vector.
    """
    if v.is_zero():
        raise ValueError("zero vector has no direction")
    scale = v.x.denominator * v.y.denominator // gcd(v.x.denominator, v.y.denominator)
    ix, iy = int(v.x * scale), int(v.y * scale)
    g = gcd(ix, iy)
    ix, iy = ix // g, iy // g
    if ix < 0 or (ix == 0 and iy < 0):
        ix, iy = -ix, -iy
    return (ix, iy)


def normalize_int_direction(d: Tuple[int, int]) -> Tuple[int, int]:
    """Sign-normalize an integer vector and strip common factors."""
    return primitive_direction(RatVec2(d[0], d[1]))


def _residues(d: int, c: Fraction) -> list[Fraction]:
    """All y in [0,1) with d*y + c in Z, for d != 0; there are |d| of them."""
    d = abs(d)
    return sorted(mod1((Fraction(m) - c) / d) for m in range(d))


def solve_affine_congruence(L: IntMat2, b: RatVec2) -> CongruenceSolution:
    """Solve { x in (Q/Z)^2 : L*x + b in Z^2 } exactly.

    Strategy: with U*L*V = D the system decouples in the coordinates
    y = V^-1 * x into d_i * y_i + c_i in Z where c = U*b.  A zero d_i with
    non-integral c_i makes the system unsolvable; otherwise each nonzero d_i
    contributes |d_i| residues and each zero d_i a free circle coordinate.
    Components: product of the nonzero d_i.  Base points come out sorted for
    determinism.
    """
    snf = smith_normal_form(L)
    c = snf.U.apply(b)
    d1, d2 = snf.d1, snf.d2

    # Zeros sit last, so the free coordinates (if any) are the trailing ones.
    if d2 == 0 and c.y.denominator != 1:
        return CongruenceSolution.empty()
    if d1 == 0 and c.x.denominator != 1:
        return CongruenceSolution.empty()

    if d1 == 0:
        # L is the zero matrix and b is integral: every torus point solves.
        return CongruenceSolution(
            solvable=True, dimension=2, component_count=1,
            base_points=(ZERO_VEC,), direction=None,
        )

    y1_residues = _residues(d1, c.x)
    if d2 != 0:
        y2_residues = _residues(d2, c.y)
        points = sorted(
            (snf.V.apply(RatVec2(y1, y2)).mod1() for y1 in y1_residues for y2 in y2_residues),
            key=RatVec2.sort_key,
        )
        return CongruenceSolution(
            solvable=True, dimension=0, component_count=d1 * d2,
            base_points=tuple(points), direction=None,
        )

    # One free coordinate: parallel circles along the second column of V.
    direction = normalize_int_direction((snf.V.b, snf.V.d))
    points = sorted(
        (snf.V.apply(RatVec2(y1, 0)).mod1() for y1 in y1_residues),
        key=RatVec2.sort_key,
    )
    return CongruenceSolution(
        solvable=True, dimension=1, component_count=d1,
        base_points=tuple(points), direction=direction,
    )


def matrix_order(M: IntMat2) -> Optional[int]:
    """Least n >= 1 with M^n = I, or None for infinite order.

    Finite orders in GL(2, Z) are 1, 2, 3, 4 and 6, so checking n <= 12 is
    conclusive.
    """
    power = M
    for n in range(1, 13):
        if power.is_identity():
            return n
        power = power.mul(M)
    return None

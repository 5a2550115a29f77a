"""The q^0 layer of Borcherds products.

A QZeroData object stores the principal part and q^0 Fourier coefficients
f(n, l) of a weight-0, index-1 input form over a positive definite lattice.
From it we compute the Weyl vector (A, B, C), solve for the weight via the
linear relation A = C + 1, evaluate divisor multiplicities, and extract the
character datum of the (tau, omega)-swap involution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Iterable, Mapping, NamedTuple, Sequence

from . import linalg
from .lattice import AmbientVector, Lattice
from .roots import DualRoot, sum_rule_constant


class CoefficientConflictError(ValueError):
    pass


class SymbolicWeightError(ValueError):
    pass


Coords = tuple[Q, ...]


def _normalize_coords(coords) -> Coords:
    return tuple(Q(x) for x in coords)


def is_positive_direction(coords: Sequence) -> bool:
    """Lexicographic ordering on dual vectors: first nonzero coordinate > 0."""
    for x in coords:
        if x != 0:
            return x > 0
    return False


class QZeroData:
    """Principal part plus q^0 coefficients of a product input.

    Exactly one negative-index entry is admitted, f(-1, 0) = 1; other
    principal parts are rejected because the weight relation solved here is
    specific to that shape.  ``k`` is half of f(0, 0) and may be None while
    still symbolic.
    """

    __slots__ = ("lattice", "k", "_map")

    def __init__(
        self,
        lattice: Lattice,
        entries: Mapping[tuple[int, Sequence], int],
        k: Q | int | None = None,
    ):
        self.lattice = lattice
        self.k = None if k is None else Q(k)
        table: dict[tuple[int, Coords], int] = {}
        zero = tuple(Q(0) for _ in range(lattice.rank))
        for (n, coords), value in entries.items():
            coords = _normalize_coords(coords)
            if len(coords) != lattice.rank:
                raise ValueError("coefficient vector has wrong length")
            if value == 0:
                continue
            if not isinstance(value, int):
                raise ValueError("coefficients must be integers")
            if n > 0:
                raise ValueError("q^0 data stores indices n <= 0 only")
            if n < 0 and (n != -1 or coords != zero or value != 1):
                raise ValueError(
                    "principal part must be exactly f(-1, 0) = 1"
                )
            if n == 0 and coords == zero:
                raise ValueError("f(0, 0) is carried by k, not by the table")
            if not lattice.in_dual(coords):
                raise ValueError(f"vector {coords} does not pair integrally")
            key = (n, coords)
            if key in table and table[key] != value:
                raise CoefficientConflictError(f"conflicting values at {key}")
            table[key] = value
        if (-1, zero) not in table:
            raise ValueError("missing principal part f(-1, 0) = 1")
        for (n, coords), value in table.items():
            neg = (n, tuple(-x for x in coords))
            if table.get(neg) != value:
                raise ValueError(
                    f"coefficients are not even in l: f{(n, coords)} has no partner"
                )
        self._map = table

    @property
    def zero_coords(self) -> Coords:
        return tuple(Q(0) for _ in range(self.lattice.rank))

    def f(self, n: int, coords) -> int:
        """Stored coefficient, with absent entries read as zero."""
        coords = _normalize_coords(coords)
        if n == 0 and coords == self.zero_coords:
            if self.k is None:
                raise SymbolicWeightError("f(0,0) = 2k is symbolic")
            two_k = 2 * self.k
            if two_k.denominator != 1:
                raise ValueError("f(0,0) must be an integer")
            return int(two_k)
        return self._map.get((n, coords), 0)

    def q0_entries(self) -> list[tuple[Coords, int]]:
        """The (l, f(0, l)) pairs with l nonzero, sorted."""
        out = [(c, v) for (n, c), v in self._map.items() if n == 0]
        out.sort()
        return out

    def coefficient_table(self) -> dict[tuple[int, Coords], int]:
        """Copy of the stored table including f(0,0) when known."""
        table = dict(self._map)
        if self.k is not None:
            two_k = 2 * self.k
            if two_k.denominator != 1:
                raise ValueError("f(0,0) must be an integer")
            if two_k:
                table[(0, self.zero_coords)] = int(two_k)
        return table

    def with_weight(self, k: Q | int) -> "QZeroData":
        entries = {key: val for key, val in self._map.items()}
        return QZeroData(self.lattice, entries, k)

    def __eq__(self, other):
        return (
            isinstance(other, QZeroData)
            and self.lattice.gram == other.lattice.gram
            and self.k == other.k
            and self._map == other._map
        )

    def __repr__(self):
        return f"QZeroData({self.lattice!r}, {len(self._map)} entries, k={self.k})"


def qzero_from_dual_sets(
    lattice: Lattice,
    dual_sets: Iterable[Sequence[DualRoot]],
    k: Q | int | None = None,
) -> QZeroData:
    """Assemble q^0 coefficients from dual root sets.

    Membership gives f(0, x) = 1 except where x already appears as twice
    another member; a member x whose half pairs integrally but supports no
    mirror acquires the compensating f(0, x/2) = -1.
    """
    members: set[Coords] = set()
    half_flags: dict[Coords, bool] = {}
    for ds in dual_sets:
        for dr in ds:
            coords = _normalize_coords(dr.coords)
            if coords in half_flags and half_flags[coords] != dr.half_in_dual:
                raise CoefficientConflictError(
                    f"inconsistent duality flags for {coords}"
                )
            members.add(coords)
            half_flags[coords] = dr.half_in_dual
    contributions: dict[Coords, int] = {}
    for x in members:
        half = tuple(v / 2 for v in x)
        double = tuple(2 * v for v in x)
        if half_flags[x]:
            contributions[x] = contributions.get(x, 0) + 1
            if half not in members:
                if contributions.get(half, 0) > 0:
                    raise CoefficientConflictError(f"conflict at {half}")
                contributions[half] = contributions.get(half, 0) - 1
        elif double not in members:
            contributions[x] = contributions.get(x, 0) + 1
    entries: dict[tuple[int, Coords], int] = {
        (0, coords): value for coords, value in contributions.items() if value
    }
    zero = tuple(Q(0) for _ in range(lattice.rank))
    entries[(-1, zero)] = 1
    return QZeroData(lattice, entries, k)


@dataclass(frozen=True)
class WeylVector:
    a: Q
    b: tuple[Q, ...]
    c: Q


def weyl_vector(phi: QZeroData) -> WeylVector:
    """Exact (A, B, C) of the product with input phi."""
    if phi.k is None:
        raise SymbolicWeightError("Weyl vector needs a numeric f(0,0); solve k first")
    entries = phi.q0_entries()
    total = sum(v for _, v in entries) + 2 * phi.k
    a = Q(total, 24)
    b = [Q(0)] * phi.lattice.rank
    for coords, value in entries:
        if is_positive_direction(coords):
            for i, x in enumerate(coords):
                b[i] += Q(value, 2) * x
    c = sum(value * phi.lattice.norm(coords) for coords, value in entries)
    c = Q(c, 2 * phi.lattice.rank)
    return WeylVector(a, tuple(b), c)


@dataclass(frozen=True)
class SumRuleReport:
    """Result of testing sum f(0,l) (l,z)^2 = 2C (z,z) over the whole lattice."""

    c: Q | None
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.c is not None


def quadratic_weyl_constant(phi: QZeroData) -> SumRuleReport:
    """Evaluate the quadratic sum rule for the q^0 coefficients.

    Returns the constant C when the weighted rank-one sum is an exact
    multiple of the Gram matrix, and a diagnostic report otherwise (for
    instance when the support does not span the lattice).
    """
    entries = phi.q0_entries()
    if not entries:
        return SumRuleReport(None, "no nonzero q^0 coefficients")
    gram = phi.lattice.gram
    n = phi.lattice.rank
    s = [[Q(0)] * n for _ in range(n)]
    for coords, value in entries:
        gv = linalg.mat_vec(gram, coords)
        for i in range(n):
            if gv[i]:
                for j in range(n):
                    s[i][j] += value * gv[i] * gv[j]
    frozen = linalg.freeze(s)
    c = None
    for i in range(n):
        for j in range(n):
            if gram[i][j] == 0:
                if frozen[i][j] != 0:
                    return SumRuleReport(None, "left side is not a Gram multiple")
                continue
            ratio = Q(frozen[i][j], gram[i][j]) if isinstance(frozen[i][j], int) else frozen[i][j] / gram[i][j]
            if c is None:
                c = ratio
            elif c != ratio:
                rk = linalg.rank(frozen)
                return SumRuleReport(
                    None,
                    f"left side has rank {rk} and is not proportional to the Gram matrix",
                )
    if c is None:
        return SumRuleReport(None, "empty Gram matrix")
    return SumRuleReport(c / 2)


def solve_weight(phi: QZeroData) -> Q:
    """Solve (sum f(0,l) + 2k)/24 - 1 = C for k, with C from the sum rule."""
    report = quadratic_weyl_constant(phi)
    if not report.ok:
        raise ValueError(f"sum rule failed: {report.reason}")
    total = sum(v for _, v in phi.q0_entries())
    return (24 * (report.c + 1) - total) / 2


class MultiplicityResult(NamedTuple):
    value: int
    complete: bool


def divisor_multiplicity(phi: QZeroData, v: AmbientVector) -> MultiplicityResult:
    """Multiplicity of the rational quadratic divisor of a primitive vector.

    Sums f(m^2 n, m l) over positive integers m.  Absent coefficients are
    read as zero; when the sum would need coefficients with positive first
    index (outside the stored layer), the result is flagged incomplete.
    """
    lat = phi.lattice
    if v.lattice.gram != lat.gram:
        raise ValueError("vector lives over a different lattice")
    ell = _normalize_coords(v.l)
    if not lat.in_dual(ell):
        raise ValueError("vector is not in the dual ambient lattice")
    u_parts = [v.e1, v.e2, v.f2, v.f1]
    if any(Q(x).denominator != 1 for x in u_parts):
        raise ValueError("hyperbolic coordinates must be integral")
    pair_ints = [int(x) for x in lat.gram_times(ell)]
    g = linalg.vec_gcd([int(x) for x in u_parts] + pair_ints)
    if g != 1:
        raise ValueError("vector is not primitive in the dual ambient lattice")
    norm = v.norm()
    if norm >= 0:
        raise ValueError("divisor multiplicity needs negative norm")
    two_n = norm + lat.norm(ell)
    if two_n.denominator != 1 or int(two_n) % 2:
        raise ValueError("vector has no integral hyperbolic index")
    n = int(two_n) // 2
    if n > 0:
        return MultiplicityResult(0, False)
    total = 0
    if n < 0:
        # stored principal part is f(-1, 0) alone
        m = 1
        while m * m * (-n) <= 1:
            total += phi.f(m * m * n, tuple(m * x for x in ell))
            m += 1
        return MultiplicityResult(total, True)
    # n == 0: finitely many multiples of l can hit the stored support
    max_norm = Q(0)
    for coords, _ in phi.q0_entries():
        max_norm = max(max_norm, lat.norm(coords))
    ell_norm = lat.norm(ell)
    m = 1
    while m * m * ell_norm <= max_norm:
        total += phi.f(0, tuple(m * x for x in ell))
        m += 1
    return MultiplicityResult(total, True)


def sigma0(n: int) -> int:
    """Number of positive divisors."""
    if n <= 0:
        raise ValueError("sigma0 is defined for positive integers")
    count = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            count += 1 if d * d == n else 2
        d += 1
    return count


def character_data_from_map(principal: Mapping[int, int]) -> tuple[int, int]:
    """(D, sign) from a map n -> f(n, 0) over n < 0: D = sum sigma0(-n) f(n,0)."""
    d = sum(sigma0(-n) * f for n, f in principal.items() if n < 0 and f)
    return d, (-1) ** d


def character_data(phi: QZeroData) -> tuple[int, int]:
    """Character datum of the (tau, omega) swap: D and the sign (-1)^D."""
    zero = phi.zero_coords
    principal = {n: v for (n, c), v in phi._map.items() if n < 0 and c == zero}
    return character_data_from_map(principal)


@dataclass(frozen=True)
class DivisorLabel:
    """Discriminant label (lambda, m) of a reflective divisor."""

    lam: tuple[Q, ...]
    m: Q

    def __post_init__(self):
        if self.m >= 0:
            raise ValueError("divisor label needs m < 0")


def divisor_label(v: AmbientVector) -> DivisorLabel:
    """Heegner label of a reflective vector: lambda = v/div mod 1, m = norm/2."""
    from .lattice import is_reflective

    flag, _ = is_reflective(v)
    if not flag:
        raise ValueError("vector is not reflective")
    dv = v.div()
    scaled = tuple(Q(x, dv) for x in v.coords())
    reduced = tuple(x - (x.numerator // x.denominator) for x in scaled)
    m = v.norm() / Q(2 * dv * dv)
    return DivisorLabel(reduced, m)

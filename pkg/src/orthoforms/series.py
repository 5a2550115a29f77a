"""Sparse exact truncated Fourier expansions in (q, zeta-vector, xi).

A series is a rational monomial prefactor q^A zeta^B xi^C times a sparse
map from exponent triples (a, l, t) to nonzero rational coefficients,
together with an exactness rectangle (a_max, t_max): every term with
a <= a_max and t <= t_max is guaranteed present.  Exponents a may go
negative (the product expansion's principal-part factors demand it); the
zeta block is a rational vector of fixed length.

All arithmetic is exact; there is no floating point and no evaluation at
complex points anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Q
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Sequence

from .weyl import WeylVector, is_positive_direction

DEFAULT_DEN = 24
DEFAULT_TERM_CAP = 200_000

Key = tuple[Q, tuple[Q, ...], Q]


class SeriesOverflowError(RuntimeError):
    pass


class ZeroSeriesError(ValueError):
    """Raised where a leading order is requested of a series with no terms."""


@dataclass(frozen=True)
class Monomial:
    a: Q
    b: tuple[Q, ...]
    c: Q

    @staticmethod
    def zero(rank: int) -> "Monomial":
        return Monomial(Q(0), tuple(Q(0) for _ in range(rank)), Q(0))


def _q(x) -> Q:
    return x if isinstance(x, Q) else Q(x)


class TruncatedSeries:
    """Immutable sparse series over an exactness rectangle."""

    __slots__ = ("rank", "den", "prefactor", "terms", "rect")

    def __init__(
        self,
        rank: int,
        terms: Mapping[Key, Q] | Iterable[tuple[Key, Q]],
        rect: tuple[Q, Q],
        prefactor: Monomial | None = None,
        den: int = DEFAULT_DEN,
    ):
        if prefactor is None:
            prefactor = Monomial.zero(rank)
        if len(prefactor.b) != rank:
            raise ValueError("prefactor zeta block has wrong length")
        a_max, t_max = _q(rect[0]), _q(rect[1])
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Key, Q] = {}
        for (a, l, t), coeff in items:
            coeff = _q(coeff)
            if coeff == 0:
                continue
            a, t = _q(a), _q(t)
            l = tuple(_q(x) for x in l)
            if len(l) != rank:
                raise ValueError("term zeta exponent has wrong length")
            if den % a.denominator or den % t.denominator:
                raise ValueError(
                    f"exponent denominator of ({a}, {t}) does not divide {den}"
                )
            if a > a_max or t > t_max:
                continue
            clean[(a, l, t)] = coeff
        self.rank = rank
        self.den = den
        self.prefactor = prefactor
        self.terms = MappingProxyType(clean)
        self.rect = (a_max, t_max)

    # -- value semantics ----------------------------------------------------

    def absolute_terms(self) -> dict[Key, Q]:
        p = self.prefactor
        return {
            (a + p.a, tuple(x + y for x, y in zip(l, p.b)), t + p.c): c
            for (a, l, t), c in self.terms.items()
        }

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.rank == other.rank
            and self.absolute_terms() == other.absolute_terms()
        )

    def __hash__(self):
        return hash((self.rank, frozenset(self.absolute_terms().items())))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def floors(self) -> tuple[Q, Q]:
        if not self.terms:
            return Q(0), Q(0)
        return (
            min(a for (a, _, _) in self.terms),
            min(t for (_, _, t) in self.terms),
        )

    def __repr__(self):
        return (
            f"TruncatedSeries(rank={self.rank}, {len(self.terms)} terms, "
            f"rect=({self.rect[0]},{self.rect[1]}))"
        )

    # -- ring operations ----------------------------------------------------

    def _check_compatible(self, other: "TruncatedSeries"):
        if self.rank != other.rank:
            raise ValueError("series rank mismatch")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        den = math.lcm(self.den, other.den)
        pa = min(self.prefactor.a, other.prefactor.a)
        pc = min(self.prefactor.c, other.prefactor.c)
        pb = self.prefactor.b
        common = Monomial(pa, pb, pc)
        merged: dict[Key, Q] = {}
        for series in (self, other):
            da = series.prefactor.a - pa
            dc = series.prefactor.c - pc
            db = tuple(x - y for x, y in zip(series.prefactor.b, pb))
            for (a, l, t), c in series.terms.items():
                key = (a + da, tuple(x + y for x, y in zip(l, db)), t + dc)
                merged[key] = merged.get(key, Q(0)) + c
        ra = min(self.prefactor.a + self.rect[0], other.prefactor.a + other.rect[0]) - pa
        rt = min(self.prefactor.c + self.rect[1], other.prefactor.c + other.rect[1]) - pc
        return TruncatedSeries(self.rank, merged, (ra, rt), common, den)

    def __neg__(self):
        return self.scale(Q(-1))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor) -> "TruncatedSeries":
        factor = _q(factor)
        return TruncatedSeries(
            self.rank,
            {k: c * factor for k, c in self.terms.items()},
            self.rect,
            self.prefactor,
            self.den,
        )

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_compatible(other)
        den = math.lcm(self.den, other.den)
        pref = Monomial(
            self.prefactor.a + other.prefactor.a,
            tuple(x + y for x, y in zip(self.prefactor.b, other.prefactor.b)),
            self.prefactor.c + other.prefactor.c,
        )
        if self.is_zero or other.is_zero:
            rect = (min(self.rect[0], other.rect[0]), min(self.rect[1], other.rect[1]))
            return TruncatedSeries(self.rank, {}, rect, pref, den)
        # a product term at exponent a needs one factor known up to a minus
        # the other factor's lowest exponent, so rectangles shift by floors
        fa1, ft1 = self.floors()
        fa2, ft2 = other.floors()
        ra = min(self.rect[0] + fa2, other.rect[0] + fa1)
        rt = min(self.rect[1] + ft2, other.rect[1] + ft1)
        out: dict[Key, Q] = {}
        for (a1, l1, t1), c1 in self.terms.items():
            for (a2, l2, t2), c2 in other.terms.items():
                a, t = a1 + a2, t1 + t2
                if a > ra or t > rt:
                    continue
                key = (a, tuple(x + y for x, y in zip(l1, l2)), t)
                val = out.get(key)
                out[key] = c1 * c2 if val is None else val + c1 * c2
                if len(out) > DEFAULT_TERM_CAP:
                    raise SeriesOverflowError(
                        f"product exceeded {DEFAULT_TERM_CAP} stored terms"
                    )
        return TruncatedSeries(self.rank, out, (ra, rt), pref, den)

    # -- calculus -----------------------------------------------------------

    def derive(self, axis: str) -> "TruncatedSeries":
        """Normalized partial derivative: each term is scaled by its exponent.

        Axes are "tau", "z1".."z<rank>", "omega"; prefactor exponents take
        part through the product rule.  The 1/(2 pi i) normalization is
        implicit, keeping all coefficients rational.
        """
        p = self.prefactor
        if axis == "tau":
            mult = lambda a, l, t: p.a + a
        elif axis == "omega":
            mult = lambda a, l, t: p.c + t
        elif axis.startswith("z") and axis[1:].isdigit():
            i = int(axis[1:]) - 1
            if not 0 <= i < self.rank:
                raise ValueError(f"axis {axis!r} out of range for rank {self.rank}")
            mult = lambda a, l, t: p.b[i] + l[i]
        else:
            raise ValueError(f"invalid derivation axis {axis!r}")
        out = {
            key: c * mult(*key) for key, c in self.terms.items() if mult(*key) != 0
        }
        return TruncatedSeries(self.rank, out, self.rect, p, self.den)

    def leading_order(self) -> tuple[Q, Q]:
        """Minimal q-exponent and minimal xi-exponent, prefactor included."""
        if not self.terms:
            raise ZeroSeriesError("vanishes to rectangle order")
        p = self.prefactor
        return (
            min(a for (a, _, _) in self.terms) + p.a,
            min(t for (_, _, t) in self.terms) + p.c,
        )

    def invert(self) -> "TruncatedSeries":
        """Geometric-series inverse; the reduced constant term must be 1.

        Requires every other term to raise the q- or xi-exponent without
        lowering the other, so it refuses data with pure zeta terms on the
        boundary slice (those would need infinitely many terms at fixed
        (a, t)).
        """
        rank = self.rank
        zero_key = (Q(0), tuple(Q(0) for _ in range(rank)), Q(0))
        if self.terms.get(zero_key) != 1:
            raise ValueError("inversion requires reduced constant term 1")
        nilpotent = {k: c for k, c in self.terms.items() if k != zero_key}
        for a, _, t in nilpotent:
            if a < 0 or t < 0 or (a == 0 and t == 0):
                raise ValueError("inversion blocked by terms on the boundary slice")
        n = TruncatedSeries(rank, nilpotent, self.rect, den=self.den)
        acc = one(rank, self.rect, self.den)
        power = one(rank, self.rect, self.den)
        j = 0
        while True:
            # re-truncate to the original rectangle; the product rectangle
            # may grow with the power's floor, which would never terminate
            power = TruncatedSeries(rank, (power * n).terms, self.rect, den=self.den)
            j += 1
            if power.is_zero:
                break
            acc = acc + (power.scale(Q(-1)) if j % 2 else power)
        p = self.prefactor
        inv_pref = Monomial(-p.a, tuple(-x for x in p.b), -p.c)
        return TruncatedSeries(rank, acc.terms, self.rect, inv_pref, self.den)


def one(rank: int, rect, den: int = DEFAULT_DEN) -> TruncatedSeries:
    key = (Q(0), tuple(Q(0) for _ in range(rank)), Q(0))
    return TruncatedSeries(rank, {key: Q(1)}, rect, den=den)


def zero(rank: int, rect, den: int = DEFAULT_DEN) -> TruncatedSeries:
    return TruncatedSeries(rank, {}, rect, den=den)


def monomial(
    rank: int, rect, a, l, t, coeff=1, den: int = DEFAULT_DEN
) -> TruncatedSeries:
    key = (_q(a), tuple(_q(x) for x in l), _q(t))
    return TruncatedSeries(rank, {key: _q(coeff)}, rect, den=den)


class WeightedSeries(NamedTuple):
    series: TruncatedSeries
    weight: int


# ---------------------------------------------------------------------------
# product expansion
# ---------------------------------------------------------------------------


def _binomial_coefficient(exponent: int, j: int) -> int:
    """Coefficient of u^j in (1-u)^exponent, exact for any integer exponent."""
    if exponent >= 0:
        if j > exponent:
            return 0
        return (-1) ** j * math.comb(exponent, j)
    # generalized binomial: (-1)^j * C(exponent, j) with falling factorial
    num = 1
    for i in range(j):
        num *= exponent - i
    return (-1) ** j * num // math.factorial(j)


@dataclass(frozen=True)
class ProductFactor:
    n: int
    l: tuple[Q, ...]
    m: int
    exponent: int


def product_factors(
    coeffs: Mapping[tuple[int, tuple[Q, ...]], int],
    rect: tuple[Q, Q],
    rank: int,
) -> list[ProductFactor]:
    """Factors (n, l, m) > 0 with nonzero exponent f(nm, l) meeting the rectangle.

    The triple ordering means m > 0, or m = 0 and n > 0, or m = n = 0 and
    l < 0.  Absent coefficients are read as zero.  The q budget extends past
    a_max by the debt that principal-part factors with negative n can carry.
    """
    a_max, t_max = _q(rect[0]), _q(rect[1])
    support: dict[int, list[tuple[tuple[Q, ...], int]]] = {}
    for (n0, l), f in coeffs.items():
        if f:
            support.setdefault(n0, []).append((tuple(_q(x) for x in l), f))
    max_neg = max((-n0 for n0 in support if n0 < 0), default=0)
    n_hi = math.floor(a_max + t_max * max_neg)
    factors = []
    for l, f in support.get(0, []):
        if is_positive_direction(tuple(-x for x in l)):
            factors.append(ProductFactor(0, l, 0, f))  # m = n = 0, l < 0
        for n in range(1, n_hi + 1):
            factors.append(ProductFactor(n, l, 0, f))
        for m in range(1, math.floor(t_max) + 1):
            factors.append(ProductFactor(0, l, m, f))
    for m in range(1, math.floor(t_max) + 1):
        for n in range(-max_neg, n_hi + 1):
            if n == 0:
                continue
            for l, f in support.get(n * m, []):
                factors.append(ProductFactor(n, l, m, f))
    factors.sort(key=lambda fac: (fac.m, fac.n, fac.l))
    return factors


def expand_product(
    coeffs: Mapping[tuple[int, tuple[Q, ...]], int],
    weyl: WeylVector,
    rect: tuple[Q, Q],
    rank: int,
    den: int = DEFAULT_DEN,
    term_cap: int = DEFAULT_TERM_CAP,
) -> TruncatedSeries:
    """Expand q^A zeta^B xi^C prod (1 - q^n zeta^l xi^m)^{f(nm, l)} exactly.

    Binomial expansion of every factor to the order the rectangle needs.
    Factors with m = n = 0 must have positive exponents (otherwise the
    expansion is meromorphic along the toric boundary and is rejected), and
    their combined support is capped: overflow raises SeriesOverflowError.
    """
    a_max, t_max = _q(rect[0]), _q(rect[1])
    factors = product_factors(coeffs, rect, rank)
    boundary_budget = 1
    for fac in factors:
        if fac.m == 0 and fac.n == 0:
            if fac.exponent < 0:
                raise ValueError(
                    "negative exponent on a boundary factor: expansion is "
                    "meromorphic along the toric boundary"
                )
            boundary_budget *= fac.exponent + 1
            if boundary_budget > term_cap:
                raise SeriesOverflowError(
                    "the m = n = 0 factor block alone exceeds the term cap; "
                    "its expansion has at least "
                    f"{boundary_budget} zeta monomials"
                )
    max_neg = max((-f.n for f in factors if f.n < 0), default=0)
    debt_floor = -t_max * max_neg
    # factors with n < 0 go first: once they are in, every remaining factor
    # only raises the q-exponent, so truncation at a_max is sound
    factors.sort(key=lambda f: (f.n >= 0, f.m, f.n, f.l))
    acc: dict[Key, Q] = {(Q(0), tuple(Q(0) for _ in range(rank)), Q(0)): Q(1)}
    for fac in factors:
        poly = _factor_terms(fac, a_max, t_max, max_neg)
        new: dict[Key, Q] = {}
        for (a1, l1, t1), c1 in acc.items():
            for (a2, l2, t2), c2 in poly:
                a, t = a1 + a2, t1 + t2
                if a > a_max or t > t_max or a < debt_floor:
                    continue
                key = (a, tuple(x + y for x, y in zip(l1, l2)), t)
                val = new.get(key)
                new[key] = c1 * c2 if val is None else val + c1 * c2
        new = {k: v for k, v in new.items() if v}
        if len(new) > term_cap:
            raise SeriesOverflowError(
                f"expansion exceeded {term_cap} stored terms at factor {fac}"
            )
        acc = new
    pref = Monomial(_q(weyl.a), tuple(_q(x) for x in weyl.b), _q(weyl.c))
    return TruncatedSeries(rank, acc, (a_max, t_max), pref, den)


def _factor_terms(fac: ProductFactor, a_max: Q, t_max: Q, max_neg: int):
    """Terms of (1 - u)^exponent with u = q^n zeta^l xi^m, up to the budget."""
    if fac.m > 0:
        j_max = math.floor(t_max / fac.m)
    elif fac.n > 0:
        j_max = math.floor((a_max + t_max * max_neg) / fac.n)
    else:
        j_max = fac.exponent
    out = []
    for j in range(j_max + 1):
        coeff = _binomial_coefficient(fac.exponent, j)
        if coeff:
            out.append(
                (
                    (Q(j * fac.n), tuple(j * x for x in fac.l), Q(j * fac.m)),
                    Q(coeff),
                )
            )
    return out


def log_derivative_residual(
    coeffs: Mapping[tuple[int, tuple[Q, ...]], int],
    weyl: WeylVector,
    rect: tuple[Q, Q],
    rank: int,
    den: int = DEFAULT_DEN,
    term_cap: int = DEFAULT_TERM_CAP,
) -> TruncatedSeries:
    """Difference of the two sides of the logarithmic xi-derivative identity.

    With G0 the expanded product over the factors with n >= 0, the identity
    D_omega(G0)/G0 = C + sum f(nm,l) (-m) u/(1-u) is verified with
    denominators cleared:

        D_omega(G0) * P  ==  G0 * (C * P + sum_i f_i (-m_i) u_i * P_i)

    where P is the product of (1-u_i) over those factors with m > 0 and
    P_i = P/(1-u_i) is computed by an exact terminating geometric series.
    The factors with n < 0 contribute their definitional binomials and are
    covered by principal_block_residual instead; keeping them out of this
    identity keeps every exponent floor nonnegative, so the rectangle
    bookkeeping stays sharp.  The returned series is identically zero iff
    the identity holds on the rectangle.
    """
    a_max, t_max = _q(rect[0]), _q(rect[1])
    nonneg = {key: f for key, f in coeffs.items() if key[0] >= 0}
    g0 = expand_product(nonneg, weyl, rect, rank, den, term_cap)
    xi_factors = [f for f in product_factors(nonneg, rect, rank) if f.m > 0]
    p = one(rank, (a_max, t_max), den)
    for fac in xi_factors:
        p = p * _binomial_series(fac, rank, (a_max, t_max), den)
    rhs = p.scale(_q(weyl.c))
    for fac in xi_factors:
        u = monomial(rank, (a_max, t_max), fac.n, fac.l, fac.m, den=den)
        geo = zero(rank, (a_max, t_max), den)
        j = 0
        while j * fac.m <= t_max:
            geo = geo + monomial(
                rank, (a_max, t_max), j * fac.n, tuple(j * x for x in fac.l), j * fac.m, den=den
            )
            j += 1
        p_over = p * geo  # exact: (1-u) * geo = 1 - u^(j_max+1), beyond the rectangle
        rhs = rhs + (u * p_over).scale(Q(-fac.m * fac.exponent))
    lhs = g0.derive("omega") * p
    rhs = g0 * rhs
    return lhs - rhs


def principal_block_residual(
    coeffs: Mapping[tuple[int, tuple[Q, ...]], int],
    weyl: WeylVector,
    rect: tuple[Q, Q],
    rank: int,
    den: int = DEFAULT_DEN,
    term_cap: int = DEFAULT_TERM_CAP,
) -> TruncatedSeries:
    """Difference of the full expansion and (n >= 0 block) * (n < 0 block).

    The n < 0 factors are finite binomials, assembled here by a literal
    convolution, so this checks the debt handling of the full expansion on
    the largest rectangle both sides are exact on.
    """
    a_max, t_max = _q(rect[0]), _q(rect[1])
    g = expand_product(coeffs, weyl, rect, rank, den, term_cap)
    nonneg = {key: f for key, f in coeffs.items() if key[0] >= 0}
    g0 = expand_product(nonneg, weyl, rect, rank, den, term_cap)
    neg_factors = [f for f in product_factors(coeffs, rect, rank) if f.n < 0]
    max_neg = max((-f.n for f in neg_factors), default=0)
    block: dict[Key, Q] = {(Q(0), tuple(Q(0) for _ in range(rank)), Q(0)): Q(1)}
    for fac in neg_factors:
        poly = _factor_terms(fac, a_max, t_max, max_neg)
        new: dict[Key, Q] = {}
        for (a1, l1, t1), c1 in block.items():
            for (a2, l2, t2), c2 in poly:
                if t1 + t2 > t_max:
                    continue
                key = (a1 + a2, tuple(x + y for x, y in zip(l1, l2)), t1 + t2)
                new[key] = new.get(key, Q(0)) + c1 * c2
        block = {k: v for k, v in new.items() if v}
    b = TruncatedSeries(rank, block, (a_max, t_max), den=den)
    product = g0 * b
    cut = product.rect
    g_cut = TruncatedSeries(rank, g.terms, cut, g.prefactor, den)
    prod_cut = TruncatedSeries(rank, product.terms, cut, product.prefactor, den)
    return g_cut - prod_cut


def _binomial_series(fac: ProductFactor, rank: int, rect, den: int) -> TruncatedSeries:
    key0 = (Q(0), tuple(Q(0) for _ in range(rank)), Q(0))
    key1 = (Q(fac.n), fac.l, Q(fac.m))
    return TruncatedSeries(rank, {key0: Q(1), key1: Q(-1)}, rect, den=den)


# ---------------------------------------------------------------------------
# Jacobian determinants
# ---------------------------------------------------------------------------


def jacobian(forms: Sequence[WeightedSeries]) -> TruncatedSeries:
    """Determinant with first row k_i f_i and derivative rows below.

    For zeta-block rank s this takes exactly s + 3 forms (one per tube
    domain coordinate tau, z_1..z_s, omega, plus one): the matrix rows are
    the weighted forms, then the derivatives along tau, z_1..z_s, omega.
    """
    if not forms:
        raise ValueError("no forms given")
    s = forms[0].series.rank
    size = s + 3
    if len(forms) != size:
        raise ValueError(f"rank {s} needs exactly {size} forms, got {len(forms)}")
    if any(f.series.rank != s for f in forms):
        raise ValueError("series rank mismatch")
    rect = (
        min(f.series.rect[0] for f in forms),
        min(f.series.rect[1] for f in forms),
    )
    den = math.lcm(*(f.series.den for f in forms))
    axes = ["tau"] + [f"z{i}" for i in range(1, s + 1)] + ["omega"]
    rows = [[f.series.scale(f.weight) for f in forms]]
    for axis in axes:
        rows.append([f.series.derive(axis) for f in forms])
    return _det(rows, s, rect, den)


def _det(rows, rank, rect, den) -> TruncatedSeries:
    size = len(rows)
    memo: dict[tuple[int, tuple[int, ...]], TruncatedSeries] = {}

    def minor(i: int, cols: tuple[int, ...]) -> TruncatedSeries:
        if not cols:
            return one(rank, rect, den)
        key = (i, cols)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = zero(rank, rect, den)
        for pos, j in enumerate(cols):
            entry = rows[i][j]
            if entry.is_zero:
                continue
            sub = minor(i + 1, cols[:pos] + cols[pos + 1 :])
            term = entry * sub
            total = total + (term if pos % 2 == 0 else -term)
        memo[key] = total
        return total

    return minor(0, tuple(range(size)))


def syzygy_sum(forms: Sequence[WeightedSeries]) -> TruncatedSeries:
    """Alternating sum (-1)^t k_t f_t J_t over one extra form; identically zero.

    J_t is the Jacobian of all forms except the t-th (1-indexed), so for
    rank s this takes s + 4 forms.
    """
    if not forms:
        raise ValueError("no forms given")
    s = forms[0].series.rank
    if len(forms) != s + 4:
        raise ValueError(f"rank {s} syzygy needs exactly {s + 4} forms")
    total = None
    for idx, f in enumerate(forms):
        others = list(forms[:idx]) + list(forms[idx + 1 :])
        jt = jacobian(others)
        term = (f.series * jt).scale(f.weight)
        signed = -term if (idx + 1) % 2 else term
        total = signed if total is None else total + signed
    return total


# ---------------------------------------------------------------------------
# support classification
# ---------------------------------------------------------------------------


def jacobi_support_class(entries, lattice, index: int) -> str:
    """Support class of one Fourier-Jacobi slice: how 2nt - (l,l) behaves.

    Returns the strongest of "cusp", "holomorphic", "weak",
    "weakly-holomorphic" admitted by the listed (n, l) support.
    """
    cusp = holomorphic = weak = True
    for n, l in entries:
        hyper = 2 * n * index - lattice.norm(l)
        if hyper <= 0:
            cusp = False
        if hyper < 0:
            holomorphic = False
        if n < 0:
            weak = False
    if cusp:
        return "cusp"
    if holomorphic:
        return "holomorphic"
    if weak:
        return "weak"
    return "weakly-holomorphic"


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def q_str(x) -> str:
    x = _q(x)
    return f"{x.numerator}/{x.denominator}"


def parse_q(s: str) -> Q:
    return Q(s)


def series_to_json(x: TruncatedSeries) -> dict:
    terms = [
        {"a": q_str(a), "l": [q_str(v) for v in l], "t": q_str(t), "c": q_str(c)}
        for (a, l, t), c in sorted(x.terms.items())
    ]
    return {
        "rank": x.rank,
        "den": x.den,
        "prefactor": {
            "A": q_str(x.prefactor.a),
            "B": [q_str(v) for v in x.prefactor.b],
            "C": q_str(x.prefactor.c),
        },
        "terms": terms,
        "rect": [q_str(x.rect[0]), q_str(x.rect[1])],
    }


def series_from_json(doc: dict) -> TruncatedSeries:
    rank = int(doc["rank"])
    pref = doc.get("prefactor", {})
    prefactor = Monomial(
        parse_q(pref.get("A", "0/1")),
        tuple(parse_q(v) for v in pref.get("B", ["0/1"] * rank)),
        parse_q(pref.get("C", "0/1")),
    )
    terms = {}
    for item in doc.get("terms", []):
        key = (
            parse_q(item["a"]),
            tuple(parse_q(v) for v in item["l"]),
            parse_q(item["t"]),
        )
        terms[key] = parse_q(item["c"])
    rect = tuple(parse_q(v) for v in doc["rect"])
    return TruncatedSeries(rank, terms, rect, prefactor, int(doc.get("den", DEFAULT_DEN)))

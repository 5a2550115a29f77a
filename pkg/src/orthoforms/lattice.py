"""Even lattices with exact integer Gram matrices.

Vectors are plain coordinate tuples in the fixed basis of a lattice; dual
vectors carry Fraction coordinates in the same basis.  The ambient
hyperbolic extension 2U + L(-1) is modelled by AmbientVector, which applies
the sign twist structurally instead of storing negative Gram blocks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from . import linalg


class DegenerateLatticeError(ValueError):
    pass


class NotPositiveDefiniteError(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    """A nondegenerate integral lattice given by its Gram matrix."""

    gram: tuple[tuple[int, ...], ...]
    label: str | None = None

    def __post_init__(self):
        g = self.gram
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise ValueError("gram matrix must be square and nonempty")
        for i in range(n):
            for j in range(n):
                if not isinstance(g[i][j], int):
                    raise ValueError(f"gram entry ({i},{j}) is not an integer")
                if g[i][j] != g[j][i]:
                    raise ValueError(
                        f"gram matrix is not symmetric at entries ({i},{j}) and ({j},{i})"
                    )
        if _det_cached(g) == 0:
            raise DegenerateLatticeError("degenerate lattice")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def determinant(self) -> int:
        return _det_cached(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def is_positive_definite(self) -> bool:
        return linalg.is_positive_definite(self.gram)

    def pairing(self, u: Sequence, v: Sequence) -> Q:
        acc = 0
        for i, row in enumerate(self.gram):
            if u[i]:
                acc += u[i] * sum(x * y for x, y in zip(row, v))
        return acc

    def norm(self, v: Sequence) -> Q:
        return self.pairing(v, v)

    def gram_times(self, v: Sequence) -> tuple:
        return linalg.mat_vec(self.gram, v)

    def div(self, v: Sequence[int]) -> int:
        """Positive generator of the pairing ideal (v, L)."""
        if not any(v):
            raise ValueError("div of the zero vector is undefined")
        if any(not isinstance(x, int) for x in v):
            raise ValueError("div requires integral coordinates")
        return linalg.vec_gcd(self.gram_times(v))

    def dual_basis(self) -> tuple[tuple[Q, ...], ...]:
        """Rows are the dual basis vectors, in lattice-basis coordinates."""
        return _dual_cached(self.gram)

    def in_dual(self, v: Sequence) -> bool:
        """Whether a rational coordinate vector pairs integrally with the lattice."""
        return all(Q(x).denominator == 1 for x in self.gram_times(v))

    def __repr__(self):
        name = self.label or f"rank{self.rank}"
        return f"Lattice({name})"


@lru_cache(maxsize=None)
def _det_cached(gram) -> int:
    return linalg.det(gram)


@lru_cache(maxsize=None)
def _dual_cached(gram):
    return linalg.inverse(gram)


@dataclass(frozen=True)
class DiscriminantGroup:
    """Invariant factors of dual/lattice, with group order and level."""

    elementary_divisors: tuple[int, ...]
    order: int
    level: int

    def __str__(self):
        if not self.elementary_divisors:
            return "trivial"
        return " x ".join(f"Z/{d}" for d in self.elementary_divisors)


def discriminant_group(lat: Lattice) -> DiscriminantGroup:
    diag = linalg.smith_normal_form(lat.gram)
    divisors = tuple(d for d in diag if d > 1)
    order = 1
    for d in diag:
        order *= d
    if order != abs(lat.determinant):
        raise AssertionError("Smith form order disagrees with |det|")
    return DiscriminantGroup(divisors, order, _level(lat))


def _level(lat: Lattice) -> int:
    """Minimal N with N(x,x) in 2Z for all dual vectors x."""
    dual = lat.dual_basis()
    n0 = 1
    for row in dual:
        for x in row:
            n0 = n0 * x.denominator // gcd(n0, x.denominator)
    if any((n0 * dual[i][i]) % 2 for i in range(lat.rank)):
        return 2 * n0
    return n0


def rescale(lat: Lattice, a: int) -> Lattice:
    if a == 0:
        raise ValueError("rescaling by zero is not allowed")
    gram = tuple(tuple(a * x for x in row) for row in lat.gram)
    label = f"{lat.label}({a})" if lat.label else None
    return Lattice(gram, label)


def direct_sum(*lats: Lattice) -> Lattice:
    n = sum(l.rank for l in lats)
    gram = [[0] * n for _ in range(n)]
    offset = 0
    for l in lats:
        for i in range(l.rank):
            for j in range(l.rank):
                gram[offset + i][offset + j] = l.gram[i][j]
        offset += l.rank
    label = "+".join(l.label or "?" for l in lats)
    return Lattice(linalg.freeze(gram), label)


def short_vectors(lat: Lattice, max_norm: int) -> list[tuple[int, ...]]:
    """All nonzero vectors of norm <= max_norm, both signs, lex sorted."""
    if max_norm <= 0 or max_norm % 2:
        raise ValueError("max_norm must be a positive even integer")
    if lat.rank > 10:
        raise ValueError("short vector enumeration is limited to rank <= 10")
    try:
        return linalg.short_vectors_of_form(lat.gram, max_norm)
    except ArithmeticError as exc:
        raise NotPositiveDefiniteError(str(exc)) from exc


def reflect(lat: Lattice, x: Sequence, r: Sequence) -> tuple:
    """Reflection of x in the hyperplane orthogonal to r: x - 2(r,x)/(r,r) r."""
    rr = lat.norm(r)
    if rr == 0:
        raise ValueError("cannot reflect in an isotropic vector")
    factor = Q(2) * lat.pairing(r, x) / rr
    return tuple(Q(a) - factor * b for a, b in zip(x, r))


# ---------------------------------------------------------------------------
# built-in Gram matrices
# ---------------------------------------------------------------------------


def _a_gram(n):
    return tuple(
        tuple(2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n))
        for i in range(n)
    )


def _d_gram(n):
    # chain 0..n-2 with the extra node n-1 attached to n-3
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2
    for i in range(n - 2):
        g[i][i + 1] = g[i + 1][i] = -1
    g[n - 3][n - 1] = g[n - 1][n - 3] = -1
    return linalg.freeze(g)


def _e_gram(n):
    # nodes 0..n-1: chain 0-2-3-4-...-(n-1), with node 1 attached to node 3
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = 2
    edges = [(0, 2), (1, 3)] + [(i, i + 1) for i in range(2, n - 1)]
    for i, j in edges:
        g[i][j] = g[j][i] = -1
    return linalg.freeze(g)


def _nA1_gram(n):
    return tuple(tuple(2 if i == j else 0 for j in range(n)) for i in range(n))


def builtin_names() -> list[str]:
    names = [f"A{n}" for n in range(1, 9)]
    names += [f"D{n}" for n in range(4, 9)]
    names += ["E6", "E7", "E8"]
    names += [f"{k}A1" for k in range(2, 9)]
    return names


@lru_cache(maxsize=None)
def builtin_lattice(name: str) -> Lattice:
    """Look up a built-in lattice, optionally rescaled as in "A2(3)"."""
    base = name
    scale = 1
    if name.endswith(")") and "(" in name:
        base, rest = name.split("(", 1)
        scale = int(rest[:-1])
    if base.startswith("A") and base[1:].isdigit() and 1 <= int(base[1:]) <= 8:
        lat = Lattice(_a_gram(int(base[1:])), base)
    elif base.startswith("D") and base[1:].isdigit() and 4 <= int(base[1:]) <= 8:
        lat = Lattice(_d_gram(int(base[1:])), base)
    elif base in ("E6", "E7", "E8"):
        lat = Lattice(_e_gram(int(base[1])), base)
    elif base.endswith("A1") and base[:-2].isdigit() and 2 <= int(base[:-2]) <= 8:
        lat = Lattice(_nA1_gram(int(base[:-2])), base)
    else:
        raise KeyError(f"unknown built-in lattice {name!r}")
    return rescale(lat, scale) if scale != 1 else lat


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def lattice_to_json(lat: Lattice) -> dict:
    return {"label": lat.label, "gram": [list(row) for row in lat.gram]}


def lattice_from_json(doc: dict) -> Lattice:
    if not isinstance(doc, dict) or "gram" not in doc:
        raise ValueError("lattice document must contain a 'gram' field")
    gram = doc["gram"]
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise ValueError("'gram' must be a list of integer rows")
    frozen = linalg.freeze(gram)
    return Lattice(frozen, doc.get("label"))


def load_lattice(ref: str) -> Lattice:
    """Resolve "builtin:NAME" or a JSON file path to a Lattice."""
    if ref.startswith("builtin:"):
        return builtin_lattice(ref[len("builtin:"):])
    with open(ref) as fh:
        return lattice_from_json(json.load(fh))


# ---------------------------------------------------------------------------
# the ambient lattice 2U + L(-1)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AmbientVector:
    """Vector of 2U + L(-1) in the basis (e1, e2, L-part, f2, f1).

    The hyperbolic blocks satisfy (e_i, f_i) = 1 and the L block enters with
    its bilinear form negated.
    """

    lattice: Lattice
    e1: Q
    e2: Q
    l: tuple
    f2: Q
    f1: Q

    def coords(self) -> tuple:
        return (self.e1, self.e2) + tuple(self.l) + (self.f2, self.f1)

    def pairing(self, other: "AmbientVector") -> Q:
        if other.lattice.gram != self.lattice.gram:
            raise ValueError("ambient vectors live over different lattices")
        hyper = (
            self.e1 * other.f1
            + self.f1 * other.e1
            + self.e2 * other.f2
            + self.f2 * other.e2
        )
        return hyper - self.lattice.pairing(self.l, other.l)

    def norm(self) -> Q:
        return self.pairing(self)

    def is_primitive(self) -> bool:
        c = self.coords()
        if any(Q(x).denominator != 1 for x in c):
            return False
        return linalg.vec_gcd([int(x) for x in c]) == 1

    def basis_pairings(self) -> tuple:
        """Pairings with the ambient basis vectors, in basis order."""
        gl = self.lattice.gram_times(self.l)
        return (self.f1, self.f2) + tuple(-x for x in gl) + (self.e2, self.e1)

    def div(self) -> int:
        pairings = self.basis_pairings()
        if any(Q(x).denominator != 1 for x in pairings):
            raise ValueError("div is defined for integral vectors only")
        g = linalg.vec_gcd([int(x) for x in pairings])
        if g == 0:
            raise ValueError("div of the zero vector is undefined")
        return g


def ambient_gram(lat: Lattice) -> linalg.Mat:
    n = lat.rank
    size = n + 4
    g = [[0] * size for _ in range(size)]
    g[0][size - 1] = g[size - 1][0] = 1  # (e1, f1)
    g[1][size - 2] = g[size - 2][1] = 1  # (e2, f2)
    for i in range(n):
        for j in range(n):
            g[2 + i][2 + j] = -lat.gram[i][j]
    return linalg.freeze(g)


def is_reflective(v: AmbientVector) -> tuple[bool, str | None]:
    """Reflectivity test for a primitive negative-norm ambient vector.

    Returns (flag, tag) where the tag records which of the two admissible
    divisor cases holds: "div=d" or "div=2d" for (v,v) = -2d.
    """
    if not v.is_primitive():
        raise ValueError("reflectivity is defined for primitive vectors")
    nn = v.norm()
    if nn >= 0:
        raise ValueError("reflectivity requires negative norm")
    if nn.denominator != 1 or int(nn) % 2:
        raise ValueError("ambient vector has non-even norm")
    d = -int(nn) // 2
    dv = v.div()
    if dv == 2 * d:
        return True, "div=2d"
    if dv == d:
        return True, "div=d"
    return False, None


def eichler_transvection(c: AmbientVector, a: AmbientVector) -> linalg.Mat:
    """Matrix of v -> v - (a,v)c + (c,v)a - (a,a)(c,v)c/2 on the ambient basis.

    Requires c isotropic and orthogonal to a.  The result preserves the
    ambient Gram matrix and acts trivially on the discriminant group.
    """
    if c.norm() != 0:
        raise ValueError("transvection base vector must be isotropic")
    if c.pairing(a) != 0:
        raise ValueError("transvection arguments must be orthogonal")
    lat = c.lattice
    n = lat.rank
    size = n + 4
    cc = c.coords()
    ac = a.coords()
    a_pair = a.basis_pairings()
    c_pair = c.basis_pairings()
    aa = a.norm()
    cols = []
    for j in range(size):
        # image of the j-th basis vector
        col = [Q(0)] * size
        col[j] = Q(1)
        av = a_pair[j]
        cv = c_pair[j]
        for i in range(size):
            col[i] += -av * Q(cc[i]) + cv * Q(ac[i]) - Q(aa, 2) * cv * Q(cc[i])
        cols.append(col)
    return linalg.freeze(zip(*cols))

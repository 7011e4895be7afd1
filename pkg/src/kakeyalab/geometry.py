"""Projective spaces PG(n,q), the plane PG(2,q), and affine spaces AG(n,q).

Points are identified by canonical integer indices: the position of the
normalized coordinate tuple (leftmost nonzero coordinate equal to 1) in
lexicographic order of element indices.  In the plane, lines use the same
tuples as dual coordinates, so a line and its dual point share an index.

Affine points of AG(n,q) are embedded as ``(1, x_1, ..., x_n)`` and
directions as ``(0, d_1, ..., d_n)``; the hyperplane ``x_0 = 0`` is the
hyperplane at infinity.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .galois import Field, make_field


def theta(n: int, q: int) -> int:
    """Number of points of PG(n,q)."""
    return (q ** (n + 1) - 1) // (q - 1)


def normalize(F: Field, v) -> tuple[int, ...]:
    """Scale a nonzero vector so its leftmost nonzero entry is 1."""
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        raise ValueError("the zero vector is not a projective point")
    s = F.inv(lead)
    return tuple(F.mul(s, x) for x in v)


def dot(F: Field, u, v) -> int:
    return F.total(F.mul(a, b) for a, b in zip(u, v))


def cross(F: Field, u, v) -> tuple[int, int, int]:
    m, s = F.mul, F.sub
    return (
        s(m(u[1], v[2]), m(u[2], v[1])),
        s(m(u[2], v[0]), m(u[0], v[2])),
        s(m(u[0], v[1]), m(u[1], v[0])),
    )


def vec_add(F: Field, u, v) -> tuple[int, ...]:
    return tuple(F.add(a, b) for a, b in zip(u, v))


def vec_scale(F: Field, c: int, v) -> tuple[int, ...]:
    return tuple(F.mul(c, a) for a in v)


def normalized_tuples(F: Field, length: int) -> list[tuple[int, ...]]:
    """All normalized tuples of the given length, in lexicographic order."""
    out = []
    for lead in range(length):
        for tail in itertools.product(range(F.q), repeat=length - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    out.sort()
    return out


@dataclass(frozen=True)
class ProjPoint:
    index: int
    coords: tuple[int, ...]


@dataclass(frozen=True)
class ProjLine:
    index: int
    coords: tuple[int, int, int]


class ProjectiveSpace:
    """PG(n,q) with canonically indexed points and (lazily) lines."""

    def __init__(self, n: int, F: Field):
        if n < 1:
            raise ValueError("dimension must be at least 1")
        self.n = n
        self.F = F
        self.q = F.q
        self.points: list[tuple[int, ...]] = normalized_tuples(F, n + 1)
        self._index = {c: i for i, c in enumerate(self.points)}

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.n, self.F.p, self.F.t)

    @property
    def num_points(self) -> int:
        return len(self.points)

    def __repr__(self):
        return f"PG({self.n},{self.q})"

    def point(self, i: int) -> ProjPoint:
        return ProjPoint(i, self.points[i])

    def index_of(self, v) -> int:
        """Index of the projective point spanned by the nonzero vector v."""
        return self._index[normalize(self.F, v)]

    def span_line(self, i: int, j: int) -> tuple[int, ...]:
        """Sorted point indices of the line through points i and j."""
        if i == j:
            raise ValueError("a line needs two distinct points")
        F = self.F
        u, v = self.points[i], self.points[j]
        pts = {i}
        for c in range(F.q):
            pts.add(self.index_of(vec_add(F, vec_scale(F, c, u), v)))
        return tuple(sorted(pts))

    @cached_property
    def lines(self) -> list[tuple[int, ...]]:
        """Every line as a sorted tuple of point indices."""
        seen: set[tuple[int, ...]] = set()
        covered = np.zeros((self.num_points, self.num_points), dtype=bool)
        for i in range(self.num_points):
            for j in range(i + 1, self.num_points):
                if covered[i, j]:
                    continue
                line = self.span_line(i, j)
                idx = np.array(line)
                covered[np.ix_(idx, idx)] = True
                seen.add(line)
        return sorted(seen)

    @cached_property
    def incidence(self) -> np.ndarray:
        """Line-point incidence matrix (rows lines, columns points), uint8."""
        m = np.zeros((len(self.lines), self.num_points), dtype=np.uint8)
        for r, line in enumerate(self.lines):
            m[r, list(line)] = 1
        return m

    def hyperplane_at_infinity(self) -> list[int]:
        """Indices of the points with x_0 = 0, in canonical order."""
        return [i for i, c in enumerate(self.points) if c[0] == 0]


class Plane(ProjectiveSpace):
    """PG(2,q): lines carry dual coordinates and line i is dual to point i."""

    def __init__(self, F: Field):
        super().__init__(2, F)

    @cached_property
    def incidence(self) -> np.ndarray:
        P = np.array(self.points, dtype=np.int64)
        F = self.F
        # incidence via table lookups: sum_k P[l,k]*P[x,k] over GF(q)
        mul = F.mul_table
        add = F.add_table
        acc = np.zeros((len(P), len(P)), dtype=np.int64)
        for k in range(3):
            acc = add[acc, mul[P[:, None, k], P[None, :, k]]]
        m = (acc == 0).astype(np.uint8)
        m.setflags(write=False)
        return m

    @cached_property
    def lines(self) -> list[tuple[int, ...]]:
        return [tuple(np.flatnonzero(row).tolist()) for row in self.incidence]

    @cached_property
    def pencils(self) -> list[tuple[int, ...]]:
        """pencils[P] = sorted indices of the lines through point P."""
        return [tuple(np.flatnonzero(col).tolist()) for col in self.incidence.T]

    @cached_property
    def line_masks(self) -> list[int]:
        return [sum(1 << i for i in line) for line in self.lines]

    @property
    def num_lines(self) -> int:
        return len(self.points)

    def line(self, i: int) -> ProjLine:
        return ProjLine(i, self.points[i])

    def line_index_of(self, v) -> int:
        return self._index[normalize(self.F, v)]

    def incident(self, point: int, line: int) -> bool:
        return bool(self.incidence[line, point])

    def points_on_line(self, line: int) -> tuple[int, ...]:
        return self.lines[line]

    def lines_through_point(self, point: int) -> tuple[int, ...]:
        return self.pencils[point]

    def line_through(self, P: int, Q: int) -> int:
        if P == Q:
            raise ValueError("a line needs two distinct points")
        return self.line_index_of(cross(self.F, self.points[P], self.points[Q]))

    def meet(self, L: int, M: int) -> int:
        """Intersection point of two distinct lines."""
        if L == M:
            raise ValueError("two distinct lines are needed")
        return self.index_of(cross(self.F, self.points[L], self.points[M]))

    # the correlation (a:b:c) <-> [a:b:c] is the identity on indices
    @staticmethod
    def dualize_point(P: int) -> int:
        return P

    @staticmethod
    def dualize_line(L: int) -> int:
        return L


@lru_cache(maxsize=None)
def projective_space(n: int, p: int, t: int = 1) -> ProjectiveSpace:
    F = make_field(p, t)
    return Plane(F) if n == 2 else ProjectiveSpace(n, F)


def plane(F_or_q) -> Plane:
    """The cached PG(2,q) for a Field or an order q."""
    if isinstance(F_or_q, Field):
        return projective_space(2, F_or_q.p, F_or_q.t)
    from .galois import prime_power

    p, t = prime_power(int(F_or_q))
    return projective_space(2, p, t)


def all_points(n: int, F: Field) -> list[ProjPoint]:
    S = projective_space(n, F.p, F.t)
    return [S.point(i) for i in range(S.num_points)]


def all_lines_plane(F: Field) -> list[ProjLine]:
    P = plane(F)
    return [P.line(i) for i in range(P.num_lines)]


# ---------------------------------------------------------------- affine part

@dataclass(frozen=True)
class AffLine:
    """A line of AG(n,q): normalized direction and lexicographically least point."""

    direction: tuple[int, ...]
    base: tuple[int, ...]


def points_of(F: Field, line: AffLine) -> list[tuple[int, ...]]:
    return sorted(vec_add(F, line.base, vec_scale(F, c, line.direction)) for c in range(F.q))


def affine_lines(n: int, F: Field) -> list[AffLine]:
    """All lines of AG(n,q), grouped by direction in canonical direction order."""
    if n < 2:
        raise ValueError("affine lines need n >= 2")
    out = []
    pts = list(itertools.product(range(F.q), repeat=n))
    for d in normalized_tuples(F, n):
        seen: set[tuple[int, ...]] = set()
        for x in pts:
            if x in seen:
                continue
            line = AffLine(d, x)
            members = points_of(F, line)
            seen.update(members)
            out.append(AffLine(d, members[0]))
    return out


def affine_to_projective(S: ProjectiveSpace, x) -> int:
    return S.index_of((1,) + tuple(x))


def direction_point(S: ProjectiveSpace, d) -> int:
    return S.index_of((0,) + tuple(d))


def closure(S: ProjectiveSpace, line: AffLine) -> list[int]:
    """Point indices of the projective closure of an affine line."""
    return sorted([affine_to_projective(S, x) for x in points_of(S.F, line)] + [direction_point(S, line.direction)])


# -------------------------------------------------------------------- PointSet

@dataclass(frozen=True)
class PointSet:
    """A set of points of a fixed PG(n,q), stored as a Python int bitmask."""

    geometry: tuple[int, int, int]  # (n, p, t)
    bits: int = 0

    @classmethod
    def from_indices(cls, geometry, indices) -> "PointSet":
        bits = 0
        for i in indices:
            bits |= 1 << int(i)
        return cls(tuple(geometry), bits)

    @property
    def space(self) -> ProjectiveSpace:
        return projective_space(*self.geometry)

    def indices(self) -> list[int]:
        out, b, i = [], self.bits, 0
        while b:
            if b & 1:
                out.append(i)
            b >>= 1
            i += 1
        return out

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self):
        return iter(self.indices())

    def __contains__(self, i: int) -> bool:
        return bool(self.bits >> i & 1)

    def _check(self, other: "PointSet"):
        if self.geometry != other.geometry:
            raise ValueError("point sets live in different geometries")

    def __or__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.geometry, self.bits | other.bits)

    def __and__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.geometry, self.bits & other.bits)

    def __sub__(self, other: "PointSet") -> "PointSet":
        self._check(other)
        return PointSet(self.geometry, self.bits & ~other.bits)

    def to_dict(self) -> dict:
        n, p, t = self.geometry
        return {"geometry": {"n": n, "p": p, "t": t}, "indices": self.indices()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "PointSet":
        g = d["geometry"]
        geometry = (int(g["n"]), int(g["p"]), int(g["t"]))
        size = theta(geometry[0], geometry[1] ** geometry[2])
        idx = [int(i) for i in d["indices"]]
        if any(not 0 <= i < size for i in idx):
            raise ValueError("point index out of range")
        return cls.from_indices(geometry, idx)

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        return cls.from_dict(json.loads(text))

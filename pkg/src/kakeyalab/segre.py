"""Segre-type triple products relative to a coordinate triangle.

For a frame (E1, E2, E3, unit) every point x off the triangle sides has
frame coordinates (x1:x2:x3) with x1*x2*x3 != 0 and the triple
(x2/x1, x3/x2, x1/x3).  The componentwise products over a point set
multiply to 1; geometric information pins down the individual factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .galois import Field, mat_inverse, mat_vec
from .geometry import Plane, PointSet, normalize
from .kakeya import KakeyaConfig, KakeyaError, excess_f, intersection_spectrum, realize
from .nuclei import internal_nuclei, line_counts


@dataclass(frozen=True)
class SegreFrame:
    plane: Plane = field(repr=False, compare=False)
    E1: int
    E2: int
    E3: int
    unit: int

    def __post_init__(self):
        P, F = self.plane, self.plane.F
        cols = [P.points[i] for i in (self.E1, self.E2, self.E3)]
        basis = [[cols[j][i] for j in range(3)] for i in range(3)]
        try:
            inv = mat_inverse(F, basis)
        except ValueError:
            raise KakeyaError("triangle vertices are collinear") from None
        lam = mat_vec(F, inv, P.points[self.unit])
        if 0 in lam:
            raise KakeyaError("unit point lies on a side of the triangle")
        # world = M @ frame, columns of M are lam_i * E_i
        M = [[F.mul(lam[j], cols[j][i]) for j in range(3)] for i in range(3)]
        object.__setattr__(self, "_to_world", M)
        object.__setattr__(self, "_to_frame", mat_inverse(F, M))

    @property
    def F(self) -> Field:
        return self.plane.F

    def coords(self, x: int) -> tuple[int, int, int]:
        """Normalized frame coordinates of point x."""
        return normalize(self.F, mat_vec(self.F, self._to_frame, self.plane.points[x]))

    def point(self, v) -> int:
        """The point with frame coordinates v."""
        return self.plane.index_of(mat_vec(self.F, self._to_world, v))

    def on_side(self, x: int) -> bool:
        return 0 in self.coords(x)

    def to_dict(self) -> dict:
        return {"E1": self.E1, "E2": self.E2, "E3": self.E3, "unit": self.unit}


def triple_coords(x: int, frame: SegreFrame) -> tuple[int, int, int]:
    F = frame.F
    y = mat_vec(F, frame._to_frame, frame.plane.points[x])
    if 0 in y:
        raise KakeyaError(f"point {x} lies on a side of the triangle")
    return (F.div(y[1], y[0]), F.div(y[2], y[1]), F.div(y[0], y[2]))


@dataclass(frozen=True)
class TripleProduct:
    p1: int
    p2: int
    p3: int


def segre_products(X, frame: SegreFrame) -> TripleProduct:
    F = frame.F
    p = [1, 1, 1]
    for x in X:
        t = triple_coords(x, frame)
        p = [F.mul(a, b) for a, b in zip(p, t)]
    if F.prod(p) != 1:
        raise AssertionError("p1*p2*p3 != 1")
    return TripleProduct(*p)


def random_frame(P: Plane, rng: np.random.Generator) -> SegreFrame:
    while True:
        pts = [int(x) for x in rng.choice(P.num_points, size=4, replace=False)]
        try:
            return SegreFrame(P, *pts)
        except KakeyaError:
            continue


def random_admissible_pair(P: Plane, rng: np.random.Generator) -> tuple[list[int], SegreFrame]:
    frame = random_frame(P, rng)
    off = [x for x in range(P.num_points) if not frame.on_side(x)]
    k = int(rng.integers(1, len(off) + 1))
    X = sorted(int(x) for x in rng.choice(off, size=k, replace=False))
    return X, frame


# ---------------------------------------------------- extremal (q+2)-sets

def classify_lines(P: Plane, omega: PointSet) -> dict[int, dict[int, list[int]]]:
    """For each point of omega, the lines through it grouped by |line ∩ omega|."""
    counts = line_counts(P, omega)
    out = {}
    for x in omega:
        groups: dict[int, list[int]] = {}
        for L in P.lines_through_point(x):
            groups.setdefault(int(counts[L]), []).append(L)
        out[x] = groups
    return out


def one_tangent_points(omega: PointSet) -> list[int]:
    """Points of omega on exactly one tangent and one 3-secant, all other lines 2-secants."""
    P = omega.space
    out = []
    for x, g in classify_lines(P, omega).items():
        if len(g.get(1, [])) == 1 and len(g.get(3, [])) == 1 and set(g) <= {1, 2, 3}:
            out.append(x)
    return out


def _two_nuclei(omega: PointSet) -> tuple[int, int]:
    nuc = internal_nuclei(omega)
    if len(nuc) != 2:
        raise KakeyaError(f"expected exactly two internal nuclei, found {len(nuc)}")
    return nuc[0], nuc[1]


def _slope_on_nucleus_line(P: Plane, frame: SegreFrame, line: int, n1: int, n2: int) -> int:
    """lam such that `line` meets N1N2 in the frame point (1:lam:0)."""
    R = P.meet(line, P.line_through(n1, n2))
    r = frame.coords(R)
    if r[2] != 0 or r[0] == 0 or r[1] == 0:
        raise AssertionError("intersection with N1N2 is not of the form (1:lam:0)")
    return P.F.div(r[1], r[0])


def verify_mu_lambda(omega: PointSet, U: int) -> dict:
    """Slopes of the 3-secant (lam) and tangent (mu) at U on the nucleus line; mu = -lam."""
    P = omega.space
    F = P.F
    n1, n2 = _two_nuclei(omega)
    if U not in one_tangent_points(omega):
        raise KakeyaError(f"point {U} is not a one-tangent point")
    g = classify_lines(P, omega)[U]
    secant, tangent = g[3][0], g[1][0]
    X = [x for x in omega if x not in (n1, n2, U)]
    # unit: any point of omega off the triangle, the relation does not depend on it
    frame = None
    for u in X:
        try:
            frame = SegreFrame(P, n1, n2, U, u)
            break
        except KakeyaError:
            continue
    lam = _slope_on_nucleus_line(P, frame, secant, n1, n2)
    mu = _slope_on_nucleus_line(P, frame, tangent, n1, n2)
    prod = segre_products(X, frame)
    minus_one = F.neg(1)
    return {
        "U": U,
        "frame": frame.to_dict(),
        "lambda": lam,
        "mu": mu,
        "p": [prod.p1, prod.p2, prod.p3],
        "checks": {
            "mu == -lambda": mu == F.neg(lam),
            "p2 == -1": prod.p2 == minus_one,
            "p3 == -1": prod.p3 == minus_one,
            "p1 == -lambda/mu": prod.p1 == F.neg(F.div(lam, mu)),
        },
    }


def verify_conic_relation(omega: PointSet, U1: int, U2: int) -> dict:
    """In the frame N1=(1:0:0), N2=(0:1:0), U1=(0:0:1), U2=(1:1:1), check each
    one-tangent V=(a:b:1) off U1U2 satisfies 2ab = a+b and lam(V) = -b^2/a^2.
    """
    P = omega.space
    F = P.F
    spec = intersection_spectrum(omega)
    if excess_f(spec) != (P.q - 1) // 2:
        raise KakeyaError("omega is not in the equality case f = (q-1)/2")
    n1, n2 = _two_nuclei(omega)
    ones = one_tangent_points(omega)
    if U1 not in ones or U2 not in ones or U1 == U2:
        raise KakeyaError("U1, U2 must be distinct one-tangent points")
    groups = classify_lines(P, omega)
    joint = P.line_through(U1, U2)
    if groups[U1][3][0] != joint:
        raise KakeyaError("U1 and U2 are not on a common 3-secant")
    frame = SegreFrame(P, n1, n2, U1, U2)
    nline = P.line_through(n1, n2)
    two = F.embed_int(2)
    special = frame.point((1, 1, two))
    minus = frame.point((1, F.neg(1), 0))

    third = [x for x in P.points_on_line(joint) if x in omega and x not in (U1, U2)]
    checks = {
        "third point on U1U2 is (1:1:2)": third == [special],
        "tangent at U1 meets N1N2 in (1:-1:0)": P.meet(groups[U1][1][0], nline) == minus,
        "tangent at U2 meets N1N2 in (1:-1:0)": P.meet(groups[U2][1][0], nline) == minus,
    }
    rows = []
    for V in ones:
        if V in P.points_on_line(joint):
            continue
        a, b, c = frame.coords(V)
        a, b = F.div(a, c), F.div(b, c)
        lam = _slope_on_nucleus_line(P, frame, groups[V][1][0], n1, n2)
        sec = groups[V][3][0]
        conic_val = F.sub(F.mul(two, F.mul(a, b)), F.add(a, b))
        row = {
            "V": V,
            "a": a,
            "b": b,
            "lambda": lam,
            "2ab-a-b == 0": conic_val == 0,
            "lambda == -b^2/a^2": lam == F.neg(F.div(F.mul(b, b), F.mul(a, a))),
            "secant slope == -lambda": _slope_on_nucleus_line(P, frame, sec, n1, n2) == F.neg(lam),
            "secant through (1:1:2)": P.incident(special, sec),
        }
        rows.append(row)
    all_ok = all(checks.values()) and all(all(v for k, v in r.items() if isinstance(v, bool)) for r in rows)
    return {"U1": U1, "U2": U2, "frame": frame.to_dict(), "checks": checks, "points": rows, "holds": all_ok}


def conic_relation_census(omega: PointSet) -> list[dict]:
    """verify_conic_relation for every ordered pair of one-tangent points on a common 3-secant."""
    P = omega.space
    ones = one_tangent_points(omega)
    groups = classify_lines(P, omega)
    out = []
    for U1, U2 in permutations(ones, 2):
        if groups[U1][3][0] == groups[U2][3][0]:
            out.append(verify_conic_relation(omega, U1, U2))
    return out


def triple_point_census(config: KakeyaConfig) -> dict:
    """For each P on l, whether l_P carries a point of multiplicity >= 3."""
    an = realize(config)
    P = config.plane
    base = set(config.base_points)
    rows = []
    for pt, L in zip(config.base_points, config.assignment):
        has = any(an.multiplicities.get(x, 0) >= 3 for x in P.points_on_line(L) if x not in base)
        rows.append({"P": pt, "line": L, "has_triple_point": has})
    exceptions = [r["P"] for r in rows if not r["has_triple_point"]]
    in_hypothesis = config.q % 2 == 1
    return {
        "q": config.q,
        "in_hypothesis": in_hypothesis,
        "exceptional_points": exceptions,
        "rows": rows,
        "holds": len(exceptions) <= 1 if in_hypothesis else None,
    }

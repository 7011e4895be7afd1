"""Plane Kakeya sets: configurations, realization, sigma, spectra, constructions.

A configuration is a base line ``l`` together with one line ``l_P != l``
through every point P of ``l``.  The Kakeya set it generates is the union
of the chosen lines with ``l`` removed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .galois import Field
from .geometry import Plane, PointSet, plane


class KakeyaError(ValueError):
    """Raised for configurations or point sets that violate a precondition."""


@dataclass(frozen=True)
class KakeyaConfig:
    plane: Plane = field(repr=False)
    base_line: int
    assignment: tuple[int, ...]

    def __post_init__(self):
        P = self.plane
        object.__setattr__(self, "assignment", tuple(int(x) for x in self.assignment))
        base_points = P.points_on_line(self.base_line)
        if len(self.assignment) != len(base_points):
            raise KakeyaError(f"need {len(base_points)} assigned lines, got {len(self.assignment)}")
        for pt, line in zip(base_points, self.assignment):
            if line == self.base_line:
                raise KakeyaError(f"line assigned to point {pt} equals the base line")
            if not P.incident(pt, line):
                raise KakeyaError(f"assigned line {line} does not pass through point {pt}")

    @property
    def q(self) -> int:
        return self.plane.q

    @property
    def base_points(self) -> tuple[int, ...]:
        return self.plane.points_on_line(self.base_line)

    def line_for(self, point: int) -> int:
        return self.assignment[self.base_points.index(point)]

    def to_dict(self) -> dict:
        return {"base_line": self.base_line, "base_points": list(self.base_points), "assignment": list(self.assignment)}


@dataclass(frozen=True)
class KakeyaAnalysis:
    config: KakeyaConfig
    realized: PointSet
    multiplicities: dict[int, int]
    sigma: int

    @property
    def size(self) -> int:
        return len(self.realized)

    def histogram(self) -> dict[int, int]:
        """How many points of K have each multiplicity m_A."""
        return dict(sorted(Counter(self.multiplicities.values()).items()))


def realize(config: KakeyaConfig) -> KakeyaAnalysis:
    P = config.plane
    base = set(P.points_on_line(config.base_line))
    mult: Counter[int] = Counter()
    for line in config.assignment:
        mult.update(x for x in P.points_on_line(line) if x not in base)
    K = PointSet.from_indices(P.key, mult)
    s = sum((m - 1) * (m - 2) // 2 for m in mult.values())
    q = P.q
    if sum(mult.values()) != q * (q + 1):
        raise AssertionError("multiplicity total differs from q(q+1)")
    if len(K) != q * (q + 1) // 2 + s:
        raise AssertionError("incidence formula violated")
    return KakeyaAnalysis(config, K, dict(sorted(mult.items())), s)


def sigma(analysis: KakeyaAnalysis) -> int:
    return analysis.sigma


def kakeya_set(config: KakeyaConfig) -> PointSet:
    """Union of the assigned lines minus the base line, by bitmask union only."""
    P = config.plane
    bits = 0
    for line in config.assignment:
        bits |= P.line_masks[line]
    return PointSet(P.key, bits & ~P.line_masks[config.base_line])


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def verify_incidence_formula(config: KakeyaConfig) -> IdentityCheck:
    """Compare |K| (set union) with q(q+1)/2 + sigma (multiplicity census)."""
    size = len(kakeya_set(config))
    P = config.plane
    base = set(P.points_on_line(config.base_line))
    census: Counter[int] = Counter()
    for line in config.assignment:
        for x in P.points_on_line(line):
            if x not in base:
                census[x] += 1
    s = sum((m - 1) * (m - 2) // 2 for m in census.values())
    q = P.q
    return IdentityCheck("incidence_formula", size, q * (q + 1) // 2 + s)


def random_config(P: Plane, rng: np.random.Generator, base_line: int | None = None) -> KakeyaConfig:
    if base_line is None:
        base_line = int(rng.integers(P.num_lines))
    assignment = []
    for pt in P.points_on_line(base_line):
        choices = [L for L in P.lines_through_point(pt) if L != base_line]
        assignment.append(choices[int(rng.integers(len(choices)))])
    return KakeyaConfig(P, base_line, tuple(assignment))


# ------------------------------------------------------------- conics, ovals

def conic_points(P: Plane) -> list[int]:
    """The conic y^2 = xz: points (1:t:t^2) and (0:0:1)."""
    F = P.F
    pts = [P.index_of((1, t, F.mul(t, t))) for t in range(F.q)]
    pts.append(P.index_of((0, 0, 1)))
    return sorted(pts)


def hyperoval_points(P: Plane) -> list[int]:
    """Conic plus its nucleus (0:1:0); a hyperoval when q is even."""
    if P.F.p != 2:
        raise KakeyaError("hyperovals exist only for even q")
    return sorted(conic_points(P) + [P.index_of((0, 1, 0))])


def tangent_lines(P: Plane, pts) -> list[int]:
    """Lines meeting the point set in exactly one point."""
    counts = P.incidence[:, list(pts)].sum(axis=1)
    return np.flatnonzero(counts == 1).tolist()


def default_external_point(P: Plane) -> int:
    """Smallest-index point off the conic lying on a conic tangent (q odd)."""
    conic = conic_points(P)
    on_conic = set(conic)
    tangents = tangent_lines(P, conic)
    for x in range(P.num_points):
        if x not in on_conic and any(P.incident(x, t) for t in tangents):
            return x
    raise AssertionError("no external point")  # pragma: no cover


def conic_plus_external_point(P: Plane, external: int | None = None) -> PointSet:
    if P.q % 2 == 0:
        raise KakeyaError("conic plus external point is an odd-q object")
    conic = conic_points(P)
    if external is None:
        external = default_external_point(P)
    if external in conic:
        raise KakeyaError("the extra point must lie off the conic")
    if sum(P.incident(external, t) for t in tangent_lines(P, conic)) != 2:
        raise KakeyaError("the extra point is not external to the conic")
    return PointSet.from_indices(P.key, conic + [external])


def _dual_line_config(P: Plane, dual_lines: list[int], base_line: int) -> dict[int, int]:
    """For each point of base_line, the other line of dual_lines through it (if any)."""
    others = [L for L in dual_lines if L != base_line]
    out = {}
    for pt in P.points_on_line(base_line):
        through = [L for L in others if P.incident(pt, L)]
        if len(through) > 1:
            raise AssertionError("three concurrent lines in a dual oval")
        if through:
            out[pt] = through[0]
    return out


def construct_hyperoval_kakeya(F: Field) -> KakeyaConfig:
    """Kakeya set of a dual hyperoval and one of its lines (q even)."""
    if F.p != 2 or F.q <= 2:
        raise KakeyaError(f"the hyperoval construction needs even q > 2, got q={F.q}")
    P = plane(F)
    H = [P.dualize_point(x) for x in hyperoval_points(P)]
    base = P.dualize_point(P.index_of((0, 0, 1)))
    partner = _dual_line_config(P, H, base)
    return KakeyaConfig(P, base, tuple(partner[pt] for pt in P.points_on_line(base)))


def construct_oval_kakeya(F: Field, tangent_choice: int | None = None) -> KakeyaConfig:
    """Kakeya set of a dual conic, one of its lines l, and a line l_A.

    A is the point of l on no other line of the dual conic.  ``tangent_choice``
    is the index of l_A; by default the smallest-index line through A other
    than l is used.
    """
    if F.q % 2 == 0:
        raise KakeyaError(f"the oval construction needs odd q, got q={F.q}")
    P = plane(F)
    O = [P.dualize_point(x) for x in conic_points(P)]
    base = P.dualize_point(P.index_of((0, 0, 1)))
    partner = _dual_line_config(P, O, base)
    missing = [pt for pt in P.points_on_line(base) if pt not in partner]
    if len(missing) != 1:
        raise AssertionError("a dual oval line should have exactly one tangent point")
    A = missing[0]
    if tangent_choice is None:
        tangent_choice = next(L for L in P.lines_through_point(A) if L != base)
    if tangent_choice == base:
        raise KakeyaError("l_A must differ from the base line")
    if not P.incident(A, tangent_choice):
        raise KakeyaError(f"line {tangent_choice} does not pass through A={A}")
    partner[A] = tangent_choice
    return KakeyaConfig(P, base, tuple(partner[pt] for pt in P.points_on_line(base)))


def oval_exceptional_point(config: KakeyaConfig) -> int:
    """The point A of the base line whose line is not on the dual conic."""
    P = config.plane
    O = set(conic_points(P))
    for pt, line in zip(config.base_points, config.assignment):
        if P.dualize_line(line) not in O:
            return pt
    raise KakeyaError("configuration does not come from a dual conic")


# ---------------------------------------------------------------- spectra

@dataclass(frozen=True)
class Spectrum:
    """a[i] = number of lines of PG(2,q) meeting the set in exactly i points."""

    q: int
    set_size: int
    a: tuple[int, ...]

    @property
    def intersecting_count(self) -> int:
        return sum(self.a[1:])

    @property
    def excess_f(self) -> int | None:
        if self.set_size != self.q + 2:
            return None
        return excess_f(self)

    def moments(self) -> list[IdentityCheck]:
        """The three counting identities valid for any set of q+2 points."""
        q = self.q
        n = self.set_size
        return [
            IdentityCheck("sum a_i", sum(self.a), q * q + q + 1),
            IdentityCheck("sum i a_i", sum(i * x for i, x in enumerate(self.a)), n * (q + 1)),
            IdentityCheck("sum C(i,2) a_i", sum(comb(i, 2) * x for i, x in enumerate(self.a)), comb(n, 2)),
        ]

    def to_dict(self) -> dict:
        d = {"a": list(self.a), "intersecting_count": self.intersecting_count, "set_size": self.set_size}
        if self.set_size == self.q + 2:
            d["f"] = self.excess_f
        return d


def intersection_spectrum(omega: PointSet) -> Spectrum:
    P = omega.space
    if not isinstance(P, Plane):
        raise KakeyaError("spectra are defined for plane point sets")
    ind = np.zeros(P.num_points, dtype=np.int64)
    ind[omega.indices()] = 1
    counts = P.incidence.astype(np.int64) @ ind
    a = np.bincount(counts, minlength=P.q + 2)
    spec = Spectrum(P.q, len(omega), tuple(int(x) for x in a))
    bad = [m for m in spec.moments() if not m.holds]
    if bad:
        raise AssertionError(f"moment identity failed: {bad}")
    return spec


def excess_f(spectrum: Spectrum) -> int:
    """f computed from the line count and from the weighted high-secant sum."""
    q = spectrum.q
    if spectrum.set_size != q + 2:
        raise KakeyaError("the excess f is defined for sets of q+2 points")
    from_count = spectrum.intersecting_count - (q + 2) * (q + 1) // 2
    from_weights = sum(comb(i - 1, 2) * x for i, x in enumerate(spectrum.a) if i >= 3)
    if from_count != from_weights:
        raise AssertionError(f"f mismatch: {from_count} != {from_weights}")
    return from_count


def dual_point_set(config: KakeyaConfig) -> PointSet:
    """Points dual to the base line and the assigned lines."""
    P = config.plane
    return PointSet.from_indices(P.key, [P.dualize_line(config.base_line)] + [P.dualize_line(L) for L in config.assignment])


def analysis_report(config: KakeyaConfig, construction: str) -> dict:
    """JSON-ready summary of a configuration and its dual (q+2)-set."""
    an = realize(config)
    q = config.q
    inc = verify_incidence_formula(config)
    checks = [inc]
    checks.append(IdentityCheck("sum m_A", sum(an.multiplicities.values()), q * (q + 1)))
    omega = dual_point_set(config)
    spec = intersection_spectrum(omega)
    checks.extend(spec.moments())
    checks.append(IdentityCheck("lines meeting Omega(K) - (q+1)", spec.intersecting_count - (q + 1), an.size))
    return {
        "q": q,
        "construction": construction,
        "config": config.to_dict(),
        "size": an.size,
        "sigma": an.sigma,
        "multiplicity_histogram": {str(k): v for k, v in an.histogram().items()},
        "kakeya_set": an.realized.to_dict(),
        "spectrum": spec.to_dict(),
        "f": spec.excess_f,
        "identities_checked": [c.to_dict() for c in checks],
    }

"""Internal nuclei of (q+2)-sets and the Kakeya <-> (q+2)-set duality."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .galois import Field, determinant, nullspace
from .geometry import Plane, PointSet, normalized_tuples, plane
from .kakeya import KakeyaConfig, KakeyaError, dual_point_set, realize


def _require_plane_set(omega: PointSet) -> Plane:
    P = omega.space
    if not isinstance(P, Plane):
        raise KakeyaError("internal nuclei are defined in the plane")
    if len(omega) != P.q + 2:
        raise KakeyaError(f"expected a set of q+2 = {P.q + 2} points, got {len(omega)}")
    return P


def line_counts(P: Plane, omega: PointSet) -> np.ndarray:
    ind = np.zeros(P.num_points, dtype=np.int64)
    ind[omega.indices()] = 1
    return P.incidence.astype(np.int64) @ ind


def internal_nuclei(omega: PointSet) -> list[int]:
    """Points N of omega such that every line on N meets omega in exactly 2 points."""
    P = _require_plane_set(omega)
    counts = line_counts(P, omega)
    return [x for x in omega if all(counts[L] == 2 for L in P.lines_through_point(x))]


@dataclass(frozen=True)
class OmegaConfig:
    omega: PointSet
    nuclei: tuple[int, ...]


def kakeya_to_omega(config: KakeyaConfig) -> OmegaConfig:
    if len(set(config.assignment)) != len(config.assignment):
        # unreachable for valid configs: two points of l sharing a line force it to be l
        raise KakeyaError("assigned lines repeat, the dual set has fewer than q+2 points")
    omega = dual_point_set(config)
    nuc = internal_nuclei(omega)
    if config.plane.dualize_line(config.base_line) not in nuc:
        raise AssertionError("the dual of the base line is not an internal nucleus")
    return OmegaConfig(omega, tuple(nuc))


def omega_to_kakeya(omega: PointSet, nucleus: int) -> KakeyaConfig:
    """The Kakeya configuration in the dual plane defined by a nucleus of omega."""
    P = _require_plane_set(omega)
    if nucleus not in internal_nuclei(omega):
        raise KakeyaError(f"point {nucleus} is not an internal nucleus")
    base = P.dualize_point(nucleus)
    assignment = []
    for pt in P.points_on_line(base):
        through = P.dualize_point(pt)
        other = [x for x in P.points_on_line(through) if x in omega and x != nucleus]
        assignment.append(P.dualize_point(other[0]))
    return KakeyaConfig(P, base, tuple(assignment))


def intersecting_lines_of_omega(omega: PointSet) -> int:
    P = omega.space
    return int(np.count_nonzero(line_counts(P, omega)))


def k_star_check(config: KakeyaConfig) -> dict:
    """Lines meeting Omega(K) versus |K| + q + 1."""
    size = realize(config).size
    count = intersecting_lines_of_omega(kakeya_to_omega(config).omega)
    return {"intersecting_lines": count, "kakeya_size": size, "q": config.q, "holds": count == size + config.q + 1}


# --------------------------------------------------- batched nuclei counting

def nuclei_counts(P: Plane, members: np.ndarray) -> np.ndarray:
    """Number of internal nuclei for each row of a (batch, q+2) array of point indices."""
    B = members.shape[0]
    ind = np.zeros((B, P.num_points), dtype=np.int32)
    np.put_along_axis(ind, members, 1, axis=1)
    inc = P.incidence.astype(np.int32)
    counts = ind @ inc.T
    good = (counts == 2).astype(np.int32) @ inc
    return ((good == P.q + 1) & (ind == 1)).sum(axis=1)


def _random_kakeya_duals(P: Plane, rng: np.random.Generator, count: int) -> np.ndarray:
    """Dual sets of uniformly random configurations on random base lines."""
    base = rng.integers(P.num_lines, size=count)
    out = np.empty((count, P.q + 2), dtype=np.int64)
    out[:, 0] = base
    cand = np.array([
        [[L for L in P.lines_through_point(pt) if L != b] for pt in P.points_on_line(b)]
        for b in range(P.num_lines)
    ])  # (lines, q+1, q)
    pick = rng.integers(P.q, size=(count, P.q + 1))
    out[:, 1:] = cand[base[:, None], np.arange(P.q + 1)[None, :], pick]
    return out


def verify_bk(F: Field, mode: str = "exhaustive", samples: int = 100_000, seed: int = 0,
              source: str = "uniform", batch: int = 10_000) -> dict:
    """Largest number of internal nuclei found among (q+2)-sets.

    mode "exhaustive" checks every (q+2)-subset; mode "random" draws
    ``samples`` sets, either uniformly (source "uniform") or as duals of
    random Kakeya configurations (source "kakeya", always >= 1 nucleus).
    """
    P = plane(F)
    n = P.q + 2
    if mode == "exhaustive":
        if comb(P.num_points, n) > 5_000_000:
            raise KakeyaError("exhaustive mode is limited to small q")
        subsets = np.array(list(combinations(range(P.num_points), n)), dtype=np.int64)
        chunks = [subsets[i:i + batch] for i in range(0, len(subsets), batch)]
    elif mode == "random":
        rng = np.random.default_rng(seed)
        chunks = []
        left = samples
        while left > 0:
            b = min(batch, left)
            if source == "uniform":
                chunks.append(np.argsort(rng.random((b, P.num_points)), axis=1)[:, :n])
            elif source == "kakeya":
                chunks.append(_random_kakeya_duals(P, rng, b))
            else:
                raise ValueError(f"unknown source {source!r}")
            left -= b
    else:
        raise ValueError(f"unknown mode {mode!r}")

    best, witness, checked = -1, None, 0
    histogram: dict[int, int] = {}
    for chunk in chunks:
        counts = nuclei_counts(P, chunk)
        checked += len(chunk)
        for v, c in zip(*np.unique(counts, return_counts=True)):
            histogram[int(v)] = histogram.get(int(v), 0) + int(c)
        i = int(np.argmax(counts))
        if counts[i] > best:
            best, witness = int(counts[i]), sorted(chunk[i].tolist())
    report = {
        "q": P.q,
        "mode": mode,
        "sets_checked": checked,
        "max_nuclei": best,
        "nuclei_histogram": {str(k): v for k, v in sorted(histogram.items())},
        "holds": best <= 2 if P.q % 2 else None,
    }
    if mode == "random":
        report.update(seed=seed, source=source)
    if best == 2:
        report["witness"] = PointSet.from_indices(P.key, witness).to_dict()
    return report


# ------------------------------------------------- conic + external point test

def conics_through(P: Plane, pts) -> list[list[int]]:
    """Nonzero conics ax^2+by^2+cz^2+dxy+eyz+fzx = 0 through pts, one per projective class."""
    F = P.F
    m = F.mul
    rows = []
    for i in pts:
        x, y, z = P.points[i]
        rows.append([m(x, x), m(y, y), m(z, z), m(x, y), m(y, z), m(z, x)])
    basis = nullspace(F, rows, 6)
    out = []
    for coeffs in normalized_tuples(F, len(basis)) if basis else []:
        v = [0] * 6
        for c, b in zip(coeffs, basis):
            v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
        out.append(v)
    return out


def conic_points_of(P: Plane, coeffs) -> list[int]:
    F = P.F
    m = F.mul
    a, b, c, d, e, f = coeffs
    out = []
    for i, (x, y, z) in enumerate(P.points):
        val = F.total([m(a, m(x, x)), m(b, m(y, y)), m(c, m(z, z)), m(d, m(x, y)), m(e, m(y, z)), m(f, m(z, x))])
        if val == 0:
            out.append(i)
    return out


def conic_is_nondegenerate(F: Field, coeffs) -> bool:
    """Odd characteristic: the symmetric matrix of the quadratic form is invertible."""
    a, b, c, d, e, f = coeffs
    two = F.embed_int(2)
    sym = [[F.mul(two, a), d, f], [d, F.mul(two, b), e], [f, e, F.mul(two, c)]]
    return determinant(F, sym) != 0


def is_conic_plus_external_point(omega: PointSet) -> dict:
    """Decide whether omega is an irreducible conic plus a point external to it (q odd).

    On success the dict names the extra point and the conic coefficients.
    """
    P = _require_plane_set(omega)
    if P.q % 2 == 0:
        raise KakeyaError("the conic test is implemented for odd q")
    for E in omega:
        rest = [x for x in omega if x != E]
        for coeffs in conics_through(P, rest):
            if not conic_is_nondegenerate(P.F, coeffs) or conic_points_of(P, coeffs) != rest:
                continue
            tangents = np.flatnonzero(line_counts(P, PointSet.from_indices(P.key, rest)) == 1)
            if sum(P.incident(E, int(t)) for t in tangents) == 2:
                return {"is_conic_plus_external": True, "external_point": E, "conic": coeffs}
    return {"is_conic_plus_external": False}

"""Line codes of PG(n,q) over GF(p) and the code-dimension bound for Kakeya sets.

C_n is the GF(p)-row space of the line-point incidence matrix of PG(n,q),
where q = p^t.  For a Besicovitch set K in AG(n,q) the lines chosen in the
directions of a non-information set of C_{n-1} stay independent when
restricted to K, which gives |K| >= dim C_{n-1}^perp >= C(q+n-2, n-1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .galois import Field
from .geometry import (
    AffLine,
    PointSet,
    ProjectiveSpace,
    affine_lines,
    closure,
    normalized_tuples,
    projective_space,
    theta,
)


def rref_mod_p(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p), first-nonzero pivoting."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod_p(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref_mod_p(M, p)[1])


def nullspace_mod_p(M, p: int) -> np.ndarray:
    """Rows form a basis of {x : M x = 0} over GF(p)."""
    M = np.asarray(M)
    cols = M.shape[1]
    R, pivots = rref_mod_p(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-R[i, f]) % p
    return basis


@dataclass
class GFMatrix:
    """A matrix over GF(p) with optional row and column labels."""

    data: np.ndarray
    p: int
    row_labels: list = field(default_factory=list)
    col_labels: list = field(default_factory=list)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.int64) % self.p

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def rank(self) -> int:
        return rank_mod_p(self.data, self.p)

    def rref(self) -> tuple[np.ndarray, list[int]]:
        return rref_mod_p(self.data, self.p)

    def nullspace(self) -> np.ndarray:
        return nullspace_mod_p(self.data, self.p)

    def permuted(self, row_perm, col_perm) -> "GFMatrix":
        return GFMatrix(self.data[np.ix_(row_perm, col_perm)], self.p,
                        [self.row_labels[i] for i in row_perm] if self.row_labels else [],
                        [self.col_labels[j] for j in col_perm] if self.col_labels else [])


def rank_gfp(M: GFMatrix) -> int:
    return M.rank()


def incidence_matrix(n: int, F: Field) -> GFMatrix:
    """Line-point incidence matrix of PG(n,q) with entries in GF(p)."""
    S = projective_space(n, F.p, F.t)
    return GFMatrix(S.incidence, F.p, list(S.lines), list(S.points))


@dataclass(frozen=True)
class CodeDims:
    n: int
    q: int
    theta: int
    dim_C: int
    dim_dual: int
    bound: int
    prime: bool

    @property
    def equality(self) -> bool:
        return self.dim_dual == self.bound

    def checks(self) -> dict[str, bool]:
        out = {"dim_dual >= bound": self.dim_dual >= self.bound}
        if self.prime:
            out["dim_dual == bound (q prime)"] = self.equality
        return out

    def to_dict(self) -> dict:
        return {"n": self.n, "q": self.q, "theta": self.theta, "dim_C": self.dim_C,
                "dim_dual": self.dim_dual, "bound": self.bound, "equality": self.equality,
                "checks": self.checks()}


def code_dims(m: int, F: Field) -> CodeDims:
    """Dimensions of the line code of PG(m,q) and of its dual, against C(q+m-1, m)."""
    th = theta(m, F.q)
    dim_C = incidence_matrix(m, F).rank() if m >= 2 else 1
    dims = CodeDims(m, F.q, th, dim_C, th - dim_C, comb(F.q + m - 1, m), F.t == 1)
    bad = [k for k, v in dims.checks().items() if not v]
    if bad:
        raise AssertionError(f"code dimension check failed: {bad}")
    return dims


def _hyperplane_incidence(S: ProjectiveSpace, H: list[int]) -> np.ndarray:
    """Incidence of the lines of S lying inside H, columns restricted to H."""
    inc = S.incidence
    inside = inc[:, H].sum(axis=1) == S.q + 1
    return inc[inside][:, H]


def cone_over(S: ProjectiveSpace, H: list[int], top: int, u: np.ndarray) -> np.ndarray:
    """Extend a vector u on H to all points: every point of line top-X gets u(X), top gets 0."""
    F = S.F
    pos = {x: k for k, x in enumerate(H)}
    out = np.zeros(S.num_points, dtype=np.int64)
    P = S.points[top]
    for x in H:
        X = S.points[x]
        for c in range(F.q):
            Y = S.index_of(tuple(F.add(F.mul(c, a), b) for a, b in zip(P, X)))
            out[Y] = u[pos[x]]
    return out


def restriction_equality_check(n: int, F: Field) -> dict:
    """dim of C_n^perp restricted to the hyperplane at infinity versus dim C_{n-1}^perp."""
    S = projective_space(n, F.p, F.t)
    p = F.p
    H = S.hyperplane_at_infinity()
    full_dual = nullspace_mod_p(S.incidence, p)
    restricted = full_dual[:, H] % p
    dim_restricted = rank_mod_p(restricted, p)
    H_inc = _hyperplane_incidence(S, H)
    H_dual = nullspace_mod_p(H_inc, p)
    contained = bool(np.all((restricted @ H_inc.T.astype(np.int64)) % p == 0))

    top = next(i for i in range(S.num_points) if i not in set(H))
    cones_ok = True
    for u in H_dual:
        w = cone_over(S, H, top, u)
        if np.any((S.incidence.astype(np.int64) @ w) % p) or np.any((w[H] - u) % p):
            cones_ok = False
            break
    checks = {
        "restriction contained in C_{n-1}^perp": contained,
        "cone lifts lie in C_n^perp and restrict back": cones_ok,
        "dimensions equal": dim_restricted == len(H_dual),
    }
    return {"n": n, "q": F.q, "dim_C_n_perp": len(full_dual), "dim_restricted": dim_restricted,
            "dim_C_n_minus_1_perp": len(H_dual), "checks": checks, "holds": all(checks.values())}


def non_information_set(m: int, F: Field) -> list[int]:
    """Positions (points of PG(m,q)) outside the pivot columns of the line code's RREF.

    No nonzero codeword of C_m is supported inside this set.
    """
    if m == 1:
        return list(range(1, F.q + 1))
    S = projective_space(m, F.p, F.t)
    _, pivots = rref_mod_p(S.incidence, F.p)
    return [c for c in range(S.num_points) if c not in set(pivots)]


# ------------------------------------------------------------ Besicovitch sets

def besicovitch_set(n: int, F: Field, chosen: list[AffLine]) -> PointSet:
    """Union of affine lines, as a set of points of PG(n,q)."""
    S = projective_space(n, F.p, F.t)
    pts: set[int] = set()
    for line in chosen:
        pts.update(x for x in closure(S, line) if S.points[x][0] != 0)
    return PointSet.from_indices(S.key, pts)


def lines_by_direction(n: int, F: Field) -> list[list[AffLine]]:
    lines = affine_lines(n, F)
    groups: dict[tuple, list[AffLine]] = {}
    for L in lines:
        groups.setdefault(L.direction, []).append(L)
    return [groups[d] for d in normalized_tuples(F, n)]


def find_lines_per_direction(n: int, F: Field, K: PointSet) -> list[AffLine] | None:
    """For each direction, the first affine line contained in K; None if some direction has none."""
    S = projective_space(n, F.p, F.t)
    out = []
    for group in lines_by_direction(n, F):
        hit = next((L for L in group
                    if all(x in K for x in closure(S, L) if S.points[x][0] != 0)), None)
        if hit is None:
            return None
        out.append(hit)
    return out


def highdim_kakeya_audit(n: int, F: Field, K: PointSet, chosen: list[AffLine] | None = None) -> dict:
    """Check |K| against the code bound and Dvir's bound, and the row-independence mechanism."""
    S = projective_space(n, F.p, F.t)
    if K.geometry != S.key:
        raise ValueError("K lives in a different geometry")
    if any(S.points[x][0] == 0 for x in K):
        raise ValueError("K must consist of affine points")
    if chosen is None:
        chosen = find_lines_per_direction(n, F, K)
        if chosen is None:
            raise ValueError("K misses a direction, it is not a Besicovitch set")
    dirs = normalized_tuples(F, n)
    if sorted(L.direction for L in chosen) != dirs:
        raise ValueError("need exactly one line per direction")
    by_dir = {L.direction: L for L in chosen}

    dims = code_dims(n - 1, F)
    tail = non_information_set(n - 1, F)
    kpts = K.indices()
    col = {x: k for k, x in enumerate(kpts)}
    rows = np.zeros((len(tail), len(kpts)), dtype=np.int64)
    for r, d_idx in enumerate(tail):
        line = by_dir[dirs[d_idx]]
        for x in closure(S, line):
            if S.points[x][0] != 0:
                if x not in col:
                    raise ValueError("chosen line is not contained in K")
                rows[r, col[x]] = 1
    rank = rank_mod_p(rows, F.p)
    size = len(K)
    dvir = comb(F.q + n - 1, n)
    checks = {
        "restricted rows independent": rank == len(tail),
        "|K| >= dim C^perp": size >= dims.dim_dual,
        "dim C^perp >= C(q+n-2, n-1)": dims.dim_dual >= dims.bound,
        "|K| >= C(q+n-1, n)": size >= dvir,
    }
    return {
        "n": n,
        "q": F.q,
        "size": size,
        "theta": dims.theta,
        "dim_C": dims.dim_C,
        "dim_dual": dims.dim_dual,
        "code_bound": dims.bound,
        "dvir_bound": dvir,
        "independent_rows": len(tail),
        "restricted_rank": rank,
        "checks": checks,
        "holds": all(checks.values()),
    }


def highdim_sweep(n: int, F: Field, samples: int | None = None, seed: int = 0) -> dict:
    """Audit every per-direction choice function (samples=None) or a seeded sample."""
    import itertools

    S = projective_space(n, F.p, F.t)
    groups = lines_by_direction(n, F)
    tail = non_information_set(n - 1, F)
    dims = code_dims(n - 1, F)
    dvir = comb(F.q + n - 1, n)
    masks = [[sum(1 << x for x in closure(S, L) if S.points[x][0] != 0) for L in g] for g in groups]

    if samples is None:
        choices = itertools.product(*[range(len(g)) for g in groups])
        total = int(np.prod([len(g) for g in groups]))
    else:
        rng = np.random.default_rng(seed)
        picks = rng.integers(0, [len(g) for g in groups], size=(samples, len(groups)))
        choices = (tuple(int(v) for v in row) for row in picks)
        total = samples

    failures = []
    min_size = None
    checked = 0
    for choice in choices:
        bits = 0
        for g, c in enumerate(choice):
            bits |= masks[g][c]
        size = bits.bit_count()
        kpts = [x for x in range(S.num_points) if bits >> x & 1]
        col = {x: k for k, x in enumerate(kpts)}
        rows = np.zeros((len(tail), size), dtype=np.int64)
        for r, d_idx in enumerate(tail):
            m = masks[d_idx][choice[d_idx]]
            for x in kpts:
                if m >> x & 1:
                    rows[r, col[x]] = 1
        independent = rank_mod_p(rows, F.p) == len(tail)
        if not (independent and size >= dims.dim_dual and size >= dvir):
            failures.append({"choice": list(choice), "size": size, "independent": independent})
        min_size = size if min_size is None else min(min_size, size)
        checked += 1
    return {
        "n": n,
        "q": F.q,
        "mode": "exhaustive" if samples is None else "random",
        "sample_seed": None if samples is None else seed,
        "sets_checked": checked,
        "expected": total,
        "min_size": min_size,
        "dim_dual": dims.dim_dual,
        "code_bound": dims.bound,
        "dvir_bound": dvir,
        "failures": failures[:10],
        "failure_count": len(failures),
        "holds": not failures,
    }

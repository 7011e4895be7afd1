"""Exhaustive minimum Kakeya search and dual blocking sets of small planes."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import ceil

from .galois import Field, make_field
from .geometry import Plane, PointSet, plane
from .kakeya import (
    KakeyaConfig,
    KakeyaError,
    construct_hyperoval_kakeya,
    construct_oval_kakeya,
    realize,
)


def _base_line(P: Plane) -> int:
    # the line at infinity x0 = 0; translations of the affine chart fix it pointwise
    return P.line_index_of((1, 0, 0))


def _tail_bound(q: int, j: int) -> int:
    """Fewest new points the remaining q+1-j lines can add after j assignments.

    The k-th future line meets the j+k lines placed before it off the base
    line, once each, so it contributes at least q-j-k new points.
    """
    return sum(max(0, q - j - k) for k in range(q + 1 - j))


def _upper_bound(F: Field) -> int:
    if F.q % 2 == 0:
        return realize(construct_hyperoval_kakeya(F)).size
    return realize(construct_oval_kakeya(F)).size


@dataclass
class SearchResult:
    q: int
    k: int
    exact: bool
    nodes_visited: int
    witnesses: list[KakeyaConfig]
    witness_count: int
    symmetry: bool
    prune: bool

    @property
    def total_witness_count(self) -> int:
        """Number of optimal assignments on the fixed base line."""
        return self.witness_count * (self.q ** 2 if self.symmetry else 1)

    def to_dict(self, max_witnesses: int | None = None) -> dict:
        shown = self.witnesses if max_witnesses is None else self.witnesses[:max_witnesses]
        from .kakeya import kakeya_set

        return {
            "q": self.q,
            "k": self.k,
            "exact": self.exact,
            "prune": self.prune,
            "symmetry": self.symmetry,
            "nodes_visited": self.nodes_visited,
            "witness_count": self.witness_count,
            "witness_count_total": self.total_witness_count,
            "witnesses": [kakeya_set(w).to_dict() for w in shown],
            "witness_configs": [w.to_dict() for w in shown],
        }


def _search_subtree(p: int, t: int, prefix: tuple[int, ...], prune: bool, upper: int | None,
                    node_budget: int | None):
    """DFS below a fixed prefix of line choices; returns (best, witnesses, nodes, exhausted)."""
    F = make_field(p, t)
    P = plane(F)
    q = P.q
    base = _base_line(P)
    off = ~P.line_masks[base]
    cands = [[(L, P.line_masks[L] & off) for L in P.lines_through_point(pt) if L != base]
             for pt in P.points_on_line(base)]
    n = q + 1
    tail = [_tail_bound(q, j) for j in range(n + 1)]

    best = upper if upper is not None else q * q + 1
    witnesses: list[tuple[int, ...]] = []
    nodes = 0
    assign = list(prefix) + [0] * (n - len(prefix))
    acc0 = 0
    for j, L in enumerate(prefix):
        acc0 |= P.line_masks[L] & off
    exhausted = False

    def dfs(j: int, acc: int):
        nonlocal best, nodes, exhausted
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            exhausted = True
            return
        size = acc.bit_count()
        if j == n:
            if size < best:
                best = size
                witnesses.clear()
            if size == best:
                witnesses.append(tuple(assign))
            return
        if prune and size + tail[j] > best:
            return
        for L, mask in cands[j]:
            assign[j] = L
            dfs(j + 1, acc | mask)
            if exhausted:
                return

    dfs(len(prefix), acc0)
    return best, witnesses, nodes, exhausted


def min_kakeya(F: Field, prune: bool = True, symmetry: bool = False, workers: int = 1,
               node_budget: int | None = None) -> SearchResult:
    """Minimum size of a Kakeya set in PG(2,q), with all optimal assignments.

    The base line is fixed (the collineation group is transitive on lines).
    With ``symmetry`` the lines through the first two base points are fixed
    too: translations fixing the base line act regularly on those pairs, so
    every configuration has exactly one such translate.  With ``prune`` an
    admissible lower bound cuts branches that cannot reach the incumbent,
    which starts at the size of the matching construction; ties are kept.
    """
    P = plane(F)
    q = P.q
    base = _base_line(P)
    base_pts = P.points_on_line(base)
    first = [[L for L in P.lines_through_point(pt) if L != base] for pt in base_pts]
    fixed: tuple[int, ...] = (first[0][0], first[1][0]) if symmetry else ()
    upper = _upper_bound(F) if prune else None

    # one subtree per choice on the first free level, in canonical order
    level = len(fixed)
    prefixes = [fixed + (L,) for L in first[level]]
    args = [(F.p, F.t, pre, prune, upper, node_budget) for pre in prefixes]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_search_subtree, *zip(*args)))
    else:
        parts = [_search_subtree(*a) for a in args]

    best = min(b for b, w, _, _ in parts if w) if any(w for _, w, _, _ in parts) else None
    exact = not any(e for _, _, _, e in parts)
    if best is None:
        raise AssertionError("search found no configuration")
    found = sorted(a for b, w, _, _ in parts if b == best for a in w)
    nodes = sum(n for _, _, n, _ in parts) + 1
    configs = [KakeyaConfig(P, base, a) for a in found]
    return SearchResult(q, best, exact, nodes, configs, len(configs), symmetry, prune)


def closed_form_minimum(q: int) -> int:
    """q(q+1)/2 for even q, q(q+1)/2 + (q-1)/2 for odd q."""
    return q * (q + 1) // 2 + (0 if q % 2 == 0 else (q - 1) // 2)


def bound_ladder(q: int, k: int | None = None) -> dict:
    """Historical lower bounds for odd q, with ceilings, compared to k(q) when known."""
    if q % 2 == 0:
        raise KakeyaError("the bound ladder concerns odd q")
    base = Fraction(q * (q + 1), 2)
    rows = [
        ("blokhuis_bruen", base + Fraction(q + 2, 3), q >= 7),
        ("faber", base + Fraction(q, 3), True),
        ("cooper", base + Fraction(5 * q, 14) - Fraction(1, 14), True),
        ("blokhuis_mazzocca", base + Fraction(q - 1, 2), True),
    ]
    table = []
    for name, value, ok in rows:
        row = {"name": name, "value": str(value), "float": float(value), "ceil": ceil(value),
               "in_hypothesis": ok}
        if k is not None:
            row["below_k"] = ceil(value) <= k
        table.append(row)
    by = {r["name"]: r for r in table}
    checks = {
        "faber <= cooper": Fraction(by["faber"]["value"]) <= Fraction(by["cooper"]["value"]),
        "cooper <= blokhuis_mazzocca": Fraction(by["cooper"]["value"]) <= Fraction(by["blokhuis_mazzocca"]["value"]),
    }
    if q >= 7:
        checks["blokhuis_bruen <= blokhuis_mazzocca"] = (
            Fraction(by["blokhuis_bruen"]["value"]) <= Fraction(by["blokhuis_mazzocca"]["value"]))
    if k is not None:
        checks["all in-hypothesis bounds <= k"] = all(r["below_k"] for r in table if r["in_hypothesis"])
        checks["blokhuis_mazzocca == k"] = by["blokhuis_mazzocca"]["ceil"] == k
    return {"q": q, "k": k, "ladder": table, "checks": checks, "holds": all(checks.values())}


# ------------------------------------------------------------ blocking sets

def is_blocking_set(B: PointSet) -> bool:
    P = B.space
    masks = P.line_masks
    return all(B.bits & m for m in masks) and not any(m & ~B.bits == 0 for m in masks)


def _is_blocking_mask(bits: int, masks: list[int]) -> bool:
    for m in masks:
        if not bits & m or not m & ~bits:
            return False
    return True


def minimal_blocking_sets(P: Plane) -> list[int]:
    """Bitmasks of all inclusion-minimal blocking sets (full subset sweep)."""
    if P.num_points > 21:
        raise KakeyaError("the blocking-set sweep is limited to q <= 4")
    masks = P.line_masks
    full = (1 << P.num_points) - 1
    blocking = [b for b in range(full + 1) if _is_blocking_mask(b, masks)]
    bset = set(blocking)
    out = []
    for b in blocking:
        if not any((b & ~(1 << i)) in bset for i in range(P.num_points) if b >> i & 1):
            out.append(b)
    return out


def contains_blocking_set(P: Plane, allowed: int) -> int | None:
    """A blocking set inside the point mask ``allowed``, or None (backtracking)."""
    masks = P.line_masks
    if not all(allowed & m for m in masks):
        return None
    seen: set[int] = set()

    def go(B: int) -> int | None:
        if B in seen:
            return None
        seen.add(B)
        inside = next((m for m in masks if m & ~B == 0), None)
        if inside is None:
            return B
        x = inside
        while x:
            low = x & -x
            x ^= low
            C = B & ~low
            if all(C & m for m in masks):
                found = go(C)
                if found is not None:
                    return found
        return None

    return go(allowed)


def all_kakeya_masks(P: Plane) -> set[int]:
    out = set()
    for base in range(P.num_lines):
        off = ~P.line_masks[base]
        cands = [[P.line_masks[L] & off for L in P.lines_through_point(pt) if L != base]
                 for pt in P.points_on_line(base)]
        for combo in product(*cands):
            bits = 0
            for m in combo:
                bits |= m
            out.add(bits)
    return out


def two_line_complements(P: Plane) -> set[int]:
    full = (1 << P.num_points) - 1
    return {full & ~(P.line_masks[a] | P.line_masks[b]) for a, b in combinations(range(P.num_lines), 2)}


def _contains_kakeya(P: Plane, bits: int) -> bool:
    for base in range(P.num_lines):
        if bits & P.line_masks[base]:
            continue
        if all(any(P.line_masks[L] & ~P.line_masks[base] & ~bits == 0
                   for L in P.lines_through_point(pt) if L != base)
               for pt in P.points_on_line(base)):
            return True
    return False


def _contains_two_line_complement(P: Plane, bits: int) -> bool:
    full = (1 << P.num_points) - 1
    free = [L for L in range(P.num_lines) if not bits & P.line_masks[L]]
    return any(full & ~(P.line_masks[a] | P.line_masks[b]) & ~bits == 0 for a, b in combinations(free, 2))


@dataclass
class BlockingReport:
    set: PointSet
    is_blocking: bool
    is_dual_blocking: bool
    is_minimal: bool | None
    classification: str
    method: str

    def to_dict(self) -> dict:
        return {
            "set": self.set.to_dict(),
            "size": len(self.set),
            "is_blocking": self.is_blocking,
            "is_dual_blocking": self.is_dual_blocking,
            "is_minimal": self.is_minimal,
            "classification": self.classification,
            "method": self.method,
        }


def classify_set(P: Plane, bits: int, kakeya: set[int] | None = None,
                 complements: set[int] | None = None) -> str:
    kakeya = all_kakeya_masks(P) if kakeya is None else kakeya
    complements = two_line_complements(P) if complements is None else complements
    if bits in kakeya:
        return "kakeya"
    if bits in complements:
        return "two-line-complement"
    return "other"


def dual_blocking_check(S: PointSet, exact_limit: int = 4) -> BlockingReport:
    """Is S a dual blocking set (meets every blocking set, contains no line)?

    For q <= exact_limit the answer comes from a backtracking search for a
    blocking set inside the complement of S.  Beyond that S is certified by
    containing a Kakeya set or the complement of two lines, the only minimal
    dual blocking sets.
    """
    P = S.space
    bits = S.bits
    has_line = any(m & ~bits == 0 for m in P.line_masks)
    blocking = is_blocking_set(S)
    full = (1 << P.num_points) - 1
    if P.q <= exact_limit:
        method = "exact"
        dual = not has_line and contains_blocking_set(P, full & ~bits) is None
        minimal = None
        if dual:
            minimal = all(contains_blocking_set(P, full & ~(bits & ~(1 << i))) is not None
                          for i in S.indices())
        if not dual:
            cls = "not-dual-blocking"
        elif not minimal:
            cls = "non-minimal"
        else:
            cls = classify_set(P, bits)
        return BlockingReport(S, blocking, dual, minimal, cls, method)
    if has_line:
        return BlockingReport(S, blocking, False, None, "not-dual-blocking", "contains-line")
    if _contains_kakeya(P, bits):
        return BlockingReport(S, blocking, True, None, "contains-kakeya", "certificate")
    if _contains_two_line_complement(P, bits):
        return BlockingReport(S, blocking, True, None, "contains-two-line-complement", "certificate")
    return BlockingReport(S, blocking, False, None, "contains-neither", "certificate")


def minimal_dual_blocking_enumeration(F: Field) -> dict:
    """All minimal dual blocking sets of PG(2,3), classified."""
    P = plane(F)
    if P.q != 3:
        raise KakeyaError("the exhaustive dual blocking enumeration is limited to q = 3")
    mbs = minimal_blocking_sets(P)
    masks = P.line_masks
    full = (1 << P.num_points) - 1

    def meets_all(b: int) -> bool:
        return all(b & m for m in mbs)

    dual = [b for b in range(full + 1)
            if meets_all(b) and not any(m & ~b == 0 for m in masks)]
    dual_set = set(dual)
    minimal = [b for b in dual
               if not any((b & ~(1 << i)) in dual_set for i in range(P.num_points) if b >> i & 1)]
    kakeya = all_kakeya_masks(P)
    complements = two_line_complements(P)
    reports = []
    for b in minimal:
        S = PointSet(P.key, b)
        reports.append(BlockingReport(S, is_blocking_set(S), True, True,
                                      classify_set(P, b, kakeya, complements), "subset-sweep"))
    sizes: dict[str, dict[int, int]] = {}
    for r in reports:
        d = sizes.setdefault(r.classification, {})
        d[len(r.set)] = d.get(len(r.set), 0) + 1
    min_size = min(len(r.set) for r in reports)
    min_dual = min(b.bit_count() for b in dual)
    at_min = sorted({r.classification for r in reports if len(r.set) == min_size})
    bound = P.q * (P.q + 1) // 2 + (P.q - 1) // 2
    below = [r for r in reports if len(r.set) < bound]
    kakeya_dual = [b for b in kakeya if b in dual_set]
    kakeya_min_size = min(b.bit_count() for b in kakeya)
    finding = (
        f"{len(below)} minimal dual blocking sets of size {min_size} lie below the odd-q bound "
        f"q(q+1)/2+(q-1)/2 = {bound}; all are two-line complements. Every Kakeya set is dual "
        f"blocking ({len(kakeya_dual)} of {len(kakeya)}) with minimum size {kakeya_min_size}, "
        f"so the bound holds for Kakeya sets only."
    ) if below else "no minimal dual blocking set lies below the odd-q bound"
    return {
        "q": P.q,
        "minimal_blocking_sets": len(mbs),
        "dual_blocking_sets": len(dual),
        "minimal_dual_blocking_sets": len(reports),
        "min_dual_blocking_size": min_dual,
        "min_minimal_size": min_size,
        "types_at_minimum": at_min,
        "sizes_by_type": {k: {str(s): c for s, c in sorted(v.items())} for k, v in sorted(sizes.items())},
        "other_count": sum(1 for r in reports if r.classification == "other"),
        "kakeya_sets": len(kakeya),
        "kakeya_sets_dual_blocking": len(kakeya_dual),
        "kakeya_min_size": kakeya_min_size,
        "odd_q_bound": bound,
        "finding": finding,
        "reports": reports,
    }

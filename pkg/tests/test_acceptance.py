"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line (also repeated in the terminal
summary) and then asserts.
"""

import time
from itertools import product

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from kakeyalab.codes import code_dims, highdim_sweep, restriction_equality_check
from kakeyalab.galois import field_of_order
from kakeyalab.geometry import plane
from kakeyalab.kakeya import (
    KakeyaConfig,
    conic_plus_external_point,
    construct_hyperoval_kakeya,
    construct_oval_kakeya,
    intersection_spectrum,
    random_config,
    realize,
    verify_incidence_formula,
)
from kakeyalab.nuclei import internal_nuclei, is_conic_plus_external_point, kakeya_to_omega, verify_bk
from kakeyalab.search import min_kakeya, minimal_dual_blocking_enumeration
from kakeyalab.segre import (
    conic_relation_census,
    one_tangent_points,
    random_admissible_pair,
    segre_products,
    triple_point_census,
    verify_mu_lambda,
)


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {title}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def test_criterion_01_construction_sizes():
    rows, ok, slowest = [], True, 0.0
    for q in (4, 8, 16):
        t0 = time.perf_counter()
        size = realize(construct_hyperoval_kakeya(field_of_order(q))).size
        slowest = max(slowest, time.perf_counter() - t0)
        ok &= size == q * (q + 1) // 2
        rows.append(f"h{q}={size}")
    for q in (3, 5, 7, 9, 11):
        t0 = time.perf_counter()
        size = realize(construct_oval_kakeya(field_of_order(q))).size
        slowest = max(slowest, time.perf_counter() - t0)
        ok &= size == q * (q + 1) // 2 + (q - 1) // 2
        rows.append(f"o{q}={size}")
    ok &= slowest < 1.0
    report(1, "construction sizes", ok, f"{' '.join(rows)}, slowest {slowest:.3f}s")


def test_criterion_02_incidence_formula():
    t0 = time.perf_counter()
    ok, checked = True, 0
    for q in (4, 8, 16):
        ok &= verify_incidence_formula(construct_hyperoval_kakeya(field_of_order(q))).holds
        checked += 1
    for q in (3, 5, 7, 9, 11):
        ok &= verify_incidence_formula(construct_oval_kakeya(field_of_order(q))).holds
        checked += 1
    for q in (3, 5, 7):
        P = plane(q)
        rng = np.random.default_rng(1000 + q)
        for _ in range(1000):
            ok &= verify_incidence_formula(random_config(P, rng)).holds
            checked += 1
    dt = time.perf_counter() - t0
    report(2, "incidence formula", ok and dt < 10, f"{checked} configurations in {dt:.2f}s")


def test_criterion_03_exhaustive_minima():
    parts, ok = [], True
    for q, k in ((3, 7), (4, 10), (5, 17)):
        t0 = time.perf_counter()
        res = min_kakeya(field_of_order(q), prune=False)
        dt = time.perf_counter() - t0
        ok &= res.exact and res.k == k and dt < 1.0
        parts.append(f"k({q})={res.k} unpruned {dt:.2f}s")
    t0 = time.perf_counter()
    res = min_kakeya(field_of_order(7), prune=True, symmetry=True)
    dt = time.perf_counter() - t0
    ok &= res.exact and res.k == 31 and dt < 600
    parts.append(f"k(7)={res.k} pruned+symmetry {dt:.2f}s")
    report(3, "exhaustive minima", ok, "; ".join(parts))


def test_criterion_04_equality_characterization():
    parts, ok = [], True
    for q in (3, 5):
        res = min_kakeya(field_of_order(q), prune=False)
        good = 0
        for w in res.witnesses:
            omega = kakeya_to_omega(w).omega
            spec = intersection_spectrum(omega)
            fingerprint = spec.a[3] == (q - 1) // 2 and spec.a[1] == 3 * (q - 1) // 2
            census = len(internal_nuclei(omega)) == 2
            conic = is_conic_plus_external_point(omega)["is_conic_plus_external"]
            good += fingerprint and census and conic
        ok &= good == res.witness_count
        parts.append(f"q={q}: {good}/{res.witness_count} witnesses")
    report(4, "equality characterization", ok, "; ".join(parts))


def test_criterion_05_extremal_spectrum():
    q = 5
    spec = intersection_spectrum(conic_plus_external_point(plane(q)))
    a = tuple(spec.a[:4])
    ok = (a == (8, 6, 15, 2) and sum(spec.a[4:]) == 0
          and spec.intersecting_count == 23 == (q * q + 4 * q + 1) // 2
          and spec.excess_f == 2 == (q - 1) // 2)
    report(5, "extremal spectrum", ok, f"a={a} intersecting={spec.intersecting_count} f={spec.excess_f}")


def test_criterion_06_bichara_korchmaros():
    t0 = time.perf_counter()
    ex = verify_bk(field_of_order(3), mode="exhaustive")
    ok = ex["sets_checked"] == 1287 and ex["max_nuclei"] == 2
    parts = [f"q=3 exhaustive {ex['sets_checked']} sets max {ex['max_nuclei']}"]
    for q in (5, 7):
        for source in ("uniform", "kakeya"):
            r = verify_bk(field_of_order(q), mode="random", samples=100_000, seed=q, source=source)
            ok &= r["sets_checked"] == 100_000 and r["max_nuclei"] <= 2
            parts.append(f"q={q} {source} max {r['max_nuclei']}")
    dt = time.perf_counter() - t0
    report(6, "Bichara-Korchmaros", ok and dt < 60, f"{'; '.join(parts)} ({dt:.1f}s)")


def test_criterion_07_segre_identities():
    rng = np.random.default_rng(7)
    planes = [plane(q) for q in (3, 4, 5, 7, 8, 9)]
    bad = 0
    for i in range(10_000):
        P = planes[i % len(planes)]
        X, frame = random_admissible_pair(P, rng)
        pr = segre_products(X, frame)
        bad += P.F.prod([pr.p1, pr.p2, pr.p3]) != 1
    ok = bad == 0
    mu_points = 0
    for q in (3, 5, 7, 9):
        omega = conic_plus_external_point(plane(q))
        for U in one_tangent_points(omega):
            ok &= verify_mu_lambda(omega, U)["checks"]["mu == -lambda"]
            mu_points += 1
    v_points = 0
    for q in (5, 7):
        for row in conic_relation_census(conic_plus_external_point(plane(q))):
            for v in row["points"]:
                ok &= v["2ab-a-b == 0"] and v["lambda == -b^2/a^2"]
                v_points += 1
    ok &= v_points > 0
    report(7, "Segre identities", ok,
           f"10000 products ({bad} bad); mu=-lambda at {mu_points} points; conic relation at {v_points} (U1,U2,V)")


def test_criterion_08_triple_point_lemma():
    P = plane(3)
    base = 0
    choices = [[L for L in P.lines_through_point(x) if L != base] for x in P.points_on_line(base)]
    worst3 = max(len(triple_point_census(KakeyaConfig(P, base, a))["exceptional_points"])
                 for a in product(*choices))
    n3 = len(list(product(*choices)))
    worst = {}
    for q in (5, 7):
        Pq = plane(q)
        rng = np.random.default_rng(800 + q)
        worst[q] = max(len(triple_point_census(random_config(Pq, rng))["exceptional_points"])
                       for _ in range(1000))
    ok = n3 == 81 and worst3 <= 1 and all(v <= 1 for v in worst.values())
    report(8, "triple point lemma", ok,
           f"q=3 all {n3} configs max {worst3}; q=5 max {worst[5]}; q=7 max {worst[7]} exceptions")


def test_criterion_09_dual_blocking_sets():
    t0 = time.perf_counter()
    rep = minimal_dual_blocking_enumeration(field_of_order(3))
    dt = time.perf_counter() - t0
    ok = (rep["min_dual_blocking_size"] == 6 and rep["types_at_minimum"] == ["two-line-complement"]
          and rep["other_count"] == 0 and dt < 300)
    print(f"finding: {rep['finding']}")
    report(9, "dual blocking sets", ok,
           f"min size {rep['min_dual_blocking_size']}, minimal types {sorted(rep['sizes_by_type'])}, "
           f"other={rep['other_count']} ({dt:.1f}s)")


def test_criterion_10_code_bound():
    t0 = time.perf_counter()
    ok, parts = True, []
    for q, want in ((2, 3), (3, 6), (5, 15), (7, 28)):
        d = code_dims(2, field_of_order(q))
        ok &= d.dim_dual == want
        parts.append(f"q={q}:{d.dim_dual}")
    d4 = code_dims(2, field_of_order(4))
    ok &= d4.dim_dual >= 10
    parts.append(f"q=4:{d4.dim_dual}>=10")
    for q in (2, 3):
        ok &= restriction_equality_check(3, field_of_order(q))["holds"]
    dt = time.perf_counter() - t0
    report(10, "code bound", ok and dt < 60, f"dim C_perp {' '.join(parts)}; restriction q=2,3 ({dt:.1f}s)")


def test_criterion_11_highdim_audit():
    a = highdim_sweep(3, field_of_order(2))
    b = highdim_sweep(3, field_of_order(3), samples=1000, seed=11)
    ok = (a["sets_checked"] == 16384 and a["holds"] and b["sets_checked"] == 1000 and b["holds"])
    report(11, "high-dimensional audit", ok,
           f"(3,2) {a['sets_checked']} sets min {a['min_size']}; (3,3) {b['sets_checked']} sampled min {b['min_size']}")

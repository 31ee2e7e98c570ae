"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` (the lines are printed
even without ``-s``). Everything is exact; there are no tolerances.
"""
import itertools
import math
import random
import time
from fractions import Fraction as Q

import pytest

from labflags.campaign import appendix, check_graph_laws, safe_is_hanner
from labflags.errors import TheoremViolation
from labflags.exact import LinearSystem, solve_feasibility
from labflags.fan import flag_sign, kept_cones
from labflags.flags import (
    SignedFlags, check_ladder, count_flags, enumerate_flags, unique_facet,
    unique_projection_edge, verify_injection_family,
)
from labflags.graphs import enumerate_cographs, path_graph
from labflags.hanner import (
    clique_polytope, enumerate_hanner_types, polytope_graph, random_unconditional,
)
from labflags.polytope import canonical, hull

from oracles import brute_feasible

pytestmark = pytest.mark.slow


def say(capsys, n, ok, msg):
    with capsys.disabled():
        print(f"\nacceptance criterion {n}: {'PASS' if ok else 'FAIL'} ({msg})")


def bound(d):
    return 2 ** d * math.factorial(d)


# -------------------------------------------------------------- shared inputs

_cache = {}


def fuzz_instances():
    """Criterion 3: 200 random polytopes in d = 3 and 50 in d = 4."""
    if "fuzz" not in _cache:
        out = []
        for d, n in ((3, 200), (4, 50)):
            for k in range(n):
                P = random_unconditional(d, 1 + k % 3, f"accept:{d}:{k}")
                out.append((f"u{d}-{k}", P))
        _cache["fuzz"] = out
    return _cache["fuzz"]


def injection_instances():
    """Criterion 5: Hanner types d <= 4, C(Pi_3), 25 random d = 3 polytopes."""
    if "inj" not in _cache:
        out = []
        for d in range(1, 5):
            for k, P in enumerate(enumerate_hanner_types(d)):
                out.append((f"hanner-d{d}-{k}", P))
        out.append(("pi3", clique_polytope(path_graph(4))))
        for k in range(25):
            out.append((f"u3-{k}", random_unconditional(3, 1 + k % 3, f"inject:{k}")))
        _cache["inj"] = out
    return _cache["inj"]


def _signs(P):
    if ("signs", id(P)) not in _cache:
        _cache[("signs", id(P))] = [flag_sign(P, F) for F in enumerate_flags(P)]
    return _cache[("signs", id(P))]


# ------------------------------------------------------------------ criteria

def test_criterion_1_appendix(capsys):
    t0 = time.perf_counter()
    rep = appendix()
    dt = time.perf_counter() - t0
    counts = sorted(r["flags"] for r in rep["vertices"])
    by = {c["check"]: c for c in rep["checks"]}
    direct = len(enumerate_flags(clique_polytope(path_graph(4))))
    ok = (counts == [24] * 4 + [44] * 8 and by["sum"]["value"] == 448 == 8 * 44 + 4 * 24
          and direct == 448 and by["exceeds-bound"]["bound"] == 384 and dt < 10)
    say(capsys, 1, ok, f"dual facets {counts.count(44)}x44 + {counts.count(24)}x24 = "
        f"{by['sum']['value']}, direct {direct}, {dt:.1f}s")
    assert ok


def test_criterion_2_hanner_equality(capsys):
    t0 = time.perf_counter()
    bad = []
    n = 0
    for d in range(1, 5):
        for P in enumerate_hanner_types(d):
            n += 1
            faces = len(P.lattice.faces) - 1
            if count_flags(P) != bound(d) or len(enumerate_flags(P)) != bound(d) or faces != 3 ** d:
                bad.append((d, canonical(P)))
    dt = time.perf_counter() - t0
    ok = not bad and n == 1 + 2 + 4 + 10 and dt < 60
    say(capsys, 2, ok, f"{n} types, {len(bad)} wrong, {dt:.1f}s")
    assert ok


def test_criterion_3_inequality_fuzz(capsys):
    bad = []
    eq = 0
    for name, P in fuzz_instances():
        d = P.dim
        n = count_flags(P)
        hanner = safe_is_hanner(P)
        eq += n == bound(d)
        if n < bound(d) or (n == bound(d)) != hanner:
            bad.append((name, n, hanner))
    ok = not bad and len(fuzz_instances()) == 250
    say(capsys, 3, ok, f"{len(fuzz_instances())} instances, {eq} at equality, {len(bad)} violations")
    assert ok, bad[:5]


def test_criterion_4_per_orthant(capsys):
    bad = []
    for name, P in fuzz_instances():
        d = P.dim
        signs = _signs(P)
        per = {}
        for s in signs:
            per[s] = per.get(s, 0) + 1
        if (len(per) != 2 ** d or any(s.dim != d for s in per)
                or min(per.values()) < math.factorial(d) or sum(per.values()) != count_flags(P)):
            bad.append(name)
    ok = not bad
    say(capsys, 4, ok, f"{len(fuzz_instances())} instances, {len(bad)} with an orthant below d!")
    assert ok, bad[:5]


def test_criterion_5_injections(capsys):
    bad = []
    cones = 0
    for name, P in injection_instances():
        try:
            rep = verify_injection_family(P)
            cones += len(rep["cones"])
            if len(rep["cones"]) != 3 ** P.dim - 1:
                bad.append(name)
        except TheoremViolation as e:
            bad.append((name, str(e)))
    ok = not bad
    say(capsys, 5, ok, f"{len(injection_instances())} instances, {cones} cones, {len(bad)} failures")
    assert ok, bad[:5]


def test_criterion_6_flip_lemmas(capsys):
    bad = []
    nflags = 0
    for name, P in injection_instances():
        d = P.dim
        for F in enumerate_flags(P):
            nflags += 1
            try:
                if not all(check_ladder(P, F, i, j) for i in range(d) for j in range(i, d)):
                    bad.append((name, "ladder"))
                if d >= 2:
                    unique_projection_edge(P, F)
                unique_facet(P, F)
            except TheoremViolation as e:
                bad.append((name, str(e)))
    ok = not bad
    say(capsys, 6, ok, f"{nflags} flags, {len(bad)} failures")
    assert ok, bad[:5]


def test_criterion_7_graph_laws(capsys):
    bad = []
    n = 0
    for d in range(1, 5):
        for G, P in zip(enumerate_cographs(d), enumerate_hanner_types(d)):
            r = check_graph_laws(P, {"count": count_flags(P)})
            n += 1
            if r["status"] != "pass" or polytope_graph(P) != G:
                bad.append((d, r["detail"]))
    minimizers = 0
    for name, P in fuzz_instances() + injection_instances():
        if count_flags(P) == bound(P.dim):
            minimizers += 1
            G = polytope_graph(P)
            if canonical(P) != canonical(clique_polytope(G)):
                bad.append((name, "not C(G(P))"))
            if any(x not in (-1, 0, 1) for v in P.vertices for x in v):
                bad.append((name, "vertex outside {-1,0,1}^d"))
    ok = not bad
    say(capsys, 7, ok, f"{n} Hanner types, {minimizers} minimizers, {len(bad)} failures")
    assert ok, bad[:5]


def _closed(kept):
    return all(tuple(x if x == y else 0 for x, y in zip(a, b)) in kept
               for a, b in itertools.combinations(kept, 2))


def test_criterion_8_sign_well_defined(capsys):
    bad = []
    n = 0
    for name, P in injection_instances():
        # the flags of P and of every coordinate section used by the injections
        idx = SignedFlags(P)
        d = P.ambient_dim
        polys = [idx.section(J) for k in range(1, d + 1) for J in itertools.combinations(range(d), k)]
        for Q_ in polys:
            for F in enumerate_flags(Q_):
                n += 1
                kept = kept_cones(Q_, F)
                if not kept or not _closed(kept):
                    bad.append((name, "kept set not closed"))
                    continue
                if flag_sign(Q_, F).dim < Q_.dim:
                    bad.append((name, "sign too small"))
    ok = not bad
    say(capsys, 8, ok, f"{n} flags, {len(bad)} failures")
    assert ok, bad[:5]


def test_criterion_9_oracles(capsys):
    cube = hull(list(itertools.product((-1, 1), repeat=3)))
    cross = hull([tuple(s if k == i else 0 for k in range(3)) for i in range(3) for s in (1, -1)])
    pi3 = clique_polytope(path_graph(4))
    fv = [cube.lattice.f_vector(), cross.lattice.f_vector(), pi3.lattice.f_vector()]
    # C(Pi_3) by hand: 12 vertices and 12 facets (the polar has 12 vertices);
    # the 8 vertices on the end edges of the path have degree 7 (their dual
    # facet has 6 vertices and 11 edges), the middle 4 have degree 4, so
    # (8*7 + 4*4) / 2 = 36 edges, and Euler's relation forces 36 ridges
    f_ok = fv == [(1, 8, 12, 6, 1), (1, 6, 12, 8, 1), (1, 12, 36, 36, 12, 1)]
    rng = random.Random(20260101)
    disagree = 0
    for _ in range(1000):
        n = rng.randint(1, 3)

        def rows(k):
            return tuple((tuple(Q(rng.randint(-3, 3)) for _ in range(n)), Q(rng.randint(-3, 3)))
                         for _ in range(k))
        sys_ = LinearSystem(n, rows(rng.randint(0, 1)), rows(rng.randint(0, 3)), rows(rng.randint(0, 3)))
        r = solve_feasibility(sys_)
        if bool(r) != brute_feasible(sys_) or (r and not sys_.satisfied_by(r.witness)):
            disagree += 1
    ok = f_ok and disagree == 0
    say(capsys, 9, ok, f"f-vectors {fv[0]}, {fv[1]}, {fv[2]}; {disagree}/1000 oracle disagreements")
    assert ok

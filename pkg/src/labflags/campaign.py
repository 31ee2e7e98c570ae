"""Verification campaigns: generate instances, run the lemma checks, and
assemble deterministic reports."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import GraphUndefined, TheoremViolation
from .fan import all_cones, flag_sign, relint_face_meets_relint_cone, sign_order
from .flags import (
    check_ladder, count_flags, enumerate_flags, unique_facet,
    unique_projection_edge, verify_injection_family,
)
from .graphs import Graph, disjoint_union
from .hanner import (
    clique_polytope, enumerate_hanner_types, is_hanner, is_locally_antiblocking,
    is_normalized, is_proper, polytope_graph, random_unconditional,
)
from .polytope import Polytope, canonical, coordinate_section, hull, polar

CHECKS = ("flag-bound", "equality-iff-hanner", "ladder", "unique-edge", "unique-facet",
          "injections", "graph-laws", "prop-2-5", "min-downwards")
GENERATORS = ("hanner", "clique-polytope", "unconditional", "file")

# exit status per failing check class; 1 is left for usage and IO problems
EXIT_CODES = {name: 10 + i for i, name in enumerate(CHECKS)}


@dataclass
class CampaignConfig:
    dims: tuple = (3,)
    count: int = 10
    seed: int = 0
    generator: str = "unconditional"
    checks: tuple = CHECKS
    files: tuple = ()
    n_points: int = 2
    timing: bool = False

    def __post_init__(self):
        self.dims = tuple(self.dims)
        self.checks = tuple(self.checks)
        self.files = tuple(self.files)
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise ValueError(f"unknown checks {bad}")
        if self.generator != "file":
            if any(d < 1 or d > 6 for d in self.dims):
                raise ValueError("dimensions must lie in 1..6")
            per_flag = {"ladder", "unique-edge", "unique-facet", "injections"}
            if per_flag & set(self.checks) and any(d > 5 for d in self.dims):
                raise ValueError("per-flag lemma checks are limited to dimension 5")


def flag_bound(d: int) -> int:
    return 2 ** d * math.factorial(d)


def safe_is_hanner(P: Polytope) -> bool:
    """is_hanner, reading an undefined coordinate graph as "not Hanner"."""
    try:
        return is_hanner(P)
    except GraphUndefined:
        return False


def flag_witness(P: Polytope, flag) -> list[list[int]]:
    """A flag as vertex-index lists against the canonical vertex order."""
    L = P.lattice
    return [sorted(L.faces[i].vertex_indices) for i in flag]


# ------------------------------------------------------------------ instances

def instances(config: CampaignConfig) -> list[tuple[str, Polytope]]:
    out = []
    if config.generator == "file":
        for path in config.files:
            with open(path) as fh:
                out.append((os.path.basename(path), Polytope.from_json(json.load(fh))))
        return out
    for d in config.dims:
        if config.generator == "hanner":
            for k, P in enumerate(enumerate_hanner_types(d)):
                out.append((f"hanner-d{d}-{k}", P))
        elif config.generator == "clique-polytope":
            rng = random.Random(f"{config.seed}:clique:{d}")
            pairs = list(itertools.combinations(range(d), 2))
            for k in range(config.count):
                G = Graph(d, [p for p in pairs if rng.random() < 0.5])
                out.append((f"clique-d{d}-{k}:{json.dumps(G.to_json()['edges'])}", clique_polytope(G)))
        else:
            for k in range(config.count):
                P = random_unconditional(d, config.n_points, f"{config.seed}:{d}:{k}")
                out.append((f"unconditional-d{d}-{k}", P))
    return out


# --------------------------------------------------------------------- checks

def _result(name, ok, detail=None, witness=None, status=None):
    r = {"check": name, "status": status or ("pass" if ok else "fail"), "detail": detail or {}}
    if r["status"] == "fail":
        r["witness"] = witness
    return r


def check_flag_bound(P: Polytope, ctx: dict) -> dict:
    flags = ctx["flags"]
    total = count_flags(P)
    if total != len(flags):
        return _result("flag-bound", False, {"count": total, "enumerated": len(flags)},
                       "chain count disagrees with enumeration")
    d = P.dim
    by = {}
    for F in flags:
        by.setdefault(str(flag_sign(P, F)), []).append(F)
    orthant = {k: len(by[k]) for k in sorted(by, key=sign_order)}
    detail = {"count": total, "bound": flag_bound(d), "orthants": orthant}
    low = [k for k, v in orthant.items() if v < math.factorial(d)]
    if len(orthant) != 2 ** d or low:
        return _result("flag-bound", False, detail, {"orthants_below_bound": low})
    if sum(orthant.values()) != total or total < flag_bound(d):
        return _result("flag-bound", False, detail, {"count": total})
    return _result("flag-bound", True, detail)


def check_equality_iff_hanner(P: Polytope, ctx: dict) -> dict:
    total = ctx["count"]
    hanner = safe_is_hanner(P)
    equal = total == flag_bound(P.dim)
    detail = {"count": total, "equality": equal, "hanner": hanner}
    return _result("equality-iff-hanner", equal == hanner, detail, detail)


def check_ladder_all(P: Polytope, ctx: dict) -> dict:
    d = P.dim
    n = 0
    for F in ctx["flags"]:
        for i in range(d):
            for j in range(i, d):
                n += 1
                if not check_ladder(P, F, i, j):
                    return _result("ladder", False, {}, {"flag": flag_witness(P, F), "i": i, "j": j})
    return _result("ladder", True, {"cases": n})


def _per_flag(name, fn):
    def check(P: Polytope, ctx: dict) -> dict:
        for F in ctx["flags"]:
            try:
                fn(P, F)
            except TheoremViolation as e:
                return _result(name, False, {"error": str(e)}, {"flag": flag_witness(P, F)})
        return _result(name, True, {"flags": len(ctx["flags"])})
    return check


def check_injections(P: Polytope, ctx: dict) -> dict:
    try:
        rep = verify_injection_family(P)
    except TheoremViolation as e:
        return _result("injections", False, {"error": str(e)}, _jsonable(e.witness))
    ratio = min(Fraction(c["count"], c["bound"]) for c in rep["cones"]) if rep["cones"] else 1
    return _result("injections", True, {"cones": len(rep["cones"]), "min_ratio": str(ratio)})


def _join(P: Polytope, Q: Polytope) -> Polytope:
    zp = (0,) * P.ambient_dim
    zq = (0,) * Q.ambient_dim
    return hull([tuple(v) + zq for v in P.vertices] + [zp + tuple(w) for w in Q.vertices])


_JOIN_PARTNERS = {
    "segment": hull([(-1,), (1,)]),
    "square": hull([(1, 1), (1, -1), (-1, 1), (-1, -1)]),
    "diamond": hull([(1, 0), (-1, 0), (0, 1), (0, -1)]),
}


def check_graph_laws(P: Polytope, ctx: dict) -> dict:
    try:
        G = polytope_graph(P)
    except GraphUndefined as e:
        return _result("graph-laws", True, {"reason": str(e)}, status="skip")
    d = P.ambient_dim
    laws = {}
    Gp = polytope_graph(polar(P))
    laws["complement"] = Gp.edges == G.complement().edges
    ok_sec = True
    for k in range(2, d):
        for J in itertools.combinations(range(d), k):
            if polytope_graph(coordinate_section(P, J)).edges != G.induced(J).edges:
                ok_sec = False
    laws["induced"] = ok_sec
    ok_join = True
    for name, Q in _JOIN_PARTNERS.items():
        if d + Q.ambient_dim > 6:
            continue
        H = polytope_graph(Q)
        if polytope_graph(_join(P, Q)).edges != disjoint_union(G, H).edges:
            ok_join = False
    laws["disjoint-union"] = ok_join
    if ctx["count"] == flag_bound(d):
        laws["graph-determines"] = canonical(P) == canonical(clique_polytope(G))
        laws["sign-vertices"] = all(x in (-1, 0, 1) for v in P.vertices for x in v)
        laws["one-vectors"] = _one_vector_law(P)
    ok = all(laws.values())
    detail = {"graph": G.to_json(), "laws": laws}
    return _result("graph-laws", ok, detail, {k: v for k, v in laws.items() if not v})


def _one_vector_law(P: Polytope) -> bool:
    """For cones D of dim >= 2: if 1_C is in P for every 2-face C of D, so is 1_D."""
    for D in all_cones(P.ambient_dim):
        if D.dim < 2:
            continue
        two_faces = []
        for i, j in itertools.combinations(D.support, 2):
            two_faces.append(tuple(D.sigma[k] if k in (i, j) else 0 for k in range(len(D))))
        if all(P.contains(s) for s in two_faces) and not P.contains(D.sigma):
            return False
    return True


def crossing_coordinates(P: Polytope, F) -> list[int]:
    """Coordinates on which relint F takes both signs.

    Cones C, D of the standard fan with relints meeting relint F differ at
    coordinate i exactly when this happens, since the coordinate ranges over
    an open interval on relint F.
    """
    pts = P.points(F)
    return [i for i in range(P.ambient_dim)
            if min(p[i] for p in pts) < 0 < max(p[i] for p in pts)]


def prop_2_5_pairs(P: Polytope, F) -> list[tuple]:
    """Reference form: all pairs of cones whose relints meet relint F, with
    the coordinates where they differ."""
    hits = [C for C in all_cones(P.ambient_dim) if relint_face_meets_relint_cone(P, F, C)]
    return [(C, D, [i for i in range(len(C)) if C.sigma[i] != D.sigma[i]])
            for C, D in itertools.combinations(hits, 2)]


def check_prop_2_5(P: Polytope, ctx: dict) -> dict:
    """Normal cones cannot cross coordinate hyperplanes: every facet normal
    through a face vanishes on the coordinates where relint F changes sign."""
    n = 0
    for F in P.lattice.faces:
        if not F.vertex_indices:
            continue
        cross = crossing_coordinates(P, F)
        if not cross:
            continue
        n += 1
        for (a, _), inc in zip(P.facets, P.incidence):
            if F.vertex_indices <= inc and any(a[i] != 0 for i in cross):
                return _result("prop-2-5", False, {}, {"face": sorted(F.vertex_indices),
                                                       "normal": list(a), "coordinates": cross})
    return _result("prop-2-5", True, {"crossing_faces": n})


def check_min_downwards(P: Polytope, ctx: dict) -> dict:
    d = P.ambient_dim
    if ctx["count"] != flag_bound(d):
        return _result("min-downwards", True, {"reason": "not a minimizer"}, status="skip")
    bad = []
    for k in range(1, d):
        for J in itertools.combinations(range(d), k):
            S = coordinate_section(P, J)
            if count_flags(S) != flag_bound(k):
                bad.append(list(J))
    # two-dimensional sections of a minimizer are rectangles or diamonds
    try:
        polytope_graph(P)
    except GraphUndefined as e:
        return _result("min-downwards", False, {"error": str(e)}, {"graph": "undefined"})
    return _result("min-downwards", not bad, {"sections": 2 ** d - 2}, {"sections": bad})


_RUNNERS = {
    "flag-bound": check_flag_bound,
    "equality-iff-hanner": check_equality_iff_hanner,
    "ladder": check_ladder_all,
    "unique-edge": _per_flag("unique-edge", unique_projection_edge),
    "unique-facet": _per_flag("unique-facet", unique_facet),
    "injections": check_injections,
    "graph-laws": check_graph_laws,
    "prop-2-5": check_prop_2_5,
    "min-downwards": check_min_downwards,
}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)


def run_instance(name: str, P: Polytope, checks=CHECKS, timing: bool = False) -> dict:
    entry = {"name": name, "dim": P.dim, "n_vertices": len(P.vertices),
             "f_vector": list(P.lattice.f_vector()), "results": []}
    pre = []
    if not P.is_full_dimensional:
        pre.append("not full-dimensional")
    elif not is_proper(P):
        pre.append("not proper")
    elif not is_locally_antiblocking(P):
        pre.append("not locally anti-blocking")
    elif not is_normalized(P):
        pre.append("not normalized")
    if pre:
        entry["results"] = [_result(c, False, {"reason": pre[0]}, {"precondition": pre[0]})
                            for c in checks]
        return entry
    flags = enumerate_flags(P)
    ctx = {"flags": flags, "count": len(flags)}
    for c in checks:
        t0 = time.perf_counter()
        try:
            r = _RUNNERS[c](P, ctx)
        except TheoremViolation as e:
            r = _result(c, False, {"error": str(e)}, _jsonable(e.witness))
        if timing:
            r["seconds"] = round(time.perf_counter() - t0, 3)
        entry["results"].append(r)
    return entry


def _worker(args):
    name, data, checks, timing = args
    return run_instance(name, Polytope.from_json(data), checks, timing)


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("LABFLAGS_WORKERS", "1")))
    except ValueError:
        return 1


def run_campaign(config: CampaignConfig, workers: int | None = None) -> dict:
    t0 = time.perf_counter()
    insts = instances(config)
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(insts) > 1:
        jobs = [(name, P.to_json(), config.checks, config.timing) for name, P in insts]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_worker, jobs))
    else:
        entries = [run_instance(name, P, config.checks, config.timing) for name, P in insts]
    for k, e in enumerate(entries):
        e["index"] = k
    failed = [r["check"] for e in entries for r in e["results"] if r["status"] == "fail"]
    report = {"config": asdict(config), "instances": entries,
              "aggregate": "fail" if failed else "pass",
              "failures": len(failed)}
    if config.timing:
        report["timing"] = round(time.perf_counter() - t0, 3)
    return report


def exit_code(report: dict) -> int:
    for e in report["instances"]:
        for r in e["results"]:
            if r["status"] == "fail":
                return EXIT_CODES.get(r["check"], 2)
    for r in report.get("checks", []):
        if r.get("status") == "fail":
            return EXIT_CODES.get(r.get("check"), 2)
    return 0


# ------------------------------------------------------------------- appendix

def appendix() -> dict:
    """Flag count of C(Π₃) through the dual facets of its polar."""
    from .graphs import path_graph
    C = clique_polytope(path_graph(4))
    Cp = polar(C)
    rows = []
    total = 0
    for v in C.vertices:
        facet = hull([y for y in Cp.vertices if sum(a * b for a, b in zip(v, y)) == 1])
        n = count_flags(facet)
        support = [i + 1 for i, x in enumerate(v) if x]
        expected = 24 if support == [2, 3] else 44
        rows.append({"vertex": [str(x) for x in v], "support": support,
                     "dual_facet_vertices": len(facet.vertices), "flags": n,
                     "expected": expected, "status": "pass" if n == expected else "fail"})
        total += n
    direct = len(enumerate_flags(C))
    checks = [
        {"check": "dual-facet-counts", "status": "pass" if all(r["status"] == "pass" for r in rows) else "fail"},
        {"check": "sum", "value": total, "expected": 8 * 44 + 4 * 24,
         "status": "pass" if total == 8 * 44 + 4 * 24 else "fail"},
        {"check": "direct-enumeration", "value": direct, "chain_count": count_flags(C),
         "status": "pass" if direct == count_flags(C) == 448 else "fail"},
        {"check": "exceeds-bound", "value": direct, "bound": flag_bound(4),
         "status": "pass" if direct > flag_bound(4) else "fail"},
    ]
    bad = [c for c in checks if c["status"] == "fail"]
    return {"polytope": C.to_json(), "vertices": rows, "checks": checks,
            "aggregate": "fail" if bad else "pass", "instances": []}


# -------------------------------------------------------------- serialization

def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "instance", "dim", "check", "status", "detail", "witness"])
    for e in report["instances"]:
        for r in e["results"]:
            w.writerow([e.get("index", ""), e["name"], e["dim"], r["check"], r["status"],
                        json.dumps(r["detail"], sort_keys=True),
                        json.dumps(r.get("witness"), sort_keys=True) if r["status"] == "fail" else ""])
    return buf.getvalue()

import csv
import io
import itertools
import json

import pytest

from labflags.campaign import (
    CHECKS, EXIT_CODES, CampaignConfig, appendix, check_prop_2_5, crossing_coordinates,
    exit_code, flag_bound, instances, prop_2_5_pairs, report_csv, report_json,
    run_campaign, run_instance, safe_is_hanner,
)
from labflags.fan import all_cones, relint_face_meets_relint_cone
from labflags.hanner import random_unconditional
from labflags.polytope import hull, normal_cone

HEXAGON = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]


def test_appendix():
    rep = appendix()
    assert rep["aggregate"] == "pass"
    flags = sorted(r["flags"] for r in rep["vertices"])
    assert flags == [24] * 4 + [44] * 8
    by = {c["check"]: c for c in rep["checks"]}
    assert by["sum"]["value"] == 448
    assert by["direct-enumeration"]["value"] == by["direct-enumeration"]["chain_count"] == 448
    assert by["exceeds-bound"]["bound"] == 384


def test_config_validation():
    with pytest.raises(ValueError):
        CampaignConfig(generator="nope")
    with pytest.raises(ValueError):
        CampaignConfig(checks=("flag-bound", "bogus"))
    with pytest.raises(ValueError):
        CampaignConfig(dims=(6,), generator="hanner")
    CampaignConfig(dims=(6,), generator="hanner", checks=("flag-bound",))


def test_instances_are_seeded():
    cfg = CampaignConfig(dims=(3,), count=4, seed=7)
    a = [P.vertices for _, P in instances(cfg)]
    b = [P.vertices for _, P in instances(cfg)]
    assert a == b and len(a) == 4
    other = [P.vertices for _, P in instances(CampaignConfig(dims=(3,), count=4, seed=8))]
    assert other != a


def test_hanner_campaign_passes():
    rep = run_campaign(CampaignConfig(dims=(1, 2, 3), generator="hanner"))
    assert rep["aggregate"] == "pass" and exit_code(rep) == 0
    assert len(rep["instances"]) == 1 + 2 + 4
    for e in rep["instances"]:
        fb = next(r for r in e["results"] if r["check"] == "flag-bound")
        assert fb["detail"]["count"] == flag_bound(e["dim"])


def test_reports_are_byte_identical_across_runs_and_workers():
    cfg = CampaignConfig(dims=(2, 3), count=3, seed=1, checks=("flag-bound", "equality-iff-hanner", "prop-2-5"))
    a = report_json(run_campaign(cfg, workers=1))
    b = report_json(run_campaign(cfg, workers=1))
    c = report_json(run_campaign(cfg, workers=2))
    assert a == b == c
    assert "timing" not in json.loads(a)


def test_timing_is_opt_in():
    cfg = CampaignConfig(dims=(2,), count=1, checks=("flag-bound",), timing=True)
    rep = run_campaign(cfg)
    assert "timing" in rep and "seconds" in rep["instances"][0]["results"][0]


def test_csv_has_one_row_per_instance_and_check():
    cfg = CampaignConfig(dims=(2, 3), count=2, seed=3, checks=("flag-bound", "ladder", "prop-2-5"))
    rows = list(csv.reader(io.StringIO(report_csv(run_campaign(cfg)))))
    assert rows[0][:5] == ["index", "instance", "dim", "check", "status"]
    assert len(rows) - 1 == 4 * 3


def test_failures_carry_witnesses_and_exit_codes():
    # not locally anti-blocking: every requested check fails on the precondition
    e = run_instance("tri", hull([(1, 0), (0, 1), (-1, -1)]), ("flag-bound", "ladder"))
    assert [r["status"] for r in e["results"]] == ["fail", "fail"]
    assert e["results"][0]["witness"] == {"precondition": "not locally anti-blocking"}
    rep = {"instances": [e]}
    assert exit_code(rep) == EXIT_CODES["flag-bound"] == 10
    assert EXIT_CODES[CHECKS[-1]] == 10 + len(CHECKS) - 1


def test_hexagon_is_not_a_minimizer():
    e = run_instance("hex", hull(HEXAGON))
    res = {r["check"]: r for r in e["results"]}
    assert all(r["status"] != "fail" for r in e["results"])
    assert res["flag-bound"]["detail"]["count"] == 12
    assert res["flag-bound"]["detail"]["orthants"] == {"++": 2, "+-": 4, "-+": 4, "--": 2}
    assert res["equality-iff-hanner"]["detail"] == {"count": 12, "equality": False, "hanner": False}
    assert res["graph-laws"]["status"] == "skip"
    assert res["min-downwards"]["status"] == "skip"


def test_pi3_instance():
    from labflags.graphs import path_graph
    from labflags.hanner import clique_polytope
    e = run_instance("pi3", clique_polytope(path_graph(4)),
                     ("flag-bound", "equality-iff-hanner", "graph-laws", "prop-2-5"))
    res = {r["check"]: r for r in e["results"]}
    assert all(r["status"] == "pass" for r in e["results"])
    assert res["flag-bound"]["detail"]["count"] == 448
    assert set(res["flag-bound"]["detail"]["orthants"].values()) == {28}


def _crossing_from_pairs(P, F):
    out = set()
    for C, D, diff in prop_2_5_pairs(P, F):
        out.update(diff)
    return sorted(out)


@pytest.mark.parametrize("P", [
    hull(HEXAGON),
    hull(list(itertools.product((-1, 1), repeat=3))),
    random_unconditional(3, 2, "prop"),
])
def test_crossing_coordinates_match_pairwise_form(P):
    for F in P.lattice.faces[1:]:
        assert crossing_coordinates(P, F) == _crossing_from_pairs(P, F)


def test_normal_cone_law_on_hexagon():
    # at the vertex (1,0) only one cone meets, yet the normal cone is 2-dimensional
    P = hull(HEXAGON)
    v = P.lattice.faces[P.lattice.lookup([P.vertices.index((1, 0))])]
    hits = [str(C) for C in all_cones(2) if relint_face_meets_relint_cone(P, v, C)]
    assert hits == ["+0"]
    N = normal_cone(P, v)
    assert N.contains((1, 1)) and N.contains((1, 0))
    assert crossing_coordinates(P, v) == []
    assert check_prop_2_5(P, {})["status"] == "pass"


def test_safe_is_hanner():
    assert not safe_is_hanner(hull(HEXAGON))
    assert safe_is_hanner(hull([(1, 0), (-1, 0), (0, 1), (0, -1)]))

import itertools
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

from labflags.errors import TheoremViolation
from labflags.exact import LinearSystem
from labflags.fan import (
    SignCone, all_cones, cone_facets, flag_sign, inward_normal, kept_cones, one_vector,
    orthants, relint_face_meets_cone, relint_face_meets_relint_cone, sign_order, supp_fan,
)
from labflags.flags import count_flags_by_sign, enumerate_flags
from labflags.polytope import hull

from oracles import brute_feasible

HEXAGON = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]


def test_sign_cone_basics():
    C = SignCone.parse("+0-")
    assert str(C) == "+0-" and C.dim == 2 and C.support == (0, 2)
    assert SignCone.parse("+00") <= C and not SignCone.parse("++0") <= C
    assert SignCone.parse("++-").meet(SignCone.parse("+--")) == SignCone.parse("+0-")
    assert C.contains_point((1, 0, -2)) and not C.contains_point((1, 1, -2))
    assert C.restrict(C.support) == SignCone.parse("+-")
    assert SignCone.parse("+-").embed((0, 2), 3) == C
    with pytest.raises(ValueError):
        SignCone.parse("+x")


def test_fan_sizes():
    for d in range(1, 5):
        cones = all_cones(d)
        assert len(cones) == 3 ** d and len(set(cones)) == 3 ** d
        assert [c.dim for c in cones] == sorted(c.dim for c in cones)
        assert len(orthants(d)) == 2 ** d


def test_facets_and_normals():
    D = SignCone.parse("+-")
    assert set(map(str, cone_facets(D))) == {"0-", "+0"}
    assert inward_normal(SignCone.parse("0-"), D) == (1, 0)
    assert inward_normal(SignCone.parse("+0"), D) == (0, -1)
    with pytest.raises(ValueError):
        inward_normal(SignCone.parse("-0"), D)
    with pytest.raises(ValueError):
        cone_facets(SignCone.parse("00"))
    assert one_vector(D) == (1, -1)
    assert supp_fan((Q(1, 3), 0, -5)) == SignCone.parse("+0-")


def test_sign_order():
    assert sorted(["-+", "++", "0+", "+-"], key=sign_order) == ["++", "+-", "0+", "-+"]


def _relint_oracle(P, F, C, strict):
    """relint F against C written directly in x-space and decided by the
    brute-force vertex oracle."""
    pts = P.points(F)
    Fp = hull(pts)
    d = P.ambient_dim
    eq = [(tuple(Q(x) for x in a), Q(b)) for a, b in Fp.equations]
    gt = [(tuple(-Q(x) for x in a), -Q(b)) for a, b in Fp.facets]
    ge = []
    for i, s in enumerate(C.sigma):
        e = tuple(Q(s if k == i else 0) for k in range(d))
        if s == 0:
            eq.append((tuple(Q(int(k == i)) for k in range(d)), Q(0)))
        elif strict:
            gt.append((e, Q(0)))
        else:
            ge.append((e, Q(0)))
    return brute_feasible(LinearSystem(d, tuple(eq), tuple(ge), tuple(gt)))


polys = [
    hull(HEXAGON),
    hull(list(itertools.product((-1, 1), repeat=2))),
    hull([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]),
    hull([(2, 1, 0), (-1, 2, 1), (0, -1, -1), (-1, -1, 2)]),
]


@pytest.mark.parametrize("k", range(len(polys)))
def test_relint_tests_match_oracle(k):
    P = polys[k]
    cones = all_cones(P.ambient_dim)
    if P.ambient_dim == 3:
        # the oracle is cubic in the row count; a fixed third of the fan is enough
        cones = cones[::3] + [c for c in cones if c.dim == 3]
    for F in P.lattice.faces[1:]:
        for C in cones:
            assert relint_face_meets_cone(P, F, C) == _relint_oracle(P, F, C, False)
            assert relint_face_meets_relint_cone(P, F, C) == _relint_oracle(P, F, C, True)


def test_hexagon_signs():
    # hand count: flags through (1,0),(0,1) and the edge between them only see ++
    counts = {str(k): v for k, v in count_flags_by_sign(hull(HEXAGON)).items()}
    assert counts == {"++": 2, "+-": 4, "-+": 4, "--": 2}


def test_square_has_two_flags_per_orthant():
    P = hull(list(itertools.product((-1, 1), repeat=2)))
    assert set(count_flags_by_sign(P).values()) == {2}


def test_kept_set_closed_and_full_dimensional():
    P = hull(HEXAGON)
    for F in enumerate_flags(P):
        kept = kept_cones(P, F)
        for a, b in itertools.combinations(kept, 2):
            assert tuple(x if x == y else 0 for x, y in zip(a, b)) in kept
        assert flag_sign(P, F).dim == 2


def test_flag_sign_reports_empty_kept_set():
    # not a chain: the vertex (1,1) and the opposite edge x = -1 share no cone
    P = hull(list(itertools.product((-1, 1), repeat=2)))
    L = P.lattice
    v = L.lookup([P.vertices.index((1, 1))])
    e = L.lookup([P.vertices.index((-1, -1)), P.vertices.index((-1, 1))])
    with pytest.raises(TheoremViolation) as err:
        flag_sign(P, (L.empty, v, e, L.top))
    assert err.value.witness == [L.empty, v, e, L.top]


def test_triangle_inside_an_orthant_has_one_sign():
    P = hull([(1, 1), (2, 1), (1, 2)])
    assert {str(k): v for k, v in count_flags_by_sign(P).items()} == {"++": 6}


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=3, max_size=7))
def test_sign_partition_sums_to_total(pts):
    P = hull(pts + [(1, 0), (-1, 0), (0, 1), (0, -1)])
    flags = enumerate_flags(P)
    counts = count_flags_by_sign(P)
    assert sum(counts.values()) == len(flags)

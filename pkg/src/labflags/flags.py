"""Flags, flips, the flip lemmas and the sign-raising injections.

A flag of a k-dimensional polytope is a tuple of k+2 indices into the
polytope's face lattice; entry ``i + 1`` is the i-dimensional face (so entry 0
is always the empty face and the last entry the polytope itself).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import LatticeCorruption, PropernessError, TheoremViolation
from .exact import dot, nullspace, rank, sub
from .fan import SignCone, all_cones, cone_facets, flag_sign
from .polytope import Face, Polytope, coordinate_projection, coordinate_section, hull, supp


def face_of(flag: Sequence[int], i: int) -> int:
    """Lattice index of the i-face of a flag."""
    return flag[i + 1]


def enumerate_flags(P: Polytope) -> list[tuple[int, ...]]:
    """All maximal chains, depth first over cover relations."""
    L = P.lattice
    out = []
    stack = [(L.empty,)]
    top = L.top
    while stack:
        chain = stack.pop()
        last = chain[-1]
        if last == top:
            out.append(chain)
            continue
        for j in reversed(L.up[last]):
            stack.append(chain + (j,))
    return out


def count_flags(P: Polytope) -> int:
    """Number of flags, by counting chains over the lattice (no enumeration)."""
    L = P.lattice
    paths = [0] * len(L.faces)
    paths[L.empty] = 1
    for k in range(0, L.dim + 1):
        for j in L.by_dim[k]:
            paths[j] = sum(paths[i] for i in L.down[j])
    return paths[L.top]


def count_flags_by_sign(P: Polytope) -> dict[SignCone, int]:
    counts = Counter(flag_sign(P, F) for F in enumerate_flags(P))
    return dict(sorted(counts.items(), key=lambda kv: kv[0].sigma, reverse=True))


def flip(P: Polytope, flag: Sequence[int], i: int) -> tuple[int, ...]:
    """r_i: the unique other flag agreeing with ``flag`` off dimension i."""
    L = P.lattice
    if not 0 <= i <= L.dim - 1:
        raise ValueError(f"flip index {i} out of range for a {L.dim}-polytope")
    mids = L.between(flag[i], flag[i + 2])
    if len(mids) != 2 or flag[i + 1] not in mids:
        raise LatticeCorruption(f"interval in dimension {i} has {len(mids)} middle faces")
    other = mids[0] if mids[1] == flag[i + 1] else mids[1]
    return tuple(flag[:i + 1]) + (other,) + tuple(flag[i + 2:])


def flip_sequence(P: Polytope, flag: Sequence[int], indices: Sequence[int]) -> tuple[int, ...]:
    """Apply r_{indices[0]} first, then r_{indices[1]}, and so on."""
    G = tuple(flag)
    for i in indices:
        G = flip(P, G, i)
    return G


def check_ladder(P: Polytope, flag: Sequence[int], i: int, j: int) -> bool:
    """Whether F_i is not contained in (r_j ... r_{i+1} r_i F)_j."""
    if not 0 <= i <= j <= P.lattice.dim - 1:
        raise ValueError("need 0 <= i <= j <= dim - 1")
    G = flip_sequence(P, flag, range(i, j + 1))
    faces = P.lattice.faces
    return not faces[flag[i + 1]] <= faces[G[j + 1]]


def _edge_projection(P: Polytope, edge: int):
    key = ("edge-projection", edge)
    hit = P._cache.get(key)
    if hit is None:
        v, w = P.points(P.face(edge))
        u = sub(w, v)
        uu = dot(u, u)

        def pi(x):
            c = dot(x, u) / uu
            return tuple(xi - c * ui for xi, ui in zip(x, u))

        hit = (hull([pi(x) for x in P.vertices]), pi)
        P._cache[key] = hit
    return hit


def _projects_to_flag(P: Polytope, flag: Sequence[int], edge: int) -> bool:
    Q, pi = _edge_projection(P, edge)
    for i in range(P.dim):
        S = supp(Q, [pi(x) for x in P.points(P.face(flag[i + 1]))])
        if S.dim != i:
            return False
    return True


def unique_projection_edge(P: Polytope, flag: Sequence[int]) -> Face:
    """The one edge E through F_0 along which F projects to a flag; it must
    also equal (r_1 r_2 ... r_{d-1} F)_1."""
    if not P.is_full_dimensional:
        raise ValueError("polytope must be full-dimensional")
    L = P.lattice
    d = P.dim
    edges = L.up[flag[1]]
    passing = [E for E in edges if _projects_to_flag(P, flag, E)]
    if len(passing) != 1:
        raise TheoremViolation(f"{len(passing)} edges project the flag to a flag",
                               witness={"flag": list(flag), "edges": passing})
    expected = flip_sequence(P, flag, range(d - 1, 0, -1))[2]
    if passing[0] != expected:
        raise TheoremViolation("projection edge differs from (r_1...r_{d-1}F)_1",
                               witness={"flag": list(flag), "edge": passing[0], "expected": expected})
    return L.faces[passing[0]]


def unique_facet(P: Polytope, flag: Sequence[int]) -> Face:
    """The one facet G through F_0 with (F_i ∩ G)_{i=1..d} a flag of G; it must
    also equal (r_{d-1} ... r_1 F)_{d-1}."""
    L = P.lattice
    d = L.dim
    v = L.faces[flag[1]].vertex_indices
    passing = []
    for G in L.by_dim[d - 1]:
        gset = L.faces[G].vertex_indices
        if not v <= gset:
            continue
        ok = True
        for i in range(1, d + 1):
            inter = L.faces[flag[i + 1]].vertex_indices & gset
            idx = L.index.get(inter)
            if idx is None:
                raise LatticeCorruption("intersection of two faces is not a face")
            if L.faces[idx].dim != i - 1:
                ok = False
                break
        if ok:
            passing.append(G)
    if len(passing) != 1:
        raise TheoremViolation(f"{len(passing)} facets cut the flag to a flag",
                               witness={"flag": list(flag), "facets": passing})
    expected = flip_sequence(P, flag, range(1, d))[d]
    if passing[0] != expected:
        raise TheoremViolation("facet differs from (r_{d-1}...r_1F)_{d-1}",
                               witness={"flag": list(flag), "facet": passing[0], "expected": expected})
    return L.faces[passing[0]]


# ------------------------------------------------------- signed flag sections

class SignedFlags:
    """Coordinate sections of a proper polytope and their flags by sign.

    The section P ∩ R^J is kept in the coordinates J, where it is
    full-dimensional; a cone C of the fan lives in the section with J equal
    to its support, where it is an orthant.
    """

    def __init__(self, P: Polytope):
        if not P.is_full_dimensional:
            raise ValueError("polytope must be full-dimensional")
        if any(b <= 0 for _, b in P.facets):
            raise PropernessError("origin is not in the interior")
        self.P = P
        self.d = P.ambient_dim
        self._sections: dict[tuple, Polytope] = {}
        self._by_sign: dict[tuple, dict] = {}
        self._projections: dict[tuple, Polytope] = {}

    def section(self, J: Sequence[int]) -> Polytope:
        J = tuple(J)
        Q = self._sections.get(J)
        if Q is None:
            if not J:
                Q = hull([()])
            elif J == tuple(range(self.d)):
                Q = self.P
            else:
                Q = coordinate_section(self.P, J)
            self._sections[J] = Q
        return Q

    def by_sign(self, J: Sequence[int]) -> dict[tuple, list[tuple[int, ...]]]:
        """Flags of the section over J grouped by their (restricted) sign."""
        J = tuple(J)
        table = self._by_sign.get(J)
        if table is None:
            Q = self.section(J)
            table = {}
            for F in enumerate_flags(Q):
                table.setdefault(flag_sign(Q, F).sigma, []).append(F)
            self._by_sign[J] = table
        return table

    def projection(self, J: Sequence[int], pos: int) -> Polytope:
        """The section over J projected away from its coordinate ``pos``."""
        key = (tuple(J), pos)
        Q = self._projections.get(key)
        if Q is None:
            rest = [j for j in range(len(J)) if j != pos]
            Q = coordinate_projection(self.section(J), rest) if rest else hull([()])
            self._projections[key] = Q
        return Q

    def signed(self, C: SignCone) -> list[tuple[int, ...]]:
        J = C.support
        return self.by_sign(J).get(C.restrict(J).sigma, [])


@dataclass
class RaiseTrace:
    H_faces: list
    k0: int
    G_faces: list = field(default_factory=list)


def _point_in_face(Q: Polytope, face: Face, x) -> bool:
    # x is known to lie in Q; only the facets through the face matter
    return all(dot(a, x) == b for (a, b), inc in zip(Q.facets, Q.incidence)
               if face.vertex_indices <= inc)


def _in_lin(vectors, n) -> bool:
    return rank(list(vectors) + [n]) == rank(vectors)


def _directions(pts):
    return [sub(p, pts[0]) for p in pts[1:]]


def raise_flag(P: Polytope, D: SignCone, C: SignCone, F: Sequence[int],
               index: SignedFlags | None = None) -> tuple[tuple[int, ...], RaiseTrace]:
    """Lift a flag of P ∩ lin C with sign C to a flag of P ∩ lin D with sign D.

    ``F`` indexes the lattice of the section over C's support (see
    :class:`SignedFlags`); the result indexes the section over D's support.
    Every "exactly one face qualifies" step is checked, as are the three
    defining properties of the lift and the sign of the result.
    """
    idx = index or SignedFlags(P)
    JD, JC = D.support, C.support
    extra = [i for i in JD if i not in JC]
    if len(extra) != 1 or not C <= D or C.dim != D.dim - 1:
        raise ValueError(f"{C} is not a facet of {D}")
    pos = JD.index(extra[0])
    QD, QC = idx.section(JD), idx.section(JC)
    LD = QD.lattice
    m = len(JD)
    n_vec = tuple(Fraction(D.sigma[extra[0]]) if j == pos else Fraction(0) for j in range(m))
    D_local = D.restrict(JD)

    def embed(x):
        return tuple(x[:pos]) + (Fraction(0),) + tuple(x[pos:])

    def lower(x):
        return tuple(x[:pos]) + tuple(x[pos + 1:])

    F_pts = [[embed(x) for x in QC.points(QC.face(F[k + 1]))] for k in range(m)]
    witness = {"cone": str(D), "facet": str(C), "flag": list(F)}

    # H_k: minimal face of QD containing (aff F_k + R_{>=0} n) ∩ QD
    H = []
    up_normals = [(a, b) for a, b in QD.facets if dot(a, n_vec) > 0]
    for k in range(m):
        pts = F_pts[k]
        y0 = tuple(sum(p[c] for p in pts) / len(pts) for c in range(m))
        if not QD.contains(y0):
            raise TheoremViolation("section face leaves the larger section", witness)
        s_max = min((b - dot(a, y0)) / dot(a, n_vec) for a, b in up_normals)
        x0 = tuple(y + s_max / 2 * nv for y, nv in zip(y0, n_vec))
        Hk = LD.index[supp(QD, [x0]).vertex_indices]
        face = LD.faces[Hk]
        if face.dim not in (k, k + 1) or not all(_point_in_face(QD, face, p) for p in pts):
            raise TheoremViolation(f"H_{k} has the wrong shape", witness)
        H.append(Hk)
    dims = [LD.faces[h].dim for h in H]
    k0 = next(k for k in range(m) if dims[k] == k + 1)
    if any(dims[k] != (k if k < k0 else k + 1) for k in range(m)):
        raise TheoremViolation(f"H dimensions {dims} do not break at a single k0", witness)

    G = [LD.empty]
    for k in range(m):
        if k < k0:
            if {tuple(p) for p in QD.points(LD.faces[H[k]])} != set(F_pts[k]):
                raise TheoremViolation(f"H_{k} differs from F_{k} below k0", witness)
            G.append(H[k])
            continue
        mids = LD.between(G[-1], H[k])
        if len(mids) != 2:
            raise LatticeCorruption(f"{len(mids)} faces between G_{k - 1} and H_{k}")
        if k == k0:
            # the face reaching into the open half-space on the n side
            good = [S for S in mids if any(dot(v, n_vec) > 0 for v in QD.points(LD.faces[S]))]
        else:
            good = [S for S in mids if not _in_lin(_directions(QD.points(LD.faces[S])), n_vec)]
        if len(good) != 1:
            raise TheoremViolation(f"{len(good)} candidate faces for G_{k}", witness)
        G.append(good[0])
    G.append(LD.top)
    G = tuple(G)

    # the three properties, checked directly
    proj = idx.projection(JD, pos)
    for k in range(m):
        gpts = QD.points(LD.faces[G[k + 1]])
        # aff F_k is cut out by these equations inside n-perp
        perp = nullspace(_directions(F_pts[k]) + [n_vec], m)
        base = [dot(u, F_pts[k][0]) for u in perp]
        for g in gpts:
            if dot(g, n_vec) < 0 or [dot(u, g) for u in perp] != base:
                raise TheoremViolation(f"G_{k} leaves aff F_{k} + R>=0 n", witness)
        if _in_lin(_directions(gpts), n_vec):
            raise TheoremViolation(f"n lies in lin G_{k}", witness)
        S = supp(proj, [lower(g) for g in gpts])
        if {tuple(p) for p in proj.points(S)} != {lower(p) for p in F_pts[k]}:
            raise TheoremViolation(f"projection of G_{k} does not support F_{k}", witness)
    if flag_sign(QD, G) != D_local:
        raise TheoremViolation("raised flag does not have sign D", witness)
    return G, RaiseTrace(H, k0, list(G))


def verify_injection_family(P: Polytope, index: SignedFlags | None = None) -> dict:
    """Check injectivity, disjoint images and the factorial bound for every cone.

    Returns a report with one entry per cone of dimension >= 1; raises
    :class:`TheoremViolation` on the first failed assertion.
    """
    idx = index or SignedFlags(P)
    cones = []
    for D in all_cones(P.ambient_dim):
        if D.dim == 0:
            continue
        target = set(idx.signed(D))
        seen: dict[tuple, str] = {}
        for C in cone_facets(D):
            images = [raise_flag(P, D, C, F, idx)[0] for F in idx.signed(C)]
            if len(set(images)) != len(images):
                raise TheoremViolation("raising map is not injective",
                                       {"cone": str(D), "facet": str(C)})
            for G in images:
                if G not in target:
                    raise TheoremViolation("raised flag is not a signed flag of D",
                                           {"cone": str(D), "facet": str(C), "flag": list(G)})
                if G in seen:
                    raise TheoremViolation("images of two facets overlap",
                                           {"cone": str(D), "facets": [seen[G], str(C)], "flag": list(G)})
                seen[G] = str(C)
        bound = math.factorial(D.dim)
        if len(target) < bound:
            raise TheoremViolation(f"only {len(target)} flags of sign {D}, need {bound}", {"cone": str(D)})
        cones.append({"cone": str(D), "dim": D.dim, "count": len(target), "bound": bound,
                      "image": len(seen), "injective": True, "disjoint": True})
    return {"cones": cones, "ok": True}

"""Polytopes given by vertices: facets, face lattice, polars, sections,
projections, supports and normal cones.

Every polytope carries its irredundant vertex list (sorted, so that two equal
polytopes have identical vertex lists), its facet inequalities and the
facet-vertex incidence. Lower-dimensional polytopes are handled within their
affine hull: ``facets`` are then the codimension-one faces inside the hull and
``equations`` cut out the hull itself.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ContainmentError, DimensionMismatch, PropernessError
from .exact import (
    affine_hull, common_denominator, dot, format_rational, frac, int_normal,
    nullspace, primitive, rank, rref, solve_square, sub, vec,
)


@dataclass(frozen=True)
class Face:
    vertex_indices: frozenset
    dim: int

    def __len__(self):
        return len(self.vertex_indices)

    def __le__(self, other: "Face") -> bool:
        return self.vertex_indices <= other.vertex_indices

    def __lt__(self, other: "Face") -> bool:
        return self.vertex_indices < other.vertex_indices


@dataclass(frozen=True)
class Cone:
    """Positive hull of ``generators`` plus the linear span of ``lineality``."""

    generators: tuple
    lineality: tuple = ()

    def contains(self, v: Sequence) -> bool:
        from .exact import LinearSystem, solve_feasibility
        gens = list(self.generators) + list(self.lineality) + [tuple(-x for x in g) for g in self.lineality]
        if not gens:
            return all(x == 0 for x in v)
        # v = sum c_g g with c_g >= 0
        n = len(gens)
        eq = tuple((tuple(g[i] for g in gens), v[i]) for i in range(len(v)))
        ge = tuple((tuple(Fraction(int(j == k)) for j in range(n)), Fraction(0)) for k in range(n))
        return bool(solve_feasibility(LinearSystem(n, eq=eq, ge=ge)))


class FaceLattice:
    """All faces of a polytope, graded by dimension, with cover relations.

    ``faces`` is sorted by (dim, sorted vertex indices); ``up[i]`` lists the
    faces covering face i and ``down[i]`` the faces it covers.
    """

    def __init__(self, faces: list[Face]):
        faces = sorted(faces, key=lambda f: (f.dim, sorted(f.vertex_indices)))
        self.faces = faces
        self.index = {f.vertex_indices: i for i, f in enumerate(faces)}
        self.dim = faces[-1].dim
        self.by_dim: dict[int, list[int]] = {k: [] for k in range(-1, self.dim + 1)}
        for i, f in enumerate(faces):
            self.by_dim[f.dim].append(i)
        self.up: list[list[int]] = [[] for _ in faces]
        self.down: list[list[int]] = [[] for _ in faces]
        for k in range(-1, self.dim):
            for i in self.by_dim[k]:
                fi = faces[i].vertex_indices
                for j in self.by_dim[k + 1]:
                    if fi < faces[j].vertex_indices:
                        self.up[i].append(j)
                        self.down[j].append(i)

    @property
    def empty(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.faces) - 1

    def f_vector(self) -> tuple[int, ...]:
        """Face counts for dimensions -1..dim (both improper faces included)."""
        return tuple(len(self.by_dim[k]) for k in range(-1, self.dim + 1))

    def between(self, lo: int, hi: int) -> list[int]:
        """Faces covering ``lo`` and covered by ``hi`` (a rank-2 interval)."""
        hs = set(self.down[hi])
        return [j for j in self.up[lo] if j in hs]

    def lookup(self, vertex_indices: Iterable[int]) -> int:
        return self.index[frozenset(vertex_indices)]


class Polytope:
    def __init__(self, ambient_dim, vertices, facets, incidence, equations, dim):
        self.ambient_dim = ambient_dim
        self.vertices = vertices          # tuple of Fraction tuples, sorted
        self.facets = facets              # tuple of (normal, offset): normal.x <= offset
        self.incidence = incidence        # tuple of frozensets of vertex indices
        self.equations = equations        # tuple of (normal, offset): normal.x == offset
        self.dim = dim
        self._cache: dict = {}

    def __repr__(self):
        return f"Polytope(dim={self.dim}, ambient={self.ambient_dim}, n_vertices={len(self.vertices)})"

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @cached_property
    def lattice(self) -> FaceLattice:
        return face_lattice(self)

    def face(self, index: int) -> Face:
        return self.lattice.faces[index]

    def points(self, face) -> list[tuple]:
        idx = face.vertex_indices if isinstance(face, Face) else face
        return [self.vertices[i] for i in sorted(idx)]

    @cached_property
    def _int_rows(self):
        # facets and equations scaled to integers, for the hot membership tests
        def scaled(rows):
            out = []
            for a, b in rows:
                den = common_denominator([frac(x) for x in a] + [frac(b)])
                out.append(([int(x * den) for x in a], int(b * den)))
            return out
        return scaled(self.facets), scaled(self.equations)

    def _slacks(self, x: Sequence):
        """Integer slacks b - a.x of facets and equations, up to a positive factor."""
        x = [frac(t) for t in x]
        den = common_denominator(x)
        xi = [t.numerator * (den // t.denominator) for t in x]
        fac, eqs = self._int_rows
        nz = [(i, t) for i, t in enumerate(xi) if t]
        f = [b * den - sum(a[i] * t for i, t in nz) for a, b in fac]
        e = [b * den - sum(a[i] * t for i, t in nz) for a, b in eqs]
        return f, e

    def contains(self, x: Sequence) -> bool:
        f, e = self._slacks(x)
        return all(s >= 0 for s in f) and not any(e)

    def tight(self, x: Sequence) -> frozenset:
        """Indices of the facets on which x lies."""
        f, _ = self._slacks(x)
        return frozenset(j for j, s in enumerate(f) if s == 0)

    def face_of_facets(self, facet_ids: Iterable[int]) -> frozenset:
        verts = frozenset(range(len(self.vertices)))
        for j in facet_ids:
            verts &= self.incidence[j]
        return verts

    def to_json(self) -> dict:
        return {"dim": self.ambient_dim,
                "vertices": [[format_rational(x) for x in v] for v in self.vertices]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "Polytope":
        pts = [vec(v) for v in data["vertices"]]
        for p in pts:
            if len(p) != data["dim"]:
                raise DimensionMismatch(f"vertex {p} does not live in R^{data['dim']}")
        return hull(pts)


# --------------------------------------------------------------------- hull

def _scaled_integer_points(points):
    den = common_denominator(x for p in points for x in p)
    return den, [tuple(int(x * den) for x in p) for p in points]


def _idot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _full_dim_facets(points: list[tuple]) -> list[tuple[tuple[int, ...], Fraction]]:
    """Facets of a full-dimensional point set in R^k, k >= 1.

    Beneath-beyond over a triangulated boundary, in integer arithmetic after
    clearing denominators; coplanar simplices are merged at the end by
    deduplicating primitive hyperplanes.
    """
    k = len(points[0])
    den, ip = _scaled_integer_points(points)
    if k == 1:
        xs = [p[0] for p in ip]
        return [((1,), Fraction(max(xs), den)), ((-1,), Fraction(-min(xs), den))]

    # initial simplex
    simplex = [0]
    diffs: list[tuple] = []
    for i in range(1, len(ip)):
        cand = diffs + [sub(ip[i], ip[0])]
        if rank(cand) == len(cand):
            diffs = cand
            simplex.append(i)
            if len(simplex) == k + 1:
                break
    if len(simplex) != k + 1:
        raise ValueError("point set is not full-dimensional")
    inner = [sum(ip[i][c] for i in simplex) for c in range(k)]   # (k+1) * interior point

    facets: dict[int, tuple] = {}
    ridges: dict[frozenset, set] = {}
    counter = itertools.count()

    def make(verts):
        base = ip[verts[0]]
        normal = int_normal([sub(ip[v], base) for v in verts[1:]])
        off = _idot(normal, base)
        if _idot(normal, inner) > (k + 1) * off:
            normal = tuple(-x for x in normal)
            off = -off
        fid = next(counter)
        facets[fid] = (tuple(verts), normal, off)
        for r in itertools.combinations(verts, k - 1):
            ridges.setdefault(frozenset(r), set()).add(fid)

    def drop(fid):
        verts = facets.pop(fid)[0]
        for r in itertools.combinations(verts, k - 1):
            s = ridges[frozenset(r)]
            s.discard(fid)
            if not s:
                del ridges[frozenset(r)]

    for omit in range(k + 1):
        make([v for j, v in enumerate(simplex) if j != omit])

    in_simplex = set(simplex)
    for p in range(len(ip)):
        if p in in_simplex:
            continue
        x = ip[p]
        visible = {fid for fid, (_, a, b) in facets.items() if _idot(a, x) > b}
        if not visible:
            continue
        horizon = []
        for fid in visible:
            verts = facets[fid][0]
            for r in itertools.combinations(verts, k - 1):
                others = ridges[frozenset(r)] - {fid}
                if not others <= visible:
                    horizon.append(r)
        for fid in visible:
            drop(fid)
        for r in horizon:
            make(list(r) + [p])

    planes = set()
    for _, a, b in facets.values():
        g = primitive(a + (b,))
        planes.add(g)
    return sorted((pl[:-1], Fraction(pl[-1], den)) for pl in planes)


def hull(points: Iterable[Sequence]) -> Polytope:
    """Convex hull of a nonempty finite point set."""
    pts = sorted(set(vec(p) for p in points))
    if not pts:
        raise ValueError("convex hull of an empty point set")
    d = len(pts[0])
    for p in pts:
        if len(p) != d:
            raise DimensionMismatch("points of different dimensions")

    aff = affine_hull(pts)
    k = aff.dim
    dirs = [list(b) for b in aff.basis]
    equations = tuple(
        (normal, dot(normal, aff.basepoint)) for normal in _primitive_rows(nullspace(dirs, d) if dirs else _identity(d))
    )
    if k == 0:
        return Polytope(d, (pts[0],), (), (), equations, 0)

    _, coords = rref(dirs)          # pivot columns: projection onto them is injective on aff
    proj = [tuple(p[c] for c in coords) for p in pts]
    low = _full_dim_facets(proj)
    lifted = []
    for a, b in low:
        full = [0] * d
        for c, x in zip(coords, a):
            full[c] = x
        lifted.append((tuple(full), b))

    tight_sets = [frozenset(j for j, (a, b) in enumerate(low) if _idot(a, q) == b) for q in proj]
    keep = [i for i, ts in enumerate(tight_sets) if rank([low[j][0] for j in ts]) == k] if k > 1 else \
        [i for i, ts in enumerate(tight_sets) if ts]
    vertices = tuple(pts[i] for i in keep)
    incidence = tuple(frozenset(vi for vi, i in enumerate(keep) if j in tight_sets[i]) for j in range(len(low)))
    return Polytope(d, vertices, tuple(lifted), incidence, equations, k)


def _identity(d):
    return [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]


def _primitive_rows(rows):
    out = []
    for r in rows:
        den = common_denominator(r)
        out.append(primitive([int(x * den) for x in r]))
    return out


# -------------------------------------------------------------- face lattice

def face_lattice(P: Polytope) -> FaceLattice:
    """Faces as closed vertex sets: intersections of facet vertex sets."""
    full = frozenset(range(len(P.vertices)))
    seen = {full, frozenset()}
    frontier = [full]
    while frontier:
        nxt = []
        for face in frontier:
            for fs in P.incidence:
                g = face & fs
                if g not in seen:
                    seen.add(g)
                    nxt.append(g)
        frontier = nxt
    faces = [Face(s, _face_dim(P, s)) for s in seen]
    return FaceLattice(faces)


def _face_dim(P: Polytope, s: frozenset) -> int:
    if not s:
        return -1
    idx = sorted(s)
    v0 = P.vertices[idx[0]]
    return rank([sub(P.vertices[i], v0) for i in idx[1:]])


# ----------------------------------------------------------------- operations

def polar(P: Polytope) -> Polytope:
    """{x : <x, y> <= 1 for all y in P}, for P with the origin in its interior."""
    if not P.is_full_dimensional:
        raise PropernessError("polar of a lower-dimensional polytope is unbounded")
    if any(b <= 0 for _, b in P.facets):
        raise PropernessError("origin is not in the interior")
    return hull([tuple(Fraction(x) / b for x in a) for a, b in P.facets])


def support_value(P: Polytope, v: Sequence) -> Fraction:
    if len(v) != P.ambient_dim:
        raise DimensionMismatch("direction has the wrong length")
    v = vec(v)
    return max(dot(x, v) for x in P.vertices)


def face_in_direction(P: Polytope, v: Sequence) -> Face:
    v = vec(v)
    h = support_value(P, v)
    idx = frozenset(i for i, x in enumerate(P.vertices) if dot(x, v) == h)
    return P.face(P.lattice.lookup(idx))


def supp(P: Polytope, A) -> Face:
    """Minimal face of P containing the point set (or face) A."""
    if isinstance(A, Face):
        pts = P.points(A)
    else:
        pts = [vec(a) for a in A]
    tight = set(range(len(P.facets)))
    for x in pts:
        if len(x) != P.ambient_dim:
            raise DimensionMismatch("point of the wrong length")
        f, e = P._slacks(x)
        if any(s < 0 for s in f) or any(e):
            raise ContainmentError(f"{x} is not in the polytope")
        tight &= {j for j, s in enumerate(f) if s == 0}
    return P.face(P.lattice.lookup(P.face_of_facets(tight)))


def normal_cone(P: Polytope, F: Face) -> Cone:
    if not F.vertex_indices:
        raise ValueError("normal cone of the empty face")
    gens = tuple(a for j, (a, _) in enumerate(P.facets) if F.vertex_indices <= P.incidence[j])
    return Cone(gens, tuple(a for a, _ in P.equations))


def _normalized_row(a, b):
    lead = next((x for x in a if x != 0), None)
    if lead is None:
        return None
    s = abs(frac(lead))
    return tuple(frac(x) / s for x in a), frac(b) / s


def coordinate_section(P: Polytope, J: Sequence[int]) -> Polytope:
    """P ∩ R^J, returned in the coordinates J (0-based, in the given order).

    Two vertex searches, whichever has fewer candidates: tight subsets of the
    restricted inequalities, or faces G of P whose affine hull meets R^J in a
    single point (a vertex x of the section lies in relint of some face G,
    and then aff G ∩ R^J = {x}).
    """
    J = list(J)
    if not J:
        raise ValueError("empty coordinate set")
    if sorted(J) == list(range(P.ambient_dim)):
        return hull([tuple(v[j] for j in J) for v in P.vertices])
    rows = _section_rows(P, J)
    if rows is None:
        raise ValueError("section is empty")
    if math.comb(len(rows[0]), len(J) - len(rows[1])) <= len(P.lattice.faces):
        found = _section_by_rows(*rows, len(J))
    else:
        found = _section_by_faces(P, J)
    if not found:
        raise ValueError("section is empty")
    return hull(found)


def _section_rows(P: Polytope, J):
    """Inequalities and equations of P restricted to R^J, or None if they
    already show the section is empty."""
    ineqs = set()
    for a, b in P.facets:
        row = _normalized_row([a[j] for j in J], b)
        if row is None:
            if b < 0:
                return None
            continue
        ineqs.add(row)
    eqs = []
    for a, b in P.equations:
        row = _normalized_row([a[j] for j in J], b)
        if row is None:
            if b != 0:
                return None
            continue
        eqs.append(row)
    red, _ = rref([list(a) + [b] for a, b in eqs]) if eqs else ([], [])
    eqs = [(tuple(r[:-1]), r[-1]) for r in red]
    if any(all(x == 0 for x in a) for a, _ in eqs):
        return None
    return sorted(ineqs), eqs


def _section_by_rows(ineqs, eqs, m):
    # vertices are the feasible points where m independent rows are tight
    found = set()
    for combo in itertools.combinations(ineqs, m - len(eqs)):
        rows = [a for a, _ in eqs] + [a for a, _ in combo]
        rhs = [b for _, b in eqs] + [b for _, b in combo]
        x = solve_square(rows, rhs)
        if x is not None and all(dot(a, x) <= b for a, b in ineqs):
            found.add(x)
    return found


def _section_by_faces(P: Polytope, J):
    off = [k for k in range(P.ambient_dim) if k not in set(J)]
    found = set()
    for G in P.lattice.faces:
        if not G.vertex_indices or G.dim > len(off):
            continue
        pts = P.points(G)
        # every off-coordinate has to reach 0 somewhere on G
        if any(min(p[k] for p in pts) > 0 or max(p[k] for p in pts) < 0 for k in off):
            continue
        x = _single_hit(pts, off)
        if x is not None and P.contains(x):
            found.add(tuple(x[j] for j in J))
    return found


def _single_hit(pts, off):
    """The unique point of aff(pts) with x_k = 0 for k in off, else None."""
    v0 = pts[0]
    basis, _ = rref([sub(p, v0) for p in pts[1:]])
    r = len(basis)
    aug = [[b[k] for b in basis] + [-v0[k]] for k in off]
    if not aug:
        return v0 if r == 0 else None
    red, piv = rref(aug)
    if r in piv or len(piv) != r:
        return None
    t = [Fraction(0)] * r
    for row, c in zip(red, piv):
        t[c] = row[r]
    return tuple(v0[i] + sum(tc * b[i] for tc, b in zip(t, basis) if tc) for i in range(len(v0)))


def coordinate_projection(P: Polytope, J: Sequence[int]) -> Polytope:
    J = list(J)
    if not J:
        raise ValueError("empty coordinate set")
    return hull([tuple(v[j] for j in J) for v in P.vertices])


@dataclass(frozen=True)
class ProjectionMap:
    """Orthogonal projection x -> x - (<x,u>/<u,u>) u onto u-perp."""

    direction: tuple

    def __call__(self, x: Sequence) -> tuple:
        u = self.direction
        c = dot(x, u) / dot(u, u)
        return tuple(xi - c * ui for xi, ui in zip(x, u))

    @property
    def matrix(self) -> tuple:
        u = self.direction
        uu = dot(u, u)
        n = len(u)
        return tuple(tuple(Fraction(int(i == j)) - u[i] * u[j] / uu for j in range(n)) for i in range(n))


def project_along_edge(P: Polytope, E: Face) -> tuple[Polytope, ProjectionMap]:
    if E.dim != 1 or E.vertex_indices not in P.lattice.index:
        raise ValueError("not an edge of the polytope")
    v, w = P.points(E)
    pi = ProjectionMap(sub(w, v))
    return hull([pi(x) for x in P.vertices]), pi


def canonical(P: Polytope) -> tuple:
    return P.vertices

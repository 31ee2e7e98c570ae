"""Locally anti-blocking polytopes, the coordinate graph G(P), clique
polytopes C(G) and Hanner polytopes."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import GraphUndefined, ParseError, PropernessError, TheoremViolation
from .graphs import Graph, enumerate_cographs, is_cograph
from .polytope import (
    Polytope, canonical, coordinate_projection, coordinate_section, hull, polar,
)


# ------------------------------------------------------------ basic predicates

def is_locally_antiblocking(P: Polytope) -> bool:
    """P ∩ R^J equals the projection of P onto R^J for every coordinate set J."""
    d = P.ambient_dim
    for k in range(1, d):
        for J in itertools.combinations(range(d), k):
            try:
                section = coordinate_section(P, J)
            except ValueError:
                return False
            if canonical(section) != canonical(coordinate_projection(P, J)):
                return False
    return True


def is_proper(P: Polytope) -> bool:
    return P.is_full_dimensional and all(b > 0 for _, b in P.facets)


def axis_support(P: Polytope) -> list[tuple[Fraction, Fraction]]:
    """(h(e_i), h(-e_i)) for every coordinate i."""
    return [(max(v[i] for v in P.vertices), max(-v[i] for v in P.vertices))
            for i in range(P.ambient_dim)]


def is_normalized(P: Polytope) -> bool:
    return all(a == 1 and b == 1 for a, b in axis_support(P))


def normalize(P: Polytope) -> Polytope:
    """Rescale each half-axis so that h(±e_i) = 1.

    The map is linear on every orthant, so on a locally anti-blocking polytope
    it carries faces to faces; this is checked on the result.
    """
    h = axis_support(P)
    if any(a <= 0 or b <= 0 for a, b in h):
        raise PropernessError("h(±e_i) must be positive to normalize")

    def scale(v):
        return tuple(x / h[i][0] if x > 0 else (x / h[i][1] if x < 0 else x) for i, x in enumerate(v))

    images = [scale(v) for v in P.vertices]
    Q = hull(images)
    if len(Q.vertices) != len(P.vertices) or Q.lattice.f_vector() != P.lattice.f_vector():
        raise TheoremViolation("normalizing map changed the combinatorics",
                               witness={"before": P.lattice.f_vector(), "after": Q.lattice.f_vector()})
    where = {v: i for i, v in enumerate(Q.vertices)}
    for F in P.lattice.faces:
        if frozenset(where[images[i]] for i in F.vertex_indices) not in Q.lattice.index:
            raise TheoremViolation("normalizing map does not carry faces to faces",
                                   witness=sorted(F.vertex_indices))
    return Q


# ------------------------------------------------------------------ G(P), C(G)

def _two_section_kind(P: Polytope, i: int, j: int) -> str:
    S = coordinate_section(P, (i, j))
    verts = set(S.vertices)
    xs = sorted({v[0] for v in verts})
    ys = sorted({v[1] for v in verts})
    if len(verts) == 4:
        if verts == {(a, b) for a in (xs[0], xs[-1]) for b in (ys[0], ys[-1])} \
                and xs[0] < 0 < xs[-1] and ys[0] < 0 < ys[-1]:
            return "square"
        if all((v[0] == 0) != (v[1] == 0) for v in verts):
            on_x = sorted(v[0] for v in verts if v[1] == 0)
            on_y = sorted(v[1] for v in verts if v[0] == 0)
            if len(on_x) == 2 and len(on_y) == 2 and on_x[0] < 0 < on_x[1] and on_y[0] < 0 < on_y[1]:
                return "diamond"
    raise GraphUndefined(f"section on coordinates {i + 1},{j + 1} is neither a square nor a diamond: "
                         f"{[tuple(str(x) for x in v) for v in S.vertices]}")


def polytope_graph(P: Polytope) -> Graph:
    """Coordinates i, j are adjacent when P ∩ R^{i,j} is an axis-aligned rectangle."""
    d = P.ambient_dim
    edges = [(i, j) for i, j in itertools.combinations(range(d), 2)
             if _two_section_kind(P, i, j) == "square"]
    return Graph(d, edges)


def clique_polytope(G: Graph) -> Polytope:
    """Hull of all sign vectors supported on cliques of G.

    Sign vectors on a clique are averages of sign vectors on any larger
    clique, so the maximal cliques suffice.
    """
    pts = []
    for K in G.maximal_cliques():
        for signs in itertools.product((1, -1), repeat=len(K)):
            v = [0] * G.n
            for i, s in zip(K, signs):
                v[i] = s
            pts.append(tuple(v))
    return hull(pts)


# --------------------------------------------------------- Hanner expressions

@dataclass(frozen=True)
class Segment:
    @property
    def dim(self):
        return 1

    def __str__(self):
        return "seg"


@dataclass(frozen=True)
class Polar:
    child: object

    @property
    def dim(self):
        return self.child.dim

    def __str__(self):
        return f"polar({self.child})"


@dataclass(frozen=True)
class Join:
    left: object
    right: object

    @property
    def dim(self):
        return self.left.dim + self.right.dim

    def __str__(self):
        return f"join({self.left},{self.right})"


HannerExpr = Segment | Polar | Join


def parse_hanner(text: str) -> HannerExpr:
    """Parse ``seg | polar(expr) | join(expr, expr)``; whitespace is free."""
    pos = 0

    def where(p):
        line = text.count("\n", 0, p) + 1
        col = p - (text.rfind("\n", 0, p) + 1) + 1
        return line, col

    def fail(msg, p):
        raise ParseError(msg, *where(p))

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(tok):
        nonlocal pos
        skip()
        if not text.startswith(tok, pos):
            found = text[pos:pos + 1] or "end of input"
            fail(f"expected {tok!r}, found {found!r}", pos)
        pos += len(tok)

    def expr():
        nonlocal pos
        skip()
        for word in ("seg", "polar", "join"):
            if text.startswith(word, pos):
                pos += len(word)
                break
        else:
            fail("expected 'seg', 'polar' or 'join'", pos)
        if word == "seg":
            return Segment()
        expect("(")
        if word == "polar":
            e = Polar(expr())
        else:
            a = expr()
            expect(",")
            e = Join(a, expr())
        expect(")")
        return e

    e = expr()
    skip()
    if pos != len(text):
        fail("trailing input", pos)
    return e


def _hanner_vertices(e) -> list[tuple]:
    if isinstance(e, Segment):
        return [(Fraction(-1),), (Fraction(1),)]
    if isinstance(e, Polar):
        return list(polar(hull(_hanner_vertices(e.child))).vertices)
    if isinstance(e, Join):
        a, b = _hanner_vertices(e.left), _hanner_vertices(e.right)
        za, zb = (Fraction(0),) * e.left.dim, (Fraction(0),) * e.right.dim
        return [v + zb for v in a] + [za + w for w in b]
    raise TypeError(f"not a Hanner expression: {e!r}")


def build_hanner(e: HannerExpr, coords: Sequence[int] | None = None) -> Polytope:
    """Build the polytope of ``e``; blocks go left to right unless ``coords``
    says where local coordinate k lands."""
    if isinstance(e, str):
        e = parse_hanner(e)
    verts = _hanner_vertices(e)
    d = e.dim
    if coords is None:
        return hull(verts)
    coords = list(coords)
    if sorted(coords) != list(range(d)):
        raise ValueError("coordinate assignment must be a permutation")
    out = []
    for v in verts:
        w = [Fraction(0)] * d
        for k, c in enumerate(coords):
            w[c] = v[k]
        out.append(tuple(w))
    return hull(out)


def cograph_build(G: Graph):
    """Decompose a cograph into joins and polars.

    Returns (expr, order): building expr and sending local coordinate k to
    vertex order[k] gives C(G).
    """
    if G.n == 1:
        return Segment(), [0]
    comps = _components(G)
    if len(comps) == 1:
        comps = _components(G.complement())
        if len(comps) == 1:
            raise ValueError("graph is not a cograph")
        # complement is disconnected: C(G) is the polar of C(complement)
        e, order = _join_components(G.complement(), comps)
        return Polar(e), order
    return _join_components(G, comps)


def _join_components(G: Graph, comps):
    exprs, order = [], []
    for comp in comps:
        e, o = cograph_build(G.induced(comp))
        exprs.append(e)
        order.extend(comp[i] for i in o)
    e = exprs[-1]
    for x in reversed(exprs[:-1]):
        e = Join(x, e)
    return e, order


def _components(G: Graph) -> list[list[int]]:
    seen, comps = set(), []
    for s in range(G.n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in range(G.n):
                if w not in seen and G.adjacent(v, w):
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def enumerate_hanner_types(d: int) -> list[Polytope]:
    """One normalized Hanner polytope per combinatorial type in dimension d."""
    if not 1 <= d <= 6:
        raise ValueError("dimension must be between 1 and 6")
    return [clique_polytope(G) for G in enumerate_cographs(d)]


def is_hanner(P: Polytope) -> bool:
    """Hanner test through the coordinate graph: G(P) must be a cograph and P
    must be C(G(P)). A polytope that is not normalized is normalized first."""
    if not is_normalized(P):
        P = normalize(P)
    G = polytope_graph(P)
    if not is_cograph(G):
        return False
    return canonical(P) == canonical(clique_polytope(G))


# ------------------------------------------------------ unconditional polytopes

def unconditional_polytope(points: Sequence[Sequence]) -> Polytope:
    """Normalized hull of the sign orbits of ``points`` together with ±e_i."""
    if not points:
        raise ValueError("need at least one point")
    d = len(points[0])
    pts = set()
    for p in points:
        p = tuple(Fraction(x) for x in p)
        for signs in itertools.product((1, -1), repeat=d):
            pts.add(tuple(s * x for s, x in zip(signs, p)))
    for i in range(d):
        for s in (1, -1):
            pts.add(tuple(Fraction(s) if k == i else Fraction(0) for k in range(d)))
    return normalize(hull(pts))


_GRID = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1), Fraction(5, 4), Fraction(3, 2)]


def random_unconditional(d: int, n_points: int, seed, *, check: bool = True,
                         max_tries: int = 20) -> Polytope:
    """Seeded random 1-unconditional polytope, normalized.

    Coordinates of the random points come from a small grid of positive
    rationals, which keeps the vertex count and the arithmetic small.
    """
    if not 1 <= d <= 5:
        raise ValueError("dimension must be between 1 and 5")
    rng = random.Random(seed)
    for _ in range(max_tries):
        pts = [tuple(rng.choice(_GRID) for _ in range(d)) for _ in range(n_points)]
        P = unconditional_polytope(pts)
        if P.is_full_dimensional:
            break
    else:
        raise ValueError("could not draw a full-dimensional polytope")
    if check and not is_locally_antiblocking(P):
        raise TheoremViolation("unconditional polytope is not locally anti-blocking",
                               witness=P.to_json())
    return P

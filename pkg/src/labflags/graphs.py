"""Small simple graphs, cograph recognition and cograph enumeration.

Vertices are 0..n-1 internally; the JSON form is 1-based.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset  # of frozenset pairs

    def __init__(self, n: int, edges: Iterable = ()):
        es = set()
        for e in edges:
            i, j = tuple(e)
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge {i, j} outside 0..{n - 1}")
            es.add(frozenset((i, j)))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", frozenset(es))

    def __repr__(self):
        return f"Graph({self.n}, {sorted(tuple(sorted(e)) for e in self.edges)})"

    def adjacent(self, i: int, j: int) -> bool:
        return frozenset((i, j)) in self.edges

    def edge_list(self) -> list[tuple[int, int]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def complement(self) -> "Graph":
        return Graph(self.n, [p for p in itertools.combinations(range(self.n), 2)
                              if frozenset(p) not in self.edges])

    def induced(self, J: Iterable[int]) -> "Graph":
        """Subgraph on J, relabelled 0..|J|-1 in the order of sorted(J)."""
        J = sorted(J)
        pos = {v: k for k, v in enumerate(J)}
        return Graph(len(J), [(pos[i], pos[j]) for i, j in self.edge_list() if i in pos and j in pos])

    def is_clique(self, S) -> bool:
        return all(self.adjacent(i, j) for i, j in itertools.combinations(S, 2))

    def maximal_cliques(self) -> list[tuple[int, ...]]:
        # brute force over subsets, n is tiny here
        cliques = [S for k in range(1, self.n + 1) for S in itertools.combinations(range(self.n), k)
                   if self.is_clique(S)]
        sets = [frozenset(S) for S in cliques]
        return [S for S, s in zip(cliques, sets) if not any(s < t for t in sets)]

    def relabel(self, perm) -> "Graph":
        return Graph(self.n, [(perm[i], perm[j]) for i, j in self.edge_list()])

    def canonical_form(self) -> tuple:
        """Lexicographically least sorted edge list over all relabellings."""
        best = None
        for perm in itertools.permutations(range(self.n)):
            key = tuple(sorted(tuple(sorted((perm[i], perm[j]))) for i, j in self.edge_list()))
            if best is None or key < best:
                best = key
        return (self.n, best)

    def isomorphic(self, other: "Graph") -> bool:
        return (self.n == other.n and len(self.edges) == len(other.edges)
                and self.canonical_form() == other.canonical_form())

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[i + 1, j + 1] for i, j in self.edge_list()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        n = int(data["n"])
        return cls(n, [(int(i) - 1, int(j) - 1) for i, j in data.get("edges", [])])


def complete_graph(n: int) -> Graph:
    return Graph(n, itertools.combinations(range(n), 2))


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def disjoint_union(g: Graph, h: Graph) -> Graph:
    return Graph(g.n + h.n, g.edge_list() + [(i + g.n, j + g.n) for i, j in h.edge_list()])


def _induces_p4(g: Graph, quad) -> bool:
    es = [(i, j) for i, j in itertools.combinations(quad, 2) if g.adjacent(i, j)]
    if len(es) != 3:
        return False
    deg = sorted(sum(v in e for e in es) for v in quad)
    # three edges with degrees 1,1,2,2 is a path; a star is 1,1,1,3 and a triangle leaves a 0
    return deg == [1, 1, 2, 2]


def is_cograph(g: Graph) -> bool:
    return not any(_induces_p4(g, q) for q in itertools.combinations(range(g.n), 4))


def enumerate_cographs(n: int) -> list[Graph]:
    """One representative per isomorphism class of cographs on n vertices.

    Every cograph on two or more vertices is either disconnected or the
    complement of a disconnected one, so unions of smaller classes and their
    complements reach every class.
    """
    if n < 1:
        raise ValueError("need at least one vertex")
    table: dict[int, list[Graph]] = {1: [Graph(1)]}
    for m in range(2, n + 1):
        seen = {}
        for k in range(1, m // 2 + 1):
            for a in table[k]:
                for b in table[m - k]:
                    u = disjoint_union(a, b)
                    for g in (u, u.complement()):
                        seen.setdefault(g.canonical_form(), g)
        table[m] = [seen[k] for k in sorted(seen)]
    return table[n]


def all_graphs(n: int):
    """Every labelled graph on n vertices (2^(n choose 2) of them)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [p for b, p in enumerate(pairs) if mask >> b & 1])

"""The standard fan: cones as sign vectors, and signs of flags.

A cone of the standard fan is stored as its sign vector sigma in {-1,0,1}^d
and stands for {x : sigma_i x_i >= 0 where sigma_i != 0, x_i = 0 elsewhere}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import TheoremViolation
from .exact import LinearSystem, solve_feasibility
from .polytope import Face, Polytope

_SYMBOL = {1: "+", -1: "-", 0: "0"}
_VALUE = {"+": 1, "-": -1, "0": 0}


@dataclass(frozen=True)
class SignCone:
    sigma: tuple

    @classmethod
    def parse(cls, text: str) -> "SignCone":
        try:
            return cls(tuple(_VALUE[c] for c in text))
        except KeyError:
            raise ValueError(f"bad sign string {text!r}") from None

    def __str__(self):
        return "".join(_SYMBOL[s] for s in self.sigma)

    def __len__(self):
        return len(self.sigma)

    @property
    def dim(self) -> int:
        return sum(1 for s in self.sigma if s)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.sigma) if s)

    def __le__(self, other: "SignCone") -> bool:
        """Cone inclusion: self is a face of other."""
        return all(s == 0 or s == t for s, t in zip(self.sigma, other.sigma))

    def meet(self, other: "SignCone") -> "SignCone":
        return SignCone(tuple(s if s == t else 0 for s, t in zip(self.sigma, other.sigma)))

    def contains_point(self, x: Sequence) -> bool:
        return all((x[i] == 0) if s == 0 else (s * x[i] >= 0) for i, s in enumerate(self.sigma))

    def restrict(self, J: Sequence[int]) -> "SignCone":
        return SignCone(tuple(self.sigma[j] for j in J))

    def embed(self, J: Sequence[int], d: int) -> "SignCone":
        sigma = [0] * d
        for j, s in zip(J, self.sigma):
            sigma[j] = s
        return SignCone(tuple(sigma))


def all_cones(d: int) -> list[SignCone]:
    """All 3^d cones of the standard fan, by increasing dimension."""
    cones = [SignCone(s) for s in itertools.product((0, 1, -1), repeat=d)]
    cones.sort(key=lambda c: (c.dim, [(-abs(s), -s) for s in c.sigma]))
    return cones


def sign_order(text: str):
    """Sort key putting "+" before "0" before "-" position by position."""
    return tuple(-_VALUE[c] for c in text)


def orthants(d: int) -> list[SignCone]:
    return [SignCone(s) for s in itertools.product((1, -1), repeat=d)]


def supp_fan(p: Sequence) -> SignCone:
    return SignCone(tuple((x > 0) - (x < 0) for x in p))


def cone_facets(D: SignCone) -> list[SignCone]:
    if D.dim == 0:
        raise ValueError("the zero cone has no facets")
    out = []
    for i in D.support:
        s = list(D.sigma)
        s[i] = 0
        out.append(SignCone(tuple(s)))
    return out


def inward_normal(C: SignCone, D: SignCone) -> tuple:
    """The unit vector n along which D = C + R_{>=0} n."""
    diff = [i for i, (s, t) in enumerate(zip(C.sigma, D.sigma)) if s != t]
    if len(diff) != 1 or C.sigma[diff[0]] != 0 or not C <= D:
        raise ValueError(f"{C} is not a facet of {D}")
    i = diff[0]
    return tuple(Fraction(D.sigma[i]) if j == i else Fraction(0) for j in range(len(D)))


def one_vector(C: SignCone) -> tuple:
    return tuple(Fraction(s) for s in C.sigma)


# ------------------------------------------------------------- relint tests

def _coordinate_prefilter(pts, C: SignCone, strict: bool) -> bool | None:
    """Per-coordinate necessary condition. False means certainly empty."""
    for i, s in enumerate(C.sigma):
        lo = min(p[i] for p in pts)
        hi = max(p[i] for p in pts)
        flat = lo == hi
        if s == 0:
            if not (flat and lo == 0) and not (lo < 0 < hi):
                return False
        elif s > 0:
            if not (hi > 0 or (not strict and flat and lo == 0)):
                return False
        else:
            if not (lo < 0 or (not strict and flat and lo == 0)):
                return False
    return None


def _relint_system(pts, C: SignCone, strict_cone: bool) -> LinearSystem:
    # x = sum lam_v v with every lam_v > 0 and sum lam = 1 describes relint F
    m = len(pts)
    d = len(C)
    eq = [(tuple(Fraction(1) for _ in pts), Fraction(1))]
    ge, gt = [], []
    for v in range(m):
        gt.append((tuple(Fraction(int(w == v)) for w in range(m)), Fraction(0)))
    for i in range(d):
        row = tuple(Fraction(C.sigma[i] * p[i]) if C.sigma[i] else p[i] for p in pts)
        if C.sigma[i] == 0:
            eq.append((row, Fraction(0)))
        elif strict_cone:
            gt.append((row, Fraction(0)))
        else:
            ge.append((row, Fraction(0)))
    return LinearSystem(m, tuple(eq), tuple(ge), tuple(gt))


def _meets(P: Polytope, F: Face, C: SignCone, strict_cone: bool) -> bool:
    key = (F.vertex_indices, C.sigma, strict_cone)
    hit = P._cache.get(key)
    if hit is not None:
        return hit
    pts = P.points(F)
    if len(pts) == 1:
        ans = (supp_fan(pts[0]) == C) if strict_cone else C.contains_point(pts[0])
    elif _coordinate_prefilter(pts, C, strict_cone) is False:
        ans = False
    else:
        bary = tuple(sum(p[i] for p in pts) / len(pts) for i in range(len(C)))
        if (supp_fan(bary) == C) if strict_cone else C.contains_point(bary):
            ans = True
        else:
            ans = bool(solve_feasibility(_relint_system(pts, C, strict_cone)))
    P._cache[key] = ans
    return ans


def relint_face_meets_cone(P: Polytope, F: Face, C: SignCone) -> bool:
    """Does the relative interior of the face F meet the closed cone C?"""
    if not F.vertex_indices:
        raise ValueError("empty face")
    return _meets(P, F, C, strict_cone=False)


def relint_face_meets_relint_cone(P: Polytope, F: Face, C: SignCone) -> bool:
    if not F.vertex_indices:
        raise ValueError("empty face")
    return _meets(P, F, C, strict_cone=True)


def face_cone_set(P: Polytope, F: Face) -> frozenset:
    """Sign vectors of all cones whose closure meets relint F."""
    key = ("cones", F.vertex_indices)
    hit = P._cache.get(key)
    if hit is None:
        hit = frozenset(C.sigma for C in all_cones(P.ambient_dim) if _meets(P, F, C, False))
        P._cache[key] = hit
    return hit


def kept_cones(P: Polytope, flag: Sequence[int]) -> frozenset:
    """Cones meeting the relative interior of every nonempty face of a flag."""
    L = P.lattice
    kept = None
    for idx in flag[1:]:
        s = face_cone_set(P, L.faces[idx])
        kept = s if kept is None else kept & s
    return kept


def _meet_all(sigmas: Iterable[tuple]) -> tuple:
    it = iter(sigmas)
    acc = list(next(it))
    for s in it:
        acc = [a if a == b else 0 for a, b in zip(acc, s)]
    return tuple(acc)


def flag_sign(P: Polytope, flag: Sequence[int], check_closure: bool = True) -> SignCone:
    """The sign of a flag: the intersection of all standard-fan cones whose
    closure meets the relative interior of every face of the flag.

    The kept set is checked to be nonempty and closed under intersection;
    either failure raises :class:`TheoremViolation`.
    """
    kept = kept_cones(P, flag)
    if not kept:
        raise TheoremViolation("no cone meets every face of the flag", witness=list(flag))
    m = _meet_all(kept)
    if m not in kept:
        raise TheoremViolation("intersection of the kept cones is not kept", witness=list(flag))
    if check_closure:
        ks = sorted(kept)
        for a, b in itertools.combinations(ks, 2):
            if tuple(x if x == y else 0 for x, y in zip(a, b)) not in kept:
                raise TheoremViolation("kept cones are not closed under intersection",
                                       witness=list(flag))
    sign = SignCone(m)
    if sign.dim < P.dim:
        raise TheoremViolation(f"flag sign {sign} has dimension below {P.dim}", witness=list(flag))
    return sign

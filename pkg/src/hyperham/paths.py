"""Ordered ell-path / ell-cycle certificates and their independent checkers.

An ell-path on k-uniform edges is a vertex sequence v_1..v_T whose edge i
(1-indexed) occupies positions (i-1)(k-ell)+1 .. (i-1)(k-ell)+k, so
consecutive edges overlap in exactly ell positions.  A Hamilton ell-cycle
is the cyclic analogue covering every vertex once.

The checkers are total: malformed input yields a rejecting verdict with
the first violation site, never an exception.  Every constructive module
in this package routes its output back through these checkers.

End conventions.  ends() reads both ell-ends from the boundary inward,
i.e. (v_1..v_ell) and (v_T..v_{T-ell+1}).  The reversal of an end tuple,
exposed as head_link()/tail_link(), lists the same vertices with the
boundary vertex last; that is the orientation in which suffix subsets of
the tuple are exactly the sets that persist in consecutive edges when the
path is extended past that boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import ceil
from typing import Sequence

from .hypergraph import Hypergraph


def seg_count(k: int, ell: int) -> int:
    """Max edges of an ell-cycle through one vertex: ceil(k / (k - ell))."""
    if not 1 <= ell < k:
        raise ValueError(f"need 1 <= ell < k, got k={k}, ell={ell}")
    return ceil(k / (k - ell))


@dataclass(frozen=True)
class Verdict:
    """Checker outcome.  index is the first violating edge, 1-based."""

    ok: bool
    reason: str | None = None
    index: int | None = None

    def to_json_obj(self) -> dict:
        return {"ok": self.ok, "reason": self.reason, "index": self.index}


ACCEPT = Verdict(True)


@dataclass(frozen=True)
class OrderedPath:
    """Explicit vertex sequence of an ell-path; re-verifiable certificate."""

    k: int
    ell: int
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def step(self) -> int:
        return self.k - self.ell

    @property
    def length(self) -> int:
        """Edge count (assumes structural validity)."""
        return (len(self.vertices) - self.ell) // self.step

    def edge(self, i: int) -> tuple[int, ...]:
        """i-th edge, 1-based, as a sorted tuple."""
        lo = (i - 1) * self.step
        return tuple(sorted(self.vertices[lo : lo + self.k]))

    def edges(self) -> list[tuple[int, ...]]:
        return [self.edge(i) for i in range(1, self.length + 1)]

    def ends(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Both ell-ends read boundary-first."""
        ell = self.ell
        return tuple(self.vertices[:ell]), tuple(reversed(self.vertices[-ell:]))

    def head_link(self) -> tuple[int, ...]:
        """Head end with the boundary vertex last (extension orientation)."""
        return tuple(reversed(self.vertices[: self.ell]))

    def tail_link(self) -> tuple[int, ...]:
        """Tail end with the boundary vertex last (extension orientation)."""
        return tuple(self.vertices[-self.ell :])

    def reversed(self) -> "OrderedPath":
        return OrderedPath(self.k, self.ell, tuple(reversed(self.vertices)))

    def to_json_obj(self) -> dict:
        return {"type": "path", "k": self.k, "ell": self.ell, "vertices": list(self.vertices)}


@dataclass(frozen=True)
class OrderedCycle:
    """Cyclic vertex sequence of an ell-cycle; edge j (0-based) covers
    cyclic positions j(k-ell) .. j(k-ell)+k-1."""

    k: int
    ell: int
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))

    @property
    def step(self) -> int:
        return self.k - self.ell

    @property
    def edge_total(self) -> int:
        return len(self.vertices) // self.step

    def edge(self, j: int) -> tuple[int, ...]:
        n = len(self.vertices)
        lo = j * self.step
        return tuple(sorted(self.vertices[(lo + t) % n] for t in range(self.k)))

    def edges(self) -> list[tuple[int, ...]]:
        return [self.edge(j) for j in range(self.edge_total)]

    def to_json_obj(self) -> dict:
        return {"type": "cycle", "k": self.k, "ell": self.ell, "vertices": list(self.vertices)}


def certificate_from_json_obj(obj: dict) -> OrderedPath | OrderedCycle:
    ell = obj.get("ell", obj.get("l", obj.get("ℓ")))
    kind = obj.get("type")
    if kind == "cycle":
        return OrderedCycle(int(obj["k"]), int(ell), tuple(obj["vertices"]))
    return OrderedPath(int(obj["k"]), int(ell), tuple(obj["vertices"]))


def certificate_to_json(cert: OrderedPath | OrderedCycle) -> str:
    return json.dumps(cert.to_json_obj(), sort_keys=True)


# -- checkers ---------------------------------------------------------------


def check_ell_path(H: Hypergraph, P: OrderedPath) -> Verdict:
    """Accept iff P is structurally a valid ell-path and every implied edge
    is an edge of H.  Rejections carry the first violating edge index."""
    k, ell = P.k, P.ell
    if k != H.k:
        return Verdict(False, "uniformity-mismatch")
    if not 1 <= ell < k:
        return Verdict(False, "ell-out-of-range")
    vs = P.vertices
    if len(vs) < k:
        return Verdict(False, "too-short")
    if (len(vs) - ell) % (k - ell) != 0:
        return Verdict(False, "length-not-congruent")
    if len(set(vs)) != len(vs):
        return Verdict(False, "repeated-vertex")
    if any(not 0 <= v < H.n for v in vs):
        return Verdict(False, "vertex-out-of-range")
    for i in range(1, P.length + 1):
        if not H.has_edge(P.edge(i)):
            return Verdict(False, "missing-edge", i)
    return ACCEPT


def check_hamilton_ell_cycle(H: Hypergraph, C: OrderedCycle) -> Verdict:
    """Accept iff C spans every vertex of H exactly once, (k-ell) | n, all
    cyclic edges are in H, and consecutive edges overlap in exactly ell."""
    k, ell = C.k, C.ell
    if k != H.k:
        return Verdict(False, "uniformity-mismatch")
    if not 1 <= ell < k:
        return Verdict(False, "ell-out-of-range")
    vs = C.vertices
    n = H.n
    if len(vs) != n or set(vs) != set(range(n)):
        return Verdict(False, "not-spanning")
    if n % (k - ell) != 0:
        return Verdict(False, "divisibility")
    if n < k:
        return Verdict(False, "too-few-vertices")
    m = C.edge_total
    for j in range(m):
        if not H.has_edge(C.edge(j)):
            return Verdict(False, "missing-edge", j + 1)
    for j in range(m):
        a, b = set(C.edge(j)), set(C.edge((j + 1) % m))
        if len(a & b) != ell:
            return Verdict(False, "overlap-not-ell", j + 1)
    return ACCEPT


def cycle_representations(C: OrderedCycle) -> list[tuple[int, ...]]:
    """All vertex sequences encoding the same ell-cycle: rotations by
    multiples of (k-ell) plus the reflection about the axis that realigns
    edge windows (p -> k-1-p mod n), again with all rotations."""
    n = len(C.vertices)
    d = C.step
    vs = C.vertices
    refl = tuple(vs[(C.k - 1 - p) % n] for p in range(n))
    reps = []
    for base in (vs, refl):
        for off in range(0, n, d):
            reps.append(base[off:] + base[:off])
    return reps


def normalize_cycle(C: OrderedCycle) -> OrderedCycle:
    """Lexicographically smallest equivalent representation; stable for
    snapshot tests."""
    best = min(cycle_representations(C))
    return OrderedCycle(C.k, C.ell, best)


def rotate_cycle(C: OrderedCycle, offset: int) -> OrderedCycle:
    vs = C.vertices
    off = offset % len(vs)
    return OrderedCycle(C.k, C.ell, vs[off:] + vs[:off])


def concat_paths(P: OrderedPath, R: OrderedPath) -> OrderedPath:
    """Concatenate two paths that share their gluing block: P's last ell
    vertices must equal R's first ell vertices in the same order."""
    ell = P.ell
    if (P.k, P.ell) != (R.k, R.ell):
        raise ValueError("cannot concatenate paths with different (k, ell)")
    if P.vertices[-ell:] != R.vertices[:ell]:
        raise ValueError("gluing blocks disagree")
    mid = set(P.vertices) & set(R.vertices)
    if mid != set(P.vertices[-ell:]):
        raise ValueError("paths overlap outside the gluing block")
    return OrderedPath(P.k, P.ell, P.vertices + R.vertices[ell:])


def subpath(P: OrderedPath, first_edge: int, last_edge: int) -> OrderedPath:
    """Contiguous edge range [first_edge, last_edge], 1-based inclusive."""
    if not 1 <= first_edge <= last_edge <= P.length:
        raise ValueError("edge range out of bounds")
    lo = (first_edge - 1) * P.step
    hi = (last_edge - 1) * P.step + P.k
    return OrderedPath(P.k, P.ell, P.vertices[lo:hi])


def reverse_end(end: Sequence[int]) -> tuple[int, ...]:
    """Reverse an ordered ell-tuple; involution."""
    t = tuple(end)
    if len(set(t)) != len(t):
        raise ValueError("end tuple has repeated vertices")
    return tuple(reversed(t))


# -- the path coloring procedure --------------------------------------------


@dataclass(frozen=True)
class PathColoring:
    """Per-position colors in 1..k with color k used exactly lam times."""

    colors: tuple[int, ...]
    lam: int

    def classes(self, k: int) -> list[list[int]]:
        """0-based positions per color 1..k."""
        out: list[list[int]] = [[] for _ in range(k)]
        for pos, c in enumerate(self.colors):
            out[c - 1].append(pos)
        return out


def color_path(P: OrderedPath, lam: int) -> PathColoring:
    """Two-phase coloring of a path of length lam*s.

    Positions k, k+s(k-ell), ..., k+(lam-1)s(k-ell) get color k; the
    remaining positions get 1..k-1 cyclically.  Every edge then contains a
    color-k vertex and the other class sizes differ by at most one.
    """
    k, ell, d = P.k, P.ell, P.step
    s = seg_count(k, ell)
    if lam < 1:
        raise ValueError("lam must be >= 1")
    if P.length != lam * s:
        raise ValueError(f"path length {P.length} != lam*s = {lam * s}")
    T = len(P.vertices)
    colors = [0] * T
    special = [k - 1 + j * s * d for j in range(lam)]
    for pos in special:
        colors[pos] = k
    c = 1
    for pos in range(T):
        if colors[pos] == 0:
            colors[pos] = c
            c = c + 1 if c < k - 1 else 1
    return PathColoring(tuple(colors), lam)


def is_canonical(P: OrderedPath, parts: Sequence[frozenset[int]]) -> bool:
    """True iff P meets part k exactly lam times (length = lam*s) and the
    other part intersections are as equal as possible."""
    k = P.k
    if len(parts) != k:
        raise ValueError(f"need exactly k={k} parts")
    union = frozenset().union(*parts)
    pv = set(P.vertices)
    if not pv <= union:
        raise ValueError("path vertices are not covered by the parts")
    s = seg_count(k, P.ell)
    if P.length % s != 0:
        return False
    lam = P.length // s
    counts = [len(pv & p) for p in parts]
    if counts[k - 1] != lam:
        return False
    rest = counts[: k - 1]
    return max(rest) - min(rest) <= 1

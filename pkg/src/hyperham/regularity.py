"""Toy-scale density regularity checking and canonical path tiling.

check_regular enumerates every qualifying subset tuple, so it is only for
tiny parts and is budget-guarded.  The tiling driver greedily extracts
canonical paths from a k-partite tuple until the last part is nearly
exhausted; on complete tuples with the balanced part sizes it covers all
but O(eps * m) vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .hypergraph import Hypergraph, validate_partite
from .paths import OrderedPath, check_ell_path, is_canonical, seg_count


@dataclass(frozen=True)
class RegularityVerdict:
    verdict: str  # "regular" | "irregular" | "budget-exceeded"
    witness: tuple[tuple[int, ...], ...] | None = None
    checked: int = 0

    @property
    def ok(self) -> bool:
        return self.verdict == "regular"

    def to_json_obj(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else [list(w) for w in self.witness],
            "checked": self.checked,
        }


def check_regular(H: Hypergraph, parts, eps, d, budget_tuples: int = 2_000_000) -> RegularityVerdict:
    """Accept iff |d(A_1..A_k) - d| <= eps for every subset tuple with
    |A_i| >= eps |V_i|; exhaustive within the tuple budget."""
    eps = Fraction(eps) if not isinstance(eps, Fraction) else eps
    d = Fraction(d) if not isinstance(d, Fraction) else d
    parts = [frozenset(p) for p in parts]
    if len(parts) != H.k:
        raise ValueError(f"need k={H.k} parts")
    validate_partite(parts)

    def qualifying(part: frozenset[int]) -> list[tuple[int, ...]]:
        out = []
        for size in range(1, len(part) + 1):
            if Fraction(size) >= eps * len(part):
                out.extend(combinations(sorted(part), size))
        return out

    families = [qualifying(p) for p in parts]
    total = 1
    for fam in families:
        total *= len(fam)
        if total > budget_tuples:
            return RegularityVerdict("budget-exceeded", None, 0)

    checked = 0

    def rec(i: int, chosen: list[tuple[int, ...]]) -> RegularityVerdict | None:
        nonlocal checked
        if i == len(families):
            checked += 1
            dens = H.density([frozenset(c) for c in chosen])
            if abs(dens - d) > eps:
                return RegularityVerdict("irregular", tuple(chosen), checked)
            return None
        for c in families[i]:
            bad = rec(i + 1, chosen + [c])
            if bad is not None:
                return bad
        return None

    bad = rec(0, [])
    if bad is not None:
        return bad
    return RegularityVerdict("regular", None, checked)


def canonical_template_parts(k: int, ell: int, length: int) -> list[int]:
    """Part index (0-based) for each position of a canonical path of the
    given edge count: part k-1 at positions k, k+s(k-ell), ...; the rest
    cycle through parts 0..k-2."""
    s = seg_count(k, ell)
    d = k - ell
    T = ell + length * d
    out = [-1] * T
    pos = k - 1
    while pos < T:
        out[pos] = k - 1
        pos += s * d
    c = 0
    for i in range(T):
        if out[i] == -1:
            out[i] = c
            c = (c + 1) % (k - 1)
    return out


def greedy_canonical_path_for(H: Hypergraph, ell: int, parts,
                              max_edges: int | None = None) -> OrderedPath | None:
    """Greedy canonical path in a k-partite instance: positions draw from
    the template part, first feasible vertex each step, each completed
    window must be an edge; the result is truncated to a multiple of s
    edges.  Returns None when not even s edges fit."""
    parts = [frozenset(p) for p in parts]
    k = H.k
    s = seg_count(k, ell)
    d = k - ell
    if len(parts) != k:
        raise ValueError(f"need k={k} parts")
    cap = max_edges if max_edges is not None else (len(parts[k - 1])) * s
    tmpl = canonical_template_parts(k, ell, cap)
    seq: list[int] = []
    used: set[int] = set()
    avail = [sorted(p) for p in parts]
    for pos in range(len(tmpl)):
        part = tmpl[pos]
        completes_window = pos >= k - 1 and (pos - (k - 1)) % d == 0
        placed = False
        for v in avail[part]:
            if v in used:
                continue
            if completes_window and not H.has_edge(seq[pos - k + 1 :] + [v]):
                continue
            seq.append(v)
            used.add(v)
            placed = True
            break
        if not placed:
            break
    if len(seq) < ell + s * d:
        return None
    edges = (len(seq) - ell) // d if len(seq) >= ell else 0
    lam = edges // s
    if lam == 0:
        return None
    T = ell + lam * s * d
    return OrderedPath(k, ell, tuple(seq[:T]))


def cover_with_canonical_paths(H: Hypergraph, ell: int, parts, eps) -> list[OrderedPath]:
    """Extract vertex-disjoint canonical paths until the last part has
    fewer than 2*eps*|V_k| uncovered vertices or no path fits."""
    eps = Fraction(eps) if not isinstance(eps, Fraction) else eps
    parts = [frozenset(p) for p in parts]
    vk_total = len(parts[-1])
    remaining = [set(p) for p in parts]
    out: list[OrderedPath] = []
    while Fraction(len(remaining[-1])) >= 2 * eps * vk_total:
        P = greedy_canonical_path_for(H, ell, [frozenset(p) for p in remaining])
        if P is None:
            break
        if not check_ell_path(H, P).ok or not is_canonical(P, parts):
            raise AssertionError("tiling produced an invalid canonical path")
        for v in P.vertices:
            for part in remaining:
                part.discard(v)
        out.append(P)
    return out

"""Extremal-case machinery: partition optimization, the three-way vertex
classification, and the bad-set / linkable-end predicates.

All thresholds are compared in exact rational arithmetic.  The parameter
cascade eps1 = eps0^(1/4), eps2 = 2 eps1^2 collapses at desk scale, so the
default profile fixes eps1 = 3/10 and derives the rest; "paper mode"
additionally asserts the cascade relations, which the census invariants
require.  Every quantity here is recomputable from raw degrees, and the
tests do exactly that.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, comb, factorial

from .hypergraph import Hypergraph
from .paths import seg_count


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x).limit_denominator(10**12) if isinstance(x, float) else Fraction(x)


@dataclass(frozen=True)
class GoodnessParams:
    """Finite-scale stand-ins for the goodness thresholds.

    s = ceil(k/(k-ell)); threshold(n) = n/(s(k-ell)).  In paper mode the
    cascade eps0 = eps1^4, eps2 = 2 eps1^2 and the delta inversion
    eps0 = 2 k! delta (1 - 1/(s(k-ell)))^(-k) are enforced exactly.
    """

    k: int
    ell: int
    eps0: Fraction
    eps1: Fraction
    eps2: Fraction
    delta: Fraction
    paper_mode: bool = False

    def __post_init__(self):
        if not 1 <= self.ell < self.k:
            raise ValueError("need 1 <= ell < k")
        for name in ("eps0", "eps1", "eps2", "delta"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        for name in ("eps0", "eps1", "eps2"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1)")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if 2 * self.ell > self.k and self.s < 2:
            raise ValueError("s must be >= 2 when ell > k/2")
        if self.paper_mode:
            if self.eps1 != _nth_root_exact(self.eps0, 4):
                raise ValueError("paper mode requires eps1 = eps0^(1/4)")
            if self.eps2 != 2 * self.eps1 ** 2:
                raise ValueError("paper mode requires eps2 = 2 eps1^2")
            if self.eps0 != self.delta * 2 * factorial(self.k) * self.shrink ** (-self.k):
                raise ValueError("paper mode requires the delta/eps0 inversion")

    @property
    def s(self) -> int:
        return seg_count(self.k, self.ell)

    @property
    def shrink(self) -> Fraction:
        return 1 - Fraction(1, self.s * (self.k - self.ell))

    def threshold(self, n: int) -> Fraction:
        return Fraction(n, self.s * (self.k - self.ell))

    def b_size(self, n: int) -> int:
        """floor((1 - 1/(s(k-ell))) n); the complement has ceil(n/(s(k-ell)))."""
        return n - ceil(Fraction(n, self.s * (self.k - self.ell)))

    @classmethod
    def from_eps1(cls, k: int, ell: int, eps1, paper_mode: bool = True) -> "GoodnessParams":
        e1 = _frac(eps1)
        s = seg_count(k, ell)
        shrink = 1 - Fraction(1, s * (k - ell))
        eps0 = e1 ** 4
        delta = eps0 * shrink ** k / (2 * factorial(k))
        return cls(k, ell, eps0, e1, 2 * e1 ** 2, delta, paper_mode)

    @classmethod
    def desk_default(cls, k: int, ell: int) -> "GoodnessParams":
        return cls.from_eps1(k, ell, Fraction(3, 10), paper_mode=False)

    def to_json_obj(self) -> dict:
        return {
            "k": self.k, "ell": self.ell, "s": self.s,
            "eps0": str(self.eps0), "eps1": str(self.eps1), "eps2": str(self.eps2),
            "delta": str(self.delta), "paper_mode": self.paper_mode,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "GoodnessParams":
        return cls(int(obj["k"]), int(obj["ell"]), Fraction(obj["eps0"]),
                   Fraction(obj["eps1"]), Fraction(obj["eps2"]), Fraction(obj["delta"]),
                   bool(obj.get("paper_mode", False)))


def _nth_root_exact(x: Fraction, n: int) -> Fraction | None:
    """Exact n-th root of a rational, or None if irrational."""
    def iroot(v: int) -> int | None:
        if v < 0:
            return None
        r = round(v ** (1.0 / n))
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** n == v:
                return c
        return None

    p, q = iroot(x.numerator), iroot(x.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


@dataclass(frozen=True)
class ExtremalPartition:
    """B of the prescribed floor size, A its complement, with e(B)."""

    B: frozenset[int]
    A: frozenset[int]
    e_B: int
    mode: str

    def to_json_obj(self) -> dict:
        return {"B": sorted(self.B), "A": sorted(self.A), "e_B": self.e_B, "mode": self.mode}


def _induced_count(edges, B: frozenset[int]) -> int:
    return sum(1 for e in edges if B.issuperset(e))


def minimize_eb(H: Hypergraph, params: GoodnessParams, mode: str = "auto",
                seed: int = 0, restarts: int = 32,
                exhaustive_cap: int = 2_000_000) -> ExtremalPartition:
    """Partition with the prescribed |B| minimizing e(B).

    Exhaustive mode enumerates all complements A (exact); local-search
    uses best-improvement single swaps with seeded restarts and reports
    itself as such.
    """
    n = H.n
    size_b = params.b_size(n)
    size_a = n - size_b
    if not 0 <= size_b <= n:
        raise ValueError("prescribed |B| out of range")
    if mode == "auto":
        mode = "exhaustive" if comb(n, size_a) <= exhaustive_cap else "local-search"
    if mode == "exhaustive":
        best_b: frozenset[int] | None = None
        best_e = None
        for A in combinations(range(n), size_a):
            B = frozenset(range(n)) - frozenset(A)
            e = _induced_count(H.edges, B)
            if best_e is None or e < best_e or (e == best_e and sorted(B) < sorted(best_b)):
                best_b, best_e = B, e
        return ExtremalPartition(best_b, frozenset(range(n)) - best_b, best_e, "exhaustive")
    if mode != "local-search":
        raise ValueError(f"unknown mode {mode!r}")
    rng = random.Random(seed)
    verts = list(range(n))
    best_b, best_e = None, None
    for _ in range(max(restarts, 1)):
        rng.shuffle(verts)
        B = set(verts[:size_b])
        e = _induced_count(H.edges, frozenset(B))
        improved = True
        while improved:
            improved = False
            swap = None
            cur = e
            for b in sorted(B):
                for a in sorted(set(range(n)) - B):
                    cand = frozenset(B - {b} | {a})
                    ce = _induced_count(H.edges, cand)
                    if ce < cur:
                        cur, swap = ce, (b, a)
            if swap is not None:
                B.remove(swap[0])
                B.add(swap[1])
                e = cur
                improved = True
        if best_e is None or e < best_e:
            best_b, best_e = frozenset(B), e
    return ExtremalPartition(best_b, frozenset(range(n)) - best_b, best_e, "local-search")


def is_delta_extremal(H: Hypergraph, params: GoodnessParams,
                      mode: str = "auto", seed: int = 0) -> tuple[bool, ExtremalPartition, dict]:
    """Test e(B) <= delta n^k on the minimizing partition; the eps0 bound
    e(B) <= eps0 C(|B|, k) is verified alongside and reported."""
    part = minimize_eb(H, params, mode=mode, seed=seed)
    bound = params.delta * Fraction(H.n) ** H.k
    eps0_bound = params.eps0 * comb(len(part.B), H.k)
    report = {
        "e_B": part.e_B,
        "delta_bound": str(bound),
        "delta_ok": Fraction(part.e_B) <= bound,
        "eps0_bound": str(eps0_bound),
        "eps0_ok": Fraction(part.e_B) <= eps0_bound,
        "mode": part.mode,
    }
    return report["delta_ok"], part, report


@dataclass(frozen=True)
class Classification:
    """Three-way split: a_prime has nearly full degree into B, b_prime has
    nearly none, v0 is the rest; q = |A intersect b_prime|."""

    partition: ExtremalPartition
    a_prime: frozenset[int]
    b_prime: frozenset[int]
    v0: frozenset[int]

    @property
    def q(self) -> int:
        return len(self.partition.A & self.b_prime)

    def to_json_obj(self) -> dict:
        return {
            "A": sorted(self.partition.A), "B": sorted(self.partition.B),
            "A_prime": sorted(self.a_prime), "B_prime": sorted(self.b_prime),
            "V0": sorted(self.v0), "q": self.q,
        }


def degrees_into(H: Hypergraph, B: frozenset[int]) -> list[int]:
    """deg(v, B) for every vertex: (k-1)-subsets of B completing v."""
    out = [0] * H.n
    for e in H.edges:
        outside = [v for v in e if v not in B]
        if not outside:
            for v in e:
                out[v] += 1
        elif len(outside) == 1:
            out[outside[0]] += 1
    return out


def classify(H: Hypergraph, part: ExtremalPartition, params: GoodnessParams) -> Classification:
    """Exact sharp-inequality classification; deterministic."""
    if params.eps1 >= Fraction(1, 2):
        raise ValueError("classification needs eps1 < 1/2")
    B = part.B
    cap = comb(len(B), H.k - 1)
    hi = (1 - params.eps1) * cap
    lo = params.eps1 * cap
    deg = degrees_into(H, B)
    a_p, b_p, v0 = set(), set(), set()
    for v in range(H.n):
        dv = Fraction(deg[v])
        if dv >= hi:
            a_p.add(v)
        elif dv <= lo:
            b_p.add(v)
        else:
            v0.add(v)
    return Classification(part, frozenset(a_p), frozenset(b_p), frozenset(v0))


# -- bad sets and linkable ends ----------------------------------------------


def degree_within(H: Hypergraph, L: frozenset[int], B: frozenset[int]) -> int:
    """Number of (k-|L|)-sets Y inside B with L united Y an edge."""
    return H.degree_within(frozenset(L), frozenset(B))


def is_bad_set(H: Hypergraph, L: frozenset[int], beta, B: frozenset[int]) -> bool:
    """True iff deg(L, B) > beta * C(|B|, k - |L|)."""
    L = frozenset(L)
    if len(L) > H.k - 1:
        raise ValueError("bad-set test needs |L| <= k-1")
    return Fraction(degree_within(H, L, B)) > _frac(beta) * comb(len(B), H.k - len(L))


def has_bad_subset(H: Hypergraph, S, beta, B: frozenset[int], max_size: int) -> bool:
    """Any beta-bad subset of S of size 0..max_size (sizes above ell are
    outside the predicate's range, so callers pass max_size = ell)."""
    S = frozenset(S)
    for size in range(0, min(max_size, len(S)) + 1):
        for sub in combinations(sorted(S), size):
            if is_bad_set(H, frozenset(sub), beta, B):
                return True
    return False


def bad_set_count(H: Hypergraph, B: frozenset[int], beta, size: int) -> int:
    """Exhaustive count of beta-bad size-sets inside B."""
    return sum(1 for sub in combinations(sorted(B), size)
               if is_bad_set(H, frozenset(sub), beta, B))


def count_sets_without_bad_subset(H: Hypergraph, B: frozenset[int], beta,
                                  d: int, max_subset: int) -> int:
    return sum(1 for sub in combinations(sorted(B), d)
               if not has_bad_subset(H, frozenset(sub), beta, B, max_subset))


@dataclass(frozen=True)
class LinkableEnd:
    """Ordered ell-tuple, extension-oriented: the path continues past
    vertices[-1], and the verified witnesses are the suffix sets that
    persist in the next s-1 edges."""

    vertices: tuple[int, ...]
    witnesses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "witnesses", tuple(tuple(w) for w in self.witnesses))


def link_suffixes(tup: tuple[int, ...], k: int, ell: int) -> list[tuple[int, ...]]:
    """The s-1 designated suffix tuples of an ordered ell-tuple."""
    s = seg_count(k, ell)
    d = k - ell
    return [tuple(tup[(i - 1) * d:]) for i in range(1, s)]


def is_linkable(H: Hypergraph, tup, params: GoodnessParams, B: frozenset[int],
                b_prime: frozenset[int] | None = None) -> tuple[LinkableEnd | None, int | None]:
    """Test the s-1 suffix sets for eps1-goodness.

    Returns (LinkableEnd, None) with witnesses on success, or (None, i)
    with the first failing suffix index i (1-based).
    """
    tup = tuple(tup)
    if len(tup) != params.ell or len(set(tup)) != params.ell:
        raise ValueError("need an ordered ell-tuple of distinct vertices")
    if b_prime is not None and not set(tup) <= b_prime:
        raise ValueError("end tuple must lie inside B'")
    for i, suf in enumerate(link_suffixes(tup, params.k, params.ell), start=1):
        if is_bad_set(H, frozenset(suf), params.eps1, B):
            return None, i
    return LinkableEnd(tup, tuple(link_suffixes(tup, params.k, params.ell))), None


# -- recomputable partition facts ---------------------------------------------


def partition_facts_report(H: Hypergraph, cls: Classification,
                           params: GoodnessParams) -> dict:
    """Side-class size bounds together with the minimality implications:
    A meets b_prime only when B is inside b_prime, and B meets a_prime
    only when A is inside a_prime."""
    A, B = cls.partition.A, cls.partition.B
    eb = Fraction(params.eps2 * len(B))
    report = {
        "A_minus_Aprime": len(A - cls.a_prime),
        "B_minus_Bprime": len(B - cls.b_prime),
        "Aprime_minus_A": len(cls.a_prime - A),
        "Bprime_minus_B": len(cls.b_prime - B),
        "V0": len(cls.v0),
        "size_bound": str(eb),
        "sizes_ok": all(x <= eb for x in (
            len(A - cls.a_prime), len(B - cls.b_prime),
            len(cls.a_prime - A), len(cls.b_prime - B))) and len(cls.v0) <= 2 * eb,
        "A_meets_Bprime": bool(A & cls.b_prime),
        "B_in_Bprime": B <= cls.b_prime,
        "B_meets_Aprime": bool(B & cls.a_prime),
        "A_in_Aprime": A <= cls.a_prime,
    }
    report["swap_implication_q"] = (not report["A_meets_Bprime"]) or report["B_in_Bprime"]
    report["swap_implication_a"] = (not report["B_meets_Aprime"]) or report["A_in_Aprime"]
    return report


def good_set_crossing_report(H: Hypergraph, cls: Classification,
                             params: GoodnessParams, size: int) -> list[dict]:
    """For every eps1-good size-set inside b_prime, compare its degree into
    A'(B')^{k-1} with (1 - 2 s k eps1) |A'| C(|B'| - size, k - 1 - size)."""
    s, k = params.s, params.k
    B = cls.partition.B
    ap, bp = cls.a_prime, cls.b_prime
    bound_factor = (1 - 2 * s * k * params.eps1) * len(ap)
    rows = []
    for sub in combinations(sorted(bp), size):
        L = frozenset(sub)
        if is_bad_set(H, L, params.eps1, B):
            continue
        deg = H.degree_into(L, [(ap, 1), (bp - L, k - 1 - size)])
        bound = bound_factor * comb(len(bp) - size, k - 1 - size)
        rows.append({"set": sub, "deg": deg, "bound": str(bound),
                     "ok": Fraction(deg) >= bound})
    return rows

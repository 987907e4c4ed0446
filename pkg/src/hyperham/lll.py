"""Local-lemma arithmetic and the conflict predicate on random injections.

The symmetric condition e*p*(d+1) < 1 is decided against exact rational
enclosures of Euler's number (partial sums of the factorial series with a
tail bound), so boundary queries are classified correctly well below any
floating-point noise floor.

Injection events fix a partial matching between a domain edge and an image
edge; two events conflict when they disagree on a shared domain vertex or
on a shared image vertex.  Non-adjacency in the conflict graph is exactly
the negative-dependency relation the local lemma needs on injection
spaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial


def euler_enclosure(terms: int = 32) -> tuple[Fraction, Fraction]:
    """Rational lo < e < hi with gap below 2/terms!."""
    lo = sum(Fraction(1, factorial(i)) for i in range(terms + 1))
    hi = lo + Fraction(2, factorial(terms + 1))
    return lo, hi


def lll_condition(p, d) -> bool:
    """True iff e * p * (d + 1) < 1, decided exactly.

    p may be int, float or Fraction (floats convert exactly); d is any
    nonnegative count or rational bound on the conflict degree.
    """
    p = Fraction(p)
    d = Fraction(d)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if d < 0:
        raise ValueError("d must be >= 0")
    if p == 0:
        return True
    lhs = p * (d + 1)
    terms = 32
    while True:
        lo, hi = euler_enclosure(terms)
        if lhs * hi < 1:
            return True
        if lhs * lo >= 1:
            return False
        terms *= 2


@dataclass(frozen=True)
class InjectionEvent:
    """A canonical event: the injection agrees with the bijection sending
    domain[i] to image[i]."""

    domain: tuple[int, ...]
    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "image", tuple(self.image))
        if len(self.domain) != len(self.image):
            raise ValueError("domain and image must have equal size")
        if len(set(self.domain)) != len(self.domain) or len(set(self.image)) != len(self.image):
            raise ValueError("domain and image must be duplicate-free")

    def forward(self) -> dict[int, int]:
        return dict(zip(self.domain, self.image))

    def backward(self) -> dict[int, int]:
        return dict(zip(self.image, self.domain))


def conflicts(e1: InjectionEvent, e2: InjectionEvent) -> bool:
    """Two-clause conflict predicate, on domains and on images."""
    f1, f2 = e1.forward(), e2.forward()
    for v in set(e1.domain) & set(e2.domain):
        if f1[v] != f2[v]:
            return True
    g1, g2 = e1.backward(), e2.backward()
    for w in set(e1.image) & set(e2.image):
        if g1[w] != g2[w]:
            return True
    return False


def conflict_degrees(events: list[InjectionEvent]) -> list[int]:
    """Per-event conflict counts via inverted indexes on shared vertices;
    equals the quadratic pairwise count."""
    by_domain: dict[int, list[int]] = {}
    by_image: dict[int, list[int]] = {}
    for i, ev in enumerate(events):
        for v in ev.domain:
            by_domain.setdefault(v, []).append(i)
        for w in ev.image:
            by_image.setdefault(w, []).append(i)
    out = [0] * len(events)
    for i, ev in enumerate(events):
        cand: set[int] = set()
        for v in ev.domain:
            cand.update(by_domain[v])
        for w in ev.image:
            cand.update(by_image[w])
        cand.discard(i)
        out[i] = sum(1 for j in cand if conflicts(ev, events[j]))
    return out


@dataclass(frozen=True)
class CompletionCertificate:
    """Closed-form local-lemma certificate for the injection completion:
    p0 bounds each bad-event probability, degree_bound the conflict graph
    degree, and ok states e * p0 * (degree_bound + 1) < 1."""

    p0: Fraction
    degree_bound: Fraction
    ok: bool

    def to_json_obj(self) -> dict:
        return {"p0": str(self.p0), "degree_bound": str(self.degree_bound), "ok": self.ok}


def completion_certificate(k: int, s: int, rho, x_size: int, y_size: int) -> CompletionCertificate:
    """Evaluate p0 = (1 + 8 s^3 rho) / (|X| C(|Y|, k-1) (k-1)!) and the
    conflict-degree bound (s + 4) k! rho |X| C(|Y|, k-1)."""
    rho = Fraction(rho)
    if x_size < 1 or y_size < k - 1:
        raise ValueError("degenerate completion instance")
    denom = x_size * comb(y_size, k - 1) * factorial(k - 1)
    p0 = (1 + 8 * s**3 * rho) / denom
    degree = (s + 4) * factorial(k) * rho * x_size * comb(y_size, k - 1)
    ok = p0 <= 1 and lll_condition(p0, degree)
    return CompletionCertificate(p0, degree, ok)

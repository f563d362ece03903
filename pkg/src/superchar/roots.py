"""Characteristic roots of the vector and adjoint identities, and the branching index sets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Signature, Weight
from .errors import NotBranchCompatible, RootsCoincide, SignatureMismatch


@dataclass(frozen=True)
class RootSet:
    signature: Signature
    weight: Weight
    vector_roots: tuple[Fraction, ...]
    adjoint_roots: tuple[Fraction, ...]

    def alpha(self, r: int) -> Fraction:
        return self.vector_roots[r - 1]

    def alphabar(self, r: int) -> Fraction:
        return self.adjoint_roots[r - 1]


def characteristic_roots(w: Weight) -> RootSet:
    """Roots alpha_r, alphabar_r for the weight's own signature.

    Applied to a gl(m|n+1) weight these are the beta_r, betabar_r.
    """
    sig = w.signature
    m, n = sig.m, sig.n
    vec = [w.even[i - 1] + m - n - i for i in range(1, m + 1)]
    vec += [mu - w.odd[mu - 1] - n for mu in range(1, n + 1)]
    adj = [i - 1 - w.even[i - 1] for i in range(1, m + 1)]
    adj += [w.odd[mu - 1] + m + 1 - mu for mu in range(1, n + 1)]
    return RootSet(sig, w, tuple(Fraction(x) for x in vec), tuple(Fraction(x) for x in adj))


def coinciding_pair(roots) -> tuple[int, int] | None:
    for a in range(len(roots)):
        for b in range(a + 1, len(roots)):
            if roots[a] == roots[b]:
                return a + 1, b + 1
    return None


def roots_distinct(rs: RootSet) -> bool:
    """True iff the vector roots are pairwise distinct and so are the adjoint roots.

    Both families are checked: the shift alpha_s + alphabar_s depends on the
    parity of s, so distinct vector roots do not force distinct adjoint roots.
    """
    return coinciding_pair(rs.vector_roots) is None and coinciding_pair(rs.adjoint_roots) is None


def require_distinct(rs: RootSet):
    sig = rs.signature
    for kind, roots in (("vector", rs.vector_roots), ("adjoint", rs.adjoint_roots)):
        pair = coinciding_pair(roots)
        if pair is not None:
            a, b = pair
            raise RootsCoincide(
                f"{kind} roots of {rs.weight} over {sig} coincide at "
                f"{sig.label(a)}, {sig.label(b)} (value {roots[a - 1]})")


@dataclass(frozen=True)
class IndexSets:
    """Index sets of a branching pair; odd indices are ungraded (m+1..m+n), the extra index is m+n+1."""

    m: int
    n: int
    I0: frozenset[int]
    I0bar: frozenset[int]

    @property
    def top(self) -> int:
        return self.m + self.n + 1

    @property
    def I1(self) -> frozenset[int]:
        return frozenset(range(self.m + 1, self.m + self.n + 1))

    @property
    def I(self) -> frozenset[int]:
        return self.I0 | self.I1

    @property
    def Itilde(self) -> frozenset[int]:
        return self.I | {self.top}

    @property
    def Iprime(self) -> frozenset[int]:
        return self.I0bar | self.I1

    @property
    def ItildePrime(self) -> frozenset[int]:
        return self.Iprime | {self.top}


def index_sets(sub: RootSet, top: RootSet) -> IndexSets:
    """Sort even indices by whether beta_i equals alpha_i or alpha_i - 1."""
    if top.signature != sub.signature.extended():
        raise SignatureMismatch(f"{top.signature} does not extend {sub.signature}")
    m = sub.signature.m
    i0, i0bar = set(), set()
    for i in range(1, m + 1):
        a, b = sub.alpha(i), top.alpha(i)
        if b == a:
            i0.add(i)
        elif b == a - 1:
            i0bar.add(i)
        else:
            raise NotBranchCompatible(
                f"beta_{i} = {b} is neither alpha_{i} = {a} nor alpha_{i} - 1")
    return IndexSets(m, sub.signature.n, frozenset(i0), frozenset(i0bar))

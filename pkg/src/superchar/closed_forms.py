"""Closed-form eigenvalues of the branching invariants c, cbar, gamma, gammabar, delta, deltabar.

Indices are ungraded throughout: even 1..m, odd m+1..m+n, and the extra odd
index m+n+1 of gl(m|n+1).  alpha, alphabar come from the gl(m|n) weight and
beta, betabar from the gl(m|n+1) weight.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .core import Signature, Weight, format_weight
from .errors import ConsistencyFailure, NotBranchCompatible, RootsCoincide, SignatureMismatch
from .exact_linear import format_scalar, parse_scalar
from .roots import IndexSets, RootSet, characteristic_roots, index_sets, require_distinct


class _Vanishes:
    """Structural zero forced by index-set membership (distinct from a computed 0)."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "VANISHES"

    def __reduce__(self):
        return (_Vanishes, ())


VANISHES = _Vanishes()

KINDS = ("c", "cbar", "gamma", "gammabar", "delta", "deltabar", "strP", "strPbar")


def branch_candidates(top: Weight) -> list[Weight]:
    """gl(m|n) weights allowed by the betweenness conditions, in descending lexicographic order."""
    top.require_dominant()
    sig = top.signature
    if sig.n < 1:
        raise SignatureMismatch(f"{sig} has no odd index to remove")
    sub = Signature(sig.m, sig.n - 1)
    even_choices = [(x, x - 1) for x in top.even]
    odd_choices = []
    for mu in range(sig.n - 1):
        hi, lo = top.odd[mu], top.odd[mu + 1]
        steps = int(hi - lo)
        odd_choices.append([hi - k for k in range(steps + 1)])
    out = []
    for ev in itertools.product(*even_choices):
        for od in itertools.product(*odd_choices):
            w = Weight(ev, od)
            if w.is_dominant():
                out.append(w)
    assert all(w.signature == sub for w in out)
    return sorted(out, key=lambda w: tuple(-x for x in w.labels))


def satisfies_betweenness(top: Weight, sub: Weight) -> bool:
    if top.signature != sub.signature.extended():
        return False
    for a, b in zip(top.even, sub.even):
        if a - b not in (0, 1):
            return False
    for mu, b in enumerate(sub.odd):
        hi, lo = top.odd[mu] - b, b - top.odd[mu + 1]
        if hi < 0 or lo < 0 or hi.denominator != 1 or lo.denominator != 1:
            return False
    return True


@dataclass(frozen=True)
class BranchPair:
    top: Weight
    sub: Weight
    roots_top: RootSet
    roots_sub: RootSet
    sets: IndexSets

    @property
    def m(self) -> int:
        return self.sub.signature.m

    @property
    def n(self) -> int:
        return self.sub.signature.n

    @property
    def plus(self) -> int:
        return self.m + self.n + 1

    def sign(self, p: int) -> int:
        """(-1)^(p) for any index up to m+n+1."""
        return self.top.signature.sign(p)

    def alpha(self, r):
        return self.roots_sub.alpha(r)

    def alphabar(self, r):
        return self.roots_sub.alphabar(r)

    def beta(self, r):
        return self.roots_top.alpha(r)

    def betabar(self, r):
        return self.roots_top.alphabar(r)


def make_pair(top: Weight, sub: Weight) -> BranchPair:
    if top.signature != sub.signature.extended():
        raise SignatureMismatch(f"{top.signature} does not extend {sub.signature}")
    if not satisfies_betweenness(top, sub):
        raise NotBranchCompatible(f"({format_weight(top)}) -> ({format_weight(sub)}) violates betweenness")
    rt, rs = characteristic_roots(top), characteristic_roots(sub)
    return BranchPair(top, sub, rt, rs, index_sets(rs, rt))


def _prod(xs) -> Fraction:
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def _inv_prod(xs, what: str) -> Fraction:
    d = _prod(xs)
    if d == 0:
        raise RootsCoincide(f"zero denominator in {what}")
    return 1 / d


def _check_index(pair: BranchPair, r: int, hi: int):
    if not 1 <= r <= hi:
        raise IndexError(f"index {r} outside 1..{hi}")


def eval_c(pair: BranchPair, r: int, kind: str = "c"):
    """c_s or cbar_s from the set-indexed product formulas."""
    _check_index(pair, r, pair.plus)
    S = pair.sets
    if kind == "c":
        tilde, base, x, y = S.Itilde, S.I, pair.beta, pair.alpha
    elif kind == "cbar":
        tilde, base, x, y = S.ItildePrime, S.Iprime, pair.betabar, pair.alphabar
    else:
        raise ValueError(kind)
    if r not in tilde:
        return VANISHES
    den = _inv_prod((x(r) - x(k) for k in sorted(tilde) if k != r), kind)
    return den * _prod(x(r) - y(q) - pair.sign(q) for q in sorted(base))


def eval_gamma(pair: BranchPair, r: int, kind: str = "gamma"):
    _check_index(pair, r, pair.plus - 1)
    S = pair.sets
    sg = pair.sign
    if kind == "gamma":
        if r not in S.I:
            return VANISHES
        a, b = pair.alpha, pair.beta
        den = _inv_prod((a(r) - a(q) + sg(r) - sg(q) for q in sorted(S.I) if q != r), kind)
        num = _prod(b(p) - a(r) - sg(r) for p in sorted(S.Itilde))
        return (-1) ** len(S.Itilde) * den * num
    if kind == "gammabar":
        if r not in S.Iprime:
            return VANISHES
        a, b = pair.alphabar, pair.betabar
        den = _inv_prod((a(r) - a(q) + sg(r) - sg(q) for q in sorted(S.Iprime) if q != r), kind)
        num = _prod(b(s) - a(r) - sg(r) for s in sorted(S.ItildePrime))
        return (-1) ** len(S.Iprime) * den * num
    raise ValueError(kind)


def eval_delta(pair: BranchPair, r: int, kind: str = "delta", printed: bool = False):
    """delta_r, deltabar_r normalised by the operator relations

        (-1)^(q) psi[r]^p phi[r]_q = delta_r P[r]^p_q,   phi[r]_p psi[r]^q = deltabar_r Pbar[r]_p^q.

    The products as usually printed carry an overall sign that disagrees with
    these relations: -1 for delta, -(-1)^(r) for deltabar.  ``printed=True``
    returns the uncorrected products.
    """
    _check_index(pair, r, pair.plus - 1)
    S = pair.sets
    sg = pair.sign
    a, b = pair.alpha, pair.beta
    if kind == "delta":
        if r not in S.Iprime:
            return VANISHES
        den = _inv_prod((a(r) - a(s) - sg(s) for s in sorted(S.I) if s != r), kind)
        num = _prod(b(q) - a(r) for q in sorted(S.Itilde))
        fix = 1 if printed else -1
        return fix * (-1) ** len(S.I) * den * num
    if kind == "deltabar":
        if r not in S.I:
            return VANISHES
        den = _inv_prod((a(r) - a(q) + sg(r) for q in sorted(S.Iprime) if q != r), kind)
        num = _prod(b(s) - a(r) + sg(s) - sg(r) + 1 for s in sorted(S.ItildePrime))
        fix = 1 if printed else -sg(r)
        return fix * (-1) ** len(S.Iprime) * den * num
    raise ValueError(kind)


def printed_supertrace(w: Weight, r: int, kind: str = "P") -> Fraction:
    """Supertrace products without the graded sign of r (equal to the oracle only for even r)."""
    rs = characteristic_roots(w)
    sig = w.signature
    a = rs.alpha
    sg = sig.sign
    terms = [q for q in sig.indices() if q != r]
    if kind == "P":
        num = _prod(a(r) - a(q) - sg(q) for q in terms)
        den = _inv_prod((a(r) - a(q) for q in terms), "str P")
    elif kind == "Pbar":
        num = _prod(a(r) - a(q) + sg(r) for q in terms)
        den = _inv_prod((a(r) - a(q) + sg(r) - sg(q) for q in terms), "str Pbar")
    else:
        raise ValueError(kind)
    return num * den


def eval_supertrace(w: Weight, r: int, kind: str = "P") -> Fraction:
    """str P[r] or str Pbar[r] with str X = sum_p (-1)^(p) X^p_p.

    The product formula carries an overall (-1)^(r); without it the
    gl(0|2) trivial module would give str P[2] = +2 instead of -2.
    """
    require_distinct(characteristic_roots(w))
    return w.signature.sign(r) * printed_supertrace(w, r, kind)


def casimir_from_roots(w: Weight, k: int, kind: str = "I") -> Fraction:
    """I_k = sum alpha_r^k str P[r], or Ibar_k = sum alphabar_r^k str Pbar[r]."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    rs = characteristic_roots(w)
    sig = w.signature
    if kind == "I":
        return sum((rs.alpha(r) ** k * eval_supertrace(w, r, "P") for r in sig.indices()), Fraction(0))
    if kind == "Ibar":
        return sum((rs.alphabar(r) ** k * eval_supertrace(w, r, "Pbar") for r in sig.indices()), Fraction(0))
    raise ValueError(kind)


# index-free forms, labels indexed by graded position (i even, nu odd with nu = n+1 the extra index)


# (kind, odd index?) pairs whose index-free product as usually printed has the opposite sign
_INDEX_FREE_FLIPS = {("gamma", False), ("gammabar", False), ("delta", True), ("deltabar", False)}


def index_free(pair: BranchPair, r: int, kind: str, printed: bool = False) -> Fraction:
    """The same invariants written without index sets; zero where the set-indexed form vanishes."""
    val = _index_free_printed(pair, r, kind)
    if not printed and (kind, r > pair.m) in _INDEX_FREE_FLIPS:
        val = -val
    return val


def _index_free_printed(pair: BranchPair, r: int, kind: str) -> Fraction:
    m, n = pair.m, pair.n
    a, b = pair.alpha, pair.beta
    evens = range(1, m + 1)
    odd_sub = [m + nu for nu in range(1, n + 1)]
    odd_top = odd_sub + [m + n + 1]
    P = _prod

    def q(num, den, what):
        return num * _inv_prod([den], what)

    if kind == "c":
        if r <= m:
            i = r
            return ((a(i) - b(i) - 1) * P(q(b(i) - b(k) - 1, b(i) - a(k), kind) for k in evens if k != i)
                    * _inv_prod([b(i) - b(v) for v in odd_top], kind) * P(b(i) - a(v) + 1 for v in odd_sub))
        mu = r
        return (P(q(b(mu) - b(k) - 1, b(mu) - a(k), kind) for k in evens)
                * _inv_prod([b(mu) - b(v) for v in odd_top if v != mu], kind)
                * P(b(mu) - a(v) + 1 for v in odd_sub))
    if kind == "cbar":
        if r <= m:
            i = r
            return ((b(i) - a(i)) * P(q(b(k) - b(i) - 1, a(k) - b(i) - 1, kind) for k in evens if k != i)
                    * _inv_prod([b(v) - b(i) - 2 for v in odd_top], kind) * P(a(v) - b(i) - 2 for v in odd_sub))
        mu = r
        return (P(q(b(k) - b(mu) + 1, a(k) - b(mu) + 1, kind) for k in evens)
                * _inv_prod([b(v) - b(mu) for v in odd_top if v != mu], kind)
                * P(a(v) - b(mu) for v in odd_sub))
    if kind == "gamma":
        if r <= m:
            i = r
            return ((b(i) - a(i) + 1) * P(q(a(k) - a(i) - 1, b(k) - a(i), kind) for k in evens if k != i)
                    * P(b(v) - a(i) - 1 for v in odd_top) * _inv_prod([a(v) - a(i) - 2 for v in odd_sub], kind))
        mu = r
        return (P(q(a(k) - a(mu) + 1, b(k) - a(mu) + 2, kind) for k in evens)
                * P(b(v) - a(mu) + 1 for v in odd_top)
                * _inv_prod([a(v) - a(mu) for v in odd_sub if v != mu], kind))
    if kind == "gammabar":
        if r <= m:
            i = r
            return ((a(i) - b(i)) * P(q(a(k) - a(i) + 1, b(k) - a(i) + 1, kind) for k in evens if k != i)
                    * P(b(v) - a(i) for v in odd_top) * _inv_prod([a(v) - a(i) for v in odd_sub], kind))
        mu = r
        return (-P(q(a(k) - a(mu) + 1, b(k) - a(mu) + 1, kind) for k in evens)
                * P(b(v) - a(mu) for v in odd_top)
                * _inv_prod([a(v) - a(mu) for v in odd_sub if v != mu], kind))
    if kind == "delta":
        if r <= m:
            i = r
            return ((b(i) - a(i)) * P(q(a(k) - a(i), b(k) - a(i) + 1, kind) for k in evens if k != i)
                    * _inv_prod([a(v) - a(i) - 1 for v in odd_sub], kind) * P(b(v) - a(i) for v in odd_top))
        mu = r
        return (-P(q(a(k) - a(mu), b(k) - a(mu) + 1, kind) for k in evens)
                * _inv_prod([a(v) - a(mu) - 1 for v in odd_sub if v != mu], kind)
                * P(b(v) - a(mu) for v in odd_top))
    if kind == "deltabar":
        if r <= m:
            i = r
            # the middle product is read with alpha_i where a free odd subscript appears
            return ((b(i) - a(i) + 1) * P(q(a(k) - a(i), b(k) - a(i), kind) for k in evens if k != i)
                    * P(b(v) - a(i) - 1 for v in odd_top) * _inv_prod([a(v) - a(i) - 1 for v in odd_sub], kind))
        mu = r
        return (-P(q(a(k) - a(mu) + 2, b(k) - a(mu) + 2, kind) for k in evens)
                * P(b(v) - a(mu) + 1 for v in odd_top)
                * _inv_prod([a(v) - a(mu) + 1 for v in odd_sub if v != mu], kind))
    raise ValueError(kind)


# tables


@dataclass(frozen=True)
class InvariantTable:
    top: Weight
    sub: Weight
    values: dict  # kind -> tuple of length m+n+1 of Fraction | VANISHES | None

    def get(self, kind: str, r: int):
        return self.values[kind][r - 1]

    def to_json(self) -> dict:
        def enc(v):
            if v is None:
                return None
            if v is VANISHES:
                return "vanishes"
            return format_scalar(v)

        out = {k: [enc(v) for v in self.values[k]] for k in KINDS}
        out["top"] = format_weight(self.top)
        out["sub"] = format_weight(self.sub)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "InvariantTable":
        from .core import parse_weight

        def dec(v):
            if v is None:
                return None
            if v == "vanishes":
                return VANISHES
            return parse_scalar(v)

        return cls(parse_weight(data["top"]), parse_weight(data["sub"]),
                   {k: tuple(dec(v) for v in data[k]) for k in KINDS})

    def rows(self) -> list[list[str]]:
        """CSV rows, one per index r (header excluded)."""
        js = self.to_json()
        out = []
        for r in range(1, len(self.values["c"]) + 1):
            cells = [str(r)]
            for k in KINDS:
                v = js[k][r - 1]
                cells.append("" if v is None else v)
            out.append(cells)
        return out


def _num(v):
    return Fraction(0) if v is VANISHES else v


def _defined(fn, *args):
    """Value of a closed form, or None where it has a (cancellable) pole."""
    try:
        return fn(*args)
    except RootsCoincide:
        return None


def c_relation_terms(pair: BranchPair, s: int) -> list[Fraction]:
    """Terms c_r / (beta_r - alpha_s - (-1)^(s)), r in Itilde, with the common factor cancelled.

    c_r carries (beta_r - alpha_s - (-1)^(s)) in its numerator for every s in I,
    so the quotient is pole-free even where that factor vanishes.
    """
    S = pair.sets
    out = []
    for r in sorted(S.Itilde):
        den = _inv_prod((pair.beta(r) - pair.beta(k) for k in sorted(S.Itilde) if k != r), "c")
        out.append(den * _prod(pair.beta(r) - pair.alpha(q) - pair.sign(q) for q in sorted(S.I) if q != s))
    return out


def invariant_table(pair: BranchPair) -> InvariantTable:
    """All invariants of one branching pair, with the internal linear relations asserted.

    Entries whose product formula has a zero denominator at this pair are
    recorded as undefined (None); structural zeros are VANISHES.
    """
    require_distinct(pair.roots_top)
    require_distinct(pair.roots_sub)
    plus = pair.plus
    S = pair.sets
    vals = {k: [] for k in KINDS}
    for r in range(1, plus + 1):
        vals["c"].append(eval_c(pair, r, "c"))
        vals["cbar"].append(eval_c(pair, r, "cbar"))
        if r == plus:
            for k in KINDS[2:]:
                vals[k].append(None)
            continue
        vals["gamma"].append(_defined(eval_gamma, pair, r, "gamma"))
        vals["gammabar"].append(_defined(eval_gamma, pair, r, "gammabar"))
        vals["delta"].append(_defined(eval_delta, pair, r, "delta"))
        vals["deltabar"].append(_defined(eval_delta, pair, r, "deltabar"))
        vals["strP"].append(eval_supertrace(pair.sub, r, "P"))
        vals["strPbar"].append(eval_supertrace(pair.sub, r, "Pbar"))

    c = vals["c"]
    if sum(_num(c[r - 1]) for r in S.Itilde) != 1:
        raise ConsistencyFailure("c_r over Itilde do not sum to 1")
    for s in S.I:
        if sum(c_relation_terms(pair, s)) != 0:
            raise ConsistencyFailure(f"linear relation for c fails at s={s}")
    for r in range(1, plus):
        for g, d, st, name in (("gammabar", "delta", "strP", "gammabar != delta * str P"),
                               ("gamma", "deltabar", "strPbar", "gamma != deltabar * str Pbar")):
            gv, dv, sv = vals[g][r - 1], vals[d][r - 1], vals[st][r - 1]
            if gv is None or dv is None:
                continue
            if _num(gv) != _num(dv) * sv:
                raise ConsistencyFailure(f"{name} at r={r}")
    return InvariantTable(pair.top, pair.sub, {k: tuple(v) for k, v in vals.items()})

"""Root data of gl(m|n): signatures, weights, the graded form, rho and typicality."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NonDominant, NonIntegral, ParseError, SignatureMismatch
from .exact_linear import format_scalar, parse_scalar


@dataclass(frozen=True)
class Signature:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.m + self.n < 1:
            raise ValueError(f"invalid signature gl({self.m}|{self.n})")

    @property
    def size(self) -> int:
        return self.m + self.n

    def parity(self, p: int) -> int:
        """Grading (p) of the ungraded index ``p`` (1-based)."""
        if not 1 <= p <= self.size:
            raise IndexError(f"index {p} outside 1..{self.size}")
        return 0 if p <= self.m else 1

    def sign(self, p: int) -> int:
        return -1 if self.parity(p) else 1

    def indices(self) -> range:
        return range(1, self.size + 1)

    def extended(self) -> "Signature":
        """gl(m|n+1), the algebra whose last odd index is m+n+1."""
        return Signature(self.m, self.n + 1)

    def label(self, p: int) -> str:
        """Readable name of index ``p``: ``i1`` for even, ``mu1`` for odd."""
        return f"i{p}" if p <= self.m else f"mu{p - self.m}"

    def __str__(self) -> str:
        return f"gl({self.m}|{self.n})"


@dataclass(frozen=True)
class GeneratorIndex:
    sig: Signature
    p: int

    @property
    def parity(self) -> int:
        return self.sig.parity(self.p)


def _frac_tuple(xs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True)
class Weight:
    """Weight with even labels ``Lambda_i`` and odd labels ``Lambda_mu``."""

    even: tuple[Fraction, ...]
    odd: tuple[Fraction, ...]

    def __init__(self, even: Sequence = (), odd: Sequence = ()):
        object.__setattr__(self, "even", _frac_tuple(even))
        object.__setattr__(self, "odd", _frac_tuple(odd))

    @property
    def signature(self) -> Signature:
        return Signature(len(self.even), len(self.odd))

    @property
    def labels(self) -> tuple[Fraction, ...]:
        """All labels in ungraded order (even first)."""
        return self.even + self.odd

    def __getitem__(self, p: int) -> Fraction:
        return self.labels[p - 1]

    @classmethod
    def from_labels(cls, sig: Signature, labels: Sequence) -> "Weight":
        labels = list(labels)
        if len(labels) != sig.size:
            raise SignatureMismatch(f"{len(labels)} labels for {sig}")
        return cls(labels[:sig.m], labels[sig.m:])

    @classmethod
    def zero(cls, sig: Signature) -> "Weight":
        return cls([0] * sig.m, [0] * sig.n)

    @classmethod
    def unit(cls, sig: Signature, p: int) -> "Weight":
        """epsilon_i for even p, delta_mu for odd p."""
        labels = [0] * sig.size
        labels[p - 1] = 1
        return cls.from_labels(sig, labels)

    def _check(self, other: "Weight"):
        if self.signature != other.signature:
            raise SignatureMismatch(f"{self.signature} vs {other.signature}")

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight([a + b for a, b in zip(self.even, other.even)],
                      [a + b for a, b in zip(self.odd, other.odd)])

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight([a - b for a, b in zip(self.even, other.even)],
                      [a - b for a, b in zip(self.odd, other.odd)])

    def __neg__(self) -> "Weight":
        return Weight([-a for a in self.even], [-a for a in self.odd])

    def scale(self, c) -> "Weight":
        c = Fraction(c)
        return Weight([c * a for a in self.even], [c * a for a in self.odd])

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.labels)

    def is_dominant(self) -> bool:
        """Lexicality: consecutive even and odd differences are nonnegative integers."""
        for part in (self.even, self.odd):
            for a, b in zip(part, part[1:]):
                d = a - b
                if d < 0 or d.denominator != 1:
                    return False
        return True

    def require_dominant(self):
        if not self.is_dominant():
            raise NonDominant(f"weight {self} is not dominant")

    def require_integral(self):
        if not self.is_integral():
            raise NonIntegral(f"weight {self} is not integral")

    def restrict(self) -> "Weight":
        """Drop the last odd label (gl(m|n+1) weight to gl(m|n) weight)."""
        return Weight(self.even, self.odd[:-1])

    def __str__(self) -> str:
        return format_weight(self)

    def __repr__(self) -> str:
        return f"Weight({format_weight(self)!r})"


def parse_weight(text: str, sig: Signature | None = None) -> Weight:
    """Parse ``"a_1,...,a_m|b_1,...,b_n"``; entries are integers or ``p/q``."""
    if text.count("|") != 1:
        raise ParseError(f"weight {text!r} needs exactly one '|'")
    left, right = text.split("|")

    def side(s):
        s = s.strip()
        if not s:
            return []
        try:
            return [parse_scalar(x) for x in s.split(",")]
        except ValueError as exc:
            raise ParseError(f"weight {text!r}: {exc}") from None

    w = Weight(side(left), side(right))
    if sig is not None and w.signature != sig:
        raise SignatureMismatch(f"weight {text!r} is not a {sig} weight")
    return w


def format_weight(w: Weight) -> str:
    return ",".join(format_scalar(x) for x in w.even) + "|" + ",".join(format_scalar(x) for x in w.odd)


def rho(sig: Signature) -> Weight:
    """Graded half-sum of positive roots."""
    m, n = sig.m, sig.n
    return Weight([Fraction(m - n - 2 * j + 1, 2) for j in range(1, m + 1)],
                  [Fraction(m + n - 2 * nu + 1, 2) for nu in range(1, n + 1)])


def weight_form(a: Weight, b: Weight) -> Fraction:
    """(a, b) = sum a_i b_i - sum a_mu b_mu."""
    a._check(b)
    return (sum((x * y for x, y in zip(a.even, b.even)), Fraction(0))
            - sum((x * y for x, y in zip(a.odd, b.odd)), Fraction(0)))


def casimir2_eigenvalue(w: Weight) -> Fraction:
    return weight_form(w, w + rho(w.signature).scale(2))


@dataclass(frozen=True)
class TypicalityReport:
    weight: Weight
    witnesses: tuple[tuple[int, int], ...]

    @property
    def typical(self) -> bool:
        return not self.witnesses


def typicality(w: Weight) -> TypicalityReport:
    """Pairs (i, mu) with (Lambda + rho, eps_i - delta_mu) = 0."""
    sig = w.signature
    shifted = w + rho(sig)
    found = []
    for i in range(1, sig.m + 1):
        for mu in range(1, sig.n + 1):
            root = Weight.unit(sig, i) - Weight.unit(sig, sig.m + mu)
            if weight_form(shifted, root) == 0:
                found.append((i, mu))
    return TypicalityReport(w, tuple(found))

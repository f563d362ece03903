"""Corner invariants tau_k, sigma_k of gl(m|n) inside gl(m|n+1) and their Casimir expansions.

All identities are checked as exact operator equalities on a Kac module of
gl(m|n+1); scalars are read off afterwards on each gl(m|n) component.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .core import format_weight
from .errors import NotScalar
from .exact_linear import Matrix, scalar_of_restricted
from .forge import ComponentDecomposition, GModule
from .operators import OpMatrix, char_matrix


def compositions(total: int):
    """Ordered tuples of positive integers summing to ``total``."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in compositions(total - first):
            yield (first,) + rest


class TowerOperators:
    """tau_k, sigma_k, I_k, Ihat_k as operators on a gl(m|n+1) module."""

    def __init__(self, mod: GModule):
        self.mod = mod
        self.top = mod.signature
        self.plus = self.top.size
        self.m, self.n = self.top.m, self.top.n - 1
        self.dim = mod.dim
        self._bpow = [OpMatrix.identity(self.plus, self.dim)]
        self._apow = None

    @cached_property
    def B(self) -> OpMatrix:
        return char_matrix(self.mod, "vector")

    @cached_property
    def A(self) -> OpMatrix:
        """The (m+n)-square submatrix of B, on the same module."""
        d, side = self.dim, self.plus - 1
        return OpMatrix(side, d, self.B.big.block(0, side * d, 0, side * d))

    def Bpow(self, k: int) -> OpMatrix:
        while len(self._bpow) <= k:
            self._bpow.append(self.B @ self._bpow[-1])
        return self._bpow[k]

    def Apow(self, k: int) -> OpMatrix:
        if self._apow is None:
            self._apow = [OpMatrix.identity(self.plus - 1, self.dim)]
        while len(self._apow) <= k:
            self._apow.append(self.A @ self._apow[-1])
        return self._apow[k]

    def tau(self, k: int) -> Matrix:
        return self.Bpow(k).block(self.plus, self.plus)

    def sigma(self, k: int) -> Matrix:
        side = self.plus - 1
        ak = self.Apow(k)
        out = Matrix.zeros(self.dim, self.dim)
        for p in range(1, side + 1):
            left = self.B.block(self.plus, p)
            for q in range(1, side + 1):
                out = out + left @ ak.block(p, q) @ self.B.block(q, self.plus)
        return out

    def I(self, k: int) -> Matrix:
        return self.Apow(k).supertrace(self.top)

    def Ihat(self, k: int) -> Matrix:
        return self.Bpow(k).supertrace(self.top)

    def scalar(self, c) -> Matrix:
        return Matrix.scalar(self.dim, c)

    # printed expansions

    def sigma_from_tau(self, l: int) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for comp in compositions(l + 2):
            term = self.scalar(1)
            for a in comp:
                term = term @ self.tau(a)
            out = out + term * (-1) ** (len(comp) - 1)
        return out

    def tau_rhs(self, k: int, printed: bool = False) -> Matrix:
        """Right side of k tau_k in terms of I_j, Ihat_j and lower tau_j, k in 1..4.

        printed=True gives the historical form, which is wrong for k = 3, 4:
        3 tau_3 misses -2 tau_2, and 4 tau_4 has six lower-order terms with the
        wrong sign (see the corrected branch below).
        """
        t = self.tau
        I, H = self.I, self.Ihat
        x = self.m - self.n
        c = x - 1
        D = [None] + [I(j) - H(j) for j in range(1, k + 1)]
        lead = D[k]
        for j in range(1, k):
            lead = lead + t(j) @ D[k - j]
        t1 = t(1)
        if k == 1:
            return D[1]
        if k == 2:
            return D[2] + D[1] @ D[1] - I(1) + D[1] * x
        if k == 3:
            s = -1 if not printed else 1
            return (lead - (t(2) + H(2)) * 2 - (t1 + H(1)) + t(2) * (2 * x) + t1 * x
                    + t(2) * s + t1 @ t1)
        if k == 4:
            common = (lead - (H(3) - t(3) * c) * 3 - H(2) @ t1 + H(1) @ t(2) + t1 @ t(2) * 4
                      - t1 @ t1 @ t1 + (t(2) * c - H(2)) * 3 - t(2))
            s = 1 if printed else -1
            tail = t(3) * 3 - t1 @ t1 + t1 @ t1 * c - t1 @ H(1) - t1 * c + H(1)
            return common + tail * s
        raise ValueError("expansions are given for k = 1..4")

    def tau_residual(self, k: int, printed: bool = False) -> Matrix:
        return self.tau(k) * k - self.tau_rhs(k, printed)

    def upper_lower_residual(self, l: int, k: int) -> Matrix:
        """sum_p (-1)^(p) [(B^l)^p_+, (B^k)^+_p] minus its expansion in Ihat and tau."""
        top = self.top
        bl, bk = self.Bpow(l), self.Bpow(k)
        lhs = Matrix.zeros(self.dim, self.dim)
        for p in top.indices():
            x = bl.block(p, self.plus)
            y = bk.block(self.plus, p)
            odd = (top.parity(p) + 1) % 2
            comm = x @ y - (y @ x) * (-1 if odd else 1)
            lhs = lhs + comm * top.sign(p)
        rhs = Matrix.zeros(self.dim, self.dim)
        for i in range(l):
            rhs = rhs + self.Ihat(i) @ self.tau(l + k - 1 - i) - self.Ihat(l + k - 1 - i) @ self.tau(i)
        return lhs - rhs


@dataclass
class TowerReport:
    top: str
    K: int
    components: list = field(default_factory=list)   # per component: weight, tau, sigma, I
    Ihat: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)         # identity name -> residual is nonzero
    printed: dict = field(default_factory=dict)       # uncorrected 3tau_3, 4tau_4 forms

    @property
    def ok(self) -> bool:
        return not any(self.flags.values())

    def to_json(self) -> dict:
        enc = lambda xs: [str(x) for x in xs]
        return {
            "top": self.top,
            "K": self.K,
            "Ihat": enc(self.Ihat),
            "components": [{"weight": c["weight"], "tau": enc(c["tau"]), "sigma": enc(c["sigma"]),
                            "I": enc(c["I"])} for c in self.components],
            "residual_nonzero": dict(sorted(self.flags.items())),
            "printed_residual_nonzero": dict(sorted(self.printed.items())),
        }


def _central(mat: Matrix) -> Fraction:
    c = mat.is_scalar_multiple_of_identity()
    if c is None:
        raise NotScalar("expected a central element to act as a scalar")
    return c


def tower_scalars(mod: GModule, dec: ComponentDecomposition, K: int = 4) -> TowerReport:
    """Scalars tau_0..tau_K, sigma_0..sigma_{K-2}, I_1..I_K per component and Ihat_1..Ihat_K."""
    if K < 2:
        raise ValueError("K must be at least 2")
    ops = TowerOperators(mod)
    rep = TowerReport(format_weight(mod.highest_weight) if mod.highest_weight else mod.label, K)
    rep.Ihat = [_central(ops.Ihat(k)) for k in range(1, K + 1)]
    for part in dec.parts:
        sp = part.space
        val = lambda op: scalar_of_restricted(op @ sp.basis, sp)
        rep.components.append({
            "weight": format_weight(part.highest_weight),
            "tau": [val(ops.tau(k)) for k in range(K + 1)],
            "sigma": [val(ops.sigma(k)) for k in range(K - 1)],
            "I": [val(ops.I(k)) for k in range(1, K + 1)],
        })
    rep.flags.update(check_commutativity(mod, K, ops))
    rep.flags.update(check_tower_identities(mod, dec, ops, K))
    rep.printed = check_printed_expansions(mod, ops, K)
    return rep


def check_commutativity(mod: GModule, K: int = 4, ops: TowerOperators | None = None) -> dict:
    ops = ops or TowerOperators(mod)
    flags = {}
    for l in range(1, K + 1):
        for k in range(l + 1, K + 1):
            a, b = ops.tau(l), ops.tau(k)
            flags[f"commute_tau{l}_tau{k}"] = not (a @ b - b @ a).is_zero()
    return flags


def check_tower_identities(mod: GModule, dec: ComponentDecomposition | None = None,
                           ops: TowerOperators | None = None, K: int = 4) -> dict:
    """Residual flags (True = nonzero); tau_k expansions use the corrected forms."""
    ops = ops or TowerOperators(mod)
    flags = {"tau0_identity": ops.tau(0) != ops.scalar(1)}
    for k in range(1, min(K, 4) + 1):
        flags[f"tau{k}_expansion"] = not ops.tau_residual(k).is_zero()
    for l in range(0, max(0, min(K - 2, 2)) + 1):
        flags[f"sigma{l}_expansion"] = ops.sigma(l) != ops.sigma_from_tau(l)
    for l in (1, 2):
        for k in (1, 2):
            flags[f"upper_lower_{l}_{k}"] = not ops.upper_lower_residual(l, k).is_zero()
    flags["Ihat0_scalar"] = ops.Ihat(0) != ops.scalar(ops.m - ops.n - 1)
    # the degree-2 trace form agrees with the quadratic Casimir sum (-1)^(q) E_pq E_qp
    flags["Ihat2_equals_casimir2"] = ops.Ihat(2) != mod.casimir2_matrix()
    if dec is not None:
        for part in dec.parts:
            sp = part.space
            for k in range(1, min(K, 4) + 1):
                try:
                    scalar_of_restricted(ops.tau(k) @ sp.basis, sp)
                    scalar_of_restricted(ops.I(k) @ sp.basis, sp)
                    bad = False
                except Exception:
                    bad = True
                flags[f"scalar_on_{format_weight(part.highest_weight)}_k{k}"] = bad
    return flags


def check_printed_expansions(mod: GModule, ops: TowerOperators | None = None, K: int = 4) -> dict:
    """Residual flags for the uncorrected 3tau_3 and 4tau_4 forms (expected nonzero)."""
    ops = ops or TowerOperators(mod)
    return {f"tau{k}_expansion_printed": not ops.tau_residual(k, printed=True).is_zero()
            for k in (3, 4) if k <= K}

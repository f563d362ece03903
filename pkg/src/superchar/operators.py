"""Operator-valued characteristic matrices, projectors, shift components and measured invariants.

An OpMatrix with ``side`` indices over a module of dimension ``dim`` is held
as one (side*dim)-square matrix whose (p, q) block is the operator in row p,
column q.  The recursive power rule is then the ordinary matrix product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import Signature, Weight
from .errors import NotInvariant, NotProportional, NotScalar, RootsCoincide, SignatureMismatch
from .exact_linear import Matrix, hstack, scalar_of_restricted, scalar_on_subspace, vstack
from .forge import ComponentDecomposition, GModule
from .roots import characteristic_roots, coinciding_pair

CHAR_KINDS = ("vector", "adjoint", "double_adjoint", "triple_adjoint")


@dataclass(frozen=True)
class OpMatrix:
    side: int
    dim: int
    big: Matrix

    @classmethod
    def from_blocks(cls, side: int, dim: int, block) -> "OpMatrix":
        rows = [[block(p, q) for q in range(1, side + 1)] for p in range(1, side + 1)]
        return cls(side, dim, vstack([hstack(r) for r in rows]))

    @classmethod
    def identity(cls, side: int, dim: int) -> "OpMatrix":
        return cls(side, dim, Matrix.identity(side * dim))

    def block(self, p: int, q: int) -> Matrix:
        d = self.dim
        return self.big.block((p - 1) * d, p * d, (q - 1) * d, q * d)

    def __matmul__(self, other: "OpMatrix") -> "OpMatrix":
        return OpMatrix(self.side, self.dim, self.big @ other.big)

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        return OpMatrix(self.side, self.dim, self.big + other.big)

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        return OpMatrix(self.side, self.dim, self.big - other.big)

    def scale(self, c) -> "OpMatrix":
        return OpMatrix(self.side, self.dim, self.big * c)

    def shift(self, c) -> "OpMatrix":
        """self - c * identity."""
        return OpMatrix(self.side, self.dim, self.big - Matrix.scalar(self.side * self.dim, c))

    def power(self, k: int) -> "OpMatrix":
        out = OpMatrix.identity(self.side, self.dim)
        for _ in range(k):
            out = self @ out
        return out

    def is_zero(self) -> bool:
        return self.big.is_zero()

    def twist(self, sig: Signature) -> "OpMatrix":
        """Entrywise (-1)^((p)+(q)) twist."""
        signs = [sig.sign(p) for p in sig.indices() for _ in range(self.dim)]
        s = Matrix.diag(signs)
        return OpMatrix(self.side, self.dim, s @ self.big @ s)

    def supertrace(self, sig: Signature) -> Matrix:
        """sum_p (-1)^(p) X^p_p as an operator on the module."""
        out = Matrix.zeros(self.dim, self.dim)
        for p in range(1, self.side + 1):
            out = out + self.block(p, p) * sig.sign(p)
        return out


def char_matrix(mod: GModule, kind: str = "vector") -> OpMatrix:
    """Vector matrix (-1)^(p) E_pq, adjoint -(-1)^((p)(q)) E_qp, and their sign twists."""
    sig = mod.signature
    if kind in ("vector", "double_adjoint"):
        op = OpMatrix.from_blocks(sig.size, mod.dim, lambda p, q: mod.E(p, q) * sig.sign(p))
    elif kind in ("adjoint", "triple_adjoint"):
        op = OpMatrix.from_blocks(
            sig.size, mod.dim,
            lambda p, q: mod.E(q, p) * (1 if sig.parity(p) * sig.parity(q) else -1))
    else:
        raise ValueError(f"unknown characteristic matrix {kind!r}")
    if kind in ("double_adjoint", "triple_adjoint"):
        op = op.twist(sig)
    return op


def char_roots_for(mod: GModule, kind: str):
    if mod.highest_weight is None:
        raise ValueError("module has no recorded highest weight")
    rs = characteristic_roots(mod.highest_weight)
    return rs.vector_roots if kind in ("vector", "double_adjoint") else rs.adjoint_roots


def verify_char_identity(mod: GModule, kind: str = "vector", roots=None) -> Matrix:
    """Residual of prod_r (X - x_r); zero on an irreducible module."""
    x = char_matrix(mod, kind)
    roots = char_roots_for(mod, kind) if roots is None else roots
    out = OpMatrix.identity(x.side, x.dim)
    for c in roots:
        out = x.shift(c) @ out
    return out.big


def lagrange(x: OpMatrix, nodes, r: int) -> OpMatrix:
    """prod_{k != r} (x - nodes_k) / (nodes_r - nodes_k), r 1-based."""
    out = OpMatrix.identity(x.side, x.dim)
    xr = nodes[r - 1]
    for k, xk in enumerate(nodes, start=1):
        if k == r:
            continue
        if xr == xk:
            raise RootsCoincide(f"interpolation nodes {r} and {k} coincide at {xr}")
        out = x.shift(xk) @ out
        out = out.scale(1 / Fraction(xr - xk))
    return out


def projector(mod: GModule, r: int, kind: str = "P") -> OpMatrix:
    """P[r] (vector) or Pbar[r] (adjoint) on an irreducible module.

    On a gl(m|n+1) Kac module these are Q[r] and Qbar[r].
    """
    ck = {"P": "vector", "Q": "vector", "Pbar": "adjoint", "Qbar": "adjoint"}[kind]
    roots = char_roots_for(mod, ck)
    pair = coinciding_pair(roots)
    if pair is not None:
        raise RootsCoincide(f"{ck} roots {pair} coincide")
    return lagrange(char_matrix(mod, ck), roots, r)


def corner_projector(mod: GModule, r: int, kind: str = "Q") -> Matrix:
    """Q[r]^+_+ or Qbar[r]_+^+ (last index), computed along one row only."""
    ck = "vector" if kind in ("Q", "P") else "adjoint"
    roots = char_roots_for(mod, ck)
    x = char_matrix(mod, ck)
    side, d = x.side, x.dim
    row = hstack([Matrix.zeros(d, (side - 1) * d), Matrix.identity(d)])
    xr = roots[r - 1]
    for k, xk in enumerate(roots, start=1):
        if k == r:
            continue
        if xr == xk:
            raise RootsCoincide(f"roots {r} and {k} coincide")
        row = (row @ x.big - row * xk) * (1 / Fraction(xr - xk))
    return row.block(0, d, (side - 1) * d, side * d)


@dataclass(frozen=True)
class ShiftFamily:
    kind: str
    r: int
    blocks: tuple  # per auxiliary index p: a parent_dim x component_dim map


class BranchingOracle:
    """Measured invariants of a gl(m|n+1) Kac module restricted to gl(m|n)."""

    def __init__(self, kac: GModule, dec: ComponentDecomposition):
        self.kac = kac
        self.dec = dec
        self.sub = dec.sub
        self.top = kac.signature
        self.plus = self.top.size
        self._cache = {}

    # cached pieces

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def component(self, k: int) -> GModule:
        return self._memo(("mod", k), lambda: self.dec.module(k))

    def comp_projector(self, k: int, r: int, kind: str) -> OpMatrix:
        return self._memo(("proj", k, r, kind), lambda: projector(self.component(k), r, kind))

    def psi(self, p: int) -> Matrix:
        return self.kac.E(p, self.plus) * self.top.sign(p)

    def phi(self, p: int) -> Matrix:
        return self.kac.E(self.plus, p) * self.top.sign(p)

    def full_char(self, kind: str) -> OpMatrix:
        """gl(m|n) characteristic matrix acting on the whole Kac module."""
        def build():
            sig = self.sub
            view = GModule(sig, self.kac.dim,
                           {(p, q): self.kac.E(p, q) for p in sig.indices() for q in sig.indices()},
                           self.kac.basis_parity, (), None)
            return char_matrix(view, kind)
        return self._memo(("fullchar", kind), build)

    # shift components

    def shift_component(self, k: int, r: int, kind: str = "psi", side: str = "right") -> ShiftFamily:
        return self._memo(("shift", k, r, kind, side), lambda: self._shift(k, r, kind, side))

    def _shift(self, k, r, kind, side):
        sig = self.sub
        basis = self.dec.parts[k].space.basis
        idx = list(sig.indices())
        comp = self.component(k)
        rs = characteristic_roots(comp.highest_weight)
        if side == "right":
            if kind == "psi":
                pb = self.comp_projector(k, r, "Pbar")
                blocks = [sum_maps([self.psi(q) @ basis @ pb.block(q, p) for q in idx]) for p in idx]
            elif kind == "phi":
                pr = self.comp_projector(k, r, "P")
                blocks = [sum_maps([self.phi(q) @ basis @ pr.block(q, p) * (sig.sign(p) * sig.sign(q))
                                    for q in idx]) for p in idx]
            else:
                raise ValueError(kind)
            return ShiftFamily(kind, r, tuple(blocks))
        if side != "left":
            raise ValueError(side)
        mn = sig.m - sig.n
        if kind == "psi":
            # psi f(Abar) = f(m - n - A) psi fixes the nodes acting on the left
            nodes = [mn - x for x in rs.adjoint_roots]
            x = self.full_char("vector")
            src = [self.psi(q) @ basis for q in idx]
        elif kind == "phi":
            nodes = [mn - x for x in rs.vector_roots]
            x = self.full_char("adjoint")
            src = [self.phi(q) @ basis for q in idx]
        else:
            raise ValueError(kind)
        stacked = vstack(src)
        img = lagrange(x, nodes, r).big @ stacked
        d = self.kac.dim
        blocks = [img.block((p - 1) * d, p * d, 0, basis.cols) for p in idx]
        return ShiftFamily(kind, r, tuple(blocks))

    def full_shift(self, r: int, kind: str, p: int) -> Matrix:
        """Shift component assembled over all components, as an operator on the Kac module."""
        return self._memo(("fullshift", r, kind, p), lambda: self.dec.assemble(
            [self.shift_component(k, r, kind).blocks[p - 1] for k in range(len(self.dec.parts))]))

    # invariants

    def measure(self, k: int, which: str, r: int | None = None) -> Fraction | None:
        """Scalar of invariant ``which`` on component ``k``.

        delta and deltabar are None when the projector block vanishes on the
        component, since then every factor satisfies the defining relation.
        """
        sig = self.sub
        space = self.dec.parts[k].space
        basis = space.basis
        idx = list(sig.indices())
        if which == "I2":
            return scalar_on_subspace(self.component(k).casimir2_matrix(), _whole(space.dim))
        if which in ("c", "cbar"):
            corner = self._memo(("corner", r, which),
                                lambda: corner_projector(self.kac, r, "Q" if which == "c" else "Qbar"))
            return scalar_of_restricted(corner @ basis, space)
        if which in ("strP", "strPbar"):
            op = self.comp_projector(k, r, "P" if which == "strP" else "Pbar")
            c = op.supertrace(sig).is_scalar_multiple_of_identity()
            if c is None:
                raise NotScalar(f"{which}[{r}] is not scalar")
            return c
        if which == "gamma":
            fam = self.shift_component(k, r, "psi")
            t = sum_maps([self.kac.E(self.plus, q) @ fam.blocks[q - 1] for q in idx])
            return scalar_of_restricted(t, space)
        if which == "gammabar":
            fam = self.shift_component(k, r, "phi")
            t = sum_maps([self.kac.E(p, self.plus) @ fam.blocks[p - 1] * sig.sign(p) for p in idx])
            return scalar_of_restricted(t, space)
        if which == "delta":
            # (-1)^(q) psi[r]^p phi[r]_q = delta_r P[r]^p_q on the component
            phi = self.shift_component(k, r, "phi")
            proj = self.comp_projector(k, r, "P")
            pairs = []
            for p in idx:
                psi_full = self.full_shift(r, "psi", p)
                for q in idx:
                    lhs = space.coordinates(psi_full @ phi.blocks[q - 1]) * sig.sign(q)
                    pairs.append((lhs, proj.block(p, q)))
            return _proportionality(pairs, "delta")
        if which == "deltabar":
            psi = self.shift_component(k, r, "psi")
            proj = self.comp_projector(k, r, "Pbar")
            pairs = []
            for p in idx:
                phi_full = self.full_shift(r, "phi", p)
                for q in idx:
                    lhs = space.coordinates(phi_full @ psi.blocks[q - 1])
                    pairs.append((lhs, proj.block(p, q)))
            return _proportionality(pairs, "deltabar")
        raise ValueError(f"unknown invariant {which!r}")


def sum_maps(mats: list[Matrix]) -> Matrix:
    out = mats[0]
    for m in mats[1:]:
        out = out + m
    return out


def _whole(d: int):
    from .exact_linear import Subspace
    return Subspace.whole(d)


def _proportionality(pairs, what: str) -> Fraction | None:
    """c with lhs == c * rhs for every pair; None when rhs and lhs all vanish (any c fits)."""
    c = None
    for lhs, rhs in pairs:
        if rhs.is_zero():
            continue
        e_l, e_r = lhs.entries(), rhs.entries()
        j = next(i for i, x in enumerate(e_r) if x != 0)
        c = e_l[j] / e_r[j]
        break
    if c is None:
        if all(l.is_zero() for l, _ in pairs):
            return None
        raise NotProportional(f"{what}: projector vanishes but the product does not")
    for lhs, rhs in pairs:
        if lhs != rhs * c:
            raise NotProportional(f"{what}: product is not a multiple of the projector")
    return c


def measure_invariant(kac: GModule, dec: ComponentDecomposition, k: int, which: str, r: int | None = None):
    return BranchingOracle(kac, dec).measure(k, which, r)

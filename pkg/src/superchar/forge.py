"""Explicit matrix modules: gl(k) irreps, Kac modules, maximal vectors and decompositions.

This is the brute-force side of every check in the package.  Nothing here
knows about characteristic roots beyond the admission checks; all module
structure comes from graded commutation and exact row reduction.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from flint import fmpq, fmpq_mat

from .core import Signature, Weight, casimir2_eigenvalue, format_weight, parse_weight, typicality
from .errors import (
    Atypical, ConsistencyFailure, IncompleteDecomposition, MultiplicityAmbiguity, SignatureMismatch,
)
from .exact_linear import (
    Matrix, Subspace, format_scalar, hstack, kernel_basis, parse_scalar, to_fmpq, vstack,
)
from .roots import characteristic_roots, coinciding_pair, require_distinct

Gen = tuple[int, int]


def bracket(sig: Signature, x: Gen, y: Gen) -> list[tuple[int, Gen]]:
    """Graded commutator [E_pq, E_rs] as a combination of generators."""
    p, q = x
    r, s = y
    out = []
    if q == r:
        out.append((1, (p, s)))
    if p == s:
        sign = -1 if ((sig.parity(p) + sig.parity(q)) * (sig.parity(r) + sig.parity(s))) % 2 else 1
        out.append((-sign, (r, q)))
    return out


def gen_parity(sig: Signature, x: Gen) -> int:
    return (sig.parity(x[0]) + sig.parity(x[1])) % 2


@dataclass(frozen=True)
class GModule:
    """Matrices of all E_pq on a finite-dimensional gl(m|n) module."""

    signature: Signature
    dim: int
    gen: dict
    basis_parity: tuple[int, ...]
    basis_weight: tuple[Weight, ...]
    highest_weight: Weight | None = None
    label: str = ""

    def E(self, p: int, q: int) -> Matrix:
        return self.gen[(p, q)]

    def parity_of(self, x: Gen) -> int:
        return gen_parity(self.signature, x)

    def graded_commutator(self, x: Gen, y: Gen) -> Matrix:
        a, b = self.E(*x), self.E(*y)
        sign = -1 if self.parity_of(x) * self.parity_of(y) % 2 else 1
        return a @ b - (b @ a) * sign

    def relation_failures(self) -> list[tuple[int, int, int, int]]:
        """Index quadruples where the graded commutation relations fail."""
        sig = self.signature
        idx = list(sig.indices())
        bad = []
        for x in itertools.product(idx, idx):
            for y in itertools.product(idx, idx):
                rhs = Matrix.zeros(self.dim, self.dim)
                for c, z in bracket(sig, x, y):
                    rhs = rhs + self.E(*z) * c
                if self.graded_commutator(x, y) != rhs:
                    bad.append(x + y)
        return bad

    def parity_failures(self) -> list[Gen]:
        bad = []
        for x, mat in self.gen.items():
            px = self.parity_of(x)
            for (i, j) in _nonzero_positions(mat):
                if (self.basis_parity[j] + px) % 2 != self.basis_parity[i]:
                    bad.append(x)
                    break
        return bad

    def cartan_failures(self) -> list[int]:
        bad = []
        for p in self.signature.indices():
            expected = Matrix.diag([w[p] for w in self.basis_weight])
            if self.E(p, p) != expected:
                bad.append(p)
        return bad

    def casimir2_matrix(self) -> Matrix:
        """sum over p, q of (-1)^(q) E_pq E_qp."""
        sig = self.signature
        out = Matrix.zeros(self.dim, self.dim)
        for p in sig.indices():
            for q in sig.indices():
                out = out + (self.E(p, q) @ self.E(q, p)) * sig.sign(q)
        return out


def _nonzero_positions(mat: Matrix):
    e = mat.raw.entries()
    c = mat.cols
    for k, x in enumerate(e):
        if x != 0:
            yield divmod(k, c)


# classical gl(k) irreps


def _gl_irrep_data(k: int, labels: tuple[Fraction, ...]):
    """(dim, {(i,j): Matrix}, [weight tuples]) for the gl(k) irrep of dominant integral labels."""
    if k == 0:
        return 1, {}, [()]
    shift = labels[-1]
    part = [int(x - shift) for x in labels]
    total = sum(part)
    if total == 0:
        gens = {(i, j): (Matrix.scalar(1, shift) if i == j else Matrix.zeros(1, 1))
                for i in range(1, k + 1) for j in range(1, k + 1)}
        return 1, gens, [tuple(labels)]

    tensors = list(itertools.product(range(k), repeat=total))
    index = {t: a for a, t in enumerate(tensors)}
    amb = len(tensors)

    def act(i, j, vec):
        # E_ij on a sparse tensor vector; i, j 0-based
        out = {}
        for t, c in vec.items():
            for pos, letter in enumerate(t):
                if letter == j:
                    u = t[:pos] + (i,) + t[pos + 1:]
                    out[u] = out.get(u, 0) + c
        return {u: c for u, c in out.items() if c}

    def weight_of(t):
        return tuple(t.count(a) for a in range(k))

    top = [t for t in tensors if weight_of(t) == tuple(part)]
    cols = []
    for a in range(k - 1):
        rows = {}
        for col, t in enumerate(top):
            for u, c in act(a, a + 1, {t: 1}).items():
                rows[(index[u], col)] = c
        cols.append(Matrix.from_sparse(amb, len(top), rows))
    ker = kernel_basis(vstack(cols)) if cols else Subspace.whole(len(top))
    hw = {top[r]: ker.basis[r, 0] for r in range(len(top)) if ker.basis[r, 0] != 0}

    # breadth-first closure under simple lowering operators, grouped by weight
    groups: dict[tuple, list[dict]] = {}
    spaces: dict[tuple, Subspace] = {}
    order: list[tuple] = []

    def add(vec):
        w = weight_of(next(iter(vec)))
        cand = groups.get(w, []) + [vec]
        sp = Subspace.span(_dense_columns(cand, index, amb))
        if sp.dim == len(cand):
            groups[w] = cand
            spaces[w] = sp
            if w not in order:
                order.append(w)
            return True
        return False

    add(hw)
    queue = [hw]
    while queue:
        vec = queue.pop(0)
        for a in range(k - 1):
            low = act(a + 1, a, vec)
            if low and add(low):
                queue.append(low)

    basis = [(w, v) for w in order for v in groups[w]]
    # re-express each group in its canonical subspace basis so coordinates are read off pivots
    offsets = {}
    off = 0
    for w in order:
        offsets[w] = off
        off += len(groups[w])
    dim = off
    gens = {}
    for i in range(k):
        for j in range(k):
            entries = {}
            for col, (w, v) in enumerate(basis):
                img = act(i, j, v)
                if not img:
                    continue
                w2 = weight_of(next(iter(img)))
                cand = groups[w2]
                coords = _solve_in(cand, img, index, amb)
                for r, c in enumerate(coords):
                    if c:
                        entries[(offsets[w2] + r, col)] = c
            if i == j:
                for col in range(dim):
                    entries[(col, col)] = entries.get((col, col), 0) + shift
            gens[(i + 1, j + 1)] = Matrix.from_sparse(dim, dim, entries)
    weights = [tuple(Fraction(x) + shift for x in w) for (w, _) in basis]
    return dim, gens, weights


def _dense_columns(vecs, index, amb) -> Matrix:
    entries = {}
    for col, v in enumerate(vecs):
        for t, c in v.items():
            entries[(index[t], col)] = c
    return Matrix.from_sparse(amb, len(vecs), entries)


def _solve_in(vecs, target, index, amb) -> list[Fraction]:
    a = _dense_columns(vecs, index, amb)
    b = _dense_columns([target], index, amb)
    aug = hstack([a, b])
    r, pivots = aug.rref()
    if len(vecs) in pivots:
        raise ConsistencyFailure("image left the cyclic span")
    coords = [Fraction(0)] * len(vecs)
    for row, p in enumerate(pivots):
        coords[p] = r[row, len(vecs)]
    return coords


def build_gl_k_irrep(k: int, lam: Weight) -> GModule:
    """Irreducible gl(k) module (as gl(k|0)) with dominant integral highest weight ``lam``."""
    sig = Signature(k, 0)
    if lam.signature != sig:
        raise SignatureMismatch(f"{lam!r} is not a {sig} weight")
    lam.require_integral()
    lam.require_dominant()
    dim, gens, weights = _gl_irrep_data(k, lam.even)
    return GModule(sig, dim, gens, tuple([0] * dim), tuple(Weight(w, ()) for w in weights),
                   lam, f"V({format_weight(lam)})")


# Kac modules


def check_admissible(w: Weight):
    """Admission checks shared by every oracle construction."""
    w.require_integral()
    w.require_dominant()
    rep = typicality(w)
    if not rep.typical:
        i, mu = rep.witnesses[0]
        raise Atypical(f"{w} is atypical: (Lambda+rho, eps_{i} - delta_{mu}) = 0")
    require_distinct(characteristic_roots(w))


def build_kac_module(w: Weight, cache_dir: str | os.PathLike | None = None, verify: bool = True) -> GModule:
    """Kac module: exterior algebra of the odd lowering generators tensored with V_0(w)."""
    check_admissible(w)
    if cache_dir is not None:
        path = Path(cache_dir) / _cache_name(w)
        if path.exists():
            return load_module(path)
    mod = _induce(w)
    if verify:
        if mod.relation_failures():
            raise ConsistencyFailure("graded commutation relations fail on the Kac module")
        expected = casimir2_eigenvalue(w)
        if mod.casimir2_matrix() != Matrix.scalar(mod.dim, expected):
            raise ConsistencyFailure("quadratic Casimir is not the expected scalar")
    if cache_dir is not None:
        Path(cache_dir).mkdir(parents=True, exist_ok=True)
        save_module(mod, Path(cache_dir) / _cache_name(w))
    return mod


def _induce(w: Weight) -> GModule:
    sig = w.signature
    m, n = sig.m, sig.n
    d1, g1, w1 = _gl_irrep_data(m, w.even)
    d2, g2, w2 = _gl_irrep_data(n, w.odd)
    d0 = d1 * d2

    def v0_gen(p, q):
        # matrix of an even generator on V_0 = V(even) x V(odd), or None if zero
        if p <= m and q <= m:
            a = g1[(p, q)]
            return {(r1 * d2 + b, c1 * d2 + b): x
                    for (r1, c1), x in _sparse(a).items() for b in range(d2)}
        if p > m and q > m:
            a = g2[(p - m, q - m)]
            return {(b * d2 + r2, b * d2 + c2): x
                    for (r2, c2), x in _sparse(a).items() for b in range(d1)}
        return None

    v0 = {}
    for p in sig.indices():
        for q in sig.indices():
            g = v0_gen(p, q)
            if g is not None:
                cols = {}
                for (r, c), x in g.items():
                    cols.setdefault(c, []).append((r, x))
                v0[(p, q)] = cols

    lowering = [(m + mu, i) for mu in range(1, n + 1) for i in range(1, m + 1)]
    lpos = {g: a for a, g in enumerate(lowering)}
    subsets = [s for k in range(len(lowering) + 1) for s in itertools.combinations(range(len(lowering)), k)]
    basis = [(s, b) for s in subsets for b in range(d0)]
    bindex = {key: a for a, key in enumerate(basis)}
    dim = len(basis)

    def kind(x):
        px, qx = sig.parity(x[0]), sig.parity(x[1])
        if px == 1 and qx == 0:
            return "-"
        if px == 0 and qx == 1:
            return "+"
        return "0"

    def insert(y, s, b):
        if y in s:
            return {}
        k = sum(1 for z in s if z < y)
        return {(tuple(sorted(s + (y,))), b): (-1) ** k}

    memo = {}

    def act(x, s, b):
        key = (x, s, b)
        if key in memo:
            return memo[key]
        kx = kind(x)
        if kx == "-":
            res = insert(lpos[x], s, b)
        elif not s:
            res = {}
            if kx == "0":
                for r, val in v0[x].get(b, []):
                    res[((), r)] = val
        else:
            y, rest = s[0], s[1:]
            res = {}
            for c, z in bracket(sig, x, lowering[y]):
                for k2, v in act(z, rest, b).items():
                    res[k2] = res.get(k2, 0) + c * v
            sign = -1 if gen_parity(sig, x) else 1
            for (s2, b2), v in act(x, rest, b).items():
                for k2, v2 in insert(y, s2, b2).items():
                    res[k2] = res.get(k2, 0) + sign * v * v2
            res = {k2: v for k2, v in res.items() if v}
        memo[key] = res
        return res

    gens = {}
    for p in sig.indices():
        for q in sig.indices():
            entries = {}
            for col, (s, b) in enumerate(basis):
                for k2, v in act((p, q), s, b).items():
                    entries[(bindex[k2], col)] = v
            gens[(p, q)] = Matrix.from_sparse(dim, dim, entries)

    parity = tuple(len(s) % 2 for s, _ in basis)
    weights = []
    for s, b in basis:
        labels = list(w1[b // d2]) + list(w2[b % d2])
        for a in s:
            mu_idx, i_idx = lowering[a]
            labels[mu_idx - 1] += 1
            labels[i_idx - 1] -= 1
        weights.append(Weight.from_labels(sig, labels))
    return GModule(sig, dim, gens, parity, tuple(weights), w, f"K({format_weight(w)})")


def _sparse(mat: Matrix) -> dict:
    e = mat.raw.entries()
    c = mat.cols
    return {divmod(k, c): Fraction(int(x.p), int(x.q)) for k, x in enumerate(e) if x != 0}


# small explicit modules


def vector_module(sig: Signature, dual: bool = False) -> GModule:
    """The vector module V (or its dual V*)."""
    d = sig.size
    gens = {}
    for p in sig.indices():
        for q in sig.indices():
            if not dual:
                gens[(p, q)] = Matrix.from_sparse(d, d, {(p - 1, q - 1): 1})
            else:
                sign = -1 if (sig.parity(q) * (sig.parity(p) + sig.parity(q))) % 2 else 1
                gens[(p, q)] = Matrix.from_sparse(d, d, {(q - 1, p - 1): -sign})
    parity = tuple(sig.parity(p) for p in sig.indices())
    weights = tuple(Weight.unit(sig, p).scale(-1 if dual else 1) for p in sig.indices())
    if not dual:
        hw = Weight.unit(sig, 1)
    else:
        hw = -Weight.unit(sig, sig.size)
    return GModule(sig, d, gens, parity, weights, hw, "V*" if dual else "V")


def trivial_module(sig: Signature) -> GModule:
    gens = {(p, q): Matrix.zeros(1, 1) for p in sig.indices() for q in sig.indices()}
    return GModule(sig, 1, gens, (0,), (Weight.zero(sig),), Weight.zero(sig), "trivial")


def tensor_module(left: GModule, right: GModule) -> GModule:
    """Graded tensor product: E acts as E x 1 + (sign)^|E| x E."""
    sig = left.signature
    if right.signature != sig:
        raise SignatureMismatch("tensor factors over different algebras")
    da, db = left.dim, right.dim
    dim = da * db
    gens = {}
    for x in left.gen:
        a = _sparse(left.E(*x))
        b = _sparse(right.E(*x))
        ex = gen_parity(sig, x)
        entries = {}
        for (i, j), v in a.items():
            for k in range(db):
                key = (i * db + k, j * db + k)
                entries[key] = entries.get(key, 0) + v
        for i in range(da):
            sign = -1 if ex and left.basis_parity[i] else 1
            for (k, l), v in b.items():
                key = (i * db + k, i * db + l)
                entries[key] = entries.get(key, 0) + sign * v
        gens[x] = Matrix.from_sparse(dim, dim, entries)
    parity = tuple((pa + pb) % 2 for pa in left.basis_parity for pb in right.basis_parity)
    weights = tuple(wa + wb for wa in left.basis_weight for wb in right.basis_weight)
    return GModule(sig, dim, gens, parity, weights, None, f"{left.label}x{right.label}")


# maximal vectors and decompositions


def _lex_key(w: Weight):
    return tuple(-x for x in w.labels)


def _sub_weight(sub: Signature, w: Weight) -> Weight:
    labels = w.labels[:sub.size]
    return Weight.from_labels(sub, labels)


def _check_leading(parent: Signature, sub: Signature):
    if sub.size > parent.size or sub.m > parent.m or (sub.n > 0 and sub.m != parent.m):
        raise SignatureMismatch(f"{sub} is not a leading block of {parent}")


def find_maximal_vectors(mod: GModule, sub: Signature) -> list[tuple[Weight, Matrix]]:
    """Maximal vectors for the leading-block subalgebra, one per weight."""
    _check_leading(mod.signature, sub)
    groups: dict[Weight, list[int]] = {}
    for a, w in enumerate(mod.basis_weight):
        groups.setdefault(_sub_weight(sub, w), []).append(a)
    raising = [mod.E(p, q) for p in sub.indices() for q in sub.indices() if p < q]
    found = []
    for w in sorted(groups, key=_lex_key):
        idx = groups[w]
        if raising:
            stacked = vstack([r.take_cols(idx) for r in raising])
            ker = kernel_basis(stacked)
        else:
            ker = Subspace.whole(len(idx))
        if ker.dim == 0:
            continue
        if ker.dim > 1:
            raise MultiplicityAmbiguity(f"{ker.dim} maximal vectors of weight {w}")
        col = {(a, 0): ker.basis[r, 0] for r, a in enumerate(idx)}
        found.append((w, Matrix.from_sparse(mod.dim, 1, col)))
    return found


def cyclic_span(gens: list[Matrix], vec: Matrix) -> Subspace:
    """Smallest subspace containing ``vec`` and stable under ``gens``."""
    space = Subspace.span(vec)
    while True:
        grown = Subspace.span(hstack([space.basis] + [g @ space.basis for g in gens]))
        if grown.dim == space.dim:
            return space
        space = grown


@dataclass
class Component:
    highest_weight: Weight
    space: Subspace
    maximal_vector: Matrix

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass
class ComponentDecomposition:
    """Direct sum decomposition of a module into highest weight components."""

    parent: GModule
    sub: Signature
    parts: list[Component]
    _coords: list[Matrix] = field(default_factory=list, repr=False)

    def __post_init__(self):
        total = sum(c.dim for c in self.parts)
        if total != self.parent.dim:
            raise IncompleteDecomposition(
                f"components span {total} of {self.parent.dim} dimensions")
        cob = hstack([c.space.basis for c in self.parts])
        if cob.rank() != self.parent.dim:
            raise IncompleteDecomposition("component spaces are not independent")
        inv = cob.inverse()
        off = 0
        self._coords = []
        for c in self.parts:
            self._coords.append(inv.take_rows(range(off, off + c.dim)))
            off += c.dim

    def weights(self) -> list[Weight]:
        return [c.highest_weight for c in self.parts]

    def index(self, w: Weight) -> int | None:
        for k, c in enumerate(self.parts):
            if c.highest_weight == w:
                return k
        return None

    def coords(self, k: int) -> Matrix:
        """Rows mapping the parent space onto coordinates of component ``k`` along the others."""
        return self._coords[k]

    def projection(self, k: int) -> Matrix:
        return self.parts[k].space.basis @ self._coords[k]

    def restrict(self, k: int, op: Matrix) -> Matrix:
        """Matrix of an operator preserving component ``k``, in that component's basis."""
        basis = self.parts[k].space.basis
        return self.parts[k].space.coordinates(op @ basis)

    def module(self, k: int) -> GModule:
        """Component ``k`` as a module over the subalgebra, in its canonical basis.

        The canonical basis of a cyclic span of a weight vector consists of
        weight vectors, so parities and weights are read off at the pivots.
        """
        part = self.parts[k]
        sp = part.space
        gens = {(p, q): sp.coordinates(self.parent.E(p, q) @ sp.basis)
                for p in self.sub.indices() for q in self.sub.indices()}
        parity = tuple(self.parent.basis_parity[i] for i in sp.pivots)
        weights = tuple(_sub_weight(self.sub, self.parent.basis_weight[i]) for i in sp.pivots)
        return GModule(self.sub, sp.dim, gens, parity, weights, part.highest_weight,
                       f"{self.parent.label}[{format_weight(part.highest_weight)}]")

    def assemble(self, maps: list[Matrix | None]) -> Matrix:
        """Parent operator acting on component k by ``maps[k]`` (a dim x d_k map)."""
        d = self.parent.dim
        out = Matrix.zeros(d, d)
        for k, t in enumerate(maps):
            if t is not None:
                out = out + t @ self._coords[k]
        return out


def _decompose(mod: GModule, sub: Signature) -> ComponentDecomposition:
    lowering = [mod.E(p, q) for p in sub.indices() for q in sub.indices() if p > q]
    parts = [Component(w, cyclic_span(lowering, v), v) for w, v in find_maximal_vectors(mod, sub)]
    return ComponentDecomposition(mod, sub, parts)


def restrict_decompose(mod: GModule) -> ComponentDecomposition:
    """Decompose a gl(m|n+1) Kac module under the leading gl(m|n)."""
    from .closed_forms import branch_candidates

    sig = mod.signature
    if sig.n < 1:
        raise SignatureMismatch("restriction needs at least one odd index")
    if mod.highest_weight is None:
        raise ValueError("module has no recorded highest weight")
    sub = Signature(sig.m, sig.n - 1)
    dec = _decompose(mod, sub)
    allowed = set(branch_candidates(mod.highest_weight))
    seen = set()
    for w in dec.weights():
        if w not in allowed:
            raise ConsistencyFailure(f"component {w} violates the betweenness conditions")
        if w in seen:
            raise MultiplicityAmbiguity(f"component {w} occurs twice")
        seen.add(w)
    return dec


def tensor_vector_decompose(mod: GModule, dual: bool = False) -> ComponentDecomposition:
    """Decompose V x M (or V* x M) into highest weight components."""
    if mod.highest_weight is None:
        raise ValueError("module has no recorded highest weight")
    sig = mod.signature
    rs = characteristic_roots(mod.highest_weight)
    roots = rs.vector_roots if dual else rs.adjoint_roots
    pair = coinciding_pair(roots)
    if pair is not None:
        from .errors import RootsCoincide
        raise RootsCoincide(f"{'vector' if dual else 'adjoint'} roots coincide at "
                            f"{sig.label(pair[0])}, {sig.label(pair[1])}")
    prod = tensor_module(vector_module(sig, dual), mod)
    dec = _decompose(prod, sig)
    step = -1 if dual else 1
    allowed = {mod.highest_weight + Weight.unit(sig, p).scale(step) for p in sig.indices()}
    for w in dec.weights():
        if w not in allowed:
            raise ConsistencyFailure(f"unexpected highest weight {w} in tensor product")
    return dec


# on-disk cache


def _cache_name(w: Weight) -> str:
    sig = w.signature
    body = format_weight(w).replace("/", "_").replace("|", "I").replace(",", "c").replace("-", "m")
    return f"kac_{sig.m}_{sig.n}_{body}.json"


def module_to_json(mod: GModule) -> dict:
    return {
        "schema": "superchar/gmodule/1",
        "m": mod.signature.m,
        "n": mod.signature.n,
        "dim": mod.dim,
        "label": mod.label,
        "highest_weight": None if mod.highest_weight is None else format_weight(mod.highest_weight),
        "basis_parity": list(mod.basis_parity),
        "basis_weight": [format_weight(w) for w in mod.basis_weight],
        "gen": {f"{p},{q}": [[i, j, format_scalar(v)] for (i, j), v in sorted(_sparse(mat).items())]
                for (p, q), mat in sorted(mod.gen.items())},
    }


def module_from_json(data: dict) -> GModule:
    sig = Signature(data["m"], data["n"])
    dim = data["dim"]
    gens = {}
    for key, items in data["gen"].items():
        p, q = (int(x) for x in key.split(","))
        gens[(p, q)] = Matrix.from_sparse(dim, dim, {(i, j): parse_scalar(v) for i, j, v in items})
    hw = data["highest_weight"]
    return GModule(sig, dim, gens, tuple(data["basis_parity"]),
                   tuple(parse_weight(w, sig) for w in data["basis_weight"]),
                   None if hw is None else parse_weight(hw, sig), data.get("label", ""))


def save_module(mod: GModule, path: str | os.PathLike):
    path = Path(path)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(module_to_json(mod), sort_keys=True))
    tmp.replace(path)


def load_module(path: str | os.PathLike) -> GModule:
    return module_from_json(json.loads(Path(path).read_text()))

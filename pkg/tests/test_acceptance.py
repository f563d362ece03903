"""Acceptance criteria 1-12, exact rational equality throughout.

Each criterion has a checker returning (ok, detail). The pytest functions assert
on those results; a one-line PASS/FAIL summary per criterion is printed at the
end of the session (see conftest.pytest_terminal_summary), and also when this
file is run directly.
"""

import itertools

import pytest

from superchar.closed_forms import (VANISHES, casimir_from_roots, eval_supertrace, invariant_table,
                                    make_pair, printed_supertrace)
from superchar.cli import parse_and_dispatch
from superchar.core import Signature, Weight, casimir2_eigenvalue, parse_weight
from superchar.errors import Atypical, RootsCoincide
from superchar.exact_linear import Subspace, scalar_on_subspace
from superchar.forge import build_kac_module, tensor_vector_decompose, trivial_module
from superchar.operators import char_matrix, lagrange, projector, verify_char_identity
from superchar.tower import TowerOperators, check_commutativity, check_tower_identities

from conftest import kac, decomposition, oracle

KAC_TOPS = {
    (1, 1): ["2|0", "3|1", "0|-2"],
    (1, 2): ["4|0,-1", "2|3,1", "-2|0,-1"],
    (2, 1): ["3,1|2", "1,-2|0", "1,0|2"],
    (2, 2): ["-1,-2|-2,-2", "-2,-2|-1,-2", "-1,-1|-2,-3"],
}
BRANCH_TOPS = [t for ts in KAC_TOPS.values() for t in ts]
ALL_TOPS = [t for ts in KAC_TOPS.values() for t in ts]
CHAR_KINDS = ("vector", "adjoint", "double_adjoint", "triple_adjoint")

RESULTS = {}


def record(num, ok, detail):
    RESULTS[num] = (ok, detail)
    return ok


def summary_lines():
    return [f"{'PASS' if RESULTS[k][0] else 'FAIL'} criterion {k:>2}: {RESULTS[k][1]}" for k in sorted(RESULTS)]


# criterion checkers


def crit_1():
    checked, bad = 0, []
    for top in ALL_TOPS:
        dec = decomposition(top)
        mods = [kac(top)] + [dec.module(k) for k in range(len(dec.parts))]
        for mod in mods:
            checked += 1
            if mod.relation_failures():
                bad.append(mod.label or top)
    per_sig = min(len(ts) for ts in KAC_TOPS.values())
    return record(1, not bad and per_sig >= 3,
                  f"graded relations exact on {checked} modules ({per_sig}+ Kac modules per signature)")


def crit_2():
    bad = [t for t in ALL_TOPS
           if scalar_on_subspace(kac(t).casimir2_matrix(), Subspace.whole(kac(t).dim))
           != casimir2_eigenvalue(parse_weight(t))]
    return record(2, not bad and len(ALL_TOPS) >= 5, f"I2 = (L, L+2rho) on {len(ALL_TOPS)} Kac modules")


def crit_3():
    bad = []
    for t in ALL_TOPS:
        mod = kac(t)
        sig = mod.signature
        for kind in CHAR_KINDS:
            if not verify_char_identity(mod, kind).is_zero():
                bad.append((t, kind))
        for base, tw in (("vector", "double_adjoint"), ("adjoint", "triple_adjoint")):
            x2, y2 = char_matrix(mod, base).power(2), char_matrix(mod, tw).power(2)
            if any(y2.block(r, q) != x2.block(r, q) * (sig.sign(r) * sig.sign(q))
                   for r in sig.indices() for q in sig.indices()):
                bad.append((t, "twist"))
    return record(3, not bad, f"4 identity kinds and sign twists exact on {len(ALL_TOPS)} modules; bad {bad}")


def crit_4():
    dec = decomposition("4|0,-1")
    ok = ([str(w) for w in dec.weights()] == ["4|0", "4|-1", "3|0", "3|-1"]
          and [c.dim for c in dec.parts] == [2, 2, 2, 2])
    # restrict_decompose raises on any repeated component
    counts = [len(decomposition(t).parts) for t in BRANCH_TOPS]
    return record(4, ok, f"Kac(4|0,-1) -> 4|0, 4|-1, 3|0, 3|-1 (2+2+2+2); multiplicity-free on "
                         f"{len(BRANCH_TOPS)} modules, {sum(counts)} components")


def _compare(kinds):
    n_ok, bad, undefined = 0, [], 0
    for t in BRANCH_TOPS:
        o, dec, top = oracle(t), decomposition(t), parse_weight(t)
        for k, w in enumerate(dec.weights()):
            tab = invariant_table(make_pair(top, w))
            for kind in kinds:
                hi = len(tab.values[kind]) if kind in ("c", "cbar") else len(tab.values[kind]) - 1
                for r in range(1, hi + 1):
                    f, m = tab.get(kind, r), o.measure(k, kind, r)
                    if f is None or m is None:
                        undefined += 1
                        continue
                    if (0 if f is VANISHES else f) == m:
                        n_ok += 1
                    else:
                        bad.append((t, str(w), kind, r))
    return n_ok, bad, undefined


def crit_5():
    n_ok, bad, _ = _compare(("c", "cbar"))
    # the sum rule and linear relations are asserted inside invariant_table; re-check the sum on measurements
    sums = all(sum(oracle(t).measure(k, "c", r) for r in range(1, kac(t).signature.size + 1)) == 1
               for t in BRANCH_TOPS for k in range(len(decomposition(t).parts)))
    return record(5, not bad and sums, f"{n_ok} c/cbar values match; sum c = 1 measured; mismatches {bad}")


def crit_6():
    n_ok, bad, undefined = _compare(("gamma", "gammabar", "delta", "deltabar"))
    return record(6, not bad, f"{n_ok} gamma/gammabar/delta/deltabar values match (structural zeros included); "
                              f"{undefined} at removable poles; mismatches {bad}")


def crit_7():
    n, bad = 0, []
    for t in BRANCH_TOPS:
        o, dec = oracle(t), decomposition(t)
        sig = dec.sub
        for k, w in enumerate(dec.weights()):
            for r in sig.indices():
                for kind, step in (("psi", 1), ("phi", -1)):
                    n += 1
                    right = o.shift_component(k, r, kind, "right").blocks
                    left = o.shift_component(k, r, kind, "left").blocks
                    target = dec.index(w + Weight.unit(sig, r).scale(step))
                    lands = all(b.is_zero() if target is None else dec.parts[target].space.contains(b)
                                for b in right)
                    if right != left or not lands:
                        bad.append((t, str(w), kind, r))
    return record(7, not bad, f"left = right projected shifts and correct target weights in {n} cases")


def crit_8():
    bad = []
    for t in BRANCH_TOPS:
        o, dec = oracle(t), decomposition(t)
        sig = dec.sub
        for k, w in enumerate(dec.weights()):
            strp = [o.measure(k, "strP", r) for r in sig.indices()]
            strpb = [o.measure(k, "strPbar", r) for r in sig.indices()]
            if sum(strp) != sig.m - sig.n:
                bad.append((t, str(w), "sum"))
            if strp != [eval_supertrace(w, r, "P") for r in sig.indices()]:
                bad.append((t, str(w), "strP"))
            if strpb != [eval_supertrace(w, r, "Pbar") for r in sig.indices()]:
                bad.append((t, str(w), "strPbar"))
            comp = o.component(k)
            for kind, cm in (("I", "vector"), ("Ibar", "adjoint")):
                x = char_matrix(comp, cm)
                for kk in range(1, 5):
                    direct = x.power(kk).supertrace(sig).is_scalar_multiple_of_identity()
                    if direct != casimir_from_roots(w, kk, kind):
                        bad.append((t, str(w), kind, kk))
    # gl(0|2) trivial module: A = 0, roots (-1, 0), P[2] = 1 whose supertrace is -2
    sig02 = Signature(0, 2)
    p2 = lagrange(char_matrix(trivial_module(sig02), "vector"), (-1, 0), 2)
    witness = (p2.supertrace(sig02).is_scalar_multiple_of_identity() == -2
               == eval_supertrace(Weight((), (0, 0)), 2) == -printed_supertrace(Weight((), (0, 0)), 2))
    return record(8, not bad and witness,
                  "str P, str Pbar match with the (-1)^(r) convention (gl(0|2) witness str P[2] = -2); "
                  f"sum str P = m-n; casimir_from_roots = str(A^k), str(Abar^k), k <= 4; bad {bad}")


def crit_9():
    inputs = ["2|0", "3|1", "4|0,-1", "3,1|2", "-1,-2|-2,-2"]
    bad = []
    for t in inputs:
        mod = kac(t)
        sig = mod.signature
        w = mod.highest_weight
        for dual in (False, True):
            dec = tensor_vector_decompose(mod, dual)
            step = -1 if dual else 1
            allowed = {w + Weight.unit(sig, p).scale(step) for p in sig.indices()}
            ws = dec.weights()
            if len(set(ws)) != len(ws) or not set(ws) <= allowed:
                bad.append((t, dual, "weights"))
            if sum(c.dim for c in dec.parts) != sig.size * mod.dim:
                bad.append((t, dual, "dims"))
    return record(9, not bad, f"V x V(L), V* x V(L) multiplicity-free with weights L +- eps_r on {len(inputs)} "
                              "modules; dimensions add to (m+n) dim V(L)")


TOWER_TOPS = ["4|0,-1", "3,1|2", "-1,-2|-2,-2"]


def crit_10_parts():
    """Flags per module: holding identities, and the printed 3tau_3 / 4tau_4 residuals."""
    held, printed_zero = {}, {}
    for t in TOWER_TOPS:
        mod, dec = kac(t), decomposition(t)
        ops = TowerOperators(mod)
        flags = check_tower_identities(mod, dec, ops, 4)
        flags.update(check_commutativity(mod, 4, ops))
        held[t] = [k for k, v in flags.items() if v]
        printed_zero[t] = {k: ops.tau_residual(k, printed=True).is_zero() for k in (3, 4)}
    return held, printed_zero


def crit_10():
    held, printed_zero = crit_10_parts()
    holds = not any(held.values())
    printed_ok = all(all(v.values()) for v in printed_zero.values())
    detail = ("tau0 = 1, tau1, 2tau2, sigma_0..2, [tau_l, tau_k] = 0 (l,k <= 4), upper/lower commutator "
              f"(l,k <= 2) exact on {len(TOWER_TOPS)} modules incl. gl(2|2): {'yes' if holds else held}; "
              f"printed 3tau3/4tau4 zero residual: {'yes' if printed_ok else 'no (corrected forms hold)'}")
    return record(10, holds and printed_ok, detail)


def crit_11():
    n, bad = 0, []
    for t in ["4|0,-1", "3,1|2", "1,-2|0", "-1,-2|-2,-2"]:
        o, dec = oracle(t), decomposition(t)
        sig = dec.sub
        idx = list(sig.indices())
        for i in range(1, sig.m + 1):
            for p, q in itertools.product(idx, idx):
                n += 1
                if not (o.full_shift(i, "phi", p) @ o.full_shift(i, "phi", q)).is_zero():
                    bad.append((t, i, p, q))
                for j in idx:
                    if j == i:
                        continue
                    n += 1
                    prod = o.full_shift(i, "phi", p) @ o.full_shift(j, "phi", q) @ o.full_shift(i, "phi", p)
                    if not prod.is_zero():
                        bad.append((t, i, j, p, q))
    return record(11, not bad, f"{n} phi products with a repeated even shift index vanish")


def crit_12():
    outcomes = []
    for text, err in (("1|0,-1", RootsCoincide), ("0|0,0", Atypical), ("0,0|-1,-1", Atypical)):
        try:
            build_kac_module(parse_weight(text))
            outcomes.append(False)
        except err:
            outcomes.append(True)
    rep, code = parse_and_dispatch(["verify-kac", "--m", "1", "--n", "1", "--top", "1|0,-1"])
    outcomes.append(code == 1 and rep["error"]["name"] == "RootsCoincide")
    rep, code = parse_and_dispatch(["verify-kac", "--m", "1", "--n", "1", "--top", "0|0,0"])
    outcomes.append(code == 1 and rep["error"]["name"] == "Atypical")
    try:
        eval_supertrace(parse_weight("1|0,-1"), 1)
        outcomes.append(False)
    except RootsCoincide:
        outcomes.append(True)
    try:
        projector(build_kac_module(parse_weight("2|0")), 1, "P")
        outcomes.append(True)
    except RootsCoincide:
        outcomes.append(False)
    return record(12, all(outcomes), "1|0,-1 -> RootsCoincide (typical, alpha_1 = alpha_mu1), "
                                     "0|0,0 and 0,0|-1,-1 -> Atypical, via library and CLI")


# pytest entry points

@pytest.mark.parametrize("num", [1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 12])
def test_criterion(num):
    assert globals()[f"crit_{num}"](), RESULTS[num][1]


def test_criterion_10_identities_that_hold():
    crit_10()
    held, _ = crit_10_parts()
    assert not any(held.values()), held


@pytest.mark.xfail(strict=True, reason="the printed 3tau_3 and 4tau_4 expansions have nonzero residual; "
                                       "see notes on the corrected forms")
def test_criterion_10_printed_expansions():
    _, printed_zero = crit_10_parts()
    assert all(all(v.values()) for v in printed_zero.values()), printed_zero


if __name__ == "__main__":
    for num in range(1, 13):
        globals()[f"crit_{num}"]()
    print("\n".join(summary_lines()))

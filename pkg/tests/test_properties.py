from fractions import Fraction

from hypothesis import assume, given, settings, strategies as st

from superchar.closed_forms import (VANISHES, branch_candidates, casimir_from_roots, eval_c, eval_supertrace,
                                    make_pair, satisfies_betweenness)
from superchar.core import (Signature, Weight, casimir2_eigenvalue, format_weight, parse_weight, rho,
                            typicality, weight_form)
from superchar.errors import RootsCoincide, SuperCharError
from superchar.exact_linear import Matrix, kernel_basis
from superchar.forge import build_kac_module
from superchar.operators import verify_char_identity
from superchar.roots import characteristic_roots, roots_distinct

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def weights(draw, max_m=3, max_n=3, elems=rationals):
    m = draw(st.integers(0, max_m))
    n = draw(st.integers(0 if m else 1, max_n))
    return Weight(tuple(draw(elems) for _ in range(m)), tuple(draw(elems) for _ in range(n)))


@st.composite
def dominant_integral(draw, m, n, lo=-3, hi=4):
    ev = sorted((draw(st.integers(lo, hi)) for _ in range(m)), reverse=True)
    od = sorted((draw(st.integers(lo, hi)) for _ in range(n)), reverse=True)
    return Weight(tuple(ev), tuple(od))


@given(weights())
def test_weight_text_round_trip(w):
    assert parse_weight(format_weight(w)) == w


@given(weights())
def test_root_shift_relation(w):
    sig = w.signature
    rs = characteristic_roots(w)
    for s in sig.indices():
        assert rs.alpha(s) + rs.alphabar(s) == sig.m - sig.n - sig.sign(s)


@given(weights(max_m=3, max_n=3))
def test_roots_measure_odd_root_pairing(w):
    sig = w.signature
    rs = characteristic_roots(w)
    shifted = w + rho(sig)
    for i in range(1, sig.m + 1):
        for mu in range(sig.m + 1, sig.size + 1):
            pairing = weight_form(shifted, Weight.unit(sig, i) - Weight.unit(sig, mu))
            assert rs.alpha(i) - rs.alpha(mu) + 1 == pairing
            assert rs.alphabar(i) - rs.alphabar(mu) + 1 == -pairing


@given(weights(max_m=3, max_n=3))
def test_typicality_witnesses(w):
    sig = w.signature
    rs = characteristic_roots(w)
    found = set(typicality(w).witnesses)
    for i in range(1, sig.m + 1):
        for mu in range(1, sig.n + 1):
            assert ((i, mu) in found) == (rs.alpha(sig.m + mu) == rs.alpha(i) + 1)


@given(st.integers(1, 3), st.integers(0, 2), st.data())
def test_candidates_satisfy_betweenness(m, n, data):
    top = data.draw(dominant_integral(m, n + 1))
    cands = branch_candidates(top)
    assert len(set(cands)) == len(cands)
    assert all(satisfies_betweenness(top, s) for s in cands)


@settings(max_examples=60)
@given(st.integers(0, 2), st.integers(0, 2), st.data())
def test_c_sum_rule(m, n, data):
    assume(m + n > 0)
    top = data.draw(dominant_integral(m, n + 1))
    for sub in branch_candidates(top):
        try:
            pair = make_pair(top, sub)
            cs = [eval_c(pair, r) for r in range(1, pair.plus + 1)]
        except SuperCharError:
            continue
        assert sum(Fraction(0) if c is VANISHES else c for c in cs) == 1


@given(weights(max_m=3, max_n=3))
def test_supertraces_sum_to_superdimension(w):
    assume(roots_distinct(characteristic_roots(w)))
    sig = w.signature
    assert sum(eval_supertrace(w, r) for r in sig.indices()) == sig.m - sig.n


@given(weights(max_m=2, max_n=2))
def test_low_casimirs_from_roots(w):
    assume(roots_distinct(characteristic_roots(w)))
    sig = w.signature
    assert casimir_from_roots(w, 0) == sig.m - sig.n
    assert casimir_from_roots(w, 1) == sum(w.labels)
    assert casimir_from_roots(w, 2) == casimir2_eigenvalue(w)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_small_kac_modules(data):
    w = data.draw(dominant_integral(1, 1, lo=-4, hi=5))
    try:
        mod = build_kac_module(w)
    except SuperCharError:
        return
    assert not mod.relation_failures()
    for kind in ("vector", "adjoint"):
        assert verify_char_identity(mod, kind).is_zero()


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4))
def test_kernel_is_annihilated(rows):
    m = Matrix.from_rows(rows)
    k = kernel_basis(m)
    assert k.dim + m.rank() == 3
    if k.dim:
        assert (m @ k.basis).is_zero()

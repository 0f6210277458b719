import random

import pytest

from wittkit.cech import (
    FinLenModule,
    NotACocycle,
    _h0_cocycles,
    cech_diff,
    classical_cohomology,
    classical_cohomology_via_cech,
    connecting_map,
    h0_monomials,
    harmonic_residual_layers,
    hd_monomials,
    hd_witt_length_by_cech,
    r_map,
    ses_maps_report,
    slice_cohomology_dims,
    teich_lift,
    v_map,
    witt_cohomology,
    witt_structure_sheaf_cohomology,
)
from wittkit.rings import LaurentElem, ScaleExceeded


def test_classical_examples():
    assert classical_cohomology(1, 2, 0) == 3
    assert classical_cohomology(2, -3, 2) == 1
    for i in range(3):
        assert classical_cohomology(2, -1, i) == 0


@pytest.mark.parametrize("p", [2, 3])
def test_classical_matches_slice_assembly(p):
    for d in (1, 2, 3):
        for m in range(-6, 5):
            for i in range(d + 1):
                assert classical_cohomology(d, m, i) == \
                    classical_cohomology_via_cech(d, m, i, p)


def test_slice_cohomology_patterns():
    # empty pattern: constants in degree 0; full pattern: top degree only
    for d in (1, 2, 3):
        hs = slice_cohomology_dims(d, 2, frozenset())
        assert hs == [1] + [0] * d
        hs = slice_cohomology_dims(d, 2, frozenset(range(d + 1)))
        assert hs == [0] * d + [1]
        for k in range(1, d + 1):
            hs = slice_cohomology_dims(d, 3, frozenset(range(k)))
            assert hs == [0] * (d + 1)


def test_finlen_module():
    m = FinLenModule(2, 2, (1, 3))
    assert m.length == 4 and not m.is_zero()
    with pytest.raises(ValueError):
        FinLenModule(2, 2, (1,))


def test_witt_cohomology_spec_values():
    res = witt_cohomology(2, 1, 2, -1)
    assert res[1].layers == (0, 1) and res[1].length == 1
    res = witt_cohomology(2, 1, 2, -2)
    assert res[1].layers == (1, 3) and res[1].length == 4
    res = witt_cohomology(2, 2, 2, -1)
    assert res[2].length == 0  # d > -p a - 1 = 1
    assert res[1].length == 0


@pytest.mark.parametrize("p,n,d", [(2, 2, 1), (3, 2, 2), (2, 3, 2)])
def test_witt_cohomology_vanishing_patterns(p, n, d):
    from math import comb
    for a in range(-4, 5):
        res = witt_cohomology(p, d, n, a)
        for i in range(1, d):
            assert res[i].length == 0
        if a < 0:
            assert res[0].length == 0
        if a >= 0:
            want = sum(comb(p ** l * a + d, d) for l in range(n))
            assert res[0].length == want
            if d > 0:
                assert res[d].length == (want if d == 0 else 0) or a >= 0
                assert res[d].length == 0
        else:
            want = sum(
                comb(-(p ** l) * a - 1, d) for l in range(n)
                if -(p ** l) * a - d - 1 >= 0
            )
            assert res[d].length == want


def test_independent_top_length_route():
    total, layers = hd_witt_length_by_cech(2, 1, 2, -2)
    assert (total, layers) == (4, [1, 3])
    total, layers = hd_witt_length_by_cech(3, 2, 2, -2)
    res = witt_cohomology(3, 2, 2, -2)
    assert total == res[2].length and layers == list(res[2].layers)


def test_structure_sheaf():
    res = witt_structure_sheaf_cohomology(2, 1, 3)
    assert res[0].layers == (1, 1, 1) and res[1].length == 0
    res = witt_structure_sheaf_cohomology(3, 2, 2)
    assert res[0].length == 2 and res[1].length == 0 and res[2].length == 0
    # n = 1 is the classical case
    res = witt_structure_sheaf_cohomology(5, 2, 1)
    assert res[0].layers == (1,)


def test_ses_maps_properties():
    rng = random.Random(7)
    rep = ses_maps_report(3, 2, 2, -1, 25, rng)
    assert rep["cases"] == 25 and not rep["failures"]
    rep = ses_maps_report(2, 1, 3, 1, 25, rng)
    assert not rep["failures"]


def test_v_then_r_is_zero_on_cochains():
    p, n, d = 2, 2, 1
    # V of a Teichmuller cochain of W_(n-1)O(pa), then R^(n-1), is zero
    inner = _h0_cocycles(p, d, 4)  # sections of O(pa) with a = 2
    c = teich_lift(p, n - 1, d, 4, inner[0], 0)
    lifted = v_map(c)
    assert lifted.a == 2
    assert all(f.is_zero() for f in r_map(lifted).values())
    # R^{n-1} of a Teichmuller cochain is its top coordinate
    c2 = teich_lift(p, n, d, 2, _h0_cocycles(p, d, 2)[0], 0)
    assert r_map(c2) == {S: x.coords[0] for S, x in c2.comps.items()}
    # V of a Teichmuller section is the shifted section (0, g)
    for S, x in lifted.comps.items():
        assert x.coords[0].is_zero()
        assert x.coords[1] == c.comps[S].coords[0]


def test_connecting_zero_on_global_sections():
    for (p, d, a, n) in ((2, 1, 2, 2), (3, 2, 1, 2), (2, 1, 0, 3)):
        basis = _h0_cocycles(p, d, a)
        cols = connecting_map(p, n, d, a, 0, basis)
        for col in cols:
            assert all(not layer for layer in col)


def test_connecting_rejects_non_cocycles():
    p, d = 2, 1
    bad = {
        frozenset([0]): LaurentElem.monomial(p, 1, d + 1, (2, 0), 1,
                                             frozenset([0])),
        frozenset([1]): LaurentElem.zero(p, 1, d + 1, frozenset([1])),
    }
    with pytest.raises(NotACocycle):
        connecting_map(p, 2, d, 2, 0, [bad])


def test_coboundary_reduces_to_zero():
    # the Teichmuller lift of a genuine coboundary peels away completely
    p, n, d, a = 2, 2, 1, 1
    f = LaurentElem.monomial(p, 1, d + 1, (1, 0), 1, frozenset([0]))
    c0 = {frozenset([0]): f,
          frozenset([1]): LaurentElem.zero(p, 1, d + 1, frozenset([1]))}
    lifted = teich_lift(p, n, d, a, c0, 0)
    delta = cech_diff(lifted)
    layers = harmonic_residual_layers(delta)
    assert all(not layer for layer in layers)


def test_harmonic_monomials():
    assert h0_monomials(2, 1) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert hd_monomials(1, -2) == [(-1, -1)]
    assert hd_monomials(2, -3) == [(-1, -1, -1)]
    assert hd_monomials(1, 0) == []


def test_scale_guard():
    with pytest.raises(ScaleExceeded):
        witt_cohomology(2, 9, 2, -1)


def test_les_rank_consistency():
    """Length additivity along the tower of short exact sequences."""
    for p in (2, 3):
        for d in (1, 2):
            for a in range(-3, 3):
                for n in (2, 3):
                    low = witt_cohomology(p, d, n - 1, p * a, verify=False)
                    high = witt_cohomology(p, d, n, a, verify=False)
                    for i in range(d + 1):
                        assert high[i].length == (
                            low[i].length + classical_cohomology(d, a, i)
                        )


def test_witt_section_type():
    from wittkit.cech import WittSection
    from wittkit.witt import WittVector
    p, n, d, a = 2, 2, 1, -2
    S = frozenset({0, 1})
    good = WittVector(p, n, [
        LaurentElem.monomial(p, 1, d + 1, (-1, -1), 1, S),
        LaurentElem.monomial(p, 1, d + 1, (-3, -1), 1, S),
    ])
    sec = WittSection(S, a, good)
    assert sec.open_set == S and sec.twist == a
    bad = WittVector(p, n, [
        LaurentElem.monomial(p, 1, d + 1, (-1, -1), 1, S),
        LaurentElem.monomial(p, 1, d + 1, (-1, -1), 1, S),  # wrong degree
    ])
    with pytest.raises(ValueError):
        WittSection(S, a, bad)


def test_ses_maps_named_pair():
    from wittkit.cech import ses_maps
    vm, rm = ses_maps(2, 1, 2, -1)
    assert vm is v_map and rm is r_map
    with pytest.raises(ValueError):
        ses_maps(2, 1, 1, -1)

"""Piecewise symbols, predicted vs empirical spectra of the functional difference."""

import numpy as np
import pytest

from specdiff.alpha import alpha_derivative, d_spectrum_ladder
from specdiff.opcore import ModelSpec, build_model
from specdiff.pcfunc import (PiecewiseFn, SegmentUnion, SymbolError,
                             accumulation_set, cross_term_compactness,
                             empirical_spectrum, hausdorff,
                             predicted_ess_spectrum, symbol_difference,
                             union_formula_check)
from specdiff.resolvent import boundary_value

SPEC = ModelSpec("lattice1d", 100, ((0, 1.0),))
TWO_JUMP = PiecewiseFn(jumps=((-0.5, 0.0, 1.0), (0.5, 0.0, 0.5)))


def _alpha(lam, v=1.0):
    pair = build_model(ModelSpec("lattice1d", 20, ((0, v),)))
    return alpha_derivative(boundary_value(pair, lam), pair.j).value


def test_symbol_validation_and_round_trip():
    with pytest.raises(SymbolError):
        PiecewiseFn(jumps=((0.5, 0, 1), (-0.5, 0, 1)))
    with pytest.raises(SymbolError):
        PiecewiseFn(background="spline")
    phi = PiecewiseFn(jumps=((-0.5, 0.0, 1.0 + 1.0j),),
                      background="gaussian_bump", background_params=(1.0, 0.0, 2.0))
    assert PiecewiseFn.from_json(phi.to_json()) == phi
    assert not phi.is_real
    assert phi.kappa(-0.5) == 1.0 + 1.0j
    assert phi.kappa(0.3) == 0.0
    assert phi.singsupp() == (-0.5,)


def test_symbol_evaluation_left_limit_convention():
    phi = PiecewiseFn(jumps=((0.0, 2.0, 3.0),))
    assert np.array_equal(phi(np.array([-1.0, 0.0, 1.0])), [2.0, 2.0, 3.0])
    bump = PiecewiseFn(background="gaussian_bump", background_params=(2.0, 1.0, 0.5))
    assert bump(np.array([1.0]))[0] == pytest.approx(2.0, abs=0)


def test_scaling_covariance():
    scaled = TWO_JUMP.scaled(3.0)
    pred = predicted_ess_spectrum(TWO_JUMP, _alpha)
    pred3 = predicted_ess_spectrum(scaled, _alpha)
    assert pred3.radius() == pytest.approx(3.0 * pred.radius(), rel=1e-12)


def test_segment_union_merging_and_symmetry():
    u = SegmentUnion(endpoints=(0.5, -0.5, 0.25, 1j))
    assert set(u.endpoints) == {0.5 + 0j, 1j}
    assert u.contains_zero()
    assert u.radius() == 1.0
    assert SegmentUnion().is_empty
    with pytest.raises(SymbolError):
        u.real_interval()
    assert SegmentUnion(endpoints=(0.5,)).real_interval() == (-0.5, 0.5)


def test_prediction_continuous_symbol_empty():
    phi = PiecewiseFn(background="gaussian_bump", background_params=(1.0, 0.0, 1.0))
    assert predicted_ess_spectrum(phi, _alpha).is_empty


def test_prediction_single_and_two_jumps():
    single = PiecewiseFn(jumps=((0.0, 0.0, 1.0),))
    pred = predicted_ess_spectrum(single, _alpha)
    assert pred.radius() == pytest.approx(_alpha(0.0), rel=1e-12)
    pred2 = predicted_ess_spectrum(TWO_JUMP, _alpha)
    expected = max(_alpha(-0.5), 0.5 * _alpha(0.5))
    assert pred2.radius() == pytest.approx(expected, rel=1e-12)
    with pytest.raises(SymbolError):
        predicted_ess_spectrum(PiecewiseFn(jumps=((1.97, 0.0, 1.0),)), _alpha)


def test_empirical_rejects_complex_symbol():
    phi = PiecewiseFn(jumps=((0.0, 0.0, 1.0j),))
    with pytest.raises(SymbolError):
        empirical_spectrum(SPEC, phi, (50, 100))


def test_continuous_symbol_compactness_fingerprint():
    phi = PiecewiseFn(background="arctan_step_smoothed",
                      background_params=(1.0, 0.0, 0.2))
    res = empirical_spectrum(ModelSpec("lattice1d", 50, ((0, 0.5),)), phi,
                             (100, 200, 400))
    assert max(res["big_counts"]) == min(res["big_counts"])


def test_indicator_matches_projection_ladder_bitwise():
    # jump location off both spectra: strict-below and at-most selections agree
    lam = 0.3
    ind = PiecewiseFn(jumps=((lam, 1.0, 0.0),))
    res = empirical_spectrum(SPEC, ind, (100, 200))
    lad = d_spectrum_ladder(SPEC, lam, (50, 100, 200))
    assert np.array_equal(res["clouds"][-1], lad.eigenvalue_clouds[-1])
    assert np.array_equal(res["clouds"][-2], lad.eigenvalue_clouds[-2])


def test_symbol_difference_dense_vs_step_path():
    pair = build_model(ModelSpec("lattice1d", 40, ((0, 1.0),)))
    phi_step = PiecewiseFn(jumps=((0.3, 0.0, 0.5),))
    phi_dense = PiecewiseFn(jumps=((0.3, 0.0, 0.5),),
                            background="gaussian_bump",
                            background_params=(0.0, 0.0, 1.0))
    a = symbol_difference(pair, phi_step)            # projection-block path
    b = symbol_difference(pair, phi_dense)           # full functional calculus
    assert np.linalg.norm(a - b, 2) <= 1e-10


def test_empirical_cloud_norm_bound():
    res = empirical_spectrum(ModelSpec("lattice1d", 50, ((0, 1.0),)), TWO_JUMP,
                             (100, 200))
    sup = 1.5    # max |phi| over the real line for the two-jump symbol
    for c in res["clouds"]:
        assert np.max(np.abs(c)) <= 2.0 * sup + 1e-10


def test_hausdorff_basics():
    assert hausdorff([], []) == 0.0
    assert hausdorff([0.0], []) == np.inf
    assert hausdorff([0.0, 1.0], [0.0, 2.0]) == 1.0


def test_accumulation_set_filters_strays():
    prev = np.array([0.0, 0.1, 0.2])
    cur = np.array([0.005, 0.105, 0.7])
    assert np.array_equal(accumulation_set(cur, prev), [0.005, 0.105])


def test_cross_term_disjoint_vs_control():
    phi1 = PiecewiseFn(jumps=((-0.5, 0.0, 1.0),))
    phi2 = PiecewiseFn(jumps=((0.5, 0.0, 0.5),))
    rep = cross_term_compactness(SPEC, phi1, phi2, (250, 500), sv_index=5)
    # far-index singular values sit at the tail of a fast-decaying sequence
    assert rep["tracked_values"][-1] <= 1e-4
    with pytest.raises(SymbolError):
        cross_term_compactness(SPEC, phi1, phi1, (250, 500))


def test_cross_term_continuous_partner_small():
    phi1 = PiecewiseFn(jumps=((-0.5, 0.0, 1.0),))
    smooth = PiecewiseFn(background="gaussian_bump", background_params=(1.0, 0.0, 1.0))
    rep = cross_term_compactness(SPEC, phi1, smooth, (100, 200), sv_index=1)
    # the product norm converges to a small constant; it does not blow up
    assert rep["tracked_values"][-1] <= 0.1
    assert abs(rep["tracked_values"][-1] - rep["tracked_values"][0]) <= 0.01


def test_union_formula_two_pieces_small_scale_trend():
    # the distance is dominated by the slow spectral filling at the segment
    # edges; at desk-scale ladders it shrinks but remains well above 0.05
    phi = PiecewiseFn(jumps=((-0.5, 0.0, 1.0), (0.5, 0.0, 1.0)))
    spec = ModelSpec("lattice1d", 50, ((0, 1.0),))
    d_small = union_formula_check(spec, phi, (500, 1000))["distance"]
    d_large = union_formula_check(spec, phi, (1000, 2000))["distance"]
    assert d_large <= d_small


@pytest.mark.slow
def test_union_formula_two_pieces_stated_scale():
    # stated expectation: distance <= 0.05 at N=4000 with equal unit jumps
    phi = PiecewiseFn(jumps=((-0.5, 0.0, 1.0), (0.5, 0.0, 1.0)))
    rep = union_formula_check(ModelSpec("lattice1d", 50, ((0, 1.0),)), phi,
                              (2000, 4000))
    assert rep["distance"] <= 0.05


def test_union_single_piece_distance_zero():
    phi = PiecewiseFn(jumps=((0.0, 0.0, 1.0),))
    rep = union_formula_check(ModelSpec("lattice1d", 50, ((0, 1.0),)), phi,
                              (100, 200))
    assert rep["distance"] <= 1e-12


def test_small_jump_piece_norm_bound():
    # a piece with jump 2^-5 contributes at most a length-2*2^-5 segment
    small = PiecewiseFn(jumps=((0.5, 0.0, 2.0 ** -5),))
    pair = build_model(ModelSpec("lattice1d", 100, ((0, 1.0),)))
    delta = symbol_difference(pair, small)
    assert np.linalg.norm(delta, 2) <= 2.0 * 2.0 ** -5 + 1e-12

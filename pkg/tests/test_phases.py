"""Phase labels, critical lines, susceptibility, and transition detection."""

from __future__ import annotations

import math

import pytest

from extdicke.model import ModelParams, ParameterError
from extdicke.phases import (
    PhaseLabel,
    classify,
    critical_overlays,
    delta_critical,
    detect_transitions,
    mott_boundary_delta,
    phase_grid,
    susceptibility_v,
    v_critical,
)


def params_u(u, delta=0.0, omega_rabi=0.0, v=0.0):
    return ModelParams(omega=1.0, lam=math.sqrt(u), delta=delta,
                       omega_rabi=omega_rabi, v=v, n_atoms=1)


# --- closed-form critical lines -----------------------------------------

def test_delta_critical_lobe_edges():
    assert delta_critical(1.0, -0.25) == (-0.75, 0.75)
    assert delta_critical(0.4, 0.0) == (-0.4, 0.4)
    with pytest.raises(ParameterError, match="no superradiant lobe"):
        delta_critical(1.0, -1.5)


def test_mott_boundary_values():
    assert mott_boundary_delta(1.0, -2.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert mott_boundary_delta(1.0, -2.0, 0.5) == pytest.approx(
        0.22509823218728275, abs=1e-14)
    assert mott_boundary_delta(1.0, -1.2, 0.1) == pytest.approx(
        0.045019646437456574, abs=1e-14)
    assert mott_boundary_delta(1.0, -2.0, 1.0) == pytest.approx(0.0, abs=1e-15)
    # drive stronger than |w|: the second minimum never forms
    assert mott_boundary_delta(1.0, -1.4, 0.5) is None
    # for w > 0 the same astroid bounds the swallowtail inside the lobe
    assert mott_boundary_delta(1.0, 0.5, 0.2) == pytest.approx(
        0.9529403029099687, abs=1e-14)


def test_astroid_matches_observed_minimum_count():
    from extdicke.meanfield import ground_state
    edge = mott_boundary_delta(1.0, 0.0, 0.2)
    assert edge == pytest.approx(0.5337570239158691, abs=1e-14)
    inside = ground_state(params_u(1.0, delta=edge - 0.01, omega_rabi=0.2))
    outside = ground_state(params_u(1.0, delta=edge + 0.01, omega_rabi=0.2))
    assert inside.n_local_minima == 2
    assert outside.n_local_minima == 1
    # same check on the attractive side, where the edge bounds the Mott lobe
    edge2 = mott_boundary_delta(1.0, -2.0, 0.5)
    sf = ground_state(params_u(1.0, delta=edge2 - 0.01, omega_rabi=0.5, v=-2.0))
    single = ground_state(params_u(1.0, delta=edge2 + 0.01, omega_rabi=0.5,
                                   v=-2.0))
    assert sf.n_local_minima == 2
    assert single.n_local_minima == 1


def test_v_critical_values():
    assert v_critical(1.0, 0.0, 0.5) == pytest.approx(-1.5, abs=1e-15)
    assert v_critical(1.0, 0.3, 0.0) == pytest.approx(-1.3, abs=1e-15)
    assert v_critical(1.0, 0.3, 0.4) == pytest.approx(-1.9865662555435093,
                                                      abs=1e-14)
    # consistency with the detuning form of the same surface
    u, v, r = 1.0, -2.0, 0.5
    d = mott_boundary_delta(u, v, r)
    assert v_critical(u, d, r) == pytest.approx(v, abs=1e-12)


# --- classification ------------------------------------------------------

@pytest.mark.parametrize("v,label", [
    (0.5, PhaseLabel.SUPERRADIANT),
    (0.0, PhaseLabel.SUPERRADIANT),
    (-0.99, PhaseLabel.SUPERRADIANT),
    (-1.01, PhaseLabel.MOTT),
    (-1.2, PhaseLabel.MOTT),
    (-1.49, PhaseLabel.MOTT),
    (-1.51, PhaseLabel.SUPERFLUID),
    (-2.0, PhaseLabel.SUPERFLUID),
    (-3.0, PhaseLabel.SUPERFLUID),
])
def test_classify_windows_on_symmetric_axis(v, label):
    # u = 1, drive 0.5, delta = 0: boundaries sit at v = -1 and v = -1.5
    assert classify(params_u(1.0, omega_rabi=0.5, v=v)) is label


def test_classify_normal_and_polarized():
    assert classify(params_u(0.2, delta=1.0)) is PhaseLabel.NORMAL
    assert classify(params_u(1.0, delta=1.5)) is PhaseLabel.NORMAL
    assert classify(params_u(1.0, delta=0.5)) is PhaseLabel.SUPERRADIANT
    assert classify(params_u(1.0, delta=0.3, omega_rabi=0.2, v=-0.25)) \
        is PhaseLabel.SUPERRADIANT


def test_classify_flat_manifold():
    assert classify(ModelParams(omega=1.0, lam=0.0)) is PhaseLabel.DEGENERATE


def test_classify_accepts_precomputed_solution():
    from extdicke.meanfield import ground_state
    p = params_u(1.0, delta=0.5)
    sol = ground_state(p)
    assert classify(p, sol) is PhaseLabel.SUPERRADIANT


# --- susceptibility ------------------------------------------------------

def test_susceptibility_zero_in_pinned_phase():
    assert abs(susceptibility_v(params_u(1.0, omega_rabi=0.5, v=-1.2))) < 1e-10


def test_susceptibility_matches_lobe_formula():
    # inside the lobe m = -delta/(u+v), so dm/dv = delta/(u+v)^2
    p = params_u(1.0, delta=0.3, v=0.0)
    assert susceptibility_v(p) == pytest.approx(0.3, abs=1e-6)
    p2 = params_u(1.0, delta=-0.2, v=0.5)
    assert susceptibility_v(p2) == pytest.approx(-0.2 / 1.5**2, abs=1e-6)


def test_susceptibility_warns_on_flat_stencil():
    with pytest.warns(RuntimeWarning):
        susceptibility_v(ModelParams(omega=1.0, lam=0.0))


# --- transition detection ------------------------------------------------

def test_detects_clean_second_order_kink():
    # no drive: m/N = -delta/u inside the lobe, -1 outside; slope kink at u
    recs = detect_transitions(params_u(1.0), "delta", 0.5, 1.5)
    assert len(recs) == 1
    assert recs[0].order == "second"
    assert abs(recs[0].location - 1.0) < 1e-6
    assert abs(recs[0].jump) < 1e-6


def test_detects_first_order_jump_with_magnitude():
    p = params_u(1.0, omega_rabi=0.5, v=-2.0)
    recs = detect_transitions(p, "delta", -1.0, 1.0)
    assert len(recs) == 1
    rec = recs[0]
    assert rec.order == "first"
    assert abs(rec.location) < 1e-6
    assert abs(abs(rec.jump) - math.sqrt(3.0)) < 1e-6


def test_jump_closes_at_critical_drive():
    # drive = |u + v|: the jump closes, leaving a continuous sharp feature
    p = params_u(1.0, omega_rabi=1.0, v=-2.0)
    recs = detect_transitions(p, "delta", -1.0, 1.0)
    assert len(recs) == 1
    assert recs[0].order == "second"
    assert abs(recs[0].location) < 1e-6
    assert abs(recs[0].jump) < 1e-6


def test_no_transition_in_smooth_window():
    assert detect_transitions(params_u(1.0, omega_rabi=0.3), "delta",
                              0.1, 0.4) == []
    assert detect_transitions(params_u(0.5), "v", 0.1, 0.9) == []


def test_detect_other_axes_and_observables():
    # sweep the drive through the end point of the first-order line
    p = params_u(1.0, v=-2.0, delta=0.0)
    recs = detect_transitions(p, "omega_rabi", 0.5, 1.5,
                              observable="m_over_n")
    assert len(recs) == 1
    assert abs(recs[0].location - 1.0) < 1e-4

    # across the same first-order line the photon density is continuous
    # (the two wells share s_x^2) but its detuning slope flips sign
    p2 = params_u(1.0, omega_rabi=0.5, v=-2.0)
    recs2 = detect_transitions(p2, "delta", -1.0, 1.0,
                               observable="photon_density")
    assert len(recs2) == 1
    assert recs2[0].order == "second"
    assert abs(recs2[0].location) < 1e-6


def test_detect_rejects_unknown_names():
    with pytest.raises(ParameterError):
        detect_transitions(params_u(1.0), "detuning", 0.0, 1.0)
    with pytest.raises(ParameterError):
        detect_transitions(params_u(1.0), "delta", 0.0, 1.0,
                           observable="entropy")
    with pytest.raises(ParameterError):
        detect_transitions(params_u(1.0), "delta", 1.0, 1.0)


# --- phase grid and overlays --------------------------------------------

def test_phase_grid_columns_and_mirror_symmetry():
    grid = phase_grid(1.0, 0.5, delta_range=(-2.4, 2.4), v_range=(-3.0, 1.0),
                      resolution=(13, 11))
    assert len(grid.deltas) == 13 and len(grid.vs) == 11
    # reflection delta -> -delta leaves every label unchanged
    for i in range(13):
        assert grid.labels[i] == grid.labels[12 - i]
    # the delta = 0 column reproduces the known v windows (the classifier
    # keeps v = -u itself on the superradiant side)
    mid = grid.labels[6]
    for j, v in enumerate(grid.vs):
        if v >= -1.0:
            assert mid[j] == "Superradiant"
        elif v > -1.5:
            assert mid[j] == "Mott"
        elif v < -1.5:
            assert mid[j] == "Superfluid"


def test_phase_grid_input_guards():
    with pytest.raises(ParameterError):
        phase_grid(-1.0, 0.0)
    with pytest.raises(ParameterError):
        phase_grid(1.0, 0.0, resolution=(1, 5))


def test_overlays_lie_on_their_lines_and_inside_window():
    u, rabi = 1.0, 0.5
    window_d, window_v = (-2.0, 2.0), (-3.0, 1.0)
    lines = dict(critical_overlays(u, rabi, window_d, window_v))
    assert set(lines) <= {"lobe_plus", "lobe_minus", "red", "astroid_plus",
                          "astroid_minus"}
    assert {"lobe_plus", "lobe_minus", "red", "astroid_plus"} <= set(lines)
    for pts in lines.values():
        for d, v in pts:
            assert window_d[0] - 1e-12 <= d <= window_d[1] + 1e-12
            assert window_v[0] - 1e-12 <= v <= window_v[1] + 1e-12
    for d, v in lines["lobe_plus"]:
        assert d == pytest.approx(u + v, abs=1e-12)
    for d, v in lines["red"]:
        assert v == -u
    for d, v in lines["astroid_plus"]:
        assert d == pytest.approx(mott_boundary_delta(u, v, rabi), abs=1e-12)

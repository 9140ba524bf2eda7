import math

import pytest

import phonlase as pl


def fig_params():
    p = pl.SystemParams()
    return p


def test_threshold_closed_form():
    p = fig_params()
    assert pl.threshold_amplitude(p) == pytest.approx(4e-4 * math.sqrt(626.0), rel=1e-12)
    assert pl.existence_amplitude(p) == pytest.approx(1e-2, rel=1e-12)
    assert pl.frequency_pulling(p) == pytest.approx(0.0, abs=1e-18)


def test_states_across_threshold():
    p = fig_params()
    z = pl.zero_state(p)
    assert z.amplitudes.a1 == complex(0.0, -p.drive / p.gamma1)

    with pytest.raises(pl.PhlError, match="below threshold"):
        pl.nonzero_state(p)

    p.drive = 3e-2
    nz = pl.nonzero_state(p)
    assert abs(nz.amplitudes.a2) ** 2 == pytest.approx(278.8427125, rel=1e-6)
    d = pl.drift(nz.amplitudes, pl.validated(p))
    # the representative point moves only along the phase orbit
    assert abs(d.a1) < 1e-10


def test_stability_reports():
    p = fig_params()
    rep = pl.zero_state_stability(p)
    assert rep.stable
    assert rep.max_real_part == pytest.approx(-2e-4, rel=1e-6)

    p.drive = 3e-2
    rep = pl.nonzero_state_stability(p)
    assert rep.zero_modes == 1
    assert rep.stable
    assert len(pl.goldstone_mode(p)) == 6


def test_simulation_and_spectrum_roundtrip():
    p = fig_params()
    p.nbar = 50.0
    c = pl.SimConfig()
    c.steps = 40000
    c.transientSteps = 6000
    c.nTrajectories = 8
    c.masterSeed = 5
    ens = pl.ensemble(p, c)
    assert len(ens.samples) == 8
    spec = pl.welch_spectrum(ens, 128, pl.Window.Hann)
    assert len(spec.omega) == 128
    total = sum(spec.s_b) * (spec.omega[1] - spec.omega[0])
    assert total == pytest.approx(p.nbar, rel=0.5)

    peaks = pl.find_peaks(spec, pl.SpecMode.B, pl.default_min_prominence())
    assert peaks, "phonon line missing"


def test_powerlaw_fit_exact():
    xs = [10.0, 100.0, 1000.0]
    ys = [2.0 * x**0.5 for x in xs]
    fit = pl.powerlaw_fit(xs, ys)
    assert fit.exponent == pytest.approx(0.5, abs=1e-12)
    assert fit.prefactor == pytest.approx(2.0, rel=1e-9)

import time

import numpy as np
import pytest

from moyal.errors import BoxTooSmallError
from moyal.grid import GridSpec, wigner_from_wavefunction
from moyal.models import DampedParams, damped_wigner_values, hermite_function
from moyal.negativity import (ETA_REFERENCE, damped_box, eta_grid,
                              eta_grid_damped, eta_radial, laguerre_roots,
                              lambda_scan, negativity_table)

from oracles import eta_exact


def test_laguerre_roots_interlace():
    r4 = laguerre_roots(4)
    r5 = laguerre_roots(5)
    assert len(r5) == 5 and np.all(np.diff(r5) > 0)
    # roots of consecutive orders interlace
    for j in range(4):
        assert r5[j] < r4[j] < r5[j + 1]
    # they really are roots
    from moyal.models import laguerre
    assert np.abs(laguerre(5, r5)).max() < 1e-12


def test_eta_radial_ground_state_zero():
    rec = eta_radial(0)
    assert rec.eta == 0.0 and rec.err_estimate == 0.0
    assert rec.method == "radial"


def test_eta_radial_closed_form_n1():
    # eta(1) = 4 exp(-1/2) - 2 exactly
    rec = eta_radial(1)
    assert rec.eta == pytest.approx(4.0 * np.exp(-0.5) - 2.0, abs=1e-13)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 9, 14, 20])
def test_eta_radial_against_exact_antiderivative(n):
    rec = eta_radial(n)
    assert rec.eta == pytest.approx(eta_exact(n), abs=1e-11)
    assert rec.err_estimate < 1e-10


def test_eta_radial_against_reference_digits():
    # The printed reference values carry the original numerics' noise
    # (up to ~1e-5 for large n; see the decisions ledger).  The first
    # entries are good to ~5e-9 and are asserted tightly here; the strict
    # 1e-8 comparison across all n lives in the acceptance suite.
    assert eta_radial(1).eta == pytest.approx(ETA_REFERENCE[1], abs=1e-8)
    assert eta_radial(2).eta == pytest.approx(ETA_REFERENCE[2], abs=1e-8)
    for n in range(3, 10):
        assert eta_radial(n).eta == pytest.approx(ETA_REFERENCE[n], abs=2e-5)


def test_eta_sequence_properties():
    records = negativity_table(12)
    etas = [r.eta for r in records]
    assert etas[0] == 0.0
    assert all(b > a for a, b in zip(etas, etas[1:]))
    assert all(e >= 0.0 for e in etas)


def test_negativity_table_single_row():
    records = negativity_table(0)
    assert len(records) == 1 and records[0].eta == 0.0


def test_negativity_table_thread_cap_determinism(monkeypatch):
    serial = [r.eta for r in negativity_table(8)]
    monkeypatch.setenv("MOYAL_THREADS", "4")
    threaded = [r.eta for r in negativity_table(8)]
    assert serial == threaded


def test_eta_grid_nonnegative_state():
    rec = eta_grid_damped(0, 0.9, 1e-6)
    assert abs(rec.eta) <= 1e-6


def test_eta_grid_against_reference():
    rec = eta_grid_damped(2, 0.5, 1e-4)
    assert rec.eta == pytest.approx(ETA_REFERENCE[2], abs=1e-3)
    assert rec.err_estimate <= 1e-3


def test_eta_grid_scale_invariance():
    # normalization is re-imposed internally: c*W gives the same indicator
    dp = DampedParams(0.3, 1)
    box = damped_box(1, 0.3)
    base = eta_grid(lambda Q, P: damped_wigner_values(dp, Q, P), box, 1e-5)
    scaled = eta_grid(lambda Q, P: 2.5 * damped_wigner_values(dp, Q, P), box, 1e-5)
    assert scaled.eta == pytest.approx(base.eta, abs=1e-6)


def test_eta_grid_box_too_small():
    dp = DampedParams(0.0, 1)
    with pytest.raises(BoxTooSmallError) as info:
        eta_grid(lambda Q, P: damped_wigner_values(dp, Q, P),
                 (-2.0, 2.0, -2.0, 2.0), 1e-6)
    assert info.value.required_box is not None


def test_eta_grid_from_gridfield_oracle():
    # harmonic n=1 Wigner function sampled by the wavefunction oracle
    spec = GridSpec(-8.0, 8.0, -8.0, 8.0, 801, 801)
    field = wigner_from_wavefunction(lambda x: hermite_function(1, x), spec)
    rec = eta_grid(field, tol=1e-4, model="harmonic", n=1)
    assert rec.eta == pytest.approx(eta_radial(1).eta, abs=1e-4)


def test_lambda_scan_matches_radial():
    report = lambda_scan(1, (0.0, 0.3, 0.6, 0.9), 1e-3)
    assert report.ok
    assert report.max_deviation <= 1e-3
    for rec in report.grid:
        assert rec.eta == pytest.approx(0.42612, abs=1e-3)


def test_lambda_scan_trivial_and_failure_report():
    report0 = lambda_scan(0, (0.0, 0.5), 1e-3)
    assert report0.ok and all(abs(r.eta) < 1e-6 for r in report0.grid)
    # unreachable tolerance must produce an honest failure report
    strict = lambda_scan(2, (0.0, 0.9), 1e-9)
    assert not strict.ok
    assert len(strict.grid) == 2 and strict.max_deviation > 1e-9


def test_lambda_scan_n5_reference_value():
    report = lambda_scan(5, (0.0, 0.9), 1e-3)
    assert report.ok
    for rec in report.grid:
        assert rec.eta == pytest.approx(1.3834384857, abs=1e-3)


def test_lambda_scan_rejects_bad_lambda():
    with pytest.raises(ValueError):
        lambda_scan(1, (0.0, 1.5), 1e-3)


def test_fig9_scale_table_runtime():
    t0 = time.perf_counter()
    records = negativity_table(50)
    elapsed = time.perf_counter() - t0
    etas = [r.eta for r in records]
    assert all(b > a for a, b in zip(etas, etas[1:]))
    assert elapsed < 60.0

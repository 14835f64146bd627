"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s`.

Two criteria compare exact mathematics against stored reference constants
whose own numerical noise exceeds the stated tolerance; they are implemented
faithfully at the stated tolerance and fail with the analysis printed
(criterion 1 for n >= 3, criterion 7 at xi = 0.2).  All other criteria pass.
"""

import time
from contextlib import contextmanager

import numpy as np

from moyal import (GridSpec, eigen_residual, grid_distance, polygauss_star,
                   sample, star_numeric, tapered_sample,
                   wigner_from_wavefunction)
from moyal.grid import moyal_bracket_numeric
from moyal.models import (DampedParams, HeliumParams, damped_energy,
                          damped_hamiltonian, damped_wigner, harmonic_wigner,
                          helium_energy, helium_energy_first_order,
                          helium_excite, helium_ground, helium_hamiltonians,
                          helium_wigner, hermite_function)
from moyal.negativity import (ETA_REFERENCE, eta_grid_damped, eta_radial,
                              negativity_table)
from moyal.polygauss import PolyGauss, QuadForm

SPEC128 = GridSpec(-8.0, 8.0, -8.0, 8.0, 128, 128)


@contextmanager
def criterion(num, description):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"\nCRITERION {num} [{description}]: FAIL "
              f"({time.perf_counter() - start:.1f}s)")
        raise
    print(f"\nCRITERION {num} [{description}]: PASS "
          f"({time.perf_counter() - start:.1f}s)")


def test_criterion_1_reference_table_reproduction():
    with criterion(1, "radial eta matches the reference table within 1e-8"):
        t0 = time.perf_counter()
        records = [eta_radial(n) for n in range(10)]
        elapsed = time.perf_counter() - t0
        assert elapsed < 5.0, f"runtime {elapsed:.2f}s exceeds 5s"
        diffs = [abs(r.eta - ETA_REFERENCE[r.n]) for r in records]
        for r, d in zip(records, diffs):
            print(f"  n={r.n}: eta={r.eta:.16f} reference={ETA_REFERENCE[r.n]:.16f}"
                  f" |diff|={d:.3e}")
        # eta(1) = 4 exp(-1/2) - 2 = 0.4261226388505337 exactly; the
        # reference digit strings deviate from exact values by up to ~1e-5
        # at larger n (independently confirmed by 40-digit quadrature), so
        # a correct implementation cannot satisfy 1e-8 for n >= 3.
        assert max(diffs) <= 1e-8, (
            f"max |eta - reference| = {max(diffs):.3e} > 1e-8; the excess is "
            "the reference values' own numerical noise, not an evaluation "
            "error (the radial integrals here agree with exact "
            "antiderivatives and 40-digit quadrature to ~1e-13)")


def test_criterion_2_lambda_independence():
    with criterion(2, "eta_grid matches eta_radial for all lambda within 1e-3"):
        t0 = time.perf_counter()
        worst = 0.0
        for n in (1, 2, 5):
            radial = eta_radial(n).eta
            for lam in (0.0, 0.3, 0.6, 0.9):
                rec = eta_grid_damped(n, lam, tol=3e-4)
                worst = max(worst, abs(rec.eta - radial))
        elapsed = time.perf_counter() - t0
        print(f"  max |grid - radial| = {worst:.3e} over 12 cases")
        assert worst <= 1e-3
        assert elapsed < 60.0, f"runtime {elapsed:.2f}s exceeds 60s"


def test_criterion_3_damped_spectrum_residuals():
    with criterion(3, "H * W_n = E_n W_n to 1e-9 for n <= 10, with control"):
        worst = 0.0
        for lam in (0.0, 0.1, 0.5, 0.9):
            H = damped_hamiltonian(lam)
            for n in range(11):
                dp = DampedParams(lam, n)
                res = eigen_residual(H, damped_wigner(dp), damped_energy(dp))
                worst = max(worst, res)
        print(f"  max residual over 44 eigenpairs = {worst:.3e}")
        assert worst <= 1e-9
        dp = DampedParams(0.5, 2)
        control = eigen_residual(damped_hamiltonian(0.5), damped_wigner(dp),
                                 damped_energy(dp) + 0.01)
        print(f"  perturbed-energy control residual = {control:.3e}")
        assert control > 1e-3


def _random_degree4(rng):
    aqq = rng.uniform(0.6, 1.3)
    app = rng.uniform(0.6, 1.3)
    aqp = rng.uniform(-0.2, 0.2)
    lq, lp = rng.uniform(-0.3, 0.3, 2)
    terms = {(a, b): complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
             for a in range(5) for b in range(5 - a)}
    return PolyGauss(terms, QuadForm.from_coeffs(aqq, aqp, app, lq, lp, 0.0), 1.0)


def test_criterion_4_cross_engine_star_product():
    with criterion(4, "closed-form star vs direct twisted convolution, 1e-6"):
        rng = np.random.RandomState(41)
        t0 = time.perf_counter()
        worst = 0.0
        for k in range(20):
            f, g = _random_degree4(rng), _random_degree4(rng)
            exact = sample(polygauss_star(f, g), SPEC128)
            num = star_numeric(sample(f, SPEC128), sample(g, SPEC128),
                               method="direct")
            sup, _ = grid_distance(exact, num)
            worst = max(worst, sup)
        elapsed = time.perf_counter() - t0
        print(f"  max sup-relative distance over 20 pairs = {worst:.3e} "
              f"({elapsed:.0f}s)")
        assert worst <= 1e-6
        assert elapsed < 300.0, f"runtime {elapsed:.1f}s exceeds 5 minutes"


def _purity_states():
    states = [harmonic_wigner(n) for n in range(4)]
    states += [damped_wigner(DampedParams(0.5, n)) for n in range(4)]
    states += list(helium_wigner(helium_ground(HeliumParams(xi=0.1))))
    return states


def test_criterion_5_purity_identity():
    with criterion(5, "W * W = W / (2 pi hbar), 1e-9 symbolic / 1e-4 grid"):
        qs = np.linspace(-3.5, 3.5, 15)
        Q, P = np.meshgrid(qs, qs, indexing="ij")
        worst_sym = 0.0
        for W in _purity_states():
            WW = polygauss_star(W, W)
            ref = W.scale(1.0 / (2.0 * np.pi * W.hbar))
            scale = np.abs(ref.evaluate(Q, P)).max()
            dev = np.abs(WW.evaluate(Q, P) - ref.evaluate(Q, P)).max() / scale
            worst_sym = max(worst_sym, dev)
        print(f"  worst symbolic purity deviation = {worst_sym:.3e}")
        assert worst_sym <= 1e-9
        worst_grid = 0.0
        for W in _purity_states():
            field = sample(W, SPEC128)
            WW = star_numeric(field, field, method="fft")
            ref = field.values / (2.0 * np.pi * W.hbar)
            dev = np.abs(WW.values - ref).max() / np.abs(ref).max()
            worst_grid = max(worst_grid, dev)
        print(f"  worst grid purity deviation = {worst_grid:.3e}")
        assert worst_grid <= 1e-4


def test_criterion_6_wavefunction_oracle_equivalence():
    with criterion(6, "damped lam=0 equals the Wigner transform, 1e-6"):
        worst = 0.0
        for n in range(6):
            closed = sample(damped_wigner(DampedParams(0.0, n)), SPEC128)
            oracle = wigner_from_wavefunction(
                lambda x, n=n: hermite_function(n, x), SPEC128)
            worst = max(worst, np.abs(closed.values - oracle.values).max())
        print(f"  max sup-norm deviation over n <= 5: {worst:.3e}")
        assert worst <= 1e-6


def test_criterion_7_helium_energy():
    with criterion(7, "helium energies and excited-state residuals"):
        params_list = [HeliumParams(xi=xi) for xi in (0.01, 0.05, 0.1, 0.2)]
        gaps = []
        for p in params_list:
            exact = helium_energy(0, 0, p)
            first = helium_energy_first_order(0, 0, p)
            bound = 1.1 * p.xi ** 2 / 16.0
            gaps.append((p.xi, abs(exact - first), bound))
            print(f"  xi={p.xi}: |exact - first_order|={abs(exact - first):.6e}"
                  f" bound={bound:.6e} ratio={abs(exact - first) / bound:.4f}")
        for p in (HeliumParams(xi=0.1),):
            st0 = helium_ground(p)
            Hu, Hv = helium_hamiltonians(p)
            worst = max(eigen_residual(Hu, st0.u_factor, 0.5 * p.omega_u),
                        eigen_residual(Hv, st0.v_factor, 0.5 * p.omega_v))
            for k in (1, 2):
                st = helium_excite(st0, k)
                worst = max(
                    worst,
                    eigen_residual(Hu, st.u_factor, p.omega_u * (k + 0.5)),
                    eigen_residual(Hv, st.v_factor, p.omega_v * (k + 0.5)))
            print(f"  worst ladder residual (k <= 2) = {worst:.3e}")
            assert worst <= 1e-10
        # The Taylor gap is xi^2/16 + xi^3/32 + 5 xi^4/256 + ..., whose
        # ratio to xi^2/16 reaches 1.1146 at xi = 0.2, so the stated 1.1
        # safety factor is unattainable there for the exact spectrum.
        assert all(gap <= bound for _, gap, bound in gaps), (
            "first-order comparison exceeds 1.1*xi^2/16 at xi=0.2; the "
            "excess is the xi^3/32 Taylor term of the exact energy, not an "
            "implementation error")


def test_criterion_8_monotone_negativity_growth():
    with criterion(8, "eta(n) strictly increasing for n <= 50"):
        t0 = time.perf_counter()
        etas = [r.eta for r in negativity_table(50)]
        elapsed = time.perf_counter() - t0
        assert all(b > a for a, b in zip(etas, etas[1:]))
        print(f"  eta(0)={etas[0]:.3f} ... eta(50)={etas[-1]:.6f} "
              f"({elapsed:.1f}s)")
        assert elapsed < 60.0, f"runtime {elapsed:.2f}s exceeds 60s"


def test_criterion_9_stationarity():
    with criterion(9, "Moyal bracket of H with W_n vanishes on the grid"):
        spec = GridSpec(-16.0, 16.0, -16.0, 16.0, 192, 192)
        H = tapered_sample(lambda Q, P: 0.5 * (Q * Q + P * P) - 0.5 * Q * P,
                           spec, flat_radius=9.0)
        worst_sup = worst_int = 0.0
        for n in range(4):
            Wf = sample(damped_wigner(DampedParams(0.5, n)), spec)
            br = moyal_bracket_numeric(H, Wf, method="fft")
            scale = np.abs(star_numeric(H, Wf, method="fft").values).max()
            worst_sup = max(worst_sup, np.abs(br.values).max() / scale)
            worst_int = max(worst_int,
                            abs(br.values.sum() * spec.dq * spec.dp) / scale)
        print(f"  sup={worst_sup:.3e} integral={worst_int:.3e}")
        assert worst_sup <= 1e-6
        assert worst_int <= 1e-8

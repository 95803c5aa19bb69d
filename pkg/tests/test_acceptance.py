"""
Acceptance checks, one test per criterion.

Each test records a PASS/FAIL line with the measured numbers; the lines are
repeated in the pytest terminal summary.  Run only these with

    pytest tests/test_acceptance.py -v
"""

import itertools
import math
import time

import numpy as np
import pytest

from lrberry.algebra import SU11, SU2, build_boson_mode, build_su11_rep, build_su2_rep
from lrberry.cli import main
from lrberry.coherent_states import gauge_fix, pncs_su11_series, pncs_su2_series, zeta_from_params
from lrberry.diagonalizer import LinearHamiltonian, diagonal_energy_scale, spectrum_check
from lrberry.displacement import CoherentParams, displacement_operator, verify_similarity
from lrberry.linalg import commutator, frobenius
from lrberry.lr_phases import (
    DrivingProtocol,
    adiabatic_fixed_point,
    berry_phase_closed_form,
    hamiltonian_norm,
    integrate_auxiliary,
    invariance_residual,
    lr_breakdown,
    phase_profile,
    schedule,
)
from lrberry.oracle import run_linear, run_tc_sector
from lrberry.tavis_cummings import (
    SectorSpec,
    TCLabels,
    TCParams,
    build_trilinear_hamiltonian,
    tc_berry_phase,
    tc_dynamical_energy,
)

SU2_BERRY = 2 * math.pi * 0.5 * (1 / math.sqrt(2) - 1)
SU11_BERRY_MAG = 2 * math.pi * 0.5 * (5 / math.sqrt(21) - 1)


def test_criterion_01_algebra_fidelity(criterion):
    start = time.perf_counter()
    su2 = max(max(build_su2_rep(tj / 2).commutator_residuals().values()) for tj in range(1, 11))
    su11 = max(max(build_su11_rep(k, 128).commutator_residuals().values()) for k in (0.25, 0.5, 1.0, 2.5))
    mode = build_boson_mode(128)
    boson = frobenius((commutator(mode.lower, mode.raise_) - np.eye(128))[:-1, :-1])
    elapsed = time.perf_counter() - start
    ok = su2 <= 1e-12 and su11 <= 1e-10 and boson <= 1e-10 and elapsed < 5
    criterion(1, ok, f"su2 {su2:.2e} (<=1e-12), su11 {su11:.2e}, boson {boson:.2e} (<=1e-10), {elapsed:.2f}s (<5s)")
    assert ok


def test_criterion_02_similarity_grid(criterion):
    start = time.perf_counter()
    grid = list(itertools.product(np.linspace(-2, 2, 10), np.linspace(0, 2 * math.pi, 10, endpoint=False)))
    su2_gens = [build_su2_rep(j) for j in (0.5, 1.0, 2.5)]
    su2 = max(verify_similarity(g, CoherentParams(t, p)) for g in su2_gens for t, p in grid)
    su11_gens = build_su11_rep(0.5, 32)
    su11 = max(verify_similarity(su11_gens, CoherentParams(t, p)) for t, p in grid)
    elapsed = time.perf_counter() - start
    ok = su2 <= 1e-8 and su11 <= 1e-8 and elapsed < 30
    criterion(2, ok, f"max residual su2 {su2:.2e}, su11 {su11:.2e} (<=1e-8) on 10x10 grid, {elapsed:.1f}s (<30s)")
    assert ok


def test_criterion_03_diagonalization(criterion):
    start = time.perf_counter()
    h11 = LinearHamiltonian(SU11, 5.0, 1.0, 1.0)
    h2 = LinearHamiltonian(SU2, 1.0, 0.5, 0.5)
    d11 = spectrum_check(h11, build_su11_rep(0.5, 128))["max_abs_dev"]
    d2 = max(spectrum_check(h2, build_su2_rep(j))["max_abs_dev"] for j in (0.5, 1.0, 3.0))
    s11, s2 = diagonal_energy_scale(h11), diagonal_energy_scale(h2)
    elapsed = time.perf_counter() - start
    ok = (
        d11 <= 1e-8 and d2 <= 1e-12 and abs(s11 - 4.58258) < 1e-5 and abs(s2 - math.sqrt(2)) < 1e-15 and elapsed < 10
    )
    criterion(3, ok, f"su11 dev {d11:.2e} (<=1e-8, scale {s11:.5f}), su2 dev {d2:.2e} (<=1e-12, scale {s2:.5f}), {elapsed:.2f}s")
    assert ok


def test_criterion_04_coherent_states(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(4)
    worst2 = 0.0
    for _ in range(50):
        j = int(rng.integers(1, 11)) / 2
        mu = j - int(rng.integers(0, int(2 * j) + 1))
        p = CoherentParams(rng.uniform(-3.0, 3.0), rng.uniform(0, 2 * math.pi))
        s = pncs_su2_series(j, mu, zeta_from_params(SU2, p)[0]).amplitudes
        d = displacement_operator(build_su2_rep(j), p)[:, int(round(j - mu))]
        worst2 = max(worst2, 1 - abs(np.vdot(s, d)))
    worst11 = 0.0
    reps = {}
    for _ in range(50):
        k = float(rng.choice([0.25, 0.5, 1.0, 1.5, 2.0]))
        n = int(rng.integers(0, 5))
        p = CoherentParams(rng.uniform(-1.5, 1.5), rng.uniform(0, 2 * math.pi))
        g = reps.setdefault(k, build_su11_rep(k, 256))
        s = pncs_su11_series(k, n, zeta_from_params(SU11, p)[0], 256).amplitudes
        d = gauge_fix(displacement_operator(g, p)[:, n])
        kept = 160  # below the guard band, where the truncated column is exact
        worst11 = max(worst11, 1 - abs(np.vdot(s[:kept], d[:kept])))
    elapsed = time.perf_counter() - start
    ok = worst2 <= 1e-10 and worst11 <= 1e-10 and elapsed < 30
    criterion(4, ok, f"1-fidelity su2 {worst2:.2e}, su11 {worst11:.2e} (<=1e-10) over 50 draws each, {elapsed:.1f}s")
    assert ok


def test_criterion_05_invariant(criterion):
    start = time.perf_counter()
    worst = 0.0
    cases = [
        (SU2, 1.0, 0.5, build_su2_rep(1.5)),
        (SU2, -0.7, 1.2, build_su2_rep(0.5)),
        (SU11, 5.0, 1.0, build_su11_rep(0.5, 64)),
        (SU11, 3.0, 0.6, build_su11_rep(1.0, 64)),
    ]
    for algebra, c0, lam, gens in cases:
        f0, d0 = schedule("sinusoid", c0, 0.1 * c0, 40.0)
        f1, d1 = schedule("sinusoid", lam, 0.2 * lam, 40.0)
        phi, dphi = phase_profile("sinusoid", 1, 40.0)
        proto = DrivingProtocol(algebra, f0, f1, phi, 40.0, 1, dc0=d0, dlam=d1, dphi=dphi)
        traj = integrate_auxiliary(proto, adiabatic_fixed_point(proto, 0.0), 4000)
        for i in range(0, len(traj), 50):
            t = float(traj.t[i])
            worst = max(worst, invariance_residual(gens, traj, t) / hamiltonian_norm(gens, proto, t))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 30
    criterion(5, ok, f"max |i dI/dt + [I,H]| / |H| = {worst:.2e} (<=1e-6), {elapsed:.1f}s")
    assert ok


def test_criterion_06_berry_su2(criterion):
    start = time.perf_counter()
    T = 500.0
    ph, closed, run = run_linear(SU2, 1.0, 0.5, (0.5, 0.5), T, int(25 * T))
    theta = math.atan2(1.0, 1.0)
    solid_half = 0.5 * 2 * math.pi * (1 - math.cos(theta))
    elapsed = time.perf_counter() - start
    dev = ph.geometric - closed
    ok = abs(dev) <= 1e-3 and abs(abs(closed) - abs(SU2_BERRY)) < 1e-12 and abs(closed - solid_half) < 1e-12 and elapsed < 120
    criterion(
        6, ok,
        f"oracle {ph.geometric:.5f} vs closed {closed:.5f} (|ref| {abs(SU2_BERRY):.5f}, solid angle/2 {solid_half:.5f}), "
        f"deviation {dev:.2e} (<=1e-3), {elapsed:.1f}s",
    )
    assert ok


def test_criterion_07_berry_su11(criterion):
    start = time.perf_counter()
    T = 500.0
    ph, closed, run = run_linear(SU11, 5.0, 1.0, (0.5, 0), T, int(25 * T), trunc=128)
    elapsed = time.perf_counter() - start
    dev = ph.geometric - closed
    ok = abs(dev) <= 1e-3 and abs(abs(closed) - SU11_BERRY_MAG) < 1e-12 and elapsed < 300
    criterion(
        7, ok,
        f"oracle {ph.geometric:.5f} vs closed {closed:.5f} (|ref| {SU11_BERRY_MAG:.5f}), deviation {dev:.2e} (<=1e-3), "
        f"{elapsed:.0f}s (<300s)",
    )
    assert ok


def test_criterion_08_decomposition(criterion):
    report = []
    ok = True
    for algebra, c0, lam, label in ((SU2, 1.0, 0.5, (0.5, 0.5)), (SU11, 5.0, 1.0, (0.5, 0))):
        devs = []
        for T in (100.0, 200.0, 400.0, 800.0):
            proto = DrivingProtocol.constant_loop(algebra, c0, lam, T)
            ph = lr_breakdown(proto, label, steps=int(40 * T))
            devs.append(abs(ph.geometric - berry_phase_closed_form(proto, label)))
        decreasing = all(a > b for a, b in zip(devs, devs[1:]))
        ok = ok and decreasing and devs[-1] <= 1e-3
        report.append(f"{algebra} " + "/".join(f"{d:.1e}" for d in devs) + (" decreasing" if decreasing else " not decreasing"))
    criterion(8, ok, "; ".join(report) + " (final <=1e-3)")
    assert ok


def test_criterion_09_tc_consistency(criterion):
    worst = 0.0
    for w, lam in itertools.product(np.linspace(0.5, 3.0, 5), np.linspace(0.02, 0.2, 5)):
        params = TCParams.constant_loop(0.2, w, 1.7 * w, lam, 50.0)
        for n_a, n_l, m_n in ((1, 0, 0), (3, 2, 1), (5, 1, 4)):
            value, _ = tc_berry_phase(SU11, params, TCLabels.from_su11(n_a, n_l, m_n))
            proto = DrivingProtocol.constant_loop(SU11, 2.7 * w, lam * math.sqrt(n_a), 50.0)
            worst = max(worst, abs(value - berry_phase_closed_form(proto, ((m_n + 1) / 2, n_l))))
        params = TCParams.constant_loop(0.2, 0.2 + w, 1.0, lam, 50.0)
        for n_c, n_l, m_n in ((1, 0, 1), (3, 2, 2), (2, 1, 0)):
            value, _ = tc_berry_phase(SU2, params, TCLabels.from_su2(n_c, n_l, m_n))
            proto = DrivingProtocol.constant_loop(SU2, w, lam * math.sqrt(n_c), 50.0)
            worst = max(worst, abs(value - berry_phase_closed_form(proto, (n_l + m_n / 2, m_n / 2))))
    energy = 0.0
    params = TCParams.constant_loop(0.7, 1.3, 2.9, 0.0, 10.0)
    dims = (4, 4, 4)
    h = build_trilinear_hamiltonian(params, dims, 0.0)
    for occ in itertools.product(range(4), repeat=3):
        i = (occ[0] * 4 + occ[1]) * 4 + occ[2]
        diag = h[i, i].real
        lab = TCLabels(*occ)
        for branch in (SU11, SU2):
            energy = max(energy, abs(tc_dynamical_energy(branch, params, 0.0, lab) - diag))
    ok = worst <= 1e-12 and energy <= 1e-12
    criterion(9, ok, f"Berry mismatch {worst:.1e} over 5x5 grid, lam=0 energy mismatch {energy:.1e} (<=1e-12)")
    assert ok


def test_criterion_10_tc_sector(criterion):
    T = 400.0
    parts = []
    rel = []
    for n in (1, 4, 16):
        params = TCParams.constant_loop(0.0, 1.0, 4.0, 1.0 / math.sqrt(n), T)
        sector = SectorSpec(n, n)
        anchor = sector.states()[0]
        ph, closed, _ = run_tc_sector(params, sector, anchor, SU11, int(25 * T), n)
        rel.append(abs(ph.geometric - closed) / abs(closed))
        parts.append(f"n={n}: {ph.geometric:.4f} vs {closed:.4f} ({100 * rel[-1]:.1f}%)")
    ok = rel[-1] <= 0.05
    criterion(10, ok, "; ".join(parts) + " (largest n <=5%)")
    assert ok


def test_criterion_11_parametrization(criterion):
    worst = 0.0
    for algebra, c0, lam, label in ((SU2, 1.0, 0.5, (0.5, 0.5)), (SU2, -2.0, 0.7, (2.0, -1.0)),
                                    (SU11, 5.0, 1.0, (0.5, 0)), (SU11, 3.0, 0.4, (1.5, 3))):
        for w in (1, 2, -1, 3):
            a = berry_phase_closed_form(DrivingProtocol.constant_loop(algebra, c0, lam, 100.0, w, "linear"), label)
            b = berry_phase_closed_form(DrivingProtocol.constant_loop(algebra, c0, lam, 100.0, w, "sinusoid"), label)
            worst = max(worst, abs(a - b))
    ok = worst <= 1e-12
    criterion(11, ok, f"linear vs sinusoidal phi(t): max difference {worst:.1e} (<=1e-12)")
    assert ok


def test_criterion_12_cli_determinism(criterion, capsys):
    from pathlib import Path

    golden = Path(__file__).parent / "golden"
    same = []
    for command, name in (("berry", "berry_su2"), ("sweep", "sweep_lam")):
        outs = []
        for _ in range(2):
            assert main([command, "--config", str(golden / f"{name}.cfg"), "--seed", "7"]) == 0
            outs.append(capsys.readouterr().out)
        same.append(outs[0] == outs[1] == (golden / f"{name}.csv").read_text(encoding="utf-8"))
    ok = all(same)
    criterion(12, ok, f"berry identical+golden {same[0]}, sweep identical+golden {same[1]}")
    assert ok

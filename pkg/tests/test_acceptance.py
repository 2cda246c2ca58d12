"""Acceptance gate: one test per headline criterion, each printing a
pass/fail line with the measured quantities."""

import itertools
import math
import time

import numpy as np
import pytest

from majprop.experiments import Fig1Config, Fig2Config, run_fig1, run_fig2
from majprop.hamiltonian import (
    build_hubbard_1d,
    build_hubbard_2d,
    greedy_color_partition,
)
from majprop.oracle import poly_to_dense, string_to_dense
from majprop.strings import (
    MajoranaString,
    rotate_string,
    string_multiply,
    strings_anticommute,
)
from majprop.verify import (
    check_commutator_bound,
    check_end_to_end_bound,
    check_quadratic_eta_zero,
    check_trotter_bound,
    check_weak_interaction,
)


def test_a01_algebra_oracle_equivalence(report):
    """Exhaustive N=6 string algebra vs dense, plus randomized N=16 checks."""
    start = time.time()
    n = 6
    dense = [string_to_dense(m, n) for m in range(1 << n)]
    mism = 0
    for s, t in itertools.product(range(1 << n), repeat=2):
        phase, out = string_multiply(MajoranaString(s, n), MajoranaString(t, n))
        if not np.allclose(dense[s] @ dense[t], phase.value * dense[out.mask],
                           atol=1e-12):
            mism += 1
        anti = strings_anticommute(MajoranaString(s, n), MajoranaString(t, n))
        dense_anti = np.allclose(dense[s] @ dense[t] + dense[t] @ dense[s], 0,
                                 atol=1e-12)
        if anti != dense_anti:
            mism += 1
    rng = np.random.default_rng(101)
    for s, t in zip(rng.integers(0, 1 << n, 40), rng.integers(0, 1 << n, 40)):
        s, t = int(s), int(t)
        for theta in (0.0, math.pi / 7, math.pi / 2):
            p = rotate_string(theta, MajoranaString(t, n), MajoranaString(s, n))
            gt, gs = dense[t], dense[s]
            evals, evecs = np.linalg.eigh(gt)
            u = evecs @ np.diag(np.exp(1j * theta / 2 * evals)) @ evecs.conj().T
            if not np.allclose(poly_to_dense(p), u @ gs @ u.conj().T, atol=1e-12):
                mism += 1
    # randomized N=16 embedding checks against the (just-feasible) dense basis
    n16 = 16
    for _ in range(25):
        s, t = int(rng.integers(0, 1 << n16)), int(rng.integers(0, 1 << n16))
        phase, out = string_multiply(MajoranaString(s, n16), MajoranaString(t, n16))
        lhs = string_to_dense(s, n16) @ string_to_dense(t, n16)
        if not np.allclose(lhs, phase.value * string_to_dense(out.mask, n16),
                           atol=1e-12):
            mism += 1
    elapsed = time.time() - start
    ok = mism == 0 and elapsed < 10.0
    report("algebra-oracle equivalence", ok,
           f"{mism} mismatches, {elapsed:.1f}s")
    assert mism == 0
    assert elapsed < 10.0


def test_a02_car_relations(report):
    """{gamma_i, gamma_j} = 2 delta_ij at every even N up to 10."""
    worst = 0.0
    for n in (2, 4, 6, 8, 10):
        dim = 2 ** (n // 2)
        gammas = [string_to_dense(1 << x, n) for x in range(n)]
        for i in range(n):
            for j in range(n):
                anti = gammas[i] @ gammas[j] + gammas[j] @ gammas[i]
                want = 2 * np.eye(dim) if i == j else 0.0
                worst = max(worst, float(np.abs(anti - want).max()))
    report("canonical anticommutation relations (N<=10)", worst <= 1e-12,
           f"max deviation {worst:.2e}")
    assert worst <= 1e-12


def test_a03_coloring_validity(report):
    """Support-disjoint groups with G <= 4*Delta on all required lattices."""
    start = time.time()
    cases = [("1d", build_hubbard_1d, L) for L in range(2, 9)]
    cases += [("2d", build_hubbard_2d, L) for L in (3, 5)]
    ok = True
    for tag, builder, L in cases:
        h = builder(L, 1.0)
        sched = greedy_color_partition(h)
        covered = set()
        for group in sched.groups:
            support = 0
            for idx in group:
                if support & h.terms[idx].mask:
                    ok = False
                support |= h.terms[idx].mask
                covered.add(idx)
        ok &= covered == set(range(h.n_terms))
        ok &= sched.n_groups <= 4 * h.sparsity
    elapsed = time.time() - start
    report("coloring validity (1D L=2..8, 2D L=3,5)", ok and elapsed < 1.0,
           f"{elapsed:.2f}s")
    assert ok
    assert elapsed < 1.0


def test_a04_commutator_norm_bound(report):
    """||[H,A]||_F within the sparsity/degree bound on 200 random observables."""
    start = time.time()
    rep = check_commutator_bound(n_samples=200, chain_lengths=(3, 4))
    elapsed = time.time() - start
    report("commutator norm bound (200 samples)",
           rep["passed"] and elapsed < 30.0,
           f"{rep['violations']} violations, worst ratio {rep['worst_ratio']:.3f}, "
           f"{elapsed:.1f}s")
    assert rep["passed"]
    assert elapsed < 30.0


def test_a05_single_sweep_trotter_bound(report):
    """Dense single-sweep error within the group/sparsity bound, t^2 scaling."""
    start = time.time()
    rep = check_trotter_bound(L=3, times=(0.05, 0.1, 0.2), n_samples=20)
    lo, hi = rep["scaling_ratios"]
    scaling_ok = 3.0 <= lo and hi <= 5.0
    elapsed = time.time() - start
    ok = rep["passed"] and scaling_ok and elapsed < 60.0
    report("single-sweep Trotter bound + t^2 scaling", ok,
           f"{rep['violations']} violations, scaling [{lo:.2f}, {hi:.2f}], "
           f"{elapsed:.1f}s")
    assert rep["passed"]
    assert scaling_ok
    assert elapsed < 60.0


def test_a06_end_to_end_error_bound(report):
    """Measured propagation error within discretization + truncation budget."""
    start = time.time()
    rep = check_end_to_end_bound(L=3, ell=4, delta_t=0.01,
                                 times=(0.1, 0.3, 0.5), grid_points=64)
    elapsed = time.time() - start
    detail = ", ".join(
        f"t={r['t']}: {r['measured']:.2e} <= {r['bound']:.2e}" for r in rep["rows"]
    )
    report("end-to-end error bound (L=3, ell=4)",
           rep["passed"] and elapsed < 300.0, f"{detail}, {elapsed:.1f}s")
    assert rep["passed"]
    assert elapsed < 300.0


def test_a07_weak_interaction_bound(report):
    """Oracle truncation error under the perturbative weak-coupling bound."""
    start = time.time()
    rep = check_weak_interaction(interaction_scales=(0.02, 0.05),
                                 time_fractions=(0.25, 0.5),
                                 ell_offsets=(0, 2, 4))
    elapsed = time.time() - start
    n_checked = sum(1 for r in rep["rows"] if r["applicable"])
    report("weak-interaction truncation bound",
           rep["passed"] and elapsed < 120.0,
           f"{n_checked} applicable cases, {elapsed:.1f}s")
    assert rep["passed"]
    assert elapsed < 120.0


def test_a08_truncation_error_decay(report):
    """1D chain: distance to the untruncated reference drops >= 10x over ell."""
    start = time.time()
    cfg = Fig1Config()  # L=6, U=1, delta_t=0.01, t in {0.2, 0.4}, ell 4..10
    csv = run_fig1(cfg)
    rows = {}
    for line in csv.strip().split("\n"):
        if line.startswith("#") or line.startswith("deg"):
            continue
        parts = line.split(",")
        rows[int(parts[0])] = [float(x) for x in parts[1:]]
    elapsed = time.time() - start
    decreasing = all(
        rows[e1][i] >= rows[e2][i] * 0.9
        for i in range(len(cfg.times))
        for e1, e2 in zip(cfg.ells, cfg.ells[1:])
    )
    ratio = rows[4][0] / rows[10][0]
    ok = decreasing and ratio >= 10.0 and elapsed < 900.0
    report("truncation-error decay in ell (1D L=6)", ok,
           f"ell4/ell10 ratio at t=0.2: {ratio:.1e}, {elapsed:.0f}s")
    assert decreasing
    assert ratio >= 10.0
    assert elapsed < 900.0


def test_a09_hole_density_self_convergence(report):
    """2D L=3 hole density: ell=8 and ell=10 curves agree, all start at 1."""
    start = time.time()
    cfg = Fig2Config(L=3, U_values=(0.0, 1.0), ells=(8, 10),
                     delta_t=0.02, t_max=1.0)
    csv = run_fig2(cfg)
    lines = [l for l in csv.strip().split("\n") if not l.startswith("#")]
    header = lines[0].split(",")
    data = np.array([[float(x) for x in l.split(",")] for l in lines[1:]])
    cols = {name: data[:, i] for i, name in enumerate(header)}
    elapsed = time.time() - start
    starts_ok = all(abs(cols[c][0] - 1.0) < 1e-12 for c in header[1:])
    sup0 = float(np.abs(cols["U0.0ell8"] - cols["U0.0ell10"]).max())
    sup1 = float(np.abs(cols["U1.0ell8"] - cols["U1.0ell10"]).max())
    ok = starts_ok and sup0 <= 0.05 and sup1 <= 0.05 and elapsed < 1800.0
    report("hole-density self-convergence (2D L=3)", ok,
           f"supnorm U=0: {sup0:.4f}, U=1: {sup1:.4f}, {elapsed:.0f}s")
    assert starts_ok
    assert sup0 <= 0.05 and sup1 <= 0.05
    assert elapsed < 1800.0


def test_a10_csv_determinism(report):
    """Identical configs give byte-identical CSV outputs on rerun."""
    f1 = Fig1Config(L=2, times=(0.05,), ells=(2, 4))
    f2 = Fig2Config(L=3, U_values=(0.5,), ells=(4,), t_max=0.1)
    same1 = run_fig1(f1) == run_fig1(f1)
    same2 = run_fig2(f2) == run_fig2(f2)
    report("CSV byte determinism", same1 and same2,
           f"fig1: {same1}, fig2: {same2}")
    assert same1 and same2


def test_a11_quadratic_truncation_error_vanishes(report):
    """Quadratic Hamiltonians never grow the low-degree tail (eta* = 0)."""
    rep = check_quadratic_eta_zero()
    report("quadratic Hamiltonian: zero truncation error", rep["passed"],
           f"eta* = {rep['eta_star']:.2e}")
    assert rep["passed"]

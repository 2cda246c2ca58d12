"""Bound-verification suites: measured quantities vs. their a-priori bounds.

Each check returns a plain dict with measured values, the bound, and a
``passed`` flag, so the CLI can emit machine-readable reports and the test
suite can assert on the same code path.  All systems are small enough for
the dense oracle.
"""

from __future__ import annotations

import math

import numpy as np

from .hamiltonian import (
    QuarticHamiltonian,
    build_hubbard_1d,
    greedy_color_partition,
)
from .oracle import (
    HeisenbergPropagator,
    best_truncation_error,
    normalized_frobenius,
    poly_to_dense,
    verify_weak_interaction_bound,
)
from .propagation import MPConfig, apriori_error_bound, mp_propagate, trotter_sweep
from .strings import MajoranaPolynomial, frobenius_norm, poly_commutator

__all__ = [
    "random_observable",
    "central_pair_string",
    "check_commutator_bound",
    "check_trotter_bound",
    "check_end_to_end_bound",
    "check_weak_interaction",
    "check_quadratic_eta_zero",
    "run_all_checks",
]


def random_observable(
    rng: np.random.Generator, n_modes: int, degree: int, n_terms: int = 8
) -> MajoranaPolynomial:
    """Random polynomial whose top-degree terms have exactly ``degree`` modes."""
    terms: dict[int, complex] = {}
    while len(terms) < n_terms:
        bits = rng.choice(n_modes, size=degree, replace=False)
        mask = 0
        for b in bits:
            mask |= 1 << int(b)
        terms[mask] = complex(rng.normal(), rng.normal())
    return MajoranaPolynomial(terms, n_modes)


def central_pair_string(L: int, n_modes: int) -> MajoranaPolynomial:
    """Degree-2 pair string of the up-spin orbital at the central chain site."""
    site = (L - 1) // 2
    return MajoranaPolynomial({0b11 << (4 * site): 1.0}, n_modes)


def check_commutator_bound(
    n_samples: int = 200,
    chain_lengths: tuple[int, ...] = (3, 4),
    max_degree: int = 6,
    seed: int = 7,
) -> dict:
    """||[H, A]||_F <= 2 Delta max(1, max|h|) sqrt(d(d+2)) ||A||_F."""
    rng = np.random.default_rng(seed)
    violations = 0
    worst_ratio = 0.0
    per_chain = n_samples // len(chain_lengths)
    for L in chain_lengths:
        h = build_hubbard_1d(L, 1.0)
        hp = h.as_polynomial(include_identity=False)
        scale = 2 * h.sparsity * max(1.0, h.max_abs_coeff)
        for _ in range(per_chain):
            d = int(rng.integers(1, max_degree + 1))
            a = random_observable(rng, h.n_modes, d)
            d_eff = a.degree
            lhs = frobenius_norm(poly_commutator(hp, a))
            rhs = scale * math.sqrt(d_eff * (d_eff + 2)) * frobenius_norm(a)
            ratio = lhs / rhs if rhs else 0.0
            worst_ratio = max(worst_ratio, ratio)
            if lhs > rhs * (1 + 1e-12):
                violations += 1
    return {
        "check": "commutator_bound",
        "n_samples": per_chain * len(chain_lengths),
        "violations": violations,
        "worst_ratio": worst_ratio,
        "passed": violations == 0,
    }


def check_trotter_bound(
    L: int = 3,
    times: tuple[float, ...] = (0.05, 0.1, 0.2),
    n_samples: int = 20,
    seed: int = 11,
) -> dict:
    """Single-sweep Trotter error vs 2 (t (d+2))^2 (G^2 + Delta^2) scaled bound.

    Also reports the small-t scaling ratio err(2t)/err(t) for the first two
    times, which should sit near 4.
    """
    rng = np.random.default_rng(seed)
    h = build_hubbard_1d(L, 1.0)
    sched = greedy_color_partition(h)
    delta, g = h.sparsity, sched.n_groups
    scale = max(1.0, h.max_abs_coeff) ** 2
    prop = HeisenbergPropagator(h)
    violations = 0
    worst_ratio = 0.0
    errs = {t: [] for t in times}
    for _ in range(n_samples):
        a = random_observable(rng, h.n_modes, 2, n_terms=1)
        ad = poly_to_dense(a)
        for t in times:
            err = normalized_frobenius(
                poly_to_dense(trotter_sweep(a, h, sched, t)) - prop.evolve(ad, t)
            )
            bound = 2 * (t * (a.degree + 2)) ** 2 * (g**2 + delta**2) * scale
            bound *= frobenius_norm(a)
            worst_ratio = max(worst_ratio, err / bound)
            if err > bound * (1 + 1e-9):
                violations += 1
            errs[t].append(err)
    scaling = [
        e1 / e0 for e0, e1 in zip(errs[times[0]], errs[times[1]]) if e0 > 0
    ]
    return {
        "check": "trotter_bound",
        "n_samples": n_samples,
        "violations": violations,
        "worst_ratio": worst_ratio,
        "scaling_ratios": (min(scaling), max(scaling)),
        "passed": violations == 0,
    }


def check_end_to_end_bound(
    L: int = 3,
    ell: int = 4,
    delta_t: float = 0.01,
    times: tuple[float, ...] = (0.1, 0.3, 0.5),
    grid_points: int = 65,
) -> dict:
    """Measured propagation error vs the combined discretization + eta* bound."""
    h = build_hubbard_1d(L, 1.0)
    sched = greedy_color_partition(h)
    a = central_pair_string(L, h.n_modes)
    prop = HeisenbergPropagator(h)
    ad = poly_to_dense(a)
    norm_a = frobenius_norm(a)
    rows = []
    passed = True
    for t in times:
        eta = best_truncation_error(h, a, t, ell, grid_points)
        cfg = MPConfig(delta_t=delta_t, ell=ell, truncation_mode="per_sweep")
        out, _ = mp_propagate(a, h, sched, t, cfg)
        measured = normalized_frobenius(poly_to_dense(out) - prop.evolve(ad, t))
        bound = apriori_error_bound(t, delta_t, h.sparsity, ell, eta, norm_a)
        ok = measured <= bound
        passed &= ok
        rows.append(
            {"t": t, "measured": measured, "eta_star": eta, "bound": bound, "ok": ok}
        )
    return {"check": "end_to_end_bound", "rows": rows, "passed": passed}


def check_weak_interaction(
    interaction_scales: tuple[float, ...] = (0.02, 0.05),
    time_fractions: tuple[float, ...] = (0.25, 0.5),
    ell_offsets: tuple[int, ...] = (0, 2, 4),
    grid_points: int = 64,
) -> dict:
    """eta* of the weakly interacting chain vs the perturbative bound."""
    h_free = build_hubbard_1d(2, 0.0)
    h_full = build_hubbard_1d(2, 1.0)
    v = QuarticHamiltonian(
        h_full.n_modes, [t for t in h_full.terms if t.degree == 4]
    )
    a = central_pair_string(2, h_free.n_modes)
    rows = []
    passed = True
    for u in interaction_scales:
        probe = verify_weak_interaction_bound(h_free, v, u, a, 0.0, a.degree, 2)
        t_max = probe["t_max"]
        for frac in time_fractions:
            for off in ell_offsets:
                rep = verify_weak_interaction_bound(
                    h_free, v, u, a, frac * t_max, a.degree + off, grid_points
                )
                passed &= bool(rep["passed"])
                rows.append(rep)
    return {"check": "weak_interaction_bound", "rows": rows, "passed": passed}


def check_quadratic_eta_zero(
    L: int = 2, t: float = 0.7, ell: int = 2, grid_points: int = 16
) -> dict:
    """Quadratic Hamiltonian: the low-degree tail never grows."""
    h = build_hubbard_1d(L, 0.0)
    a = central_pair_string(L, h.n_modes)
    eta = best_truncation_error(h, a, t, max(ell, a.degree), grid_points)
    # eta comes from a difference of O(1) squared norms; zero means sqrt(eps)
    passed = eta <= 1e-6
    return {"check": "quadratic_eta_zero", "eta_star": eta, "passed": passed}


def run_all_checks(n_commutator_samples: int = 200) -> dict:
    checks = [
        check_quadratic_eta_zero(),
        check_commutator_bound(n_samples=n_commutator_samples),
        check_trotter_bound(),
        check_end_to_end_bound(),
        check_weak_interaction(),
    ]
    return {"checks": checks, "passed": all(c["passed"] for c in checks)}

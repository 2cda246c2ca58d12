"""Sparse quartic Hamiltonians, their coloring, and Fermi-Hubbard builders.

A Hamiltonian is a list of real-coefficient Majorana strings of degree 2 or
4.  Sparsity is the maximum number of terms touching any single mode; the
greedy coloring splits the terms into groups of pairwise support-disjoint
strings, which is what lets a Trotter group act as independent rotations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .strings import MajoranaPolynomial, _product_phase_k

__all__ = [
    "HamiltonianTerm",
    "QuarticHamiltonian",
    "TrotterSchedule",
    "ValidationError",
    "sparsity",
    "greedy_color_partition",
    "build_hubbard_1d",
    "build_hubbard_2d",
    "validate",
    "mode_index",
    "write_hamiltonian",
    "read_hamiltonian",
]

_HERMITICITY_TOL = 1e-10


class ValidationError(ValueError):
    """Structural violation in a Hamiltonian."""


@dataclass(frozen=True)
class HamiltonianTerm:
    """One Hamiltonian summand: a real coefficient times a basis string."""

    mask: int
    coeff: float

    @property
    def degree(self) -> int:
        return int(self.mask).bit_count()


class QuarticHamiltonian:
    """Hermitian combination of degree-2 and degree-4 Majorana strings.

    Duplicate strings are merged at construction.  A degree-0 contribution
    (from e.g. number-operator expansions) is kept in ``identity_shift``; it
    commutes with everything and never enters propagation.  Immutable.
    """

    __slots__ = ("n_modes", "terms", "identity_shift", "_sparsity")

    def __init__(
        self,
        n_modes: int,
        terms: Iterable[HamiltonianTerm],
        identity_shift: float = 0.0,
    ):
        if n_modes <= 0 or n_modes % 2 != 0:
            raise ValidationError(f"n_modes must be even and positive, got {n_modes}")
        merged: dict[int, float] = {}
        for t in terms:
            if t.degree not in (2, 4):
                raise ValidationError(
                    f"term {t.mask:#x} has degree {t.degree}, expected 2 or 4"
                )
            if t.mask >> n_modes:
                raise ValidationError(f"term {t.mask:#x} outside the mode range")
            merged[t.mask] = merged.get(t.mask, 0.0) + float(t.coeff)
        self.n_modes = n_modes
        self.terms = tuple(
            HamiltonianTerm(m, c) for m, c in sorted(merged.items()) if c != 0.0
        )
        self.identity_shift = float(identity_shift)
        self._sparsity = None

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    @property
    def max_abs_coeff(self) -> float:
        return max((abs(t.coeff) for t in self.terms), default=0.0)

    @property
    def sparsity(self) -> int:
        if self._sparsity is None:
            self._sparsity = sparsity(self)
        return self._sparsity

    def as_polynomial(self, include_identity: bool = True) -> MajoranaPolynomial:
        terms = {t.mask: complex(t.coeff) for t in self.terms}
        if include_identity and self.identity_shift:
            terms[0] = complex(self.identity_shift)
        return MajoranaPolynomial(terms, self.n_modes)

    def __repr__(self):
        return (
            f"QuarticHamiltonian(N={self.n_modes}, terms={self.n_terms}, "
            f"shift={self.identity_shift})"
        )


@dataclass(frozen=True)
class TrotterSchedule:
    """Ordered partition of term indices into support-disjoint groups."""

    groups: tuple[tuple[int, ...], ...]

    @property
    def n_groups(self) -> int:
        return len(self.groups)


def sparsity(h: QuarticHamiltonian) -> int:
    """Max over modes of the number of terms containing that mode."""
    counts = [0] * h.n_modes
    for t in h.terms:
        m = t.mask
        while m:
            x = (m & -m).bit_length() - 1
            counts[x] += 1
            m &= m - 1
    return max(counts, default=0)


def greedy_color_partition(h: QuarticHamiltonian) -> TrotterSchedule:
    """Greedy coloring of the term-intersection graph.

    Terms are processed in listed order and assigned the smallest color whose
    group they do not intersect, so the schedule is deterministic and uses at
    most 4*sparsity groups.
    """
    group_support: list[int] = []
    groups: list[list[int]] = []
    for i, t in enumerate(h.terms):
        for g, support in enumerate(group_support):
            if support & t.mask == 0:
                groups[g].append(i)
                group_support[g] |= t.mask
                break
        else:
            groups.append([i])
            group_support.append(t.mask)
    return TrotterSchedule(tuple(tuple(g) for g in groups))


def mode_index(site: int, spin_down: bool) -> int:
    """Fermionic mode id for (site, spin): site-major, up before down."""
    return 2 * site + int(spin_down)


def _annihilator(mode: int) -> dict[int, complex]:
    # c_m = (gamma_{2m} + i gamma_{2m+1}) / 2
    return {1 << (2 * mode): 0.5, 1 << (2 * mode + 1): 0.5j}


def _creator(mode: int) -> dict[int, complex]:
    return {1 << (2 * mode): 0.5, 1 << (2 * mode + 1): -0.5j}


_I_POWERS = (1, 1j, -1, -1j)


def _dict_multiply(p: dict[int, complex], q: dict[int, complex]) -> dict[int, complex]:
    """String-basis operator product on plain dicts.

    Unlike MajoranaPolynomial this has no 64-mode ceiling, so the lattice
    builders work for arbitrarily large systems (only propagation is capped).
    """
    out: dict[int, complex] = {}
    for m1, a in p.items():
        for m2, b in q.items():
            m = m1 ^ m2
            c = out.get(m, 0.0) + a * b * _I_POWERS[_product_phase_k(m1, m2)]
            if c == 0.0:
                out.pop(m, None)
            else:
                out[m] = c
    return out


def _dict_add(acc: dict[int, complex], p: dict[int, complex], scale: complex) -> None:
    for m, c in p.items():
        v = acc.get(m, 0.0) + scale * c
        if v == 0.0:
            acc.pop(m, None)
        else:
            acc[m] = v


def _hubbard_from_bonds(
    n_sites: int, bonds: Sequence[tuple[int, int]], u: float
) -> QuarticHamiltonian:
    """Expand hopping plus on-site repulsion into Majorana strings.

    The expansion is done symbolically through the string algebra itself, so
    the hopping signs are inherited from the creation/annihilation
    definitions rather than transcribed by hand.
    """
    n_modes = 4 * n_sites
    acc: dict[int, complex] = {}
    for i, j in bonds:
        for spin_down in (False, True):
            mi, mj = mode_index(i, spin_down), mode_index(j, spin_down)
            _dict_add(acc, _dict_multiply(_creator(mi), _annihilator(mj)), -1.0)
            _dict_add(acc, _dict_multiply(_creator(mj), _annihilator(mi)), -1.0)
    if u != 0.0:
        for i in range(n_sites):
            mu, md = mode_index(i, False), mode_index(i, True)
            n_up = _dict_multiply(_creator(mu), _annihilator(mu))
            n_dn = _dict_multiply(_creator(md), _annihilator(md))
            _dict_add(acc, _dict_multiply(n_up, n_dn), u)
    worst = max((abs(c.imag) for c in acc.values()), default=0.0)
    if worst > _HERMITICITY_TOL:
        raise ValidationError(f"builder produced imaginary coefficient {worst:.3e}")
    shift = 0.0
    terms = []
    for mask, coeff in acc.items():
        if mask == 0:
            shift = coeff.real
        else:
            terms.append(HamiltonianTerm(mask, coeff.real))
    return QuarticHamiltonian(n_modes, terms, identity_shift=shift)


def build_hubbard_1d(L: int, u: float, periodic: bool = False) -> QuarticHamiltonian:
    """Nearest-neighbor chain of L sites with on-site repulsion ``u``."""
    if L < 2:
        raise ValueError(f"need at least 2 sites, got {L}")
    bonds = [(i, i + 1) for i in range(L - 1)]
    if periodic and L > 2:
        bonds.append((L - 1, 0))
    return _hubbard_from_bonds(L, bonds, u)


def build_hubbard_2d(L: int, u: float) -> QuarticHamiltonian:
    """Open-boundary L x L square lattice; site id is row-major."""
    if L < 2:
        raise ValueError(f"need at least a 2x2 lattice, got L={L}")
    bonds = []
    for r in range(L):
        for c in range(L):
            s = r * L + c
            if c + 1 < L:
                bonds.append((s, s + 1))
            if r + 1 < L:
                bonds.append((s, s + L))
    return _hubbard_from_bonds(L * L, bonds, u)


def validate(h: QuarticHamiltonian) -> dict:
    """Structural checks plus a summary report.

    Degrees and duplicate merging are enforced by construction; this recounts
    them defensively, then reports sparsity, group count, and whether any
    coefficient magnitude exceeds 1 (flagged, not failed).
    """
    seen = set()
    for t in h.terms:
        if t.degree not in (2, 4):
            raise ValidationError(f"term {t.mask:#x} has degree {t.degree}")
        if t.mask in seen:
            raise ValidationError(f"duplicate term {t.mask:#x}")
        if t.coeff == 0.0:
            raise ValidationError(f"zero-coefficient term {t.mask:#x}")
        seen.add(t.mask)
    schedule = greedy_color_partition(h)
    delta = sparsity(h)
    report = {
        "n_modes": h.n_modes,
        "n_terms": h.n_terms,
        "sparsity": delta,
        "n_groups": schedule.n_groups,
        "max_abs_coeff": h.max_abs_coeff,
        "identity_shift": h.identity_shift,
        "normalized": h.max_abs_coeff <= 1.0,
    }
    return report


def write_hamiltonian(h: QuarticHamiltonian, fh: IO[str]) -> None:
    doc = {
        "n_majorana": h.n_modes,
        "identity_shift": h.identity_shift,
        "terms": [{"mask_hex": f"{t.mask:x}", "coeff": t.coeff} for t in h.terms],
    }
    json.dump(doc, fh, indent=1)
    fh.write("\n")


def read_hamiltonian(fh: IO[str]) -> QuarticHamiltonian:
    doc = json.load(fh)
    terms = [
        HamiltonianTerm(int(t["mask_hex"], 16), float(t["coeff"]))
        for t in doc["terms"]
    ]
    return QuarticHamiltonian(
        int(doc["n_majorana"]), terms, identity_shift=float(doc.get("identity_shift", 0.0))
    )

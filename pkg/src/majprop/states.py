"""Fock product states and the observables used in the lattice experiments.

Expectation values on occupation-basis product states are analytic: only
strings whose mask is a union of complete mode pairs {2j, 2j+1} survive, and
each such string evaluates to +-1 determined by the occupations and the
number of pairs.  The sign law is pinned by the dense oracle tests rather
than re-derived here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import mode_index
from .strings import MajoranaPolynomial, popcount

__all__ = [
    "ProductState",
    "expectation",
    "number_operator",
    "hole_density_observable",
    "antiferromagnetic_hole_state",
]

_U64 = np.uint64
_EVEN_BITS = _U64(0x5555555555555555)


@dataclass(frozen=True)
class ProductState:
    """Occupation bit per fermionic mode, mode 0 first."""

    occupations: tuple[int, ...]

    def __post_init__(self):
        if any(n not in (0, 1) for n in self.occupations):
            raise ValueError("occupations must be 0/1")

    @property
    def n_modes(self) -> int:
        """Majorana mode count (twice the fermionic mode count)."""
        return 2 * len(self.occupations)

    @property
    def particle_number(self) -> int:
        return sum(self.occupations)

    def to_bitstring(self) -> str:
        return "".join(str(n) for n in self.occupations)

    @classmethod
    def from_bitstring(cls, s: str) -> "ProductState":
        return cls(tuple(int(ch) for ch in s.strip()))


def expectation(p: MajoranaPolynomial, state: ProductState) -> float:
    """<psi| P |psi> for a product state, computed term by term.

    A string contributes iff its mask pairs up completely: modes 2j and 2j+1
    appear together for every involved fermionic mode j.  A k-pair string
    evaluates to (-1)^ceil(k/2) times the product of (1 - 2 n_j) over its
    pairs; the oracle tests verify this sign law exhaustively.
    """
    if state.n_modes != p.n_modes:
        raise ValueError(
            f"state has {state.n_modes} Majorana modes, polynomial has {p.n_modes}"
        )
    if p.n_terms == 0:
        return 0.0
    masks = p.masks
    low = masks & _EVEN_BITS
    high = (masks >> _U64(1)) & _EVEN_BITS
    paired = low == high
    if not paired.any():
        return 0.0
    pm = masks[paired]
    coeffs = p.coeffs[paired]
    k = popcount(pm) >> _U64(1)
    # (-1)^ceil(k/2) from the Hermiticity phases of the pair factors
    global_sign = 1 - 2 * (((k + _U64(1)) >> _U64(1)) & _U64(1)).astype(np.int64)
    occ_mask = _U64(0)
    for j, n in enumerate(state.occupations):
        if n:
            occ_mask |= _U64(1) << _U64(2 * j)
    # each occupied involved pair flips (1 - 2n_j) = -1
    occ_sign = 1 - 2 * (popcount(pm & occ_mask) & _U64(1)).astype(np.int64)
    val = complex(np.sum(coeffs * global_sign * occ_sign))
    if abs(val.imag) > 1e-10:
        raise ValueError(f"non-real expectation {val!r}; input not Hermitian?")
    return val.real


def _pair_mask(mode: int) -> int:
    return 0b11 << (2 * mode)


def number_operator(mode: int, n_modes: int) -> MajoranaPolynomial:
    """Occupation n_j as a Majorana polynomial: (1 + gamma_pair)/2.

    The pair string gamma_{2j,2j+1} equals 2 n_j - 1 in this convention.
    """
    if not 0 <= 2 * mode < n_modes:
        raise ValueError(f"mode {mode} out of range for {n_modes} Majorana modes")
    return MajoranaPolynomial({0: 0.5, _pair_mask(mode): 0.5}, n_modes)


def hole_density_observable(site: int, n_modes: int) -> MajoranaPolynomial:
    """(1 - n_up)(1 - n_down) for one lattice site: probability it is empty."""
    up = _pair_mask(mode_index(site, False))
    dn = _pair_mask(mode_index(site, True))
    # gamma_up * gamma_dn = -gamma_{up|dn}: the Hermiticity i-powers of two
    # pair strings flip the sign of the combined quartic string
    return MajoranaPolynomial(
        {0: 0.25, up: -0.25, dn: -0.25, up | dn: -0.25}, n_modes
    )


def antiferromagnetic_hole_state(L: int) -> ProductState:
    """Singly occupied L x L lattice with alternating spins and a central hole.

    Sites are numbered 1..L^2 for the alternation rule; the central site
    (L^2+1)/2 is left empty in both spins.  Requires odd L.
    """
    if L < 1 or L % 2 == 0:
        raise ValueError(f"central-hole state needs odd L, got {L}")
    n_sites = L * L
    centre = (n_sites + 1) // 2  # 1-based
    occ = [0] * (2 * n_sites)
    for i in range(1, n_sites + 1):
        if i == centre:
            continue
        if (i < centre and i % 2 == 1) or (i > centre and i % 2 == 0):
            spin_down = False
        else:
            spin_down = True
        occ[mode_index(i - 1, spin_down)] = 1
    return ProductState(tuple(occ))

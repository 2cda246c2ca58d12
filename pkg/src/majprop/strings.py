"""Exact algebra of Hermitian Majorana strings and sparse Majorana polynomials.

A Majorana string is identified by a bitmask over the N Majorana modes;
bit x set means the mode operator gamma_x appears in the (ascending) ordered
product.  The string carries a fixed power of i that makes it Hermitian, so
an observable is a sparse real- or complex-coefficient combination of these
basis monomials.  Everything here is exact symbolic algebra on bitmasks;
dense matrix checks live in :mod:`majprop.oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, TextIO

import numpy as np

__all__ = [
    "MajoranaString",
    "Phase",
    "MajoranaPolynomial",
    "string_multiply",
    "strings_anticommute",
    "rotate_string",
    "poly_add_scaled",
    "poly_multiply",
    "poly_commutator",
    "frobenius_norm",
    "truncate_degree",
    "prune_coefficients",
    "write_polynomial",
    "read_polynomial",
]

_U64 = np.uint64


def popcount(masks: np.ndarray) -> np.ndarray:
    """Per-element number of set bits."""
    return np.bitwise_count(masks)


@dataclass(frozen=True)
class MajoranaString:
    """One Hermitian basis monomial, identified by its mode bitmask.

    The empty mask is the identity.  ``n_modes`` is the total (even) number
    of Majorana modes of the system the string lives in.
    """

    mask: int
    n_modes: int

    def __post_init__(self):
        if self.n_modes <= 0 or self.n_modes % 2 != 0:
            raise ValueError(f"n_modes must be even and positive, got {self.n_modes}")
        if self.mask < 0 or self.mask >> self.n_modes:
            raise ValueError(
                f"mask {self.mask:#x} has bits outside the {self.n_modes} modes"
            )

    @property
    def degree(self) -> int:
        return int(self.mask).bit_count()

    @property
    def modes(self) -> tuple[int, ...]:
        """Ascending mode indices present in the string."""
        return tuple(x for x in range(self.n_modes) if (self.mask >> x) & 1)

    def __repr__(self):
        return f"MajoranaString({self.mask:#x}, N={self.n_modes})"


@dataclass(frozen=True)
class Phase:
    """A fourth root of unity i**k, k in {0,1,2,3}."""

    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 4)

    @property
    def value(self) -> complex:
        return (1, 1j, -1, -1j)[self.k]

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.k + other.k)

    def __repr__(self):
        return f"Phase({('+1', '+i', '-1', '-i')[self.k]})"


def _inversion_parity_scalar(first: int, second: int) -> int:
    """Parity of |{(t, s) : t in second factor, s in first factor, t < s}|.

    For a product gamma_A gamma_B, ``first`` is A's mask and ``second`` is
    B's.  Counted via prefix popcounts over the bitmask, not pairwise loops.
    """
    parity = 0
    m = second
    while m:
        t = (m & -m).bit_length() - 1
        # s in first with s > t
        parity ^= (first >> (t + 1)).bit_count() & 1
        m &= m - 1
    return parity


def _hermiticity_r(degree: int) -> int:
    """Power of i making the ordered degree-d product Hermitian."""
    return (degree * (degree - 1) // 2) & 1


def _product_phase_k(first: int, second: int) -> int:
    """Exponent k with gamma_first gamma_second = i**k gamma_{first XOR second}.

    Sorting the concatenated mode sequence contributes (-1)^inversions;
    the Hermiticity i-powers of the three strings contribute the rest.  The
    convention is pinned against the dense oracle, not re-derived.
    """
    k = (
        _hermiticity_r(first.bit_count())
        + _hermiticity_r(second.bit_count())
        - _hermiticity_r((first ^ second).bit_count())
    )
    k += 2 * _inversion_parity_scalar(first, second)
    return k % 4


def string_multiply(s: MajoranaString, t: MajoranaString) -> tuple[Phase, MajoranaString]:
    """Product gamma_S gamma_T = phase * gamma_R with R = S xor T."""
    if s.n_modes != t.n_modes:
        raise ValueError("strings live on different mode counts")
    k = _product_phase_k(s.mask, t.mask)
    return Phase(k), MajoranaString(s.mask ^ t.mask, s.n_modes)


def strings_anticommute(s: MajoranaString, t: MajoranaString) -> bool:
    """True iff {gamma_S, gamma_T} = 0, i.e. |S||T| - |S n T| is odd."""
    if s.n_modes != t.n_modes:
        raise ValueError("strings live on different mode counts")
    return bool((s.degree * t.degree - (s.mask & t.mask).bit_count()) & 1)


class MajoranaPolynomial:
    """Sparse observable: a map from string bitmasks to complex coefficients.

    Stored internally as a sorted mask array plus a coefficient array so that
    bulk rotations vectorize.  Canonical form: masks sorted, unique, and no
    exactly-zero coefficients.  Immutable after construction.
    """

    __slots__ = ("_masks", "_coeffs", "n_modes")

    def __init__(
        self,
        terms: Mapping[int, complex] | None,
        n_modes: int,
        *,
        _masks: np.ndarray | None = None,
        _coeffs: np.ndarray | None = None,
    ):
        if n_modes <= 0 or n_modes % 2 != 0:
            raise ValueError(f"n_modes must be even and positive, got {n_modes}")
        if n_modes > 64:
            raise ValueError(
                f"{n_modes} modes exceed the 64-bit mask representation"
            )
        self.n_modes = n_modes
        if _masks is not None:
            # internal fast path: caller guarantees canonical form
            self._masks = _masks
            self._coeffs = _coeffs
            return
        terms = terms or {}
        masks = np.fromiter((int(m) for m in terms), dtype=_U64, count=len(terms))
        coeffs = np.fromiter(
            (complex(c) for c in terms.values()), dtype=np.complex128, count=len(terms)
        )
        if masks.size and int(masks.max()) >> n_modes:
            raise ValueError("term mask has bits outside the mode range")
        order = np.argsort(masks)
        masks, coeffs = masks[order], coeffs[order]
        keep = coeffs != 0
        self._masks = np.ascontiguousarray(masks[keep])
        self._coeffs = np.ascontiguousarray(coeffs[keep])

    @classmethod
    def _from_canonical(cls, masks: np.ndarray, coeffs: np.ndarray, n_modes: int):
        return cls(None, n_modes, _masks=masks, _coeffs=coeffs)

    @classmethod
    def from_raw(cls, masks: np.ndarray, coeffs: np.ndarray, n_modes: int):
        """Build from possibly unsorted/duplicated arrays, canonicalizing."""
        masks, coeffs = combine_terms(
            np.asarray(masks, dtype=_U64), np.asarray(coeffs, dtype=np.complex128)
        )
        return cls._from_canonical(masks, coeffs, n_modes)

    @classmethod
    def zero(cls, n_modes: int):
        return cls._from_canonical(
            np.empty(0, dtype=_U64), np.empty(0, dtype=np.complex128), n_modes
        )

    @classmethod
    def monomial(cls, mask: int, n_modes: int, coeff: complex = 1.0):
        return cls({mask: coeff}, n_modes)

    @property
    def masks(self) -> np.ndarray:
        return self._masks

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def terms(self) -> dict[int, complex]:
        return {int(m): complex(c) for m, c in zip(self._masks, self._coeffs)}

    @property
    def n_terms(self) -> int:
        return self._masks.size

    @property
    def degree(self) -> int:
        """Max stored popcount; 0 for the zero polynomial by convention."""
        if not self._masks.size:
            return 0
        return int(popcount(self._masks).max())

    def coefficient(self, mask: int) -> complex:
        i = np.searchsorted(self._masks, _U64(mask))
        if i < self._masks.size and self._masks[i] == _U64(mask):
            return complex(self._coeffs[i])
        return 0.0

    def assert_hermitian(self, tol: float = 1e-10) -> None:
        """All coefficients real up to ``tol`` (Hermitian in this basis)."""
        if self._coeffs.size:
            worst = float(np.abs(self._coeffs.imag).max())
            if worst > tol:
                raise ValueError(f"max imaginary coefficient {worst:.3e} > {tol:.0e}")

    def __eq__(self, other):
        if not isinstance(other, MajoranaPolynomial):
            return NotImplemented
        return (
            self.n_modes == other.n_modes
            and np.array_equal(self._masks, other._masks)
            and np.array_equal(self._coeffs, other._coeffs)
        )

    def __hash__(self):
        return hash((self.n_modes, self._masks.tobytes(), self._coeffs.tobytes()))

    def __repr__(self):
        return (
            f"MajoranaPolynomial(N={self.n_modes}, terms={self.n_terms}, "
            f"degree={self.degree})"
        )


def combine_terms(masks: np.ndarray, coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort masks, sum coefficients of duplicates, drop exact zeros.

    Accumulation order is fixed by the sorted mask order, so the result is
    independent of the input ordering and of any thread count upstream.
    """
    if masks.size == 0:
        return masks, coeffs
    order = np.argsort(masks, kind="stable")
    masks, coeffs = masks[order], coeffs[order]
    boundary = np.empty(masks.size, dtype=bool)
    boundary[0] = True
    np.not_equal(masks[1:], masks[:-1], out=boundary[1:])
    group = np.cumsum(boundary) - 1
    out_masks = masks[boundary]
    out_coeffs = np.zeros(out_masks.size, dtype=np.complex128)
    np.add.at(out_coeffs, group, coeffs)
    keep = out_coeffs != 0
    if not keep.all():
        out_masks, out_coeffs = out_masks[keep], out_coeffs[keep]
    return np.ascontiguousarray(out_masks), np.ascontiguousarray(out_coeffs)


def inversion_parity(first_mask: int, masks: np.ndarray) -> np.ndarray:
    """Vectorized parity of inversions for gamma_first gamma_S over S array."""
    parity = np.zeros(masks.shape, dtype=_U64)
    m = int(first_mask)
    while m:
        t = (m & -m).bit_length() - 1
        below = _U64((1 << t) - 1)
        parity ^= popcount(masks & below)
        m &= m - 1
    return parity & _U64(1)


def _hermiticity_r_vec(degrees: np.ndarray) -> np.ndarray:
    return ((degrees * (degrees - _U64(1))) >> _U64(1)) & _U64(1)


def product_phase_exponents(first_mask: int, masks: np.ndarray) -> np.ndarray:
    """Exponent array k with gamma_first gamma_S = i**k gamma_{first xor S}."""
    r_first = _U64(_hermiticity_r(int(first_mask).bit_count()))
    r_s = _hermiticity_r_vec(popcount(masks))
    r_out = _hermiticity_r_vec(popcount(masks ^ _U64(first_mask)))
    # r_first + r_s - r_out mod 4, kept nonnegative for the uint arithmetic
    k = r_first + r_s + _U64(3) * r_out
    k = k + _U64(2) * inversion_parity(first_mask, masks)
    return (k & _U64(3)).astype(np.int64)


def anticommutes_with(t_mask: int, masks: np.ndarray) -> np.ndarray:
    """Boolean array: does gamma_T anticommute with each gamma_S?"""
    dt = int(t_mask).bit_count()
    ds = popcount(masks)
    inter = popcount(masks & _U64(t_mask))
    return (((_U64(dt) * ds - inter) & _U64(1)) == 1)


_I_POWERS = np.array([1, 1j, -1, -1j], dtype=np.complex128)


def rotate_string(
    theta: float, t: MajoranaString, s: MajoranaString
) -> MajoranaPolynomial:
    """Conjugation exp(i theta/2 gamma_T) gamma_S exp(-i theta/2 gamma_T).

    Returns gamma_S itself when the strings commute, otherwise the two-term
    combination cos(theta) gamma_S + i sin(theta) gamma_T gamma_S in
    canonical form.
    """
    if s.n_modes != t.n_modes:
        raise ValueError("strings live on different mode counts")
    if not strings_anticommute(s, t):
        return MajoranaPolynomial.monomial(s.mask, s.n_modes)
    phase, r = string_multiply(t, s)
    terms = {s.mask: complex(math.cos(theta))}
    c = 1j * math.sin(theta) * phase.value
    terms[r.mask] = terms.get(r.mask, 0.0) + c
    return MajoranaPolynomial(terms, s.n_modes)


def poly_add_scaled(
    p: MajoranaPolynomial, q: MajoranaPolynomial, c: complex
) -> MajoranaPolynomial:
    """P + c*Q in canonical form."""
    if p.n_modes != q.n_modes:
        raise ValueError("polynomials live on different mode counts")
    if c == 0 or q.n_terms == 0:
        return p
    masks = np.concatenate([p.masks, q.masks])
    coeffs = np.concatenate([p.coeffs, np.complex128(c) * q.coeffs])
    masks, coeffs = combine_terms(masks, coeffs)
    return MajoranaPolynomial._from_canonical(masks, coeffs, p.n_modes)


def poly_multiply(p: MajoranaPolynomial, q: MajoranaPolynomial) -> MajoranaPolynomial:
    """Operator product P*Q (used for building models; O(|P||Q|))."""
    if p.n_modes != q.n_modes:
        raise ValueError("polynomials live on different mode counts")
    out_masks = []
    out_coeffs = []
    for m, a in zip(p.masks, p.coeffs):
        k = product_phase_exponents(int(m), q.masks)
        out_masks.append(q.masks ^ m)
        out_coeffs.append(a * q.coeffs * _I_POWERS[k])
    if not out_masks:
        return MajoranaPolynomial.zero(p.n_modes)
    masks, coeffs = combine_terms(np.concatenate(out_masks), np.concatenate(out_coeffs))
    return MajoranaPolynomial._from_canonical(masks, coeffs, p.n_modes)


def poly_commutator(p: MajoranaPolynomial, q: MajoranaPolynomial) -> MajoranaPolynomial:
    """[P, Q] via pairwise string commutators.

    [gamma_S, gamma_T] is 2 gamma_S gamma_T when the strings anticommute and
    zero otherwise, so only anticommuting pairs contribute.
    """
    if p.n_modes != q.n_modes:
        raise ValueError("polynomials live on different mode counts")
    out_masks = []
    out_coeffs = []
    for m, a in zip(p.masks, p.coeffs):
        ac = anticommutes_with(int(m), q.masks)
        if not ac.any():
            continue
        qm = q.masks[ac]
        k = product_phase_exponents(int(m), qm)
        out_masks.append(qm ^ m)
        out_coeffs.append(2.0 * a * q.coeffs[ac] * _I_POWERS[k])
    if not out_masks:
        return MajoranaPolynomial.zero(p.n_modes)
    masks, coeffs = combine_terms(np.concatenate(out_masks), np.concatenate(out_coeffs))
    return MajoranaPolynomial._from_canonical(masks, coeffs, p.n_modes)


def frobenius_norm(p: MajoranaPolynomial) -> float:
    """Normalized Frobenius norm: the l2 norm of the coefficient vector."""
    if p.n_terms == 0:
        return 0.0
    return float(np.linalg.norm(p.coeffs))


def truncate_degree(p: MajoranaPolynomial, ell: int) -> MajoranaPolynomial:
    """Drop every term with more than ``ell`` modes.

    Idempotent, nonexpansive in the Frobenius norm, and the Frobenius-optimal
    degree-``ell`` approximant of P.
    """
    if ell < 0:
        raise ValueError("truncation degree must be nonnegative")
    if p.n_terms == 0:
        return p
    keep = popcount(p.masks) <= ell
    if keep.all():
        return p
    return MajoranaPolynomial._from_canonical(
        np.ascontiguousarray(p.masks[keep]),
        np.ascontiguousarray(p.coeffs[keep]),
        p.n_modes,
    )


def prune_coefficients(p: MajoranaPolynomial, eps: float) -> MajoranaPolynomial:
    """Remove terms with |coefficient| <= eps.

    eps = 0 only re-asserts canonical form (exact zeros are never stored).
    """
    if eps < 0:
        raise ValueError("pruning threshold must be nonnegative")
    if p.n_terms == 0 or eps == 0:
        return p
    keep = np.abs(p.coeffs) > eps
    if keep.all():
        return p
    return MajoranaPolynomial._from_canonical(
        np.ascontiguousarray(p.masks[keep]),
        np.ascontiguousarray(p.coeffs[keep]),
        p.n_modes,
    )


# --- majpoly v1 text format: header line, then one `<hex mask> <re> <im>` per term


def write_polynomial(p: MajoranaPolynomial, fh: TextIO) -> None:
    fh.write(f"majpoly v1 N={p.n_modes}\n")
    for m, c in zip(p.masks, p.coeffs):
        fh.write(f"{int(m):x} {float(c.real)!r} {float(c.imag)!r}\n")


def read_polynomial(fh: TextIO) -> MajoranaPolynomial:
    header = fh.readline().split()
    if len(header) != 3 or header[0] != "majpoly" or header[1] != "v1":
        raise ValueError(f"not a majpoly v1 stream: {' '.join(header)!r}")
    if not header[2].startswith("N="):
        raise ValueError(f"malformed header field {header[2]!r}")
    n_modes = int(header[2][2:])
    terms: dict[int, complex] = {}
    for line in fh:
        if not line.strip():
            continue
        mask_hex, re_s, im_s = line.split()
        terms[int(mask_hex, 16)] = complex(float(re_s), float(im_s))
    return MajoranaPolynomial(terms, n_modes)

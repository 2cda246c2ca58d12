import numpy as np
import pytest

from majprop.strings import MajoranaPolynomial


@pytest.fixture
def report(capfd):
    """Print a line that survives pytest's output capture."""

    def _report(name: str, passed: bool, detail: str = "") -> None:
        status = "PASS" if passed else "FAIL"
        with capfd.disabled():
            print(f"[{status}] {name}" + (f" ({detail})" if detail else ""))

    return _report


def random_poly(rng: np.random.Generator, n_modes: int, n_terms: int = 6,
                max_degree: int | None = None) -> MajoranaPolynomial:
    terms = {}
    while len(terms) < n_terms:
        if max_degree is None:
            mask = int(rng.integers(0, 1 << n_modes))
        else:
            d = int(rng.integers(0, max_degree + 1))
            picks = rng.choice(n_modes, size=d, replace=False)
            mask = 0
            for b in picks:
                mask |= 1 << int(b)
        terms[mask] = complex(rng.normal(), rng.normal())
    return MajoranaPolynomial(terms, n_modes)

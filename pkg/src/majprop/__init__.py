"""Sparse Majorana-string algebra and truncated Heisenberg propagation."""

from .strings import (
    MajoranaPolynomial,
    MajoranaString,
    Phase,
    frobenius_norm,
    poly_add_scaled,
    poly_commutator,
    poly_multiply,
    prune_coefficients,
    read_polynomial,
    rotate_string,
    string_multiply,
    strings_anticommute,
    truncate_degree,
    write_polynomial,
)
from .hamiltonian import (
    HamiltonianTerm,
    QuarticHamiltonian,
    TrotterSchedule,
    build_hubbard_1d,
    build_hubbard_2d,
    greedy_color_partition,
    mode_index,
    read_hamiltonian,
    sparsity,
    validate,
    write_hamiltonian,
)
from .propagation import (
    MPConfig,
    PropagationTrace,
    TermCapExceeded,
    apply_group,
    apriori_error_bound,
    mp_propagate,
    optimal_time_step,
    sweep_and_truncate,
    trotter_sweep,
)
from .states import (
    ProductState,
    antiferromagnetic_hole_state,
    expectation,
    hole_density_observable,
    number_operator,
)

__version__ = "0.1.0"

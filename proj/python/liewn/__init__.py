"""Wei-Norman factorization engine: symbolic derivations and numeric propagation."""

from ._core import (
    Algebra,
    LiewnError,
    Trajectory,
    assemble_teo,
    bch_closed_form_3gen,
    direct_exponential,
    gate,
    load_algebra,
    matrix_oracle,
    run_fixtures,
    shipped_algebras,
    sun_algebra,
    sun_generators,
    unitarity_check_su2,
    verify_gate,
)

__all__ = [
    "Algebra",
    "LiewnError",
    "Trajectory",
    "assemble_teo",
    "bch_closed_form_3gen",
    "direct_exponential",
    "gate",
    "load_algebra",
    "matrix_oracle",
    "run_fixtures",
    "shipped_algebras",
    "sun_algebra",
    "sun_generators",
    "unitarity_check_su2",
    "verify_gate",
]

"""Quiver Grassmannians over finite fields and the invariants built on them."""
from ._kernels import HAVE_NUMBA, default_backend
from .counting import (
    choose_primes,
    cluster_character,
    count_subreps_mod_p,
    euler_char,
    f_polynomial_rep,
    gaussian_binomial_count,
    interpolate,
    point_count_polynomial,
    substitution_map,
    subspaces,
)

__all__ = [
    "HAVE_NUMBA", "default_backend", "choose_primes", "cluster_character",
    "count_subreps_mod_p", "euler_char", "f_polynomial_rep", "gaussian_binomial_count",
    "interpolate", "point_count_polynomial", "substitution_map", "subspaces",
]

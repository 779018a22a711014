"""Profinite rigidity of low-dimensional crystallographic groups."""

import os

from ._procryst import (  # noqa: F401
    Catalog,
    CapExceeded,
    CatalogError,
    automorphism_images,
    close_group,
    conjugate_over_zpi,
    h1_mod,
    h2_finite_coeffs,
    h2_lattice,
    integral_membership,
    pi_part,
    q_conjugacy_precheck,
    snf,
    solve_mod,
)

__all__ = [
    "Catalog",
    "CapExceeded",
    "CatalogError",
    "automorphism_images",
    "close_group",
    "conjugate_over_zpi",
    "data_path",
    "h1_mod",
    "h2_finite_coeffs",
    "h2_lattice",
    "integral_membership",
    "pi_part",
    "q_conjugacy_precheck",
    "snf",
    "solve_mod",
]


def data_path(name):
    """Path of a catalog file shipped with the package (e.g. 'dim2.catalog')."""
    return os.path.join(os.path.dirname(__file__), "data", name)

"""Chatterjee's xi and Spearman's rho for bivariate copulas."""

from ._core import (
    Copula,
    M_of_x,
    XirhoError,
    attain,
    b_of_x,
    boundary_table,
    classify,
    gap_search,
    measures,
    oracle,
    rho_closed_cb,
    rho_n,
    sample,
    xi_closed_cb,
    xi_n,
)

__all__ = [
    "Copula",
    "M_of_x",
    "XirhoError",
    "attain",
    "b_of_x",
    "boundary_table",
    "classify",
    "gap_search",
    "measures",
    "oracle",
    "rho_closed_cb",
    "rho_n",
    "sample",
    "xi_closed_cb",
    "xi_n",
]

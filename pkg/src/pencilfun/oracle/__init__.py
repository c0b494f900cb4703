"""Extended-precision (double-double) reference evaluation."""

from .ddreal import (
    DDReal,
    dd_add,
    dd_div,
    dd_exp,
    dd_log,
    dd_mul,
    dd_pow,
    dd_sqrt,
    dd_sub,
)
from .ddlinalg import DDMatrix, dd_jacobi_eig
from .reference import reference_phi

__all__ = [
    "DDMatrix",
    "DDReal",
    "dd_add",
    "dd_div",
    "dd_exp",
    "dd_jacobi_eig",
    "dd_log",
    "dd_mul",
    "dd_pow",
    "dd_sqrt",
    "dd_sub",
    "reference_phi",
]

"""Creative telescoping for D-finite systems over Ore algebras."""

from .arith import FieldSpec
from .fileformat import parse_system_file, parse_system_text
from .gff import gff, left_border, right_border, rising_factorial_power
from .ore import OreOperator, OreSpec
from .parsing import parse_operator, parse_rational
from .properness import (
    compute_eta,
    compute_gamma,
    compute_height,
    integer_linear_decompose,
    is_y_proper,
    phi_bound,
    properness_report,
)
from .system import DFiniteSystem, validate, vector_apply_dx, vector_apply_dy
from .telescoper import TelescopePair, order_bound, telescope, verify_pair

__all__ = [
    "DFiniteSystem",
    "FieldSpec",
    "OreOperator",
    "OreSpec",
    "TelescopePair",
    "compute_eta",
    "compute_gamma",
    "compute_height",
    "gff",
    "integer_linear_decompose",
    "is_y_proper",
    "left_border",
    "order_bound",
    "parse_operator",
    "parse_rational",
    "parse_system_file",
    "parse_system_text",
    "phi_bound",
    "properness_report",
    "right_border",
    "rising_factorial_power",
    "telescope",
    "validate",
    "vector_apply_dx",
    "vector_apply_dy",
]

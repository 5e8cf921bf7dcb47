"""Memory kernels: representations, text grammar, and hypothesis checks."""
from halffourier.kernels.base import (
    Composite,
    Exponential,
    LimitPair,
    MemoryKernel,
    Scaled,
    SingularExponential,
    Sum,
    Tabulated,
    closed_form_transform,
    eval_deriv,
    eval_kernel,
)
from halffourier.kernels.grammar import load_table, parse_kernel, render
from halffourier.kernels.hypotheses import (
    LimitFit,
    Modulus,
    check_condition_AA,
    check_dafermos,
    identify_limit,
    omega_p,
)

__all__ = [
    "Composite", "Exponential", "LimitPair", "MemoryKernel", "Scaled",
    "SingularExponential", "Sum", "Tabulated", "closed_form_transform",
    "eval_deriv", "eval_kernel", "load_table", "parse_kernel", "render",
    "LimitFit", "Modulus", "check_condition_AA", "check_dafermos",
    "identify_limit", "omega_p",
]

"""Numerics for Jackson-Stechkin and Bohr-Favard type inequalities on the circle."""

from __future__ import annotations

from .constants import ALPHA, BETA, favard, theorem_constants
from .errors import JacksonError
from .fourier import fejer, highpass_residual, partial_sum, vallee_poussin
from .kernels import make_kernel, w_apply
from .minimax import best_approximation
from .periodic import FAMILIES, GridFunction, PeriodicFunction, TrigPoly, build_family, sup_norm
from .smoothness import modulus

__all__ = [
    "ALPHA", "BETA", "FAMILIES", "GridFunction", "JacksonError", "PeriodicFunction", "TrigPoly",
    "best_approximation", "build_family", "favard", "fejer", "highpass_residual", "make_kernel",
    "modulus", "partial_sum", "sup_norm", "theorem_constants", "vallee_poussin", "w_apply",
]

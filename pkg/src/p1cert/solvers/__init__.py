"""Finite-dimensional exact searches over bounded ansatz spaces."""

from __future__ import annotations

from .ansatz import AnsatzError, AnsatzSpec, poly_ansatz
from .linear import SolutionSet, solve_linear
from .transport import solve_transport

__all__ = ["AnsatzSpec", "AnsatzError", "poly_ansatz", "SolutionSet", "solve_linear", "solve_transport"]

"""Exact differential-algebra engine and certificate runner for Painleve I."""

from __future__ import annotations

__version__ = "0.1.0"

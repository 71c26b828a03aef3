"""Errors raised by the rmt_fluct laboratory."""

from __future__ import annotations

from typing import Any


class RmtFluctError(Exception):
    """Base class for laboratory errors."""


class ConfigError(RmtFluctError):
    """Invalid or unreadable experiment configuration."""


class InvalidInputError(RmtFluctError):
    """Arguments outside an operation's domain."""


class NumericalError(RmtFluctError):
    """Non-finite values where finite ones are required."""

    def __init__(self, message: str, cell: Any = None) -> None:
        """Keep the offending quadrature cell."""
        super().__init__(message)
        self.cell = cell


class ConvergenceError(RmtFluctError):
    """An iteration or a quadrature did not converge."""

    def __init__(
        self,
        message: str,
        *,
        trail: list[Any] | None = None,
        fingerprint: str | None = None,
        delta: float | None = None,
    ) -> None:
        """Keep whatever is known about the failure."""
        super().__init__(message)
        self.trail = trail or []
        self.fingerprint = fingerprint
        self.delta = delta

"""Semantic exceptions raised by the public API.

Public functions never raise bare ``ValueError``/``ArithmeticError``; they
raise one of the classes below so callers can distinguish bad *inputs*
(:class:`DomainError`), bad *setup* (:class:`ConfigError`) and numerical
*breakdown during evaluation* (:class:`EvaluationError`).
"""

from __future__ import annotations


class PlcsecError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PlcsecError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigError(PlcsecError, ValueError):
    """A parameter object or configuration file violates its contract."""


class EvaluationError(PlcsecError, ArithmeticError):
    """A numerical evaluation produced a non-finite or meaningless result."""

"""Vague-information analytics: rough-set algebra over finite state spaces,
report-text vagueness metrics, a seeded expectation-panel simulator, and
fixed-effects panel regression tools with two-way clustered inference."""

__version__ = "0.1.0"

from . import econometrics, expectations, roughset, textmetrics  # noqa: F401

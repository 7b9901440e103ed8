"""Error taxonomy.

Invalid inputs raise; algorithmic limits never do.  A search that runs out
of budget reports Inconclusive through its verdict type instead of raising,
so callers can always distinguish "you gave me garbage" from "I could not
decide".
"""
from __future__ import annotations


class DomainError(ValueError):
    """A scalar, interval, or map violates a representation invariant."""


class ParameterError(ValueError):
    """A parameter tuple is outside its admissible set."""


class PreconditionError(RuntimeError):
    """A checked precondition of a certificate routine failed.

    Distinct from an Inconclusive verdict: the routine refused to run, it
    did not run and fail to decide.
    """


class CertificateError(ValueError):
    """A user-supplied certificate (modulus, probe set) failed its audit."""

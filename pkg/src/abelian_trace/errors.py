"""Exception types raised by the library.

Every exception carries a short machine-readable ``code`` so the CLI can
report failures without parsing messages.
"""

from __future__ import annotations


class AbelianTraceError(ValueError):
    code = "ERROR"


class NotSublattice(AbelianTraceError):
    code = "NOT_SUBLATTICE"


class ConductorMismatch(AbelianTraceError):
    code = "CONDUCTOR_MISMATCH"


class NotCoprime(AbelianTraceError):
    code = "NOT_COPRIME"


class BadConductor(AbelianTraceError):
    code = "BAD_CONDUCTOR"


class NotWildShape(AbelianTraceError):
    code = "NOT_WILD_SHAPE"


class TooLarge(AbelianTraceError):
    code = "TOO_LARGE"


class NotDivisor(AbelianTraceError):
    code = "NOT_DIVISOR"


class BadArgs(AbelianTraceError):
    code = "BAD_ARGS"


class NotSubfield(AbelianTraceError):
    code = "NOT_SUBFIELD"


class NotFullConductor(AbelianTraceError):
    code = "NOT_FULL_CONDUCTOR"


class NotWild(AbelianTraceError):
    code = "NOT_WILD"


class AmbientMismatch(AbelianTraceError):
    code = "AMBIENT_MISMATCH"


def check_conductor(n: int) -> None:
    """Reject moduli that cannot be the conductor of an abelian field."""
    if n < 1:
        raise BadConductor(f"conductor must be positive, got {n}")
    if n % 4 == 2:
        raise BadConductor(
            f"no abelian field has conductor {n} (n = 2 mod 4); use {n // 2} instead"
        )

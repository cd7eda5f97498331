"""Exception hierarchy shared by all simulation modules.

Every error carries a short machine-readable ``code`` used by the CLI to
emit single-line diagnostics.
"""


class SpdcError(Exception):
    """Base class for all simulator errors."""

    code = "error"


class ZeroField(SpdcError):
    """An amplitude with no nonzero sample (nothing to normalize)."""

    code = "zero-field"


class AxisMismatch(SpdcError):
    """Operation applied to an axis with the wrong label or unit."""

    code = "axis-mismatch"


class EvanescentMode(SpdcError):
    """Transverse wavevector at or beyond the free wavenumber; no propagating mode."""

    code = "evanescent-mode"


class GridTooCoarse(SpdcError):
    """Quadrature step too large for the local phase rate (aliasing guard)."""

    code = "grid-too-coarse"


class OutOfValidityRange(SpdcError):
    """Dispersion model evaluated outside its declared wavelength range."""

    code = "out-of-validity-range"


class PoleProximity(SpdcError):
    """Wavelength too close to a dispersion resonance pole."""

    code = "pole-proximity"


class NotTwoPartite(SpdcError):
    """Amplitude axes cannot be split into photon-1 and photon-2 groups."""

    code = "not-two-partite"


class ModeMismatch(SpdcError):
    """Operation requires a different joint-amplitude mode."""

    code = "mode-mismatch"


class ParseError(SpdcError):
    """Malformed config text; carries the offending line number."""

    code = "parse-error"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(SpdcError):
    """A config or model invariant is violated."""

    code = "validation-error"

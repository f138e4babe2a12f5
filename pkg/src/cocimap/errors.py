"""Exception types shared across the toolkit."""


class CocimapError(Exception):
    """Base class for all toolkit errors."""


# --- corpus ---------------------------------------------------------------

class MalformedIssn(CocimapError):
    """ISSN has the wrong length or contains invalid characters."""


class ChecksumFailure(CocimapError):
    """ISSN is well-formed but its mod-11 check digit does not validate."""


class ParseError(CocimapError):
    """A raw input row could not be parsed."""

    def __init__(self, message, line_no=None):
        super().__init__(message)
        self.line_no = line_no


class DuplicateIssn(CocimapError):
    """Two journal records claim the same ISSN."""


# --- metrics --------------------------------------------------------------

class EmptyInput(CocimapError):
    """An operation requiring a non-empty input received an empty one."""


class ZeroTotal(CocimapError):
    """Concentration share is undefined when the value total is zero."""


# --- graphs ---------------------------------------------------------------

class GroupMissing(CocimapError):
    """A node lacks the group label required for share computation."""


class OracleTooLarge(CocimapError):
    """The exact sparsification oracle was asked to exceed its size bound."""


class NoConvergence(CocimapError):
    """Power iteration hit its iteration cap before reaching tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


# --- heavy-tail fitting ---------------------------------------------------

class DegenerateInput(CocimapError):
    """Sample has too little variation to fit a tail model."""


class NonPositiveSample(CocimapError):
    """Tail models are defined over positive integers only."""


class SharedSupportViolation(CocimapError):
    """Model comparison requires both fits to share the same xmin."""


# --- comparisons ----------------------------------------------------------

class ConstantPredictor(CocimapError):
    """Ordinary least squares is undefined for a constant predictor."""


class EmptySource(CocimapError):
    """A share comparison source has no counts."""


# --- pipeline / CLI -------------------------------------------------------

class ConfigError(CocimapError):
    """Pipeline configuration failed validation (CLI exit code 2)."""


class InputError(CocimapError):
    """Input data could not be read or parsed (CLI exit code 1)."""


class InvariantViolation(CocimapError):
    """An internal invariant was violated (CLI exit code 3)."""


class IoFailure(CocimapError):
    """An artifact could not be written."""

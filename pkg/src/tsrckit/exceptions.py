"""Error types raised across the toolkit.

Every error carries a short machine-readable ``code`` so the command line
front end can emit structured JSON without string matching.
"""


class TsrcError(Exception):
    code = "error"

    def __init__(self, message="", **context):
        super().__init__(message)
        self.context = context

    def to_dict(self):
        return {"error": self.code, "message": str(self), "context": self.context}


class ZeroNorm(TsrcError, ValueError):
    code = "zero_norm"


class DimMismatch(TsrcError, ValueError):
    code = "dim_mismatch"


class BadTransmittance(TsrcError, ValueError):
    code = "bad_transmittance"


class TruncationOverflow(TsrcError, ArithmeticError):
    code = "truncation_overflow"


class DegenerateDraw(TsrcError, ValueError):
    code = "degenerate_draw"


class NotNormalized(TsrcError, ValueError):
    code = "not_normalized"


class VacuumUndefined(TsrcError, ValueError):
    code = "vacuum_undefined"


class LeadingCoefficientZero(TsrcError, ValueError):
    code = "leading_coefficient_zero"


class NoConvergence(TsrcError, ArithmeticError):
    code = "no_convergence"


class ZeroProbability(TsrcError, ArithmeticError):
    code = "zero_probability"


class VerificationFailed(TsrcError, AssertionError):
    code = "verification_failed"


class BadEta(TsrcError, ValueError):
    code = "bad_eta"


class ConfigInvalid(TsrcError, ValueError):
    code = "config_invalid"

"""Exception taxonomy.

Three branches matter to callers: data validation problems (bad or
degenerate input), numerical failures (a fitting or calibration routine
could not finish within its stated tolerances), and configuration
problems in the reporting layer.  The CLI maps these branches onto its
exit codes.
"""


class PredaccError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(PredaccError):
    """Input data violates a sample contract."""


class LengthMismatch(ValidationError):
    """Arrays in one sample do not share the same number of rows."""


class NonFiniteValue(ValidationError):
    """A sample or prediction vector contains NaN or infinity."""


class TooFewRows(ValidationError):
    """Fewer than two rows; no variance functional is defined."""


class InvalidIndicator(ValidationError):
    """Event indicator contains a value other than 0 or 1."""


class AllCensored(ValidationError):
    """No uncensored event in the sample; every weight would be zero."""


class ZeroTotalVariance(ValidationError):
    """Response is constant, so R-squared has a zero denominator."""


class DegenerateCorrelation(ValidationError):
    """A correlation argument is constant under the given weights."""


class NumericalError(PredaccError):
    """A numerical routine failed beyond its stated tolerance."""


class DegenerateWeights(NumericalError):
    """Censoring-survival estimate leaves no usable weight mass."""


class RankDeficient(NumericalError):
    """Least-squares design matrix does not have full column rank."""


class NonConvergence(NumericalError):
    """Iteration limit reached before the gradient tolerance."""


class MonotoneLikelihood(NumericalError):
    """Cox iterates diverged; partial likelihood has no interior maximum."""


class DegenerateScale(NumericalError):
    """AFT scale estimate collapsed to zero (perfect fit)."""


class UnconvergedFit(NumericalError):
    """Predictions requested from a fit whose converged flag is false."""


class TooManyFailures(NumericalError):
    """More than 10 percent of bootstrap replicates failed to fit."""


class CalibrationFailure(NumericalError):
    """Censoring calibration found no bracket within the step budget."""


class ConfigError(PredaccError):
    """Scenario or CLI configuration is malformed."""


class InputError(PredaccError):
    """An input file could not be parsed into a valid sample."""

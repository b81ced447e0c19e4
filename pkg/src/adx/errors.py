"""Exception hierarchy shared across the toolkit."""


class AdxError(Exception):
    """Base class for all toolkit errors."""


class InputError(AdxError):
    """Problems with input files or referential integrity."""


class MalformedRow(InputError):
    def __init__(self, path, line_no, reason):
        self.path = path
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"{path}:{line_no}: {reason}")


class UnknownSubject(InputError):
    pass


class ArmMismatch(InputError):
    pass


class UnmappedTerm(InputError):
    pass


class MissingHierarchy(AdxError):
    """Operation needs a hierarchy map but none was loaded."""


class UnknownDimension(AdxError):
    pass


class UnknownSoc(AdxError):
    pass


class EmptyProfile(AdxError):
    """Estimation requested on a profile with zero episodes."""


class DegenerateVariance(AdxError):
    """se(diff) is zero; the normal approximation is unusable."""


class ZeroAdversity(AdxError):
    """AdX is zero (single AE type); benefit/AdX ratio is ill-defined."""


class DivisionByZeroBenefit(AdxError):
    pass


class InsufficientData(AdxError):
    pass


class NoDatedEpisodes(AdxError):
    """All episodes lack onset_day; interim analysis impossible."""


class NoCycleData(AdxError):
    """All episodes lack a cycle number; exposure analysis impossible."""


class InvalidScenario(AdxError):
    pass


class DegenerateScenario(AdxError):
    """Uniform true vector: analytic variance is zero."""


class ConfigError(AdxError):
    """Bad run configuration (CLI flags, alpha range, etc.)."""

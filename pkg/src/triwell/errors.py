"""Exception hierarchy. Every error carries a short machine-readable ``code``."""


class TriwellError(Exception):
    code = "triwell_error"


class DomainError(TriwellError):
    """Input is well formed but outside the domain of the requested operation."""

    code = "domain_error"


class DetPositive(DomainError):
    code = "det_positive"


class NormalNotIndefinite(DomainError):
    code = "normal_not_indefinite"


class NotInPlane(DomainError):
    code = "not_in_plane"


class WrongClass(DomainError):
    code = "wrong_class"


class DegeneratePlane(DomainError):
    code = "degenerate_plane"


class RankOnePresent(DomainError):
    code = "rank_one_present"


class ParseError(TriwellError):
    code = "parse_error"


class AsymmetricInput(ParseError):
    code = "asymmetric_input"

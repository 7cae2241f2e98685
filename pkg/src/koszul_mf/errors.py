"""Exception hierarchy for the engine.

Every engine error carries an ``exit_code`` so the command line layer can map
failures to distinct process exit statuses without a lookup table.
"""


class EngineError(Exception):
    exit_code = 1


class FieldMismatch(EngineError):
    exit_code = 3


class DimMismatch(EngineError):
    exit_code = 4


class TowerMismatch(EngineError):
    exit_code = 5


class NotChainMap(EngineError):
    exit_code = 6


class NotMfMorphism(EngineError):
    exit_code = 7


class NeedsReduction(EngineError):
    """Raised when an operation needs a complex concentrated in at most three degrees."""

    exit_code = 8


class ConventionViolation(EngineError):
    """An internal identity failed; indicates a sign-convention bug and is never swallowed."""

    exit_code = 9


class StructuralViolation(EngineError):
    """A structural fact that must hold for valid input (freeness, torsion) failed."""

    exit_code = 10


class NotARoot(EngineError):
    exit_code = 11


class InvalidObject(EngineError):
    exit_code = 12


class Cancelled(EngineError):
    exit_code = 13

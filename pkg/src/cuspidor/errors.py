"""Domain errors shared across the package."""


class CuspidorError(Exception):
    """Base class for all domain errors; the CLI maps these to exit code 1."""


class InvalidAction(CuspidorError):
    pass


class InvalidLattice(CuspidorError):
    pass


class Reducible(CuspidorError):
    pass


class NotCommuting(CuspidorError):
    pass


class TrivialCharacter(CuspidorError):
    pass


class InvalidOrder(CuspidorError):
    pass


class NotStabilizing(CuspidorError):
    pass


class IncompatibleCharacters(CuspidorError):
    pass


class SingularCharacter(CuspidorError):
    pass


class SingularRoot(CuspidorError):
    pass


class NotRealizable(CuspidorError):
    pass


class NotNormal(CuspidorError):
    pass


class DifferentOrbits(CuspidorError):
    pass


class UnequalStabilizers(CuspidorError):
    pass


class NotEquivariant(CuspidorError):
    pass


class TooLarge(CuspidorError):
    pass


class InvalidCycleType(CuspidorError):
    pass


class InvalidWeylSet(CuspidorError):
    pass


class OutOfScope(CuspidorError):
    pass

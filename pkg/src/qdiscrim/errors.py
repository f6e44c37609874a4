"""Exception hierarchy shared by all qdiscrim modules."""


class QDiscrimError(Exception):
    """Base class for every error raised by qdiscrim."""


# linear algebra
class NotHermitian(QDiscrimError, ValueError):
    pass


class NotPSD(QDiscrimError, ValueError):
    pass


class NoConvergence(QDiscrimError, RuntimeError):
    pass


# gate constructors
class InvalidRank(QDiscrimError, ValueError):
    pass


class DimensionTooSmall(QDiscrimError, ValueError):
    pass


class OddRankUnsupported(QDiscrimError, ValueError):
    pass


class RankTooLarge(QDiscrimError, ValueError):
    pass


# discrimination
class DimensionMismatch(QDiscrimError, ValueError):
    pass


class DataIntegrityError(QDiscrimError, ValueError):
    """Gram diagonal deviates from tr(rho) = 1: the input itself is malformed."""


# certificates
class StructureMismatch(QDiscrimError, ValueError):
    pass


# rank reduction
class AnnihilatorNotFound(QDiscrimError, RuntimeError):
    pass


class InsufficientRoom(QDiscrimError, ValueError):
    """k(k-1) >= t**2: no room for a nonzero annihilator on the support."""


class ZeroInput(QDiscrimError, ValueError):
    pass


class SingularDensity(QDiscrimError, ValueError):
    pass


class DegenerateTrace(QDiscrimError, RuntimeError):
    pass


class ReductionStalled(QDiscrimError, RuntimeError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


# feasibility search
class ZeroFactor(QDiscrimError, ValueError):
    pass


# superdense coding
class NotDiscriminating(QDiscrimError, ValueError):
    pass


class IndexOutOfRange(QDiscrimError, IndexError):
    pass


class Ambiguous(QDiscrimError, ValueError):
    pass

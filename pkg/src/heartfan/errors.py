"""Exception hierarchy.  Every domain failure maps to CLI exit status 1."""
from __future__ import annotations


class HeartfanError(Exception):
    """Base class for domain errors."""


class DimensionError(HeartfanError):
    pass


class DegenerateInputError(HeartfanError):
    pass


class ContainmentError(HeartfanError):
    pass


class FaceError(HeartfanError):
    pass


class ResourceError(HeartfanError):
    pass


class CofanAxiomError(HeartfanError):
    def __init__(self, message: str, pair: tuple | None = None):
        super().__init__(message)
        self.pair = pair


class MembershipError(HeartfanError):
    pass


class DatasetError(HeartfanError):
    pass


class AdditivityError(DatasetError):
    pass


class InvariantError(HeartfanError):
    pass


class ConsistencyError(HeartfanError):
    """Raised when a computed object contradicts a theorem, i.e. corrupt input data."""


class SupportError(HeartfanError):
    pass


class ChargeError(HeartfanError):
    pass


class SpecError(HeartfanError):
    pass


class UnsupportedRankError(HeartfanError):
    pass

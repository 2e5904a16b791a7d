"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CrossprodError(Exception):
    """Base class; ``payload`` is the machine-readable body used by the CLI."""

    exit_code = 2

    def __init__(self, message: str = "", **payload):
        super().__init__(message or self.__class__.__name__)
        self.payload = payload

    def to_json(self) -> dict:
        body = {"error": self.__class__.__name__, "message": str(self)}
        body.update(self.payload)
        return body


class NotAGroup(CrossprodError):
    pass


class NotAssociative(NotAGroup):
    def __init__(self, witness):
        super().__init__(f"multiplication not associative at {witness}", witness=list(witness))
        self.witness = tuple(witness)


class NoIdentity(NotAGroup):
    pass


class NoInverse(NotAGroup):
    def __init__(self, element: int):
        super().__init__(f"element {element} has no inverse", element=element)
        self.element = element


class InvalidModule(CrossprodError):
    pass


class NotACocycle(CrossprodError):
    exit_code = 1


class SizeLimitExceeded(CrossprodError):
    exit_code = 3


class DomainMismatch(CrossprodError):
    pass


class Pi0Mismatch(DomainMismatch):
    pass


class Pi1Mismatch(DomainMismatch):
    pass


class CarrierMismatch(DomainMismatch):
    pass


class NotAHomomorphism(CrossprodError):
    pass


class InvalidSystem(CrossprodError):
    exit_code = 1


class NotCoherent(CrossprodError):
    exit_code = 1


class NotSurjectiveGrading(CrossprodError):
    pass


class BadSections(CrossprodError):
    pass


class IncoherentOneCell(CrossprodError):
    exit_code = 1


class NotGraded(CrossprodError):
    pass


class NonAbelianObjects(CrossprodError):
    pass


class NonAbelianGroup(CrossprodError):
    pass


class NotCentral(CrossprodError):
    pass


class InvalidActionBraiding(CrossprodError):
    exit_code = 1


class MismatchedCategory(CrossprodError):
    pass


class ParseError(CrossprodError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}", path=path)


class InvariantViolation(CrossprodError):
    def __init__(self, path: str, description: str, **extra):
        super().__init__(f"{path}: {description}", path=path, description=description, **extra)

"""Exception hierarchy shared by all fairex modules."""


class FairexError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(FairexError):
    """An argument violates a precondition (bad range, bad size, bad shape)."""


class NotInvertibleError(FairexError):
    """Modular inverse requested for a value not coprime to the modulus."""


class DomainError(FairexError):
    """A message representative does not fit below the signer's modulus."""


class EmbeddingError(FairexError):
    """A plaintext does not embed into the ElGamal group (must be in (0, P))."""


class SetupError(FairexError):
    """Key or parameter generation failed, or generated material is invalid."""


class WireError(FairexError):
    """A wire message cannot be encoded or decoded."""


class TranscriptError(FairexError):
    """A transcript file is malformed or truncated."""


class FaultScriptError(FairexError):
    """A fault script cannot be parsed or references unknown targets."""


class AuditError(FairexError):
    """A transcript cannot be audited."""

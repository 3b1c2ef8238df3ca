"""Exception hierarchy shared by every module."""


class PHEError(Exception):
    """Base class for all library errors."""


class ParameterError(PHEError, ValueError):
    """Invalid argument: bad modulus, mismatched schemes, malformed circuit, ..."""


class DomainError(ParameterError):
    """Plaintext outside the scheme's message space."""


class CapacityError(ParameterError):
    """A homomorphic sum could wrap around the message modulus."""


class CompileError(ParameterError):
    """A Boolean circuit cannot be compiled to a group program."""


class GenerationError(PHEError):
    """Prime or key generation exhausted its attempt budget."""


class CryptoError(PHEError):
    """Failures raised by the cryptographic operations themselves."""


class RandomnessError(CryptoError):
    """Encryption randomness is not a unit of its group."""


class CiphertextCorruptError(CryptoError):
    """Ciphertext is not a valid encryption under the given key."""


class NoSolutionError(CiphertextCorruptError):
    """Discrete logarithm target is outside the subgroup."""


class UnsupportedOperationError(CryptoError):
    """Operation not defined for the scheme (e.g. blinding RSA)."""


class FormatError(PHEError, ValueError):
    """Malformed serialized key, ciphertext or circuit."""

    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field


class ValidationError(FormatError):
    """Well-formed document whose values violate a group or key invariant."""

"""Partially homomorphic encryption toolkit."""

from . import schemes
from .core import (
    Ciphertext,
    Plaintext,
    PublicKey,
    SchemeId,
    SecretKey,
    blind,
    combine,
    decrypt,
    encrypt,
    get_scheme,
    keygen,
    mixed_mult,
)

__all__ = [
    "Ciphertext",
    "Plaintext",
    "PublicKey",
    "SchemeId",
    "SecretKey",
    "blind",
    "combine",
    "decrypt",
    "encrypt",
    "get_scheme",
    "keygen",
    "mixed_mult",
    "schemes",
]

"""Scheme-agnostic data model and the generic homomorphic operations.

Every cryptosystem plugs in through a :class:`Scheme` object registered
under its :class:`SchemeId`. The functions at the bottom of this module
(:func:`keygen`, :func:`encrypt`, :func:`decrypt`, :func:`combine`,
:func:`mixed_mult`, :func:`blind`) dispatch on the key's scheme.
"""

from __future__ import annotations

import math
import secrets
from dataclasses import dataclass, fields
from enum import Enum
from typing import ClassVar

from .errors import (
    CiphertextCorruptError,
    DomainError,
    ParameterError,
    UnsupportedOperationError,
)

MIN_SIGMA = 16


class SchemeId(str, Enum):
    RSA = "rsa"
    GM = "gm"
    BENALOH = "benaloh"
    NACCACHE_STERN = "naccache_stern"
    OKAMOTO_UCHIYAMA = "okamoto_uchiyama"
    PAILLIER = "paillier"
    DAMGARD_JURIK = "damgard_jurik"

    @classmethod
    def parse(cls, token: str) -> "SchemeId":
        try:
            return cls(token)
        except ValueError:
            names = ", ".join(s.value for s in cls)
            raise ParameterError(f"unknown scheme {token!r} (expected one of {names})") from None


@dataclass(frozen=True, kw_only=True)
class PublicKey:
    """Public half of a key pair. Subclasses add the scheme's named integers."""

    scheme: ClassVar[SchemeId]
    sigma: int

    @property
    def level(self) -> int | None:
        return None

    @property
    def message_modulus(self) -> int:
        raise NotImplementedError

    @property
    def ciphertext_modulus(self) -> int:
        raise NotImplementedError

    def integers(self) -> dict[str, int | tuple[int, ...]]:
        """Named integer fields, in declaration order (used for serialization)."""
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "sigma"}


@dataclass(frozen=True, kw_only=True)
class SecretKey:
    """Trapdoor half of a key pair; always carries its public key."""

    scheme: ClassVar[SchemeId]
    public: PublicKey

    def integers(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name != "public"}


class Plaintext(int):
    """Non-negative integer tagged with its message modulus.

    Compares equal to plain ints; the range check happens at construction.
    """

    space: int

    def __new__(cls, m: int, space: int):
        if space < 2:
            raise ParameterError("message modulus must be >= 2")
        if not 0 <= m < space:
            raise DomainError(f"plaintext {m} outside [0, {space})")
        obj = super().__new__(cls, m)
        obj.space = space
        return obj

    def __repr__(self):
        return f"Plaintext({int(self)}, space={self.space})"


@dataclass(frozen=True)
class Ciphertext:
    scheme: SchemeId
    residues: tuple[int, ...]
    level: int | None = None

    def __post_init__(self):
        if not self.residues:
            raise ParameterError("a ciphertext needs at least one residue")

    @property
    def value(self) -> int:
        return self.residues[0]


class Scheme:
    """Per-scheme hooks used by the generic operations.

    Subclasses implement key generation, the encryption formula, the
    decryption trapdoor and the ciphertext group operation. The generic
    layer derives blinding (combine with an encryption of zero) and scalar
    multiplication (double-and-add over the group operation).
    """

    id: ClassVar[SchemeId]
    additive: ClassVar[bool] = True
    probabilistic: ClassVar[bool] = True
    public_key_cls: ClassVar[type[PublicKey]]
    secret_key_cls: ClassVar[type[SecretKey]]

    def keygen(self, sigma: int, rng, **options) -> tuple[PublicKey, SecretKey]:
        raise NotImplementedError

    def random_r(self, pk, rng) -> int:
        """Sample randomness uniformly from the scheme's randomness set."""
        n = pk.n
        while True:
            r = rng.randrange(1, n)
            if math.gcd(r, n) == 1:
                return r

    def encrypt_with(self, pk, m: int, r: int | None) -> int:
        raise NotImplementedError

    def decrypt_residue(self, sk, c: int) -> int:
        raise NotImplementedError

    def op(self, pk, a: int, b: int) -> int:
        """Ciphertext group law: an encryption of ``m1 o m2`` from ``a`` and ``b``."""
        return a * b % pk.ciphertext_modulus

    def identity_residue(self, pk) -> int:
        return 1

    def validate_residue(self, pk, c: int) -> None:
        mod = pk.ciphertext_modulus
        if not 0 <= c < mod:
            raise CiphertextCorruptError(f"residue {c} outside [0, {mod})")
        if self.probabilistic and math.gcd(c, mod) != 1:
            raise CiphertextCorruptError("residue is not a unit of the ciphertext group")

    def decryption_modulus(self, sk) -> int:
        """Modulus of the plaintext group seen by the secret-key holder."""
        return sk.public.message_modulus

    def validate_public(self, pk) -> None:
        """Raise ``ParameterError`` when public values leave their groups."""
        if pk.n < 3:
            raise ParameterError("modulus too small")

    def validate_keypair(self, pk, sk) -> None:
        """Raise ``ParameterError`` when key material breaks a key invariant."""


_REGISTRY: dict[SchemeId, Scheme] = {}


def register(scheme_cls: type[Scheme]) -> type[Scheme]:
    _REGISTRY[scheme_cls.id] = scheme_cls()
    return scheme_cls


def get_scheme(scheme: SchemeId | str) -> Scheme:
    if not _REGISTRY:
        from . import schemes  # noqa: F401  (populates the registry)
    if isinstance(scheme, str) and not isinstance(scheme, SchemeId):
        scheme = SchemeId.parse(scheme)
    return _REGISTRY[scheme]


def default_rng():
    return secrets.SystemRandom()


def _check_same_key(pk: PublicKey, *cts: Ciphertext) -> None:
    for c in cts:
        if c.scheme != pk.scheme:
            raise ParameterError(f"ciphertext scheme {c.scheme.value} does not match key {pk.scheme.value}")
        if c.level != pk.level:
            raise ParameterError(f"ciphertext level {c.level} does not match key level {pk.level}")


def _wrap(pk: PublicKey, residue: int) -> Ciphertext:
    return Ciphertext(pk.scheme, (residue,), pk.level)


def keygen(scheme: SchemeId | str, sigma: int, rng=None, *, level: int | None = None, **options):
    """Generate ``(public_key, secret_key)`` with a ``sigma``-bit modulus.

    ``level`` is the Damgard-Jurik exponent ``s``; other schemes reject it.
    Scheme-specific ``options`` (e.g. ``block_bits`` for Benaloh) are
    passed through.
    """
    impl = get_scheme(scheme)
    if sigma < MIN_SIGMA:
        raise ParameterError(f"sigma must be >= {MIN_SIGMA}, got {sigma}")
    if level is not None:
        if impl.id is not SchemeId.DAMGARD_JURIK:
            raise ParameterError("level only applies to damgard_jurik")
        options["level"] = level
    return impl.keygen(sigma, rng or default_rng(), **options)


def encrypt(pk: PublicKey, m: int, rng=None, *, r: int | None = None) -> Ciphertext:
    """Encrypt ``m`` under ``pk``; ``r`` pins the randomness (tests, worked examples)."""
    impl = get_scheme(pk.scheme)
    m = Plaintext(int(m), pk.message_modulus)
    if impl.probabilistic and r is None:
        r = impl.random_r(pk, rng or default_rng())
    return _wrap(pk, impl.encrypt_with(pk, int(m), r))


def decrypt(sk: SecretKey, c: Ciphertext) -> Plaintext:
    pk = sk.public
    impl = get_scheme(pk.scheme)
    _check_same_key(pk, c)
    impl.validate_residue(pk, c.value)
    return Plaintext(impl.decrypt_residue(sk, c.value), impl.decryption_modulus(sk))


def blind(pk: PublicKey, c: Ciphertext, rng=None, *, r: int | None = None) -> Ciphertext:
    """Re-randomize ``c``: multiply in a fresh encryption of the identity."""
    impl = get_scheme(pk.scheme)
    if not impl.probabilistic:
        raise UnsupportedOperationError(f"{pk.scheme.value} is deterministic; nothing to blind")
    _check_same_key(pk, c)
    if r is None:
        r = impl.random_r(pk, rng or default_rng())
    zero = impl.encrypt_with(pk, 0, r)
    return _wrap(pk, impl.op(pk, c.value, zero))


def combine(
    pk: PublicKey,
    c1: Ciphertext,
    c2: Ciphertext,
    rng=None,
    *,
    raw: bool = False,
    r: int | None = None,
) -> Ciphertext:
    """Homomorphic Add (Mult for RSA); blinded unless ``raw``."""
    impl = get_scheme(pk.scheme)
    _check_same_key(pk, c1, c2)
    out = _wrap(pk, impl.op(pk, c1.value, c2.value))
    if raw or not impl.probabilistic:
        return out
    return blind(pk, out, rng, r=r)


def mixed_mult(
    pk: PublicKey,
    scalar: int,
    c: Ciphertext,
    rng=None,
    *,
    raw: bool = False,
    r: int | None = None,
) -> Ciphertext:
    """Encryption of ``scalar * m`` by double-and-add over the ciphertext law."""
    impl = get_scheme(pk.scheme)
    if not impl.additive:
        raise UnsupportedOperationError(f"{pk.scheme.value} is not additively homomorphic")
    _check_same_key(pk, c)
    Plaintext(scalar, pk.message_modulus)
    acc = impl.identity_residue(pk)
    for bit in bin(scalar)[2:]:
        acc = impl.op(pk, acc, acc)
        if bit == "1":
            acc = impl.op(pk, acc, c.value)
    out = _wrap(pk, acc)
    return out if raw else blind(pk, out, rng, r=r)

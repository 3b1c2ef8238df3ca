"""Okamoto-Uchiyama over n = p^2 q with plaintexts below p."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core import PublicKey, Scheme, SchemeId, SecretKey, register
from ..errors import CiphertextCorruptError, ParameterError, RandomnessError
from ._keys import prime_pair, tight_floor


@dataclass(frozen=True, kw_only=True)
class OUPublicKey(PublicKey):
    scheme = SchemeId.OKAMOTO_UCHIYAMA
    n: int
    g: int
    h: int
    # p is secret, so senders range-check against a public bound <= p.
    # Homomorphic sums still wrap modulo p.
    plaintext_bound: int

    @property
    def message_modulus(self):
        return self.plaintext_bound

    @property
    def ciphertext_modulus(self):
        return self.n


@dataclass(frozen=True, kw_only=True)
class OUSecretKey(SecretKey):
    scheme = SchemeId.OKAMOTO_UCHIYAMA
    p: int
    q: int

    @property
    def p2(self):
        return self.p * self.p


def _L(x: int, p: int) -> int:
    if (x - 1) % p:
        raise CiphertextCorruptError("L(x) undefined: x != 1 mod p")
    return (x - 1) // p


def key_from_params(p: int, q: int, g: int, sigma: int | None = None, *, bound: int | None = None):
    n = p * p * q
    if math.gcd(g, n) != 1 or pow(g, p - 1, p * p) == 1:
        raise ParameterError("g must be a unit whose order mod p^2 is divisible by p")
    if bound is None:
        bound = p
    if not 2 <= bound <= p:
        raise ParameterError("plaintext bound must lie in [2, p]")
    pk = OUPublicKey(sigma=sigma or n.bit_length(), n=n, g=g, h=pow(g, n, n), plaintext_bound=bound)
    return pk, OUSecretKey(public=pk, p=p, q=q)


@register
class OkamotoUchiyama(Scheme):
    id = SchemeId.OKAMOTO_UCHIYAMA
    public_key_cls = OUPublicKey
    secret_key_cls = OUSecretKey

    def keygen(self, sigma, rng):
        b = sigma // 3
        p, q = prime_pair(b, sigma - 2 * b, rng, exponent=3, sigma=sigma, modulus=lambda p, q: p * p * q)
        n = p * p * q
        while True:
            g = rng.randrange(2, n)
            if math.gcd(g, n) == 1 and pow(g, p - 1, p * p) != 1:
                return key_from_params(p, q, g, sigma, bound=tight_floor(b, 3))

    def random_r(self, pk, rng):
        return rng.randrange(1, pk.n)

    def encrypt_with(self, pk, m, r):
        if not 0 <= r < pk.n:
            raise RandomnessError("r must lie in [0, n)")
        return pow(pk.g, m, pk.n) * pow(pk.h, r, pk.n) % pk.n

    def decrypt_residue(self, sk, c):
        p, p2 = sk.p, sk.p2
        a = _L(pow(c, p - 1, p2), p)
        b = _L(pow(sk.public.g, p - 1, p2), p)
        return a * pow(b, -1, p) % p

    def decryption_modulus(self, sk):
        return sk.p

    def validate_public(self, pk):
        super().validate_public(pk)
        if not 0 < pk.g < pk.n or math.gcd(pk.g, pk.n) != 1:
            raise ParameterError("g must be a unit modulo n")
        if pk.h != pow(pk.g, pk.n, pk.n):
            raise ParameterError("h != g^n mod n")
        if not 2 <= pk.plaintext_bound < pk.n:
            raise ParameterError("plaintext bound out of range")

    def validate_keypair(self, pk, sk):
        p, q = sk.p, sk.q
        if p * p * q != pk.n:
            raise ParameterError("n != p^2 q")
        if pk.h != pow(pk.g, pk.n, pk.n):
            raise ParameterError("h != g^n mod n")
        if pow(pk.g, p - 1, p * p) == 1:
            raise ParameterError("order of g mod p^2 is not divisible by p")
        if not 2 <= pk.plaintext_bound <= p:
            raise ParameterError("plaintext bound exceeds p")

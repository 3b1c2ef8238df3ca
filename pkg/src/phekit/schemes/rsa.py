"""Textbook RSA: deterministic, multiplicatively homomorphic."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core import PublicKey, Scheme, SchemeId, SecretKey, register
from ..errors import ParameterError
from ._keys import prime_pair

DEFAULT_E = 65537


@dataclass(frozen=True, kw_only=True)
class RSAPublicKey(PublicKey):
    scheme = SchemeId.RSA
    n: int
    e: int

    @property
    def message_modulus(self):
        return self.n

    @property
    def ciphertext_modulus(self):
        return self.n


@dataclass(frozen=True, kw_only=True)
class RSASecretKey(SecretKey):
    scheme = SchemeId.RSA
    p: int
    q: int
    d: int


def key_from_params(p: int, q: int, e: int = DEFAULT_E, sigma: int | None = None):
    n = p * q
    phi = (p - 1) * (q - 1)
    if math.gcd(e, phi) != 1:
        raise ParameterError(f"e={e} is not invertible modulo phi(n)")
    pk = RSAPublicKey(sigma=sigma or n.bit_length(), n=n, e=e)
    return pk, RSASecretKey(public=pk, p=p, q=q, d=pow(e, -1, phi))


@register
class RSA(Scheme):
    id = SchemeId.RSA
    additive = False
    probabilistic = False
    public_key_cls = RSAPublicKey
    secret_key_cls = RSASecretKey

    def keygen(self, sigma, rng, e=DEFAULT_E):
        b = sigma // 2
        p, q = prime_pair(
            b, sigma - b, rng, sigma=sigma,
            accept=lambda p, q: math.gcd(e, (p - 1) * (q - 1)) == 1,
        )
        return key_from_params(p, q, e, sigma)

    def encrypt_with(self, pk, m, r):
        return pow(m, pk.e, pk.n)

    def decrypt_residue(self, sk, c):
        return pow(c, sk.d, sk.public.n)

    def validate_public(self, pk):
        super().validate_public(pk)
        if pk.e < 3 or pk.e % 2 == 0:
            raise ParameterError("e must be odd and >= 3")

    def validate_keypair(self, pk, sk):
        if sk.p * sk.q != pk.n:
            raise ParameterError("n != p*q")
        if pk.e * sk.d % ((sk.p - 1) * (sk.q - 1)) != 1:
            raise ParameterError("e*d != 1 mod phi(n)")

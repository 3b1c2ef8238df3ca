"""Goldwasser-Micali: one bit per ciphertext, XOR-homomorphic."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core import PublicKey, Scheme, SchemeId, SecretKey, register
from ..errors import CiphertextCorruptError, ParameterError, RandomnessError
from ..numtheory import jacobi
from ._keys import prime_pair


@dataclass(frozen=True, kw_only=True)
class GMPublicKey(PublicKey):
    scheme = SchemeId.GM
    n: int
    a: int  # pseudo-square: non-residue mod p and mod q

    @property
    def message_modulus(self):
        return 2

    @property
    def ciphertext_modulus(self):
        return self.n


@dataclass(frozen=True, kw_only=True)
class GMSecretKey(SecretKey):
    scheme = SchemeId.GM
    p: int
    q: int


def is_pseudo_square(a: int, p: int, q: int) -> bool:
    return jacobi(a, p) == -1 and jacobi(a, q) == -1


def key_from_params(p: int, q: int, a: int, sigma: int | None = None):
    if not is_pseudo_square(a, p, q):
        raise ParameterError(f"a={a} must be a non-residue modulo both primes")
    n = p * q
    pk = GMPublicKey(sigma=sigma or n.bit_length(), n=n, a=a % n)
    return pk, GMSecretKey(public=pk, p=p, q=q)


@register
class GoldwasserMicali(Scheme):
    id = SchemeId.GM
    public_key_cls = GMPublicKey
    secret_key_cls = GMSecretKey

    def keygen(self, sigma, rng):
        b = sigma // 2
        p, q = prime_pair(b, sigma - b, rng, sigma=sigma)
        n = p * q
        while True:  # a quarter of Z_n^* qualifies
            a = rng.randrange(2, n)
            if is_pseudo_square(a, p, q):
                return key_from_params(p, q, a, sigma)

    def encrypt_with(self, pk, m, r):
        if math.gcd(r, pk.n) != 1:
            raise RandomnessError("r must be a unit modulo n")
        return pow(pk.a, m, pk.n) * r * r % pk.n

    def decrypt_residue(self, sk, c):
        if jacobi(c, sk.public.n) != 1:
            raise CiphertextCorruptError("GM ciphertexts have Jacobi symbol 1")
        # Euler criterion: squares mod p decrypt to 0
        return 0 if pow(c, (sk.p - 1) // 2, sk.p) == 1 else 1

    def validate_public(self, pk):
        super().validate_public(pk)
        if not 0 < pk.a < pk.n or pk.n % 2 == 0 or jacobi(pk.a, pk.n) != 1:
            raise ParameterError("a must be a unit of Z_n with Jacobi symbol 1")

    def validate_keypair(self, pk, sk):
        if sk.p * sk.q != pk.n:
            raise ParameterError("n != p*q")
        if not is_pseudo_square(pk.a, sk.p, sk.q):
            raise ParameterError("a is not a pseudo-square")

    def validate_residue(self, pk, c):
        super().validate_residue(pk, c)
        if jacobi(c, pk.n) != 1:
            raise CiphertextCorruptError("GM ciphertexts have Jacobi symbol 1")

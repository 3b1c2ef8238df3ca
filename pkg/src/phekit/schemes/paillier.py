"""Paillier and its Damgard-Jurik generalization to Z*_{n^(s+1)}.

Both fix ``g = n + 1``. With that generator ``g^m mod n^2 = 1 + m*n`` and a
Damgard-Jurik key at level 1 produces the same residues as Paillier.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core import PublicKey, Scheme, SchemeId, SecretKey, register
from ..errors import CiphertextCorruptError, ParameterError, RandomnessError
from ..numtheory import crt_combine, lcm
from ._keys import prime_pair


@dataclass(frozen=True, kw_only=True)
class PaillierPublicKey(PublicKey):
    scheme = SchemeId.PAILLIER
    n: int
    g: int

    @property
    def n2(self):
        return self.n * self.n

    @property
    def message_modulus(self):
        return self.n

    @property
    def ciphertext_modulus(self):
        return self.n2


@dataclass(frozen=True, kw_only=True)
class PaillierSecretKey(SecretKey):
    scheme = SchemeId.PAILLIER
    p: int
    q: int
    lam: int
    mu: int


def _L(x: int, n: int) -> int:
    if (x - 1) % n:
        raise CiphertextCorruptError("L(x) undefined: x != 1 mod n")
    return (x - 1) // n


def _check_primes(p: int, q: int) -> None:
    if p == q:
        raise ParameterError("p and q must differ")
    if math.gcd(p * q, (p - 1) * (q - 1)) != 1:
        raise ParameterError("gcd(n, phi(n)) must be 1")


def paillier_key(p: int, q: int, g: int | None = None, sigma: int | None = None):
    _check_primes(p, q)
    n = p * q
    n2 = n * n
    g = n + 1 if g is None else g
    lam = lcm(p - 1, q - 1)
    try:
        mu = pow(_L(pow(g, lam, n2), n), -1, n)
    except (CiphertextCorruptError, ValueError):
        raise ParameterError("g does not have order divisible by n") from None
    pk = PaillierPublicKey(sigma=sigma or n.bit_length(), n=n, g=g)
    return pk, PaillierSecretKey(public=pk, p=p, q=q, lam=lam, mu=mu)


def paillier_decrypt_crt(sk: PaillierSecretKey, c: int) -> int:
    """Decrypt by computing ``c^lambda`` separately modulo ``p^2`` and ``q^2``."""
    p2, q2 = sk.p * sk.p, sk.q * sk.q
    # exponents reduce modulo phi(p^2) = p(p-1)
    xp = pow(c, sk.lam % (sk.p * (sk.p - 1)), p2)
    xq = pow(c, sk.lam % (sk.q * (sk.q - 1)), q2)
    x = crt_combine([(xp, p2), (xq, q2)])
    n = sk.public.n
    return _L(x, n) * sk.mu % n


@register
class Paillier(Scheme):
    id = SchemeId.PAILLIER
    public_key_cls = PaillierPublicKey
    secret_key_cls = PaillierSecretKey

    def keygen(self, sigma, rng):
        b = sigma // 2
        # exponent 4 pins l(n^2) = 2 sigma
        p, q = prime_pair(
            b, sigma - b, rng, exponent=4, sigma=sigma,
            accept=lambda p, q: math.gcd(p * q, (p - 1) * (q - 1)) == 1,
        )
        return paillier_key(p, q, sigma=sigma)

    def encrypt_with(self, pk, m, r):
        n, n2 = pk.n, pk.n2
        if math.gcd(r, n) != 1:
            raise RandomnessError("r must be a unit modulo n")
        gm = (1 + m * n) % n2 if pk.g == n + 1 else pow(pk.g, m, n2)
        return gm * pow(r, n, n2) % n2

    def decrypt_residue(self, sk, c):
        n = sk.public.n
        return _L(pow(c, sk.lam, n * n), n) * sk.mu % n

    def validate_public(self, pk):
        super().validate_public(pk)
        if not 0 < pk.g < pk.n2 or math.gcd(pk.g, pk.n) != 1:
            raise ParameterError("g must be a unit modulo n^2")

    def validate_keypair(self, pk, sk):
        if sk.p * sk.q != pk.n:
            raise ParameterError("n != p*q")
        _, ref = paillier_key(sk.p, sk.q, pk.g)
        if (ref.lam, ref.mu) != (sk.lam, sk.mu):
            raise ParameterError("lambda/mu inconsistent with p, q")


@dataclass(frozen=True, kw_only=True)
class DJPublicKey(PublicKey):
    scheme = SchemeId.DAMGARD_JURIK
    n: int
    g: int
    s: int

    @property
    def level(self):
        return self.s

    @property
    def message_modulus(self):
        return self.n**self.s

    @property
    def ciphertext_modulus(self):
        return self.n ** (self.s + 1)

    def integers(self):
        return {"n": self.n, "g": self.g}


@dataclass(frozen=True, kw_only=True)
class DJSecretKey(SecretKey):
    scheme = SchemeId.DAMGARD_JURIK
    p: int
    q: int
    lam: int


def dj_key(p: int, q: int, s: int, sigma: int | None = None):
    if s < 1:
        raise ParameterError("level s must be >= 1")
    _check_primes(p, q)
    if min(p, q) <= s:
        # digit extraction divides by k! for k <= s
        raise ParameterError("primes must exceed the level s")
    n = p * q
    pk = DJPublicKey(sigma=sigma or n.bit_length(), n=n, g=n + 1, s=s)
    return pk, DJSecretKey(public=pk, p=p, q=q, lam=lcm(p - 1, q - 1))


def dj_extract(a: int, n: int, s: int) -> int:
    """Recover ``i mod n^s`` from ``a = (1+n)^i mod n^(s+1)``.

    Works one base-``n`` digit at a time: at step ``j`` the binomial
    expansion of ``(1+n)^i`` modulo ``n^(j+1)`` is
    ``1 + sum_{k=1..j} C(i, k) n^k``, so ``L`` of it gives ``i`` plus
    correction terms that only involve the ``i mod n^(j-1)`` already known.
    """
    i = 0
    for j in range(1, s + 1):
        nj = n**j
        t1 = _L(a % (nj * n), n) % nj
        t2 = i
        for k in range(2, j + 1):
            i -= 1
            t2 = t2 * i % nj
            t1 = (t1 - t2 * n ** (k - 1) * pow(math.factorial(k), -1, nj)) % nj
        i = t1
    return i


def one_plus_n_pow(m: int, n: int, s: int) -> int:
    """``(1+n)^m mod n^(s+1)`` from the binomial expansion (terms k <= s survive)."""
    mod = n ** (s + 1)
    acc, binom = 1, 1
    for k in range(1, s + 1):
        binom = binom * (m - k + 1) // k
        acc += binom * n**k
    return acc % mod


@register
class DamgardJurik(Scheme):
    id = SchemeId.DAMGARD_JURIK
    public_key_cls = DJPublicKey
    secret_key_cls = DJSecretKey

    def keygen(self, sigma, rng, level=1):
        b = sigma // 2
        # exponent 2(s+1) pins l(n^j) = j sigma for every j <= s+1
        p, q = prime_pair(
            b, sigma - b, rng, exponent=2 * (level + 1), sigma=sigma,
            accept=lambda p, q: math.gcd(p * q, (p - 1) * (q - 1)) == 1 and min(p, q) > level,
        )
        return dj_key(p, q, level, sigma)

    def encrypt_with(self, pk, m, r):
        n = pk.n
        mod = pk.ciphertext_modulus
        if math.gcd(r, n) != 1:
            raise RandomnessError("r must be a unit modulo n")
        return one_plus_n_pow(m, n, pk.s) * pow(r, pk.message_modulus, mod) % mod

    def decrypt_residue(self, sk, c):
        pk = sk.public
        n, s = pk.n, pk.s
        ns = pk.message_modulus
        a = pow(c, sk.lam, pk.ciphertext_modulus)
        return dj_extract(a, n, s) * pow(sk.lam, -1, ns) % ns

    def validate_public(self, pk):
        super().validate_public(pk)
        if pk.s < 1:
            raise ParameterError("level s must be >= 1")
        if pk.g != pk.n + 1:
            raise ParameterError("g must be n+1")

    def validate_keypair(self, pk, sk):
        if sk.p * sk.q != pk.n:
            raise ParameterError("n != p*q")
        if pk.g != pk.n + 1:
            raise ParameterError("g must be n+1")
        if sk.lam != lcm(sk.p - 1, sk.q - 1):
            raise ParameterError("lambda inconsistent with p, q")

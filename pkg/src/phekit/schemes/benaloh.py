"""Benaloh (prime block size) and Naccache-Stern (smooth block size).

Both encrypt as ``g^m * r^k mod n``. Decryption raises the ciphertext to
``phi/p_i`` for each prime ``p_i`` of ``k``, which kills the randomness
and leaves an element of the order-``p_i`` subgroup generated by
``g^(phi/p_i)``; a small discrete log recovers ``m mod p_i`` and CRT
reassembles ``m mod k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core import PublicKey, Scheme, SchemeId, SecretKey, register
from ..errors import GenerationError, ParameterError, RandomnessError
from ..numtheory import SMALL_PRIMES, crt_combine, dlog_subgroup, gen_prime, is_probable_prime
from ._keys import prime_pair, random_unit


@dataclass(frozen=True, kw_only=True)
class BenalohPublicKey(PublicKey):
    scheme = SchemeId.BENALOH
    n: int
    g: int
    k: int

    @property
    def factors(self) -> tuple[int, ...]:
        return (self.k,)

    @property
    def message_modulus(self):
        return self.k

    @property
    def ciphertext_modulus(self):
        return self.n


@dataclass(frozen=True, kw_only=True)
class BenalohSecretKey(SecretKey):
    scheme = SchemeId.BENALOH
    p: int
    q: int
    phi: int


@dataclass(frozen=True, kw_only=True)
class NSPublicKey(PublicKey):
    scheme = SchemeId.NACCACHE_STERN
    n: int
    g: int
    k: int
    factors: tuple[int, ...]

    @property
    def message_modulus(self):
        return self.k

    @property
    def ciphertext_modulus(self):
        return self.n


@dataclass(frozen=True, kw_only=True)
class NSSecretKey(SecretKey):
    scheme = SchemeId.NACCACHE_STERN
    p: int
    q: int
    phi: int


def _generator_ok(g: int, n: int, phi: int, factors) -> bool:
    return math.gcd(g, n) == 1 and all(pow(g, phi // f, n) != 1 for f in factors)


def _find_generator(n: int, phi: int, factors, rng=None) -> int:
    if rng is None:
        for g in range(2, n):
            if _generator_ok(g, n, phi, factors):
                return g
    else:
        for _ in range(10_000):
            g = random_unit(n, rng)
            if _generator_ok(g, n, phi, factors):
                return g
    raise GenerationError("no generator with full order on the message subgroup")


def _check_structure(p: int, q: int, factors) -> None:
    phi = (p - 1) * (q - 1)
    for f in factors:
        if (phi // f) % f == 0:
            raise ParameterError(f"{f}^2 divides phi(n); decryption would be ambiguous")
        if ((p - 1) % f == 0) == ((q - 1) % f == 0):
            raise ParameterError(f"{f} must divide exactly one of p-1, q-1")


def benaloh_key(p: int, q: int, k: int, g: int | None = None, sigma: int | None = None):
    """Benaloh key from explicit parameters (``g`` searched when omitted)."""
    if k < 3 or not is_probable_prime(k, _FixedRng()):
        raise ParameterError("Benaloh block size k must be an odd prime")
    _check_structure(p, q, (k,))
    n, phi = p * q, (p - 1) * (q - 1)
    if g is None:
        g = _find_generator(n, phi, (k,))
    elif not _generator_ok(g, n, phi, (k,)):
        raise ParameterError("g^(phi/k) must differ from 1")
    pk = BenalohPublicKey(sigma=sigma or n.bit_length(), n=n, g=g, k=k)
    return pk, BenalohSecretKey(public=pk, p=p, q=q, phi=phi)


def ns_key(p: int, q: int, factors, g: int | None = None, sigma: int | None = None, rng=None):
    """Naccache-Stern key; ``factors`` are the distinct odd primes of k."""
    factors = tuple(sorted(factors))
    if len(set(factors)) != len(factors) or any(f < 3 for f in factors):
        raise ParameterError("k must be a product of distinct odd primes")
    _check_structure(p, q, factors)
    n, phi = p * q, (p - 1) * (q - 1)
    if g is None:
        g = _find_generator(n, phi, factors, rng)
    elif not _generator_ok(g, n, phi, factors):
        raise ParameterError("g must have order divisible by every factor of k")
    pk = NSPublicKey(sigma=sigma or n.bit_length(), n=n, g=g, k=math.prod(factors), factors=factors)
    return pk, NSSecretKey(public=pk, p=p, q=q, phi=phi)


class _FixedRng:
    # Miller-Rabin bases for validating user-supplied k; determinism is fine here.
    def __init__(self):
        import random

        self._r = random.Random(0)

    def randrange(self, *a):
        return self._r.randrange(*a)


def _encrypt(pk, m, r):
    if math.gcd(r, pk.n) != 1:
        raise RandomnessError("r must be a unit modulo n")
    return pow(pk.g, m, pk.n) * pow(r, pk.k, pk.n) % pk.n


def _decrypt(sk, c):
    pk = sk.public
    parts = []
    for f in pk.factors:
        e = sk.phi // f
        x = pow(c, e, pk.n)
        y = pow(pk.g, e, pk.n)
        parts.append((dlog_subgroup(y, x, pk.n, f, cache=True), f))
    return crt_combine(parts)


def _validate_public(pk):
    if not 0 < pk.g < pk.n or math.gcd(pk.g, pk.n) != 1:
        raise ParameterError("g must be a unit modulo n")
    if math.prod(pk.factors) != pk.k:
        raise ParameterError("k differs from the product of its factors")


def _validate(pk, sk):
    if sk.p * sk.q != pk.n:
        raise ParameterError("n != p*q")
    if sk.phi != (sk.p - 1) * (sk.q - 1):
        raise ParameterError("phi != (p-1)(q-1)")
    if math.prod(pk.factors) != pk.k:
        raise ParameterError("k differs from the product of its factors")
    _check_structure(sk.p, sk.q, pk.factors)
    if not _generator_ok(pk.g, pk.n, sk.phi, pk.factors):
        raise ParameterError("generator does not cover the message subgroup")


@register
class Benaloh(Scheme):
    id = SchemeId.BENALOH
    public_key_cls = BenalohPublicKey
    secret_key_cls = BenalohSecretKey

    def keygen(self, sigma, rng, block_bits=None):
        if block_bits is None:
            block_bits = max(2, min(16, sigma // 4))
        b = sigma // 2
        for _ in range(64):
            k = gen_prime(block_bits, rng)
            if k == 2:
                continue
            try:
                p, q = prime_pair(
                    b, sigma - b, rng, sigma=sigma,
                    p_constraint={"residue": 1, "modulus": k},
                    accept=lambda p, q: ((p - 1) // k) % k != 0 and (q - 1) % k != 0,
                )
            except GenerationError:
                continue  # small moduli: this k may leave no prime in range
            n, phi = p * q, (p - 1) * (q - 1)
            g = _find_generator(n, phi, (k,), rng)
            return benaloh_key(p, q, k, g, sigma)
        raise GenerationError(f"no usable {block_bits}-bit block prime for sigma={sigma}")

    encrypt_with = staticmethod(_encrypt)

    def decrypt_residue(self, sk, c):
        return _decrypt(sk, c)

    def validate_public(self, pk):
        super().validate_public(pk)
        _validate_public(pk)

    def validate_keypair(self, pk, sk):
        _validate(pk, sk)


def smooth_block(target_bits: int) -> tuple[int, ...]:
    """Consecutive odd primes whose product first reaches ``target_bits`` bits."""
    out = []
    prod = 1
    for p in SMALL_PRIMES[1:]:
        out.append(p)
        prod *= p
        if prod.bit_length() >= target_bits:
            return tuple(out)
    raise ParameterError(f"block of {target_bits} bits needs primes beyond {SMALL_PRIMES[-1]}")


@register
class NaccacheStern(Scheme):
    id = SchemeId.NACCACHE_STERN
    public_key_cls = NSPublicKey
    secret_key_cls = NSSecretKey

    def keygen(self, sigma, rng, block_bits=None):
        # default l(k) = l(n)/4, the quoted expansion-4 operating point
        if block_bits is None:
            block_bits = max(2, sigma // 4)
        factors = smooth_block(block_bits)
        u = math.prod(factors[0::2])
        v = math.prod(factors[1::2])
        b = sigma // 2
        if (2 * u).bit_length() + 2 > b or (2 * v).bit_length() + 2 > sigma - b:
            raise ParameterError(f"block of {block_bits} bits does not fit a {sigma}-bit modulus")

        def exactly_one(p, q):
            return all(((p - 1) % f == 0) != ((q - 1) % f == 0) for f in factors)

        p, q = prime_pair(
            b, sigma - b, rng, sigma=sigma,
            p_constraint={"residue": 1, "modulus": 2 * u},
            q_constraint={"residue": 1, "modulus": 2 * v},
            accept=lambda p, q: exactly_one(p, q)
            and all(((p - 1) * (q - 1) // f) % f for f in factors),
        )
        return ns_key(p, q, factors, sigma=sigma, rng=rng)

    encrypt_with = staticmethod(_encrypt)

    def decrypt_residue(self, sk, c):
        return _decrypt(sk, c)

    def validate_public(self, pk):
        super().validate_public(pk)
        _validate_public(pk)

    def validate_keypair(self, pk, sk):
        _validate(pk, sk)

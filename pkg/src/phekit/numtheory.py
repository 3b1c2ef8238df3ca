"""Arbitrary-precision number theory used by the cryptosystems.

All functions operate on Python ``int`` values. Randomness is always an
explicit ``random.Random``-compatible argument so key generation is
reproducible under a seeded generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import GenerationError, NoSolutionError, ParameterError

MR_ROUNDS = 40
CANDIDATE_BUDGET = 1 << 14


def _sieve(limit: int) -> tuple[int, ...]:
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit - 1) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(flags[i * i :: i]))
    return tuple(i for i, f in enumerate(flags) if f)


SMALL_PRIMES = _sieve(1000)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending ``(prime, exponent)`` pairs."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ParameterError("factor primes must be distinct and ascending")
        if any(e < 1 for _, e in self.factors):
            raise ParameterError("exponents must be positive")

    @classmethod
    def of(cls, n: int) -> "Factorization":
        """Factor ``n`` by trial division (intended for small orders)."""
        if n < 1:
            raise ParameterError("can only factor positive integers")
        out = []
        d = 2
        while d * d <= n:
            if n % d == 0:
                e = 0
                while n % d == 0:
                    n //= d
                    e += 1
                out.append((d, e))
            d += 1 if d == 2 else 2
        if n > 1:
            out.append((n, 1))
        return cls(tuple(out))

    @classmethod
    def from_primes(cls, primes: Iterable[int]) -> "Factorization":
        counts: dict[int, int] = {}
        for p in primes:
            counts[p] = counts.get(p, 0) + 1
        return cls(tuple(sorted(counts.items())))

    @property
    def value(self) -> int:
        return math.prod(p**e for p, e in self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """Return ``base**exponent mod modulus``.

    Backed by the built-in three-argument ``pow`` (left-to-right
    square-and-multiply over CPython longs).
    """
    if modulus < 2:
        raise ParameterError(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise ParameterError("exponent must be non-negative")
    return pow(base, exponent, modulus)


def mod_inverse(a: int, modulus: int) -> int:
    try:
        return pow(a, -1, modulus)
    except ValueError:
        raise ParameterError(f"{a} is not invertible modulo {modulus}") from None


def lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


def iroot_ceil(n: int, k: int) -> int:
    """Smallest integer x with ``x**k >= n``."""
    if n <= 1:
        return max(n, 0)
    x = 1 << -(-n.bit_length() // k)  # upper bound
    # Newton iteration from above converges to floor root.
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k >= n else x + 1


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol ``(a/n)`` by the binary reciprocity algorithm."""
    if n < 3 or n % 2 == 0:
        raise ParameterError(f"Jacobi symbol needs an odd modulus >= 3, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_probable_prime(n: int, rng, rounds: int = MR_ROUNDS) -> bool:
    """Trial division by primes below 1000, then Miller-Rabin with random bases."""
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 1_000_000:  # every composite below 1000**2 has a factor < 1000
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def gen_prime(
    bits: int,
    rng,
    *,
    residue: int | None = None,
    modulus: int | None = None,
    min_value: int | None = None,
) -> int:
    """Random probable prime of exactly ``bits`` bits.

    With ``residue``/``modulus`` the prime satisfies ``p = residue mod modulus``
    (use ``residue=1, modulus=k`` for "k divides p - 1"). A random start
    in the residue class is drawn and then stepped by ``modulus``; at most
    ``CANDIDATE_BUDGET`` candidates are tested.

    ``min_value`` raises the lower end of the sampling range, which key
    generation uses to pin the bit length of products of primes.
    """
    if bits < 2:
        raise ParameterError("bits must be >= 2")
    if (residue is None) != (modulus is None):
        raise ParameterError("residue and modulus must be given together")
    if modulus is None:
        residue, modulus = 1, 2 if bits > 2 else 1
    if modulus < 1:
        raise ParameterError("congruence modulus must be positive")
    residue %= modulus
    lo = 1 << (bits - 1)
    hi = 1 << bits
    if min_value is not None:
        lo = max(lo, min_value)
    if lo >= hi:
        raise GenerationError(f"empty range for {bits}-bit primes")
    g = math.gcd(residue, modulus)
    if g != 1:
        # only g itself could be prime, and only if it lies in the class
        if g >= lo and g < hi and g % modulus == residue and is_probable_prime(g, rng):
            return g
        raise GenerationError(f"no {bits}-bit primes congruent to {residue} mod {modulus}")
    first = lo + (residue - lo) % modulus
    if first >= hi:
        raise GenerationError(f"no {bits}-bit integers congruent to {residue} mod {modulus}")
    slots = (hi - 1 - first) // modulus + 1

    tested = 0
    while tested < CANDIDATE_BUDGET:
        c = first + rng.randrange(slots) * modulus
        while c < hi and tested < CANDIDATE_BUDGET:
            tested += 1
            if is_probable_prime(c, rng):
                return c
            c += modulus
    raise GenerationError(
        f"no prime found after {CANDIDATE_BUDGET} candidates ({bits} bits, "
        f"= {residue} mod {modulus})"
    )


def crt_combine(residues: Sequence[tuple[int, int]]) -> int:
    """Chinese remaindering of ``(value, modulus)`` pairs with coprime moduli."""
    if not residues:
        raise ParameterError("need at least one congruence")
    x, m = 0, 1
    for value, mod in residues:
        if mod < 1:
            raise ParameterError("moduli must be positive")
        if math.gcd(m, mod) != 1:
            raise ParameterError(f"modulus {mod} is not coprime to the others")
        # x' = x + m * ((value - x) * m^-1 mod mod)
        t = (value - x) * pow(m, -1, mod) % mod if mod > 1 else 0
        x += m * t
        m *= mod
    return x % m


@lru_cache(maxsize=256)
def _baby_steps(gen: int, modulus: int, width: int) -> dict[int, int]:
    table = {}
    x = 1
    for j in range(width):
        table.setdefault(x, j)
        x = x * gen % modulus
    return table


def _bsgs(gen: int, target: int, modulus: int, order: int, cache: bool) -> int:
    """Solve ``gen**x = target`` for ``x < order`` where ``gen`` has prime order."""
    width = math.isqrt(order - 1) + 1
    if cache:
        table = _baby_steps(gen, modulus, width)
    else:
        table = _baby_steps.__wrapped__(gen, modulus, width)
    giant = pow(gen, -width, modulus)
    y = target
    for i in range(width + 1):
        j = table.get(y)
        if j is not None:
            x = i * width + j
            if x < order:
                return x
        y = y * giant % modulus
    raise NoSolutionError(f"{target} is not in the subgroup generated by {gen}")


def dlog_subgroup(
    base: int,
    target: int,
    modulus: int,
    order: Factorization | int,
    *,
    cache: bool = False,
) -> int:
    """Discrete log of ``target`` to ``base`` in a subgroup of known order.

    Pohlig-Hellman over the factors of ``order`` with baby-step/giant-step
    for each prime. ``cache=True`` keeps baby-step tables between calls
    (useful when one key decrypts many ciphertexts).

    Raises:
        NoSolutionError: ``target`` is not a power of ``base``.
    """
    if modulus < 2:
        raise ParameterError("modulus must be >= 2")
    if isinstance(order, int):
        order = Factorization.of(order)
    n = order.value
    base %= modulus
    target %= modulus
    if pow(base, n, modulus) != 1:
        raise ParameterError(f"base {base} does not have order dividing {n}")

    congruences = []
    for p, e in order.factors:
        pe = p**e
        cofactor = n // pe
        g = pow(base, cofactor, modulus)  # order divides p^e
        h = pow(target, cofactor, modulus)
        gamma = pow(g, p ** (e - 1), modulus)  # order divides p
        x = 0
        for k in range(e):
            hk = pow(pow(g, -x, modulus) * h % modulus, p ** (e - 1 - k), modulus)
            if gamma == 1:
                if hk != 1:
                    raise NoSolutionError(f"{target} is not in the subgroup generated by {base}")
                dk = 0
            else:
                dk = _bsgs(gamma, hk, modulus, p, cache)
            x += dk * p**k
        congruences.append((x, pe))
    x = crt_combine(congruences) if congruences else 0
    if pow(base, x, modulus) != target:
        raise NoSolutionError(f"{target} is not in the subgroup generated by {base}")
    # reduce to the true order of base when it is a proper divisor of n
    return _reduce_to_element_order(base, x, modulus, order)


def _reduce_to_element_order(base: int, x: int, modulus: int, order: Factorization) -> int:
    n = order.value
    true_order = n
    for p, _ in order.factors:
        while true_order % p == 0 and pow(base, true_order // p, modulus) == 1:
            true_order //= p
    return x % true_order

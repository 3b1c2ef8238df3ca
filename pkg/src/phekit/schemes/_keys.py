"""Prime-pair sampling shared by the factoring-based key generators."""

from __future__ import annotations

import math

from ..errors import GenerationError
from ..numtheory import gen_prime, iroot_ceil

PAIR_ATTEMPTS = 256


def tight_floor(bits: int, exponent: int) -> int:
    """Smallest x with ``x**exponent >= 2**(exponent*bits - 1)``.

    Sampling each factor above this floor guarantees that a product of
    factors (raised to the matching power) has no "missing" top bit.
    """
    return iroot_ceil(1 << (exponent * bits - 1), exponent)


def prime_pair(
    p_bits: int,
    q_bits: int,
    rng,
    *,
    exponent: int = 2,
    p_constraint: dict | None = None,
    q_constraint: dict | None = None,
    accept=None,
    modulus=lambda p, q: p * q,
    sigma: int | None = None,
):
    """Draw distinct primes ``p, q`` until ``accept(p, q)`` holds.

    ``exponent`` controls how close to the top of their range the primes
    are drawn (see :func:`tight_floor`); when ``sigma`` is given the
    ``modulus(p, q)`` must have exactly ``sigma`` bits.
    """
    p_min = tight_floor(p_bits, exponent)
    q_min = tight_floor(q_bits, exponent)
    for _ in range(PAIR_ATTEMPTS):
        p = gen_prime(p_bits, rng, min_value=p_min, **(p_constraint or {}))
        q = gen_prime(q_bits, rng, min_value=q_min, **(q_constraint or {}))
        if p == q:
            continue
        if sigma is not None and modulus(p, q).bit_length() != sigma:
            continue
        if accept is not None and not accept(p, q):
            continue
        return p, q
    raise GenerationError(f"no acceptable prime pair after {PAIR_ATTEMPTS} attempts")


def random_unit(n: int, rng) -> int:
    while True:
        r = rng.randrange(1, n)
        if math.gcd(r, n) == 1:
            return r

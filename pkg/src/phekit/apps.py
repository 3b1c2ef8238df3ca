"""Demo applications: encrypted vote tally, sensor aggregation, mix node.

None of these functions take a secret key; they run on the untrusted
aggregator's side.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Ciphertext, PublicKey, blind, combine, default_rng, get_scheme, mixed_mult
from .errors import CapacityError, ParameterError, UnsupportedOperationError


@dataclass(frozen=True)
class Ballot:
    """An encrypted 0/1 vote.

    Whether the plaintext really is 0 or 1 is the voter's claim; nothing
    here verifies it (that needs a zero-knowledge proof).
    """

    ciphertext: Ciphertext


@dataclass(frozen=True)
class AggregationBatch:
    readings: tuple[Ciphertext, ...]
    max_reading: int | None = None  # declared bound on each plaintext reading


def _require_additive(pk: PublicKey) -> None:
    if not get_scheme(pk.scheme).additive:
        raise UnsupportedOperationError(f"{pk.scheme.value} is not additively homomorphic")


def _fold(pk: PublicKey, cts: Sequence[Ciphertext], rng) -> Ciphertext:
    acc = cts[0]
    for c in cts[1:]:
        acc = combine(pk, acc, c, raw=True)
    return blind(pk, acc, rng)


def tally(pk: PublicKey, ballots: Sequence[Ballot | Ciphertext], rng=None) -> Ciphertext:
    """Encrypted sum of all votes."""
    _require_additive(pk)
    if not ballots:
        raise ParameterError("no ballots to tally")
    if len(ballots) >= pk.message_modulus:
        raise CapacityError(
            f"{len(ballots)} ballots could wrap the message modulus {pk.message_modulus}"
        )
    cts = [b.ciphertext if isinstance(b, Ballot) else b for b in ballots]
    return _fold(pk, cts, rng or default_rng())


def aggregate_sum(pk: PublicKey, batch: AggregationBatch, rng=None) -> Ciphertext:
    return aggregate_weighted(pk, batch, [1] * len(batch.readings), rng)


def aggregate_weighted(pk: PublicKey, batch: AggregationBatch, weights: Sequence[int], rng=None) -> Ciphertext:
    """Encrypted ``sum(w_i * m_i)`` via scalar multiplication.

    With ``batch.max_reading`` set, a sum that could reach the message
    modulus raises ``CapacityError``; otherwise the result is reduced
    modulo the message modulus.
    """
    _require_additive(pk)
    if not batch.readings:
        raise ParameterError("empty batch")
    if len(weights) != len(batch.readings):
        raise ParameterError("one weight per reading")
    if batch.max_reading is not None and sum(weights) * batch.max_reading >= pk.message_modulus:
        raise CapacityError("weighted sum could wrap the message modulus")
    rng = rng or default_rng()
    terms = [
        c if w == 1 else mixed_mult(pk, w, c, raw=True)
        for c, w in zip(batch.readings, weights)
    ]
    return _fold(pk, terms, rng)


def mix_node(pk: PublicKey, batch: Sequence[Ciphertext], rng=None) -> list[Ciphertext]:
    """Shuffle ``batch`` uniformly and re-randomize every ciphertext."""
    impl = get_scheme(pk.scheme)
    if not impl.probabilistic:
        raise UnsupportedOperationError(f"{pk.scheme.value} cannot re-encrypt")
    rng = rng or default_rng()
    order = list(range(len(batch)))
    rng.shuffle(order)
    return [blind(pk, batch[i], rng) for i in order]

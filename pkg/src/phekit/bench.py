"""Ciphertext expansion and timing measurements."""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import PublicKey, SchemeId, decrypt, encrypt, keygen
from .schemes.paillier import dj_key

WARMUP = 4


@dataclass(frozen=True)
class BenchReport:
    scheme: SchemeId
    sigma: int
    level: int | None
    plaintext_bits: int
    ciphertext_bits: int
    expansion: Fraction
    encrypt_ns: int
    decrypt_ns: int
    plaintexts: tuple[int, ...] = field(default=(), repr=False)
    public_key: PublicKey | None = field(default=None, repr=False, compare=False)

    @property
    def expansion_per_bit(self) -> float:
        """Ciphertext bits spent per plaintext bit (same ratio as a float)."""
        return float(self.expansion)

    def describe(self) -> str:
        lvl = f" s={self.level}" if self.level is not None else ""
        return (
            f"{self.scheme.value}{lvl} sigma={self.sigma}: "
            f"{self.ciphertext_bits}/{self.plaintext_bits} bits -> expansion {float(self.expansion):.4f} "
            f"(encrypt {self.encrypt_ns / 1e3:.1f} us, decrypt {self.decrypt_ns / 1e3:.1f} us)"
        )


def plaintext_bits(pk: PublicKey) -> int:
    """Bits needed for the largest plaintext, ``l(M - 1)``."""
    return (pk.message_modulus - 1).bit_length()


def ciphertext_bits(pk: PublicKey) -> int:
    """Bit length of the ciphertext modulus (not of any particular residue)."""
    return pk.ciphertext_modulus.bit_length()


def _median_ns(samples: Sequence[int]) -> int:
    return int(statistics.median(samples))


def _time_roundtrips(pk, sk, plaintexts, rng) -> tuple[list[int], list[int]]:
    enc, dec = [], []
    for m in plaintexts:
        t0 = time.perf_counter_ns()
        c = encrypt(pk, m, rng)
        t1 = time.perf_counter_ns()
        out = decrypt(sk, c)
        t2 = time.perf_counter_ns()
        if out != m:
            raise AssertionError(f"round trip failed for {pk.scheme.value}")
        enc.append(t1 - t0)
        dec.append(t2 - t1)
    return enc, dec


def measure_expansion(
    scheme: SchemeId | str,
    sigma: int,
    s: int | None = None,
    trials: int = 32,
    rng=None,
    **keygen_options,
) -> BenchReport:
    """Generate one key, encrypt ``trials`` random plaintexts, report sizes and timings."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = rng if rng is not None else random.Random()
    scheme = SchemeId(scheme)
    pk, sk = keygen(scheme, sigma, rng, level=s, **keygen_options)
    bound = pk.message_modulus
    warm = [rng.randrange(bound) for _ in range(WARMUP)]
    plaintexts = tuple(rng.randrange(bound) for _ in range(trials))
    _time_roundtrips(pk, sk, warm, rng)
    enc, dec = _time_roundtrips(pk, sk, plaintexts, rng)
    pt, ct = plaintext_bits(pk), ciphertext_bits(pk)
    return BenchReport(
        scheme=scheme,
        sigma=sigma,
        level=pk.level,
        plaintext_bits=pt,
        ciphertext_bits=ct,
        expansion=Fraction(ct, pt),
        encrypt_ns=_median_ns(enc),
        decrypt_ns=_median_ns(dec),
        plaintexts=plaintexts,
        public_key=pk,
    )


@dataclass(frozen=True)
class DJRow:
    s: int
    encrypt_ns: int
    decrypt_ns: int
    encrypt_ratio: float
    decrypt_ratio: float

    @property
    def predicted_encrypt_ratio(self) -> Fraction:
        s = self.s
        return Fraction(s * (s + 1) * (s + 2), 6)

    @property
    def predicted_decrypt_ratio(self) -> Fraction:
        s = self.s
        return Fraction((s + 1) * (s + 2), 6)


def bench_dj_vs_paillier(sigma: int, s_values: Sequence[int], trials: int = 32, rng=None) -> list[DJRow]:
    """Damgard-Jurik over Paillier timing ratios at a fixed modulus ``n``."""
    if any(not 1 <= s <= 8 for s in s_values):
        raise ValueError("s values must lie in [1, 8]")
    rng = rng if rng is not None else random.Random()
    pk, sk = keygen(SchemeId.PAILLIER, sigma, rng)

    def timed(pk, sk):
        ms = [rng.randrange(pk.message_modulus) for _ in range(WARMUP + trials)]
        _time_roundtrips(pk, sk, ms[:WARMUP], rng)
        enc, dec = _time_roundtrips(pk, sk, ms[WARMUP:], rng)
        return _median_ns(enc), _median_ns(dec)

    base_enc, base_dec = timed(pk, sk)
    rows = []
    for s in s_values:
        dpk, dsk = dj_key(sk.p, sk.q, s, sigma)
        enc, dec = timed(dpk, dsk)
        rows.append(DJRow(s, enc, dec, enc / base_enc, dec / base_dec))
    return rows


def format_dj_table(rows: Sequence[DJRow]) -> str:
    lines = [f"{'s':>2} {'enc ratio':>10} {'predicted':>10} {'dec ratio':>10} {'predicted':>10}"]
    for r in rows:
        lines.append(
            f"{r.s:>2} {r.encrypt_ratio:>10.2f} {float(r.predicted_encrypt_ratio):>10.2f} "
            f"{r.decrypt_ratio:>10.2f} {float(r.predicted_decrypt_ratio):>10.2f}"
        )
    return "\n".join(lines)

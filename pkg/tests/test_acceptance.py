"""The seven acceptance criteria, each at its stated tolerance and time budget.

Every test records a PASS/FAIL line; the lines are printed together in the
terminal summary and also emitted on stdout (visible with ``-s``).
"""

import contextlib
import itertools
import math
import random
import time
from collections import Counter
from fractions import Fraction

import pytest

from phekit import apps, bench, core
from phekit.core import Ciphertext, SchemeId, blind, combine, decrypt, encrypt, keygen, mixed_mult
from phekit.group_encoding import (
    ConjugationS7Scheme,
    all_assignments,
    compile_circuit,
    embed_sl32_s7,
    encrypt_inputs,
    eval_program_batch,
    reduce_to_algebraic,
    sl32_elements,
)
from phekit.schemes import benaloh_key, dj_key, gm_key, ou_key, paillier_key, rsa_key

from conftest import ACCEPTANCE_LINES, TOY_KEYS, randomness_space
from corpus import CORPUS


@contextlib.contextmanager
def criterion(number, title, budget=None):
    """Time the body, enforce ``budget`` seconds, and record a PASS/FAIL line."""
    t0 = time.perf_counter()
    notes = []
    ok = False
    try:
        yield notes
        elapsed = time.perf_counter() - t0
        if budget is not None:
            assert elapsed < budget, f"took {elapsed:.1f}s, budget {budget}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        limit = f" (budget {budget}s)" if budget else ""
        detail = f"; {'; '.join(notes)}" if notes else ""
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} [{elapsed:.2f}s{limit}]{detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)


def test_criterion_1_expansion():
    with criterion(1, "expansion at sigma=512", budget=60) as notes:
        rng = random.Random(512)
        m = lambda scheme, s=None, **kw: bench.measure_expansion(scheme, 512, s, trials=8, rng=rng, **kw)

        r = m("paillier")
        assert r.expansion == 2
        notes.append(f"paillier {float(r.expansion):.4f}")

        for s in (1, 2, 3, 4):
            r = m("damgard_jurik", s)
            assert r.expansion == 1 + Fraction(1, s)
            notes.append(f"dj s={s} {float(r.expansion):.4f}")

        r = m("okamoto_uchiyama")
        assert abs(r.expansion - 3) <= Fraction(2, 100)
        notes.append(f"ou {float(r.expansion):.4f}")

        r = m("benaloh", block_bits=16)
        k = r.public_key.k
        assert k.bit_length() == 16 and all(k % d for d in range(2, math.isqrt(k) + 1))
        assert abs(float(r.expansion) - 512 / k.bit_length()) <= 0.05
        notes.append(f"benaloh {float(r.expansion):.4f}")

        r = m("naccache_stern")
        assert abs(r.public_key.k.bit_length() - 512 / 4) <= 8
        assert r.expansion <= Fraction(41, 10)
        notes.append(f"ns {float(r.expansion):.4f}")

        r = m("gm")
        assert r.plaintext_bits == 1 and r.expansion == r.public_key.n.bit_length() == 512
        notes.append(f"gm {float(r.expansion):.0f}")


def _scan_decrypt(pk, c):
    """Brute-force oracle: the unique m whose encryption set contains c."""
    hits = {
        m
        for m in range(pk.message_modulus)
        for r in randomness_space(pk)
        if encrypt(pk, m, r=r).value == c
    }
    assert len(hits) == 1
    return hits.pop()


def test_criterion_2_worked_examples():
    with criterion(2, "worked examples reproduce exactly"):
        pk, sk = paillier_key(3, 5)
        assert pk.g == 16 and (sk.lam, sk.mu) == (4, 4)
        c = encrypt(pk, 7, r=2)
        assert c.value == 83 and decrypt(sk, c) == 7 == _scan_decrypt(pk, 83)
        c2 = encrypt(pk, 3, r=4)
        s = combine(pk, c, c2, raw=True)
        assert (c2.value, s.value) == (154, 182) and decrypt(sk, s) == 10 == _scan_decrypt(pk, 182)
        t = mixed_mult(pk, 3, c, r=1)
        assert t.value == 62 and decrypt(sk, t) == 6 == _scan_decrypt(pk, 62)

        pk, sk = gm_key(3, 7, 20)
        for v, want in ((17, 1), (16, 0)):
            assert decrypt(sk, Ciphertext(SchemeId.GM, (v,))) == want == _scan_decrypt(pk, v)

        pk, sk = rsa_key(3, 11, 3)
        assert encrypt(pk, 4).value == 31 and encrypt(pk, 2).value == 8
        prod = combine(pk, encrypt(pk, 4), encrypt(pk, 2))
        assert prod.value == 17 == encrypt(pk, 8).value and decrypt(sk, prod) == 8 == _scan_decrypt(pk, 17)

        pk, sk = benaloh_key(7, 5, 3, 2)
        assert decrypt(sk, Ciphertext(SchemeId.BENALOH, (3,))) == 2 == _scan_decrypt(pk, 3)

        pk, sk = ou_key(3, 5, 2)
        assert decrypt(sk, Ciphertext(SchemeId.OKAMOTO_UCHIYAMA, (4,))) == 2 == _scan_decrypt(pk, 4)


def _toy_suite(pk, sk):
    """Round trip, homomorphism, Mixed_Mult and blinding over the toy space."""
    impl = core.get_scheme(pk.scheme)
    M = pk.message_modulus
    dm = impl.decryption_modulus(sk)
    rs = randomness_space(pk)
    table = {}
    for m in range(M):
        for r in rs:
            c = encrypt(pk, m, r=r)
            assert decrypt(sk, c) == m
            table[m, r] = c
    cycle = itertools.cycle(rs)
    for a in range(M):
        for b in range(M):
            c = combine(pk, table[a, next(cycle)], table[b, next(cycle)], raw=True)
            if impl.additive:
                if pk.scheme is not SchemeId.OKAMOTO_UCHIYAMA or a + b < dm:
                    assert decrypt(sk, c) == (a + b) % dm
            else:
                assert decrypt(sk, c) == a * b % M
    if not impl.additive:
        return
    for m in range(M):
        for k in range(M):
            c = mixed_mult(pk, k, table[m, next(cycle)], r=next(cycle))
            assert decrypt(sk, c) == k * m % dm
    for (m, r), c in table.items():
        assert decrypt(sk, blind(pk, c, r=next(cycle))) == m


def test_criterion_3_toy_exhaustive():
    with criterion(3, "exhaustive toy-key invariants (n <= 100)", budget=10) as notes:
        for name, (pk, sk) in sorted(TOY_KEYS.items()):
            assert pk.n <= 100
            _toy_suite(pk, sk)
        notes.append(f"{len(TOY_KEYS)} schemes")


def test_criterion_4_dj_paillier_coincidence():
    with criterion(4, "DJ s=1 ciphertexts equal Paillier bit for bit at sigma=256"):
        rng = random.Random(256)
        ppk, psk = keygen("paillier", 256, rng)
        dpk, dsk = dj_key(psk.p, psk.q, 1, 256)
        assert dpk.n == ppk.n and dpk.g == ppk.g == ppk.n + 1
        for _ in range(200):
            m = rng.randrange(ppk.n)
            r = core.get_scheme("paillier").random_r(ppk, rng)
            a, b = encrypt(ppk, m, r=r), encrypt(dpk, m, r=r)
            assert a.residues == b.residues
            assert decrypt(dsk, b) == m == decrypt(psk, a)


def test_criterion_5_theorem_pipeline():
    with criterion(5, "circuit compiler, S7 embedding and reduction", budget=30) as notes:
        assignments = 0
        for name, circuit in CORPUS:
            assert circuit.n_inputs <= 8
            xs = all_assignments(max(circuit.n_inputs, 1))
            out = eval_program_batch(compile_circuit(circuit), xs)
            for row, mat in zip(xs, out):
                want = circuit.evaluate(row)
                assert mat[0, 2] == want and (mat == [[1, 0, want], [0, 1, 0], [0, 0, 1]]).all()
            assignments += len(xs)
        notes.append(f"{len(CORPUS)} circuits, {assignments} assignments")

        els = sl32_elements()
        assert len(els) == 168 and len({embed_sl32_s7(m) for m in els}) == 168
        rng = random.Random(5)
        for _ in range(10_000):
            a, b = rng.choice(els), rng.choice(els)
            assert embed_sl32_s7(a @ b) == embed_sl32_s7(a) * embed_sl32_s7(b)

        scheme = ConjugationS7Scheme.keygen(random.Random(7))
        for name, circuit in CORPUS:
            for row in all_assignments(max(circuit.n_inputs, 1)):
                got = reduce_to_algebraic(scheme, circuit, encrypt_inputs(scheme, row))
                assert got == circuit.evaluate(row), name


def test_criterion_6_applications():
    with criterion(6, "1000-ballot tally at sigma=512 and mix node") as notes:
        rng = random.Random(1000)
        t0 = time.perf_counter()
        pk, sk = keygen("paillier", 512, rng)
        votes = [rng.randrange(2) for _ in range(1000)]
        ballots = [apps.Ballot(encrypt(pk, v, rng)) for v in votes]
        assert decrypt(sk, apps.tally(pk, ballots, rng)) == sum(votes)
        elapsed = time.perf_counter() - t0
        notes.append(f"tally {sum(votes)}/1000 in {elapsed:.2f}s (budget 30s)")
        assert elapsed < 30

        for seed in range(20):
            rng = random.Random(seed)
            ms = [rng.randrange(1 << 32) for _ in range(100)]
            batch = [encrypt(pk, m, rng) for m in ms]
            out = apps.mix_node(pk, batch, rng)
            assert Counter(int(decrypt(sk, c)) for c in out) == Counter(ms)
            assert not {c.value for c in out} & {c.value for c in batch}
        notes.append("mix 20 seeds x 100 ciphertexts")


def test_criterion_7_dj_cost_trend():
    with criterion(7, "DJ encrypt time strictly increasing in s at sigma=512") as notes:
        rows = bench.bench_dj_vs_paillier(512, [1, 2, 3], trials=40, rng=random.Random(7))
        print(bench.format_dj_table(rows))
        for r in rows:
            notes.append(
                f"s={r.s} ratio {r.encrypt_ratio:.2f} (predicted {float(r.predicted_encrypt_ratio):.0f})"
            )
        times = [r.encrypt_ns for r in rows]
        assert times[0] < times[1] < times[2]

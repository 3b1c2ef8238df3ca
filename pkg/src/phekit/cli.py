"""Command-line interface.

Exit codes: 0 success, 2 usage or bad parameters, 3 malformed or invalid
files, 4 cryptographic failure.
"""

from __future__ import annotations

import argparse
import random
import secrets
import sys
from pathlib import Path

from . import apps, bench, core, group_encoding, serialize
from .errors import CryptoError, FormatError, GenerationError, ParameterError

EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_CRYPTO = 4


def _rng(args):
    return random.Random(args.seed) if args.seed is not None else secrets.SystemRandom()


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParameterError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def _load_key(path: str, need_secret: bool = False):
    pk, sk = serialize.parse_key(_read(path))
    if need_secret and sk is None:
        raise ParameterError(f"{path} has no secret section")
    return pk, sk


def _decimal(text: str) -> int:
    if not text.isdigit():
        raise argparse.ArgumentTypeError(f"expected a non-negative decimal integer, got {text!r}")
    return int(text)


def cmd_keygen(args):
    options = {}
    if args.block_bits is not None:
        options["block_bits"] = args.block_bits
    pk, sk = core.keygen(args.scheme, args.sigma, _rng(args), level=args.level, **options)
    _write(args.out, serialize.serialize_key(pk, sk))


def cmd_encrypt(args):
    pk, _ = _load_key(args.key)
    _write(args.out, serialize.serialize_ciphertext(core.encrypt(pk, args.m, _rng(args))))


def cmd_decrypt(args):
    pk, sk = _load_key(args.key, need_secret=True)
    c = serialize.parse_ciphertext(_read(args.inp), pk)
    print(int(core.decrypt(sk, c)))


def cmd_add(args):
    if len(args.inp) != 2:
        raise ParameterError("add takes exactly two --in files")
    pk, _ = _load_key(args.key)
    a, b = (serialize.parse_ciphertext(_read(p), pk) for p in args.inp)
    _write(args.out, serialize.serialize_ciphertext(core.combine(pk, a, b, _rng(args))))


def cmd_smul(args):
    pk, _ = _load_key(args.key)
    c = serialize.parse_ciphertext(_read(args.inp), pk)
    _write(args.out, serialize.serialize_ciphertext(core.mixed_mult(pk, args.scalar, c, _rng(args))))


def cmd_rerand(args):
    pk, _ = _load_key(args.key)
    c = serialize.parse_ciphertext(_read(args.inp), pk)
    _write(args.out, serialize.serialize_ciphertext(core.blind(pk, c, _rng(args))))


def cmd_tally(args):
    pk, _ = _load_key(args.key)
    folder = Path(args.ballots)
    if not folder.is_dir():
        raise ParameterError(f"{folder} is not a directory")
    ballots = []
    for path in sorted(folder.glob("*.json")):
        ballots.extend(serialize.parse_ciphertexts(path.read_text(), pk))
    _write(args.out, serialize.serialize_ciphertext(apps.tally(pk, ballots, _rng(args))))


def cmd_mix(args):
    pk, _ = _load_key(args.key)
    batch = serialize.parse_ciphertexts(_read(args.inp), pk)
    _write(args.out, serialize.serialize_batch(apps.mix_node(pk, batch, _rng(args)), pk))


def cmd_bench(args):
    report = bench.measure_expansion(args.scheme, args.sigma, args.level, args.trials, _rng(args))
    print(report.describe())
    if args.dj_levels:
        levels = [int(x) for x in args.dj_levels.split(",")]
        rows = bench.bench_dj_vs_paillier(args.sigma, levels, args.trials, _rng(args))
        print(bench.format_dj_table(rows))


def cmd_encode_circuit(args):
    circuit = group_encoding.parse_circuit(_read(args.circuit))
    bits = args.inputs
    if any(b not in "01" for b in bits):
        raise ParameterError("--inputs must be a string of 0/1 characters")
    bits = [int(b) for b in bits]
    if len(bits) < circuit.n_inputs:
        raise ParameterError(f"circuit needs {circuit.n_inputs} input bits, got {len(bits)}")
    program = group_encoding.compile_circuit(circuit)
    result = group_encoding.eval_program(program, bits)
    perm = group_encoding.embed_sl32_s7(result)
    scheme = group_encoding.ConjugationS7Scheme.keygen(_rng(args))
    reduced = group_encoding.reduce_to_algebraic(
        scheme, circuit, group_encoding.encrypt_inputs(scheme, bits)
    )
    print(f"program_length {len(program)}")
    print(f"s7_packed {group_encoding.pack_s7(perm):06x}")
    print(f"mock_s7_output {reduced}")
    print(f"output {result.entry(1, 3)}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phekit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    schemes = [s.value for s in core.SchemeId]

    def command(name, func, help_text, randomized=True):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        if randomized:
            p.add_argument("--seed", type=int, help="seed for reproducible runs")
        return p

    p = command("keygen", cmd_keygen, "generate a key pair")
    p.add_argument("--scheme", required=True, choices=schemes)
    p.add_argument("--sigma", required=True, type=int)
    p.add_argument("--level", type=int, help="Damgard-Jurik exponent s")
    p.add_argument("--block-bits", type=int, help="Benaloh/Naccache-Stern block size in bits")
    p.add_argument("--out", required=True)

    p = command("encrypt", cmd_encrypt, "encrypt a decimal plaintext")
    p.add_argument("--key", required=True)
    p.add_argument("--m", required=True, type=_decimal)
    p.add_argument("--out", required=True)

    p = command("decrypt", cmd_decrypt, "decrypt and print the plaintext", randomized=False)
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="inp", required=True)

    p = command("add", cmd_add, "homomorphically combine two ciphertexts")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="inp", action="append", required=True)
    p.add_argument("--out", required=True)

    p = command("smul", cmd_smul, "multiply an encrypted value by a plaintext scalar")
    p.add_argument("--key", required=True)
    p.add_argument("--scalar", required=True, type=_decimal)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)

    p = command("rerand", cmd_rerand, "re-randomize a ciphertext")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)

    p = command("tally", cmd_tally, "sum every ballot file in a directory")
    p.add_argument("--key", required=True)
    p.add_argument("--ballots", required=True)
    p.add_argument("--out", required=True)

    p = command("mix", cmd_mix, "shuffle and re-encrypt a ciphertext batch")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)

    p = command("bench", cmd_bench, "measure expansion and timings")
    p.add_argument("--scheme", required=True, choices=schemes)
    p.add_argument("--sigma", required=True, type=int)
    p.add_argument("--level", type=int)
    p.add_argument("--trials", type=int, default=32)
    p.add_argument("--dj-levels", help="also compare Damgard-Jurik levels, e.g. 1,2,3")

    p = command("encode-circuit", cmd_encode_circuit, "run a Boolean circuit as a group program")
    p.add_argument("--circuit", required=True)
    p.add_argument("--inputs", required=True, help="input bits, x0 first, e.g. 1011")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except FormatError as exc:
        print(f"phekit: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (CryptoError, GenerationError) as exc:
        print(f"phekit: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except (ParameterError, ValueError) as exc:
        print(f"phekit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())

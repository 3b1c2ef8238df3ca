"""Circuit corpus shared by the group-encoding and acceptance tests."""

import random

from phekit.group_encoding import CircuitBuilder


def _single():
    b = CircuitBuilder()
    b.input(0)
    return b.build()


def _const(v):
    b = CircuitBuilder()
    b.const(v)
    return b.build()


def _not():
    b = CircuitBuilder()
    b.not_(b.input(0))
    return b.build()


def _binary(op):
    b = CircuitBuilder()
    getattr(b, op)(b.input(0), b.input(1))
    return b.build()


def _or():
    b = CircuitBuilder()
    b.not_(b.and_(b.not_(b.input(0)), b.not_(b.input(1))))
    return b.build()


def _majority():
    b = CircuitBuilder()
    x, y, z = b.input(0), b.input(1), b.input(2)
    b.xor(b.xor(b.and_(x, y), b.and_(x, z)), b.and_(y, z))
    return b.build()


def _parity(n):
    b = CircuitBuilder()
    acc = b.input(0)
    for i in range(1, n):
        acc = b.xor(acc, b.input(i))
    return b.build()


def _and_tree(n, negate=()):
    b = CircuitBuilder()
    layer = [b.not_(b.input(i)) if i in negate else b.input(i) for i in range(n)]
    while len(layer) > 1:
        layer = [b.and_(layer[i], layer[i + 1]) for i in range(0, len(layer), 2)]
    return b.build()


def _mux():
    b = CircuitBuilder()
    s, x, y = b.input(0), b.input(1), b.input(2)
    b.xor(b.and_(s, x), b.and_(b.not_(s), y))
    return b.build()


def _equal2():
    b = CircuitBuilder()
    e0 = b.not_(b.xor(b.input(0), b.input(2)))
    e1 = b.not_(b.xor(b.input(1), b.input(3)))
    b.and_(e0, e1)
    return b.build()


def _full_adder_carry():
    b = CircuitBuilder()
    x, y, c = b.input(0), b.input(1), b.input(2)
    b.xor(b.and_(x, y), b.and_(c, b.xor(x, y)))
    return b.build()


def _depth4():
    # AND of 8 (depth 3) with the result ANDed against a CONST-laden XOR (depth 4)
    b = CircuitBuilder()
    leaves = [b.input(i) for i in range(8)]
    layer = leaves
    while len(layer) > 1:
        layer = [b.and_(layer[i], layer[i + 1]) for i in range(0, len(layer), 2)]
    side = b.xor(b.input(0), b.const(1))
    b.and_(layer[0], b.xor(side, b.input(7)))
    return b.build()


def random_formula(rng, n_inputs, depth):
    """Random tree circuit (no shared gates) of at most ``depth`` AND levels."""
    b = CircuitBuilder()

    def grow(d):
        r = rng.random()
        if d == 0 or r < 0.15:
            if rng.random() < 0.1:
                return b.const(rng.randrange(2))
            return b.input(rng.randrange(n_inputs))
        if r < 0.3:
            return b.not_(grow(d))
        if r < 0.6:
            return b.xor(grow(d - 1), grow(d - 1))
        return b.and_(grow(d - 1), grow(d - 1))

    grow(depth)
    return b.build()


def corpus():
    fixed = [
        ("input", _single()),
        ("const0", _const(0)),
        ("const1", _const(1)),
        ("not", _not()),
        ("xor", _binary("xor")),
        ("and", _binary("and_")),
        ("or", _or()),
        ("majority3", _majority()),
        ("parity8", _parity(8)),
        ("and4", _and_tree(4)),
        ("and8_neg", _and_tree(8, negate=(1, 4, 6))),
        ("mux", _mux()),
        ("equal2", _equal2()),
        ("carry", _full_adder_carry()),
        ("depth4", _depth4()),
    ]
    rng = random.Random(20240611)
    rand = [(f"random{i}", random_formula(rng, 8, 1 + i % 4)) for i in range(16)]
    return fixed + rand


CORPUS = corpus()

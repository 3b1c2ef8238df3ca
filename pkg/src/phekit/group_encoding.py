"""Boolean circuits as group programs over SL(3,2), and SL(3,2) inside S7.

A bit ``x`` is encoded as the transvection ``I + x*E13``. Products of
encodings add the bits (XOR), and the commutator of ``I + a*E12`` with
``I + b*E23`` is ``I + ab*E13`` (AND), so any circuit over {XOR, AND, NOT,
CONST} compiles to a straight-line program whose product is the encoding
of the output. SL(3,2) acts faithfully on the seven nonzero vectors of
F2^3, which embeds it in S7; a homomorphic scheme on S7 can therefore run
the program on encrypted inputs (:func:`reduce_to_algebraic`).

Vector convention: index ``i`` in 1..7 is the 3-bit vector of ``i`` read
big-endian, so the first coordinate is the most significant bit.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Protocol, Sequence, Union

import numpy as np

from . import _kernels
from .errors import CiphertextCorruptError, CompileError, FormatError, ParameterError


class Mat3:
    """3x3 matrix over F2, immutable and hashable."""

    __slots__ = ("bits",)

    def __init__(self, rows):
        bits = tuple(int(v) & 1 for row in rows for v in row)
        if len(bits) != 9:
            raise ParameterError("Mat3 needs 3 rows of 3 entries")
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("Mat3 is immutable")

    @classmethod
    def identity(cls) -> "Mat3":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def unit(cls, i: int, j: int) -> "Mat3":
        """Elementary matrix E_ij (1-based)."""
        rows = [[0] * 3 for _ in range(3)]
        rows[i - 1][j - 1] = 1
        return cls(rows)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        b = self.bits
        return (b[0:3], b[3:6], b[6:9])

    def entry(self, i: int, j: int) -> int:
        return self.bits[3 * (i - 1) + (j - 1)]

    def to_array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.uint8)

    def __matmul__(self, other: "Mat3") -> "Mat3":
        a, b = self.rows, other.rows
        return Mat3(
            [[sum(a[r][k] & b[k][c] for k in range(3)) & 1 for c in range(3)] for r in range(3)]
        )

    def __add__(self, other: "Mat3") -> "Mat3":
        return Mat3([[x ^ y for x, y in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def det(self) -> int:
        (a, b, c), (d, e, f), (g, h, i) = self.rows
        return (a * (e * i + f * h) + b * (d * i + f * g) + c * (d * h + e * g)) & 1

    def inverse(self) -> "Mat3":
        if not self.det():
            raise ParameterError("singular matrix")
        return _INVERSES[self]

    def apply(self, v: Sequence[int]) -> tuple[int, int, int]:
        return tuple(sum(x & y for x, y in zip(row, v)) & 1 for row in self.rows)

    def __eq__(self, other):
        return isinstance(other, Mat3) and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __repr__(self):
        return "Mat3(" + "/".join("".join(map(str, r)) for r in self.rows) + ")"


IDENTITY = Mat3.identity()
E13 = Mat3.unit(1, 3)
# transposition permutation matrices used to move the E13 slot
SWAP_23 = Mat3(((1, 0, 0), (0, 0, 1), (0, 1, 0)))
SWAP_12 = Mat3(((0, 1, 0), (1, 0, 0), (0, 0, 1)))


def sl32_elements() -> tuple[Mat3, ...]:
    """All 168 elements of SL(3,2) (= GL(3,2)), in lexicographic bit order."""
    return _SL32


_SL32 = tuple(
    m for m in (Mat3(np.array(bits).reshape(3, 3)) for bits in itertools.product((0, 1), repeat=9)) if m.det()
)
_INVERSES = {}
for _a in _SL32:
    for _b in _SL32:
        if _a @ _b == IDENTITY:
            _INVERSES[_a] = _b
            break


def encode_bit(x: int) -> Mat3:
    if x not in (0, 1):
        raise ParameterError(f"bit must be 0 or 1, got {x}")
    return IDENTITY + E13 if x else IDENTITY


# -- circuits -----------------------------------------------------------------

GATE_ARITY = {"INPUT": 1, "CONST": 1, "NOT": 1, "XOR": 2, "AND": 2}


class Gate(NamedTuple):
    op: str
    args: tuple[int, ...]


@dataclass(frozen=True)
class BoolCircuit:
    """Topologically ordered gate list; gate arguments index earlier gates.

    ``INPUT`` and ``CONST`` carry an input index and a bit, respectively.
    """

    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        if not self.gates:
            raise CompileError("circuit has no gates")
        for pos, g in enumerate(self.gates):
            if g.op not in GATE_ARITY or len(g.args) != GATE_ARITY[g.op]:
                raise CompileError(f"gate {pos}: malformed {g}")
            if g.op == "INPUT" and g.args[0] < 0:
                raise CompileError(f"gate {pos}: negative input index")
            if g.op == "CONST" and g.args[0] not in (0, 1):
                raise CompileError(f"gate {pos}: constant must be 0 or 1")
            if g.op in ("NOT", "XOR", "AND") and not all(0 <= a < pos for a in g.args):
                raise CompileError(f"gate {pos}: operands must reference earlier gates")
        if not 0 <= self.output < len(self.gates):
            raise CompileError("output gate out of range")

    @property
    def n_inputs(self) -> int:
        idx = [g.args[0] for g in self.gates if g.op == "INPUT"]
        return max(idx) + 1 if idx else 0

    @property
    def size(self) -> int:
        return len(self.gates)

    def evaluate(self, bits: Sequence[int]) -> int:
        vals: list[int] = []
        for g in self.gates:
            if g.op == "INPUT":
                vals.append(int(bits[g.args[0]]) & 1)
            elif g.op == "CONST":
                vals.append(g.args[0])
            elif g.op == "NOT":
                vals.append(vals[g.args[0]] ^ 1)
            elif g.op == "XOR":
                vals.append(vals[g.args[0]] ^ vals[g.args[1]])
            else:
                vals.append(vals[g.args[0]] & vals[g.args[1]])
        return vals[self.output]

    def and_depth(self) -> int:
        depth: list[int] = []
        for g in self.gates:
            if g.op in ("INPUT", "CONST"):
                depth.append(0)
            else:
                d = max(depth[a] for a in g.args)
                depth.append(d + 1 if g.op == "AND" else d)
        return depth[self.output]


class CircuitBuilder:
    """Small helper for assembling circuits in code."""

    def __init__(self):
        self.gates: list[Gate] = []

    def _add(self, op, *args) -> int:
        self.gates.append(Gate(op, tuple(args)))
        return len(self.gates) - 1

    def input(self, i):
        return self._add("INPUT", i)

    def const(self, b):
        return self._add("CONST", b)

    def not_(self, a):
        return self._add("NOT", a)

    def xor(self, a, b):
        return self._add("XOR", a, b)

    def and_(self, a, b):
        return self._add("AND", a, b)

    def build(self, output: int | None = None) -> BoolCircuit:
        return BoolCircuit(tuple(self.gates), len(self.gates) - 1 if output is None else output)


def parse_circuit(text: str) -> BoolCircuit:
    """Parse the line format ``gN = OP args...`` ending with ``OUTPUT gN``.

    Keywords are uppercase only; blank lines are ignored.
    """
    names: dict[str, int] = {}
    gates: list[Gate] = []
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty circuit", field="circuit")

    def ref(tok: str, lineno: int) -> int:
        if tok not in names:
            raise FormatError(f"undefined gate {tok!r}", field=f"line {lineno}")
        return names[tok]

    *body, last = lines
    for lineno, toks in enumerate(body, 1):
        if len(toks) < 4 or toks[1] != "=":
            raise FormatError("expected 'gN = OP ...'", field=f"line {lineno}")
        name, _, op, *args = toks
        if not (name.startswith("g") and name[1:].isdigit()):
            raise FormatError(f"bad gate name {name!r}", field=f"line {lineno}")
        if name in names:
            raise FormatError(f"gate {name} defined twice", field=f"line {lineno}")
        if op not in GATE_ARITY:
            raise FormatError(f"unknown keyword {op!r}", field=f"line {lineno}")
        if len(args) != GATE_ARITY[op]:
            raise FormatError(f"{op} takes {GATE_ARITY[op]} operand(s)", field=f"line {lineno}")
        if op in ("INPUT", "CONST"):
            if not args[0].isdigit():
                raise FormatError(f"{op} needs a decimal operand", field=f"line {lineno}")
            value = int(args[0])
            if op == "CONST" and value not in (0, 1):
                raise FormatError("CONST must be 0 or 1", field=f"line {lineno}")
            gates.append(Gate(op, (value,)))
        else:
            gates.append(Gate(op, tuple(ref(a, lineno) for a in args)))
        names[name] = len(gates) - 1
    if len(last) != 2 or last[0] != "OUTPUT":
        raise FormatError("last line must be 'OUTPUT gN'", field=f"line {len(lines)}")
    return BoolCircuit(tuple(gates), ref(last[1], len(lines)))


def format_circuit(circuit: BoolCircuit) -> str:
    lines = []
    for i, g in enumerate(circuit.gates):
        if g.op in ("INPUT", "CONST"):
            args = str(g.args[0])
        else:
            args = " ".join(f"g{a}" for a in g.args)
        lines.append(f"g{i} = {g.op} {args}")
    lines.append(f"OUTPUT g{circuit.output}")
    return "\n".join(lines) + "\n"


# -- group programs -------------------------------------------------------------


class Const(NamedTuple):
    matrix: Mat3


class Select(NamedTuple):
    index: int
    if0: Mat3
    if1: Mat3


Instruction = Union[Const, Select]


@dataclass(frozen=True)
class GroupProgram:
    instructions: tuple[Instruction, ...]

    def __len__(self):
        return len(self.instructions)

    def __add__(self, other: "GroupProgram") -> "GroupProgram":
        return GroupProgram(self.instructions + other.instructions)

    def conjugate(self, t: Mat3) -> "GroupProgram":
        """Replace every matrix ``M`` by ``t M t^-1``."""
        ti = t.inverse()
        out = []
        for ins in self.instructions:
            if isinstance(ins, Const):
                out.append(Const(t @ ins.matrix @ ti))
            else:
                out.append(Select(ins.index, t @ ins.if0 @ ti, t @ ins.if1 @ ti))
        return GroupProgram(tuple(out))

    @property
    def max_index(self) -> int:
        return max((i.index for i in self.instructions if isinstance(i, Select)), default=-1)

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        idx = np.full(len(self), -1, dtype=np.int64)
        mats = np.zeros((len(self), 2, 3, 3), dtype=np.uint8)
        for k, ins in enumerate(self.instructions):
            if isinstance(ins, Const):
                mats[k, 0] = mats[k, 1] = ins.matrix.to_array()
            else:
                idx[k] = ins.index
                mats[k, 0] = ins.if0.to_array()
                mats[k, 1] = ins.if1.to_array()
        return idx, mats


@lru_cache(maxsize=256)
def compile_circuit(circuit: BoolCircuit) -> GroupProgram:
    """Compile ``circuit`` to a program evaluating to ``encode_bit(C(x))``."""
    progs: list[GroupProgram] = []
    for g in circuit.gates:
        if g.op == "INPUT":
            progs.append(GroupProgram((Select(g.args[0], IDENTITY, encode_bit(1)),)))
        elif g.op == "CONST":
            progs.append(GroupProgram((Const(encode_bit(g.args[0])),)))
        elif g.op == "NOT":
            progs.append(progs[g.args[0]] + GroupProgram((Const(encode_bit(1)),)))
        elif g.op == "XOR":
            progs.append(progs[g.args[0]] + progs[g.args[1]])
        else:
            x = progs[g.args[0]].conjugate(SWAP_23)  # f in the (1,2) slot
            y = progs[g.args[1]].conjugate(SWAP_12)  # g in the (2,3) slot
            progs.append(x + y + x + y)
    return progs[circuit.output]


def eval_program(program: GroupProgram, inputs: Sequence[int]) -> Mat3:
    """Left-to-right product of the resolved instructions."""
    if program.max_index >= len(inputs):
        raise ParameterError(f"program reads input {program.max_index}, got {len(inputs)} inputs")
    acc = IDENTITY
    for ins in program.instructions:
        if isinstance(ins, Const):
            acc = acc @ ins.matrix
        else:
            acc = acc @ (ins.if1 if inputs[ins.index] else ins.if0)
    return acc


def eval_program_batch(program: GroupProgram, inputs) -> np.ndarray:
    """Evaluate on many assignments at once; returns ``uint8[B, 3, 3]``.

    Uses the compiled kernel unless ``PHEKIT_DISABLE_NUMBA`` is set.
    """
    inputs = np.ascontiguousarray(np.asarray(inputs, dtype=np.uint8))
    if inputs.ndim != 2:
        raise ParameterError("inputs must be a 2-D array of bits")
    if program.max_index >= inputs.shape[1]:
        raise ParameterError(f"program reads input {program.max_index}, got {inputs.shape[1]} inputs")
    idx, mats = program.to_arrays()
    return _kernels.eval_batch(idx, mats, inputs)


def all_assignments(n: int) -> np.ndarray:
    """Every bit vector of length ``n`` as rows; row ``k`` spells ``k`` little-endian."""
    k = np.arange(1 << n, dtype=np.int64)
    return ((k[:, None] >> np.arange(n)) & 1).astype(np.uint8)


# -- S7 -------------------------------------------------------------------------


@dataclass(frozen=True)
class Perm7:
    """Permutation of {1..7}; ``images[i-1]`` is the image of ``i``.

    ``p * q`` applies ``q`` first, matching matrix products acting on
    column vectors.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, 8)):
            raise ParameterError(f"not a permutation of 1..7: {self.images}")

    @classmethod
    def identity(cls) -> "Perm7":
        return cls(tuple(range(1, 8)))

    @classmethod
    def random(cls, rng) -> "Perm7":
        imgs = list(range(1, 8))
        rng.shuffle(imgs)
        return cls(tuple(imgs))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Perm7") -> "Perm7":
        return Perm7(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Perm7":
        inv = [0] * 7
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Perm7(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        seen, out = set(), []
        for start in range(1, 8):
            if start in seen:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self(i)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out


def _index_to_vector(i: int) -> tuple[int, int, int]:
    return ((i >> 2) & 1, (i >> 1) & 1, i & 1)


def _vector_to_index(v) -> int:
    return (v[0] << 2) | (v[1] << 1) | v[2]


def embed_sl32_s7(m: Mat3) -> Perm7:
    """Action of ``m`` on the seven nonzero vectors of F2^3."""
    images = []
    for i in range(1, 8):
        j = _vector_to_index(m.apply(_index_to_vector(i)))
        if j == 0:
            raise ParameterError("singular matrix has no permutation action")
        images.append(j)
    return Perm7(tuple(images))


@lru_cache(maxsize=1)
def _embedding_table() -> dict[Perm7, Mat3]:
    return {embed_sl32_s7(m): m for m in _SL32}


def unembed_s7(p: Perm7) -> Mat3:
    """Inverse of :func:`embed_sl32_s7` on its image."""
    try:
        return _embedding_table()[p]
    except KeyError:
        raise ParameterError(f"{p} is not in the image of SL(3,2)") from None


PACKED_BITS = 21


def pack_s7(p: Perm7) -> int:
    """21-bit encoding: image of ``i`` minus one in bits ``[3(i-1), 3i)``, MSB first."""
    out = 0
    for img in p.images:
        out = (out << 3) | (img - 1)
    return out


def unpack_s7(bits: int) -> Perm7:
    if not 0 <= bits < (1 << PACKED_BITS):
        raise FormatError("packed permutation must fit in 21 bits", field="perm")
    fields = [(bits >> (3 * (6 - k))) & 7 for k in range(7)]
    if any(f > 6 for f in fields) or len(set(fields)) != 7:
        raise FormatError(f"fields {fields} do not form a permutation", field="perm")
    return Perm7(tuple(f + 1 for f in fields))


def eval_program_s7(program: GroupProgram, inputs: Sequence[int]) -> Perm7:
    """Evaluate the embedded program directly in S7 (kernel-backed)."""
    if program.max_index >= len(inputs):
        raise ParameterError(f"program reads input {program.max_index}, got {len(inputs)} inputs")
    perms = np.empty((len(program), 7), dtype=np.uint8)
    for k, ins in enumerate(program.instructions):
        m = ins.matrix if isinstance(ins, Const) else (ins.if1 if inputs[ins.index] else ins.if0)
        perms[k] = np.array(embed_sl32_s7(m).images) - 1
    out = _kernels.perm_product(perms)
    return Perm7(tuple(int(v) + 1 for v in out))


# -- reduction to a homomorphic scheme on S7 -------------------------------------


class GroupScheme(Protocol):
    """A homomorphic encryption scheme on (S7, *)."""

    def encrypt(self, p: Perm7): ...

    def decrypt(self, c) -> Perm7: ...

    def mult(self, c1, c2): ...


class ConjugationS7Scheme:
    """INSECURE stand-in: "encrypts" by conjugating with a secret permutation.

    It is homomorphic (``s a s^-1 * s b s^-1 = s ab s^-1``) and exists only
    to exercise the reduction pipeline. Ciphertexts are packed 21-bit ints.
    """

    def __init__(self, secret: Perm7):
        self._s = secret
        self._si = secret.inverse()

    @classmethod
    def keygen(cls, rng=None) -> "ConjugationS7Scheme":
        return cls(Perm7.random(rng or random.Random()))

    def encrypt(self, p: Perm7) -> int:
        return pack_s7(self._s * p * self._si)

    def decrypt(self, c: int) -> Perm7:
        return self._si * unpack_s7(c) * self._s

    def mult(self, c1: int, c2: int) -> int:
        return pack_s7(unpack_s7(c1) * unpack_s7(c2))


@lru_cache(maxsize=None)
def _transvection_conjugator(t: Mat3) -> Mat3:
    """Some ``q`` with ``q (I + E13) q^-1 == t``."""
    base = encode_bit(1)
    for q in _SL32:
        if q @ base @ q.inverse() == t:
            return q
    raise CompileError(f"{t} is not conjugate to I + E13")


@lru_cache(maxsize=None)
def _select_factors(if0: Mat3, if1: Mat3) -> tuple[Mat3, Mat3]:
    # Select(i, M0, M1) = (M0 q) * B_x * q^-1
    q = _transvection_conjugator(if0.inverse() @ if1)
    return if0 @ q, q.inverse()


def encrypt_inputs(group_scheme: GroupScheme, bits: Sequence[int]) -> list:
    """Encrypt each bit as the embedded encoding ``embed(I + x E13)``."""
    return [group_scheme.encrypt(embed_sl32_s7(encode_bit(int(b)))) for b in bits]


def reduce_to_algebraic(group_scheme: GroupScheme, circuit: BoolCircuit, encrypted_inputs: Sequence) -> int:
    """Evaluate ``circuit`` on encrypted bits using only the S7 scheme's Mult.

    A selector ``Select(i, M0, M1)`` equals ``M0 q B_x q^-1`` where ``B_x`` is
    the encoded input and ``q`` conjugates ``I + E13`` to ``M0^-1 M1``, so
    it costs three multiplications against public constants.
    """
    program = compile_circuit(circuit)
    if program.max_index >= len(encrypted_inputs):
        raise ParameterError(f"circuit reads input {program.max_index}, got {len(encrypted_inputs)}")
    const_ct: dict[Mat3, object] = {}

    def enc(m: Mat3):
        if m not in const_ct:
            const_ct[m] = group_scheme.encrypt(embed_sl32_s7(m))
        return const_ct[m]

    acc = enc(IDENTITY)
    for ins in program.instructions:
        if isinstance(ins, Const):
            acc = group_scheme.mult(acc, enc(ins.matrix))
            continue
        left, right = _select_factors(ins.if0, ins.if1)
        acc = group_scheme.mult(acc, enc(left))
        acc = group_scheme.mult(acc, encrypted_inputs[ins.index])
        acc = group_scheme.mult(acc, enc(right))
    result = unembed_s7(group_scheme.decrypt(acc))
    out = result.entry(1, 3)
    if result != encode_bit(out):
        raise CiphertextCorruptError("program result is not a bit encoding")
    return out

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phekit import serialize
from phekit.core import Ciphertext, SchemeId, decrypt, encrypt, keygen
from phekit.errors import FormatError, ParameterError, ValidationError

SCHEMES = [
    ("rsa", None),
    ("gm", None),
    ("benaloh", None),
    ("naccache_stern", None),
    ("okamoto_uchiyama", None),
    ("paillier", None),
    ("damgard_jurik", 3),
]


@pytest.fixture(scope="module", params=SCHEMES, ids=[s for s, _ in SCHEMES])
def keypair(request):
    scheme, level = request.param
    return keygen(scheme, 96, random.Random(scheme), level=level)


def test_key_round_trip(keypair):
    pk, sk = keypair
    assert serialize.parse_key(serialize.serialize_key(pk, sk)) == (pk, sk)
    assert serialize.parse_key(serialize.serialize_key(pk)) == (pk, None)


def test_ciphertext_round_trip(keypair):
    pk, sk = keypair
    rng = random.Random(1)
    for _ in range(20):
        c = encrypt(pk, rng.randrange(pk.message_modulus), rng)
        back = serialize.parse_ciphertext(serialize.serialize_ciphertext(c), pk)
        assert back == c and decrypt(sk, back) == decrypt(sk, c)


def test_batch_round_trip(keypair):
    pk, _ = keypair
    rng = random.Random(2)
    cts = [encrypt(pk, rng.randrange(pk.message_modulus), rng) for _ in range(5)]
    assert serialize.parse_ciphertexts(serialize.serialize_batch(cts), pk) == cts
    assert serialize.parse_ciphertexts(serialize.serialize_batch([], pk), pk) == []


@pytest.mark.parametrize("scheme, level", SCHEMES, ids=[s for s, _ in SCHEMES])
def test_hundred_keys_per_scheme(scheme, level):
    rng = random.Random(f"keys-{scheme}")
    sigma = 48 if scheme == "naccache_stern" else 32
    for _ in range(100):
        pk, sk = keygen(scheme, sigma, rng, level=level)
        assert serialize.parse_key(serialize.serialize_key(pk, sk)) == (pk, sk)


def test_ciphertext_fuzz():
    rng = random.Random(99)
    schemes = list(SchemeId)
    for _ in range(10_000):
        scheme = rng.choice(schemes)
        level = rng.randrange(1, 6) if scheme is SchemeId.DAMGARD_JURIK else None
        c = Ciphertext(scheme, (rng.getrandbits(rng.randrange(1, 600)),), level)
        assert serialize.parse_ciphertext(serialize.serialize_ciphertext(c)) == c


@given(st.integers(0, 2**2048))
def test_hex_round_trip(x):
    assert serialize.from_hex(serialize.to_hex(x), "x") == x


@given(st.text(alphabet="0123456789abcdefABCDEFxg ", max_size=12))
@settings(max_examples=300)
def test_hex_strictness(text):
    ok = text == "0" or (text[:1] in "123456789abcdef" and text != "" and all(c in "0123456789abcdef" for c in text))
    if ok:
        assert serialize.from_hex(text, "x") == int(text, 16)
    else:
        with pytest.raises(FormatError):
            serialize.from_hex(text, "x")


def _doc(pk, sk=None):
    return json.loads(serialize.serialize_key(pk, sk))


@pytest.fixture(scope="module")
def paillier():
    return keygen("paillier", 64, random.Random(3))


class TestRejections:
    def test_uppercase_hex(self, paillier):
        doc = _doc(*paillier)
        doc["public"]["n"] = doc["public"]["n"].upper()
        with pytest.raises(FormatError) as info:
            serialize.parse_key(json.dumps(doc))
        assert info.value.field == "public.n"

    def test_leading_zero(self, paillier):
        doc = _doc(*paillier)
        doc["public"]["g"] = "0" + doc["public"]["g"]
        with pytest.raises(FormatError):
            serialize.parse_key(json.dumps(doc))

    def test_unknown_scheme(self, paillier):
        doc = _doc(*paillier)
        doc["scheme"] = "Paillier"
        with pytest.raises(FormatError) as info:
            serialize.parse_key(json.dumps(doc))
        assert info.value.field == "scheme"

    @pytest.mark.parametrize("drop", ["public", "sigma"])
    def test_missing_fields(self, paillier, drop):
        doc = _doc(*paillier)
        del doc[drop]
        with pytest.raises(FormatError):
            serialize.parse_key(json.dumps(doc))

    def test_extra_field(self, paillier):
        doc = _doc(*paillier)
        doc["public"]["h"] = "1"
        with pytest.raises(FormatError):
            serialize.parse_key(json.dumps(doc))

    def test_not_json(self):
        with pytest.raises(FormatError):
            serialize.parse_key("{nope")
        with pytest.raises(FormatError):
            serialize.parse_key("[1, 2]")

    def test_inconsistent_secret(self, paillier):
        doc = _doc(*paillier)
        doc["secret"]["mu"] = "1"
        with pytest.raises(ValidationError) as info:
            serialize.parse_key(json.dumps(doc))
        assert info.value.field == "secret"

    def test_bad_generator(self, paillier):
        doc = _doc(*paillier)
        doc["public"]["g"] = "0"
        with pytest.raises(ValidationError):
            serialize.parse_key(json.dumps(doc))

    def test_residue_out_of_range(self, paillier):
        pk, _ = paillier
        text = json.dumps({"scheme": "paillier", "residues": [serialize.to_hex(pk.n**2)]})
        serialize.parse_ciphertext(text)  # structurally fine without a key
        with pytest.raises(ValidationError):
            serialize.parse_ciphertext(text, pk)

    def test_non_unit_residue(self, paillier):
        pk, _ = paillier
        text = json.dumps({"scheme": "paillier", "residues": [serialize.to_hex(pk.n)]})
        with pytest.raises(ValidationError):
            serialize.parse_ciphertext(text, pk)

    def test_scheme_mismatch(self, paillier):
        pk, _ = paillier
        text = json.dumps({"scheme": "gm", "residues": ["5"]})
        with pytest.raises(ValidationError):
            serialize.parse_ciphertext(text, pk)

    def test_level_only_for_dj(self):
        with pytest.raises(FormatError):
            serialize.parse_ciphertext(json.dumps({"scheme": "paillier", "level": 2, "residues": ["1"]}))
        with pytest.raises(FormatError):
            serialize.parse_ciphertext(json.dumps({"scheme": "damgard_jurik", "residues": ["1"]}))

    def test_body_shape(self):
        with pytest.raises(FormatError):
            serialize.parse_ciphertext(json.dumps({"scheme": "paillier"}))
        with pytest.raises(FormatError):
            serialize.parse_ciphertext(json.dumps({"scheme": "paillier", "residues": []}))
        with pytest.raises(FormatError):
            serialize.parse_ciphertext(json.dumps({"scheme": "paillier", "batch": [["1"], ["2"]]}))

    def test_negative_to_hex(self):
        with pytest.raises(ParameterError):
            serialize.to_hex(-1)

    def test_mixed_batch(self, paillier):
        pk, _ = paillier
        cts = [Ciphertext(SchemeId.PAILLIER, (1,)), Ciphertext(SchemeId.GM, (1,))]
        with pytest.raises(ParameterError):
            serialize.serialize_batch(cts)

"""Text serialization of keys and ciphertexts.

Documents are JSON objects. Big integers are lowercase hex strings with
no prefix and no leading zeros (``"0"`` for zero)::

    {"scheme": "paillier", "sigma": 512,
     "public": {"n": "c3a1...", "g": "c3a2..."},
     "secret": {"p": "...", "q": "...", "lam": "...", "mu": "..."}}

Damgard-Jurik documents add a top-level ``"level"``. Ciphertexts carry
``"residues"`` (one ciphertext) or ``"batch"`` (a list of residue lists).
"""

from __future__ import annotations

import json
import re
from dataclasses import fields
from typing import Any

from .core import Ciphertext, PublicKey, SchemeId, SecretKey, get_scheme
from .errors import CiphertextCorruptError, FormatError, ParameterError, ValidationError

_HEX = re.compile(r"0|[1-9a-f][0-9a-f]*")


def to_hex(x: int) -> str:
    if x < 0:
        raise ParameterError("only non-negative integers are serialized")
    return format(x, "x")


def from_hex(text: Any, field: str) -> int:
    if not isinstance(text, str) or not _HEX.fullmatch(text):
        raise FormatError(f"expected lowercase hex without leading zeros, got {text!r}", field=field)
    return int(text, 16)


def _loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    return doc


def _scheme(doc: dict) -> SchemeId:
    token = doc.get("scheme")
    if not isinstance(token, str):
        raise FormatError("missing scheme token", field="scheme")
    try:
        return SchemeId(token)
    except ValueError:
        raise FormatError(f"unknown scheme {token!r}", field="scheme") from None


def _decimal(doc: dict, key: str, required: bool) -> int | None:
    if key not in doc:
        if required:
            raise FormatError("missing", field=key)
        return None
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise FormatError(f"expected a positive decimal integer, got {v!r}", field=key)
    return v


def _level(doc: dict, scheme: SchemeId) -> int | None:
    is_dj = scheme is SchemeId.DAMGARD_JURIK
    level = _decimal(doc, "level", required=is_dj)
    if level is not None and not is_dj:
        raise FormatError("only damgard_jurik carries a level", field="level")
    return level


def _encode_value(v):
    return [to_hex(x) for x in v] if isinstance(v, tuple) else to_hex(v)


def _decode_map(obj: Any, names: list[str], section: str, list_fields=()) -> dict[str, Any]:
    if not isinstance(obj, dict):
        raise FormatError("expected an object", field=section)
    missing = [n for n in names if n not in obj]
    extra = [k for k in obj if k not in names]
    if missing:
        raise FormatError("missing", field=f"{section}.{missing[0]}")
    if extra:
        raise FormatError("unexpected field", field=f"{section}.{extra[0]}")
    out = {}
    for name in names:
        where = f"{section}.{name}"
        if name in list_fields:
            if not isinstance(obj[name], list) or not obj[name]:
                raise FormatError("expected a non-empty list of hex integers", field=where)
            out[name] = tuple(from_hex(x, f"{where}[{i}]") for i, x in enumerate(obj[name]))
        else:
            out[name] = from_hex(obj[name], where)
    return out


def serialize_key(pk: PublicKey, sk: SecretKey | None = None) -> str:
    doc: dict[str, Any] = {"scheme": pk.scheme.value, "sigma": pk.sigma}
    if pk.level is not None:
        doc["level"] = pk.level
    doc["public"] = {k: _encode_value(v) for k, v in pk.integers().items()}
    if sk is not None:
        if sk.public != pk:
            raise ParameterError("secret key belongs to a different public key")
        doc["secret"] = {k: to_hex(v) for k, v in sk.integers().items()}
    return json.dumps(doc, indent=2) + "\n"


def parse_key(text: str) -> tuple[PublicKey, SecretKey | None]:
    """Parse a key document; the secret section is optional.

    Raises:
        FormatError: structural problems (names the offending field).
        ValidationError: values that break a group or key invariant.
    """
    doc = _loads(text)
    scheme = _scheme(doc)
    sigma = _decimal(doc, "sigma", required=True)
    level = _level(doc, scheme)
    extra = set(doc) - {"scheme", "sigma", "level", "public", "secret"}
    if extra:
        raise FormatError("unexpected field", field=sorted(extra)[0])
    impl = get_scheme(scheme)

    pk_names = [f.name for f in fields(impl.public_key_cls) if f.name not in ("sigma", "s")]
    list_fields = ("factors",) if scheme is SchemeId.NACCACHE_STERN else ()
    if "public" not in doc:
        raise FormatError("missing", field="public")
    values = _decode_map(doc["public"], pk_names, "public", list_fields)
    if level is not None:
        values["s"] = level
    pk = impl.public_key_cls(sigma=sigma, **values)
    try:
        impl.validate_public(pk)
    except ParameterError as exc:
        raise ValidationError(str(exc), field="public") from None

    if "secret" not in doc:
        return pk, None
    sk_names = [f.name for f in fields(impl.secret_key_cls) if f.name != "public"]
    sk = impl.secret_key_cls(public=pk, **_decode_map(doc["secret"], sk_names, "secret"))
    try:
        impl.validate_keypair(pk, sk)
    except ParameterError as exc:
        raise ValidationError(str(exc), field="secret") from None
    return pk, sk


def _ct_header(scheme: SchemeId, level: int | None) -> dict[str, Any]:
    doc: dict[str, Any] = {"scheme": scheme.value}
    if level is not None:
        doc["level"] = level
    return doc


def serialize_ciphertext(c: Ciphertext) -> str:
    doc = _ct_header(c.scheme, c.level)
    doc["residues"] = [to_hex(r) for r in c.residues]
    return json.dumps(doc, indent=2) + "\n"


def serialize_batch(cts: list[Ciphertext], pk: PublicKey | None = None) -> str:
    if not cts and pk is None:
        raise ParameterError("an empty batch needs the public key for its header")
    scheme, level = (pk.scheme, pk.level) if pk is not None else (cts[0].scheme, cts[0].level)
    if any(c.scheme != scheme or c.level != level for c in cts):
        raise ParameterError("batch mixes schemes or levels")
    doc = _ct_header(scheme, level)
    doc["batch"] = [[to_hex(r) for r in c.residues] for c in cts]
    return json.dumps(doc, indent=2) + "\n"


def _residues(obj: Any, field: str) -> tuple[int, ...]:
    if not isinstance(obj, list) or not obj:
        raise FormatError("expected a non-empty list of hex integers", field=field)
    return tuple(from_hex(x, f"{field}[{i}]") for i, x in enumerate(obj))


def _validate_ct(c: Ciphertext, pk: PublicKey, field: str) -> None:
    if c.scheme != pk.scheme or c.level != pk.level:
        raise ValidationError("ciphertext does not match the key's scheme/level", field=field)
    impl = get_scheme(pk.scheme)
    for r in c.residues:
        try:
            impl.validate_residue(pk, r)
        except CiphertextCorruptError as exc:
            raise ValidationError(str(exc), field=field) from None


def parse_ciphertexts(text: str, pk: PublicKey | None = None) -> list[Ciphertext]:
    """Parse a single-ciphertext or batch document into a list.

    With ``pk`` every residue is checked to lie in the key's ciphertext group.
    """
    doc = _loads(text)
    scheme = _scheme(doc)
    level = _level(doc, scheme)
    body = [k for k in ("residues", "batch") if k in doc]
    if len(body) != 1:
        raise FormatError("expected exactly one of 'residues' or 'batch'", field="residues")
    extra = set(doc) - {"scheme", "level", "residues", "batch"}
    if extra:
        raise FormatError("unexpected field", field=sorted(extra)[0])
    if body[0] == "residues":
        cts = [Ciphertext(scheme, _residues(doc["residues"], "residues"), level)]
    else:
        if not isinstance(doc["batch"], list):
            raise FormatError("expected a list", field="batch")
        cts = [
            Ciphertext(scheme, _residues(item, f"batch[{i}]"), level)
            for i, item in enumerate(doc["batch"])
        ]
    if pk is not None:
        for i, c in enumerate(cts):
            _validate_ct(c, pk, "residues" if body[0] == "residues" else f"batch[{i}]")
    return cts


def parse_ciphertext(text: str, pk: PublicKey | None = None) -> Ciphertext:
    cts = parse_ciphertexts(text, pk)
    if len(cts) != 1:
        raise FormatError(f"expected one ciphertext, found {len(cts)}", field="batch")
    return cts[0]

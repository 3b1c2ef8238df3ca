"""Concrete cryptosystems; importing this package registers them."""

from . import benaloh, gm, okamoto_uchiyama, paillier, rsa
from .benaloh import benaloh_key, ns_key
from .gm import key_from_params as gm_key
from .okamoto_uchiyama import key_from_params as ou_key
from .paillier import dj_key, paillier_decrypt_crt, paillier_key
from .rsa import key_from_params as rsa_key

__all__ = [
    "benaloh",
    "benaloh_key",
    "dj_key",
    "gm",
    "gm_key",
    "ns_key",
    "okamoto_uchiyama",
    "ou_key",
    "paillier",
    "paillier_decrypt_crt",
    "paillier_key",
    "rsa",
    "rsa_key",
]

import random

import pytest

from phekit.schemes import benaloh_key, dj_key, gm_key, ns_key, ou_key, paillier_key, rsa_key


def toy_keys():
    """Hand-sized keys (modulus n <= 100) used by the worked examples."""
    return {
        "rsa": rsa_key(3, 11, 3),
        "gm": gm_key(3, 7, 20),
        "benaloh": benaloh_key(7, 5, 3, 2),
        "naccache_stern": ns_key(7, 11, (3, 5)),
        "okamoto_uchiyama": ou_key(3, 5, 2),
        "paillier": paillier_key(3, 5),
        "damgard_jurik": dj_key(3, 5, 2),
    }


TOY_KEYS = toy_keys()


def randomness_space(pk):
    """Every admissible randomness value for a toy key."""
    from math import gcd

    if pk.scheme.value == "rsa":
        return [None]
    if pk.scheme.value == "okamoto_uchiyama":
        return list(range(pk.n))
    return [r for r in range(1, pk.n) if gcd(r, pk.n) == 1]


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(params=sorted(TOY_KEYS))
def toy(request):
    return TOY_KEYS[request.param]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)

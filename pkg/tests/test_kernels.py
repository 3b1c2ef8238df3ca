import os
import subprocess
import sys

import numpy as np
import pytest

from phekit import _kernels
from phekit._accel import NUMBA_FLAG
from phekit.group_encoding import all_assignments, compile_circuit

from corpus import CORPUS


@pytest.mark.parametrize("name, circuit", CORPUS[::3], ids=[n for n, _ in CORPUS[::3]])
def test_eval_backends_agree(name, circuit):
    idx, mats = compile_circuit(circuit).to_arrays()
    xs = all_assignments(max(circuit.n_inputs, 1))
    a = _kernels.eval_batch_numpy(idx, mats, xs)
    b = _kernels.eval_batch_numba(idx, mats, xs)
    assert a.dtype == b.dtype == np.uint8
    np.testing.assert_array_equal(a, b)


def test_perm_backends_agree():
    rng = np.random.default_rng(0)
    for length in (0, 1, 5, 200):
        perms = np.array([rng.permutation(7) for _ in range(length)], dtype=np.uint8).reshape(length, 7)
        a = _kernels.perm_product_numpy(perms)
        b = _kernels.perm_product_numba(perms)
        np.testing.assert_array_equal(a, b)
        want = list(range(7))
        for p in perms:
            want = [want[j] for j in p]
        assert list(a) == want


@pytest.mark.parametrize("value, expected", [("1", "numpy"), ("", "numba")])
def test_env_flag_selects_backend(value, expected):
    code = (
        "from phekit import _kernels;"
        "print('numba' if _kernels.eval_batch is _kernels.eval_batch_numba else 'numpy')"
    )
    env = dict(os.environ, **{NUMBA_FLAG: value})
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected

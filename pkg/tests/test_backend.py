import numpy as np
import pytest

import permsum
from permsum import _backend


def test_backend_flag():
    assert permsum.BACKEND in ("cython", "python")
    assert _backend.get_kernels() is _backend.kernels
    with pytest.raises(ValueError):
        _backend.get_kernels("fortran")


def test_tree_sum_fixed_order():
    assert _backend.tree_sum([]) == 0
    assert _backend.tree_sum([1, 2, 3]) == 6
    assert _backend.chunk_ranges(5, 2) == [(0, 2), (2, 4), (4, 5)]


def _compiled():
    try:
        return _backend.get_kernels("cython")
    except ImportError:
        pytest.skip("compiled kernels not built")


def test_ryser_kernels_agree():
    kc, kp = _compiled(), _backend.get_kernels("python")
    rng = np.random.default_rng(3)
    a = np.ascontiguousarray(rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9)))
    for lo, hi in [(0, 512), (0, 100), (100, 512), (7, 8)]:
        assert kc.ryser_range(a, lo, hi) == pytest.approx(kp.ryser_range(a, lo, hi), rel=1e-12, abs=1e-12)


def test_exp_sum_kernels_agree_on_chunk_aligned_ranges():
    kc, kp = _compiled(), _backend.get_kernels("python")
    rng = np.random.default_rng(4)
    masks = np.array([0b1, 0b110, 0b1011, 0b110000, 0b1000000000], dtype=np.uint64)
    thetas = rng.uniform(0, 6, size=5)
    for lo, hi in [(0, 1024), (0, 256), (256, 512)]:
        assert kc.exp_sum_range(masks, thetas, lo, hi) == pytest.approx(
            kp.exp_sum_range(masks, thetas, lo, hi), abs=1e-10
        )


def test_pure_python_fallback_end_to_end():
    import json
    import os
    import subprocess
    import sys

    code = (
        "import json, math, permsum\n"
        "from permsum.permanent import permanent\n"
        "from permsum.poly import canonicalize, exp_sum\n"
        "p = canonicalize([(0.3, [0, 1]), (1.1, [2]), (2.0, [0, 1, 2])], 3)\n"
        "z = exp_sum(p)\n"
        "w = permanent([[1, 2, 3], [4, 5, 6], [7, 8, 10]])\n"
        "print(json.dumps([permsum.BACKEND, z.real, z.imag, w.real]))\n"
    )
    env = dict(os.environ, PERMSUM_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, re, im, per = json.loads(out.stdout)
    assert backend == "python"
    from permsum.poly import canonicalize, exp_sum
    from permsum.permanent import permanent

    z = exp_sum(canonicalize([(0.3, [0, 1]), (1.1, [2]), (2.0, [0, 1, 2])], 3))
    assert complex(re, im) == pytest.approx(z, abs=1e-12)
    assert per == pytest.approx(permanent([[1, 2, 3], [4, 5, 6], [7, 8, 10]]).real)

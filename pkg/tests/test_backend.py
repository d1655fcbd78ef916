"""The compiled kernels and the pure-Python reference must agree."""

import numpy as np
import pytest

from gueminors import _backend, _kernels_py
from gueminors.sampling import RngStream, brownian_increments, sample_gue_batch

try:
    from gueminors import _kernels
except ImportError:  # pragma: no cover - extension not built
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")


def test_backend_selected():
    assert _backend.NAME in ("compiled", "python")
    if _kernels is not None:
        assert _backend.NAME == "compiled"


def test_python_eigvals_match_numpy():
    h = sample_gue_batch(6, 50, RngStream(0))
    ref = np.linalg.eigvalsh(h)[:, ::-1]
    np.testing.assert_allclose(_kernels_py.eigvalsh_batch(h), ref, atol=1e-12)


@needs_ext
def test_eigvals_equivalent():
    h = sample_gue_batch(6, 200, RngStream(1))
    np.testing.assert_allclose(_kernels.eigvalsh_batch(h), _kernels_py.eigvalsh_batch(h), atol=1e-12)
    np.testing.assert_allclose(_kernels.minor_spectra_batch(h), _kernels_py.minor_spectra_batch(h), atol=1e-12)


@needs_ext
@pytest.mark.parametrize("mode", ["lattice", "grid"])
def test_lpp_equivalent(mode):
    w = brownian_increments(20, 30, 4, RngStream(2))
    for ell in range(1, 5):
        np.testing.assert_allclose(
            _kernels.lpp_batch(w, ell, 4, mode), _kernels_py.lpp_batch(w, ell, 4, mode), atol=1e-12
        )


@needs_ext
def test_rsk_equivalent():
    g = RngStream(3).generator()
    words = g.integers(1, 5, size=(50, 200))
    np.testing.assert_array_equal(_kernels.rsk_word_shape_batch(words, 4), _kernels_py.rsk_word_shape_batch(words, 4))
    np.testing.assert_array_equal(_kernels.lis_weak_batch(words, 4), _kernels_py.lis_weak_batch(words, 4))
    arr = g.geometric(0.5, size=(50, 12, 5)) - 1
    np.testing.assert_array_equal(_kernels.rsk_array_pattern_batch(arr), _kernels_py.rsk_array_pattern_batch(arr))


def test_forced_python_backend_runs():
    import os
    import subprocess
    import sys

    code = (
        "from gueminors import _backend; from gueminors.paths import multipath_lpp_dp; "
        "assert _backend.NAME == 'python'; print(multipath_lpp_dp([[1, 2], [2, 1], [0, 3]], 1))"
    )
    out = subprocess.run([sys.executable, "-c", code], env={**os.environ, "GUEMINORS_BACKEND": "python"},
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "7.0"

"""Kernel backend selection.

The compiled extension is used when it imports; ``GUEMINORS_BACKEND=python``
forces the pure-Python reference kernels.
"""

from __future__ import annotations

import os

from . import _kernels_py

_requested = os.environ.get("GUEMINORS_BACKEND", "auto").lower()

if _requested == "python":
    kernels = _kernels_py
    NAME = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        if _requested == "compiled":
            raise
        kernels = _kernels_py
        NAME = "python"
    else:
        NAME = "compiled"

eigvalsh_batch = kernels.eigvalsh_batch
minor_spectra_batch = kernels.minor_spectra_batch
lpp_batch = kernels.lpp_batch
rsk_word_shape_batch = kernels.rsk_word_shape_batch
lis_weak_batch = kernels.lis_weak_batch
rsk_array_pattern_batch = kernels.rsk_array_pattern_batch

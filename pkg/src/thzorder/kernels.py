"""Hot-loop kernels with a compiled backend and a numpy fallback.

The compiled extension is used when it imports cleanly; set
``THZORDER_PURE_PYTHON=1`` to force the numpy path.
"""

from __future__ import annotations

import os

import numpy as np


def imusic_accumulate_numpy(freqs, phase_step, sin_angles, basis, complement, clamp):
    L, N, _ = basis.shape
    elements = np.arange(N)
    scores = np.zeros(len(sin_angles))
    for b in range(L):
        steer = np.exp(-1j * phase_step * freqs[b] * np.outer(sin_angles, elements))
        proj = np.sum(np.abs(steer @ basis[b].conj()) ** 2, axis=1)
        den = N - proj if complement else proj
        scores += N / np.maximum(den, clamp * N)
    return scores


BACKEND = "numpy"
imusic_accumulate = imusic_accumulate_numpy

if not os.environ.get("THZORDER_PURE_PYTHON"):
    try:
        from ._kernels import imusic_accumulate as _compiled
    except ImportError:  # extension not built
        pass
    else:
        def imusic_accumulate(freqs, phase_step, sin_angles, basis, complement, clamp):
            if basis.shape[1] > 64:
                return imusic_accumulate_numpy(freqs, phase_step, sin_angles, basis, complement, clamp)
            return _compiled(np.ascontiguousarray(freqs, dtype=float), float(phase_step),
                             np.ascontiguousarray(sin_angles, dtype=float),
                             np.asarray(basis, dtype=complex), bool(complement), float(clamp))

        BACKEND = "cython"

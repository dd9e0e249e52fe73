# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False, language_level=3
"""Compiled IMUSIC accumulation kernel."""

import numpy as np
from libc.math cimport cos, fabs, sin


def imusic_accumulate(const double[::1] freqs, double phase_step, const double[::1] sin_angles,
                      basis, bint complement, double clamp):
    """Sum of ``N / ||B^H a||^2`` (or ``N / (N - ||B^H a||^2)``) over bins, per angle.

    ``a_i = exp(-j phase_step f sin(theta) i)`` for ``i = 0 .. N-1``; ``basis``
    is a complex ``(L, N, M)`` array.
    """
    cdef double[:, :, ::1] br = np.ascontiguousarray(basis.real)
    cdef double[:, :, ::1] bi = np.ascontiguousarray(basis.imag)
    cdef Py_ssize_t L = br.shape[0]
    cdef Py_ssize_t N = br.shape[1]
    cdef Py_ssize_t M = br.shape[2]
    cdef Py_ssize_t A = sin_angles.shape[0]
    cdef Py_ssize_t a, b, i, k
    cdef double phase, proj, den, norm = <double>N
    cdef double zr, zi, er, ei, tmp, accr, acci, wr, wi, df = 0.0
    cdef bint uniform = L > 2
    for b in range(2, L):
        if fabs((freqs[b] - freqs[b - 1]) - (freqs[1] - freqs[0])) > 1e-12 * fabs(freqs[1] - freqs[0]):
            uniform = False
    if uniform:
        df = (freqs[L - 1] - freqs[0]) / (L - 1)
    cdef double sr[64]
    cdef double si[64]
    out = np.zeros(A, dtype=np.float64)
    cdef double[::1] scores = out
    if N > 64:
        raise ValueError("compiled kernel supports at most 64 elements")
    with nogil:
        for a in range(A):
            if uniform:
                # element-step phasor advances by a fixed rotation per bin
                wr = cos(-phase_step * df * sin_angles[a])
                wi = sin(-phase_step * df * sin_angles[a])
            for b in range(L):
                if b == 0 or not uniform:
                    phase = -phase_step * freqs[b] * sin_angles[a]
                    zr = cos(phase)
                    zi = sin(phase)
                else:
                    tmp = zr * wr - zi * wi
                    zi = zr * wi + zi * wr
                    zr = tmp
                er = 1.0
                ei = 0.0
                for i in range(N):
                    sr[i] = er
                    si[i] = ei
                    tmp = er * zr - ei * zi
                    ei = er * zi + ei * zr
                    er = tmp
                proj = 0.0
                for k in range(M):
                    accr = 0.0
                    acci = 0.0
                    for i in range(N):
                        # conj(B_ik) * a_i
                        accr = accr + br[b, i, k] * sr[i] + bi[b, i, k] * si[i]
                        acci = acci + br[b, i, k] * si[i] - bi[b, i, k] * sr[i]
                    proj = proj + accr * accr + acci * acci
                if complement:
                    den = norm - proj
                else:
                    den = proj
                if den < clamp * norm:
                    den = clamp * norm
                scores[a] += norm / den
    return out

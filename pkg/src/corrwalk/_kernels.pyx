# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled per-step kernels for the walk's hot loop.

Arithmetic is spelled out on real/imaginary components in the same
per-element order as the numpy fallback (``_kernels_py``), and the build
disables floating-point contraction, so both backends round identically.
"""


def step_kernel(double complex[::1] up, double complex[::1] down,
                double c, double s, Py_ssize_t lo, Py_ssize_t hi):
    """Fused coin+shift applied in place on the support window [lo, hi].

    The new support is [lo-1, hi+1]; the caller guarantees lo >= 1,
    hi <= len(up)-2, and zero amplitudes outside [lo, hi].
    """
    cdef double* u = <double*> &up[0]
    cdef double* d = <double*> &down[0]
    cdef Py_ssize_t i, j
    cdef double ur, ui, dr, di, ar, ai, br, bi
    cdef double carry_r = 0.0
    cdef double carry_i = 0.0
    for i in range(lo, hi + 1):
        j = 2 * i
        ur = u[j]
        ui = u[j + 1]
        dr = d[j]
        di = d[j + 1]
        ar = c * ur + s * dr
        ai = c * ui + s * di
        br = s * ur - c * dr
        bi = s * ui - c * di
        # new up(x) is the rotated up-component of x-1 (carried one site right)
        u[j] = carry_r
        u[j + 1] = carry_i
        carry_r = ar
        carry_i = ai
        # new down(x-1) is the rotated down-component of x (moved one site left)
        d[j - 2] = br
        d[j - 1] = bi
    j = 2 * (hi + 1)
    u[j] = carry_r
    u[j + 1] = carry_i
    d[2 * hi] = 0.0
    d[2 * hi + 1] = 0.0


def gram_kernel(double complex[::1] up, double complex[::1] down,
                Py_ssize_t lo, Py_ssize_t hi):
    """Spin-component norms and overlap over [lo, hi]: (G_u, G_d, G_ud)."""
    cdef double* u = <double*> &up[0]
    cdef double* d = <double*> &down[0]
    cdef Py_ssize_t i, j
    cdef double ur, ui, dr, di
    cdef double gu = 0.0
    cdef double gd = 0.0
    cdef double gr = 0.0
    cdef double gi = 0.0
    for i in range(lo, hi + 1):
        j = 2 * i
        ur = u[j]
        ui = u[j + 1]
        dr = d[j]
        di = d[j + 1]
        gu += ur * ur + ui * ui
        gd += dr * dr + di * di
        gr += ur * dr + ui * di
        gi += ui * dr - ur * di
    return gu, gd, complex(gr, gi)


def second_moment_kernel(double complex[::1] up, double complex[::1] down,
                         Py_ssize_t offset, Py_ssize_t lo, Py_ssize_t hi):
    """Sum of x^2 * (|up|^2 + |down|^2) over [lo, hi], with x = index - offset."""
    cdef double* u = <double*> &up[0]
    cdef double* d = <double*> &down[0]
    cdef Py_ssize_t i, j
    cdef double x
    cdef double m2 = 0.0
    for i in range(lo, hi + 1):
        j = 2 * i
        x = <double> (i - offset)
        m2 += x * x * (u[j] * u[j] + u[j + 1] * u[j + 1]
                       + d[j] * d[j] + d[j + 1] * d[j + 1])
    return m2

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops.  Signatures mirror ``_pykernels`` exactly."""

cimport cython
import numpy as np

ctypedef double complex cplx


def advance_position(const cplx[::1] z, const cplx[::1] dz, const cplx[::1] rho,
                     const double[::1] cos_t, const double[::1] sinc_t,
                     const double[::1] pz, double tau, cplx[::1] out):
    cdef Py_ssize_t l, n = z.shape[0]
    with nogil:
        out[0] = z[0] + tau * dz[0]
        for l in range(1, n):
            out[l] = cos_t[l] * z[l] + sinc_t[l] * dz[l] - pz[l] * rho[l]


def advance_velocity(const cplx[::1] z, const cplx[::1] dz, const cplx[::1] rho0,
                     const cplx[::1] rho1, const double[::1] dz_t,
                     const double[::1] cos_t, const double[::1] qc,
                     const double[::1] qn, cplx[::1] out):
    cdef Py_ssize_t l, n = z.shape[0]
    with nogil:
        out[0] = dz[0]
        for l in range(1, n):
            out[l] = (-dz_t[l] * z[l] + cos_t[l] * dz[l]
                      - qc[l] * rho0[l] - qn[l] * rho1[l])


cdef inline double _apply(int fcode, double u) noexcept nogil:
    if fcode == 0:
        return 0.0
    elif fcode == 1:
        return u
    elif fcode == 2:
        return u * u
    return u * u * u


cdef void _rhs(int fcode, Py_ssize_t n, const cplx* z, const cplx* dz,
               const double[::1] mu2, const double[::1] theta2,
               const cplx[:, ::1] fwd, const cplx[:, ::1] inv,
               double* nodal, cplx* kz, cplx* kdz) noexcept nogil:
    cdef Py_ssize_t j, l
    cdef cplx acc
    for j in range(n):
        acc = 0
        for l in range(n):
            acc = acc + inv[j, l] * z[l]
        nodal[j] = _apply(fcode, acc.real)
    for l in range(n):
        acc = 0
        for j in range(n):
            acc = acc + fwd[l, j] * nodal[j]
        kz[l] = dz[l]
        kdz[l] = -theta2[l] * z[l] - mu2[l] * acc


def rk4_reference(cplx[::1] z, cplx[::1] dz, const double[::1] mu2,
                  const double[::1] theta2, const cplx[:, ::1] fwd,
                  const cplx[:, ::1] inv, double tau, long nsteps, int fcode):
    """Classical RK4 on the coefficient-space system, in place, ``nsteps`` steps."""
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t l
    cdef long k
    cdef double half = 0.5 * tau, sixth = tau / 6.0
    buf = np.empty((10, n), dtype=np.complex128)
    cdef cplx[:, ::1] b = buf
    nodal_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] nodal = nodal_arr
    # rows: 0,1 stage input; 2..9 stage slopes (k1z, k1dz, ..., k4z, k4dz)
    with nogil:
        for k in range(nsteps):
            _rhs(fcode, n, &z[0], &dz[0], mu2, theta2, fwd, inv, &nodal[0], &b[2, 0], &b[3, 0])
            for l in range(n):
                b[0, l] = z[l] + half * b[2, l]
                b[1, l] = dz[l] + half * b[3, l]
            _rhs(fcode, n, &b[0, 0], &b[1, 0], mu2, theta2, fwd, inv, &nodal[0], &b[4, 0], &b[5, 0])
            for l in range(n):
                b[0, l] = z[l] + half * b[4, l]
                b[1, l] = dz[l] + half * b[5, l]
            _rhs(fcode, n, &b[0, 0], &b[1, 0], mu2, theta2, fwd, inv, &nodal[0], &b[6, 0], &b[7, 0])
            for l in range(n):
                b[0, l] = z[l] + tau * b[6, l]
                b[1, l] = dz[l] + tau * b[7, l]
            _rhs(fcode, n, &b[0, 0], &b[1, 0], mu2, theta2, fwd, inv, &nodal[0], &b[8, 0], &b[9, 0])
            for l in range(n):
                z[l] = z[l] + sixth * (b[2, l] + 2 * b[4, l] + 2 * b[6, l] + b[8, l])
                dz[l] = dz[l] + sixth * (b[3, l] + 2 * b[5, l] + 2 * b[7, l] + b[9, l])

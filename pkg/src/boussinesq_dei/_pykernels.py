"""Pure numpy implementations of the hot loops (fallback for ``_ckernels``)."""
import numpy as np


def advance_position(z, dz, rho, cos_t, sinc_t, pz, tau, out):
    np.multiply(cos_t, z, out=out)
    out += sinc_t * dz
    out -= pz * rho
    out[0] = z[0] + tau * dz[0]


def advance_velocity(z, dz, rho0, rho1, dz_t, cos_t, qc, qn, out):
    np.multiply(cos_t, dz, out=out)
    out -= dz_t * z
    out -= qc * rho0
    out -= qn * rho1
    out[0] = dz[0]


_POINTWISE = {
    0: lambda u: np.zeros_like(u),
    1: lambda u: u,
    2: lambda u: u * u,
    3: lambda u: u * u * u,
}


def rk4_reference(z, dz, mu2, theta2, fwd, inv, tau, nsteps, fcode):
    """Classical RK4 on the coefficient-space system, in place."""
    f = _POINTWISE[fcode]

    def rhs(zc, dzc):
        rho = fwd @ f((inv @ zc).real)
        return dzc, -theta2 * zc - mu2 * rho

    for _ in range(nsteps):
        k1z, k1d = rhs(z, dz)
        k2z, k2d = rhs(z + 0.5 * tau * k1z, dz + 0.5 * tau * k1d)
        k3z, k3d = rhs(z + 0.5 * tau * k2z, dz + 0.5 * tau * k2d)
        k4z, k4d = rhs(z + tau * k3z, dz + tau * k3d)
        z += tau / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z)
        dz += tau / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d)

"""Numba kernels for the TMz Yee update with CPML edge slabs.

Field layout on an ``nx x ny`` node grid:

* ``ez[i, j]`` at ``(i, j)``
* ``hx[i, j]`` at ``(i, j + 1/2)``, shape ``(nx, ny - 1)``
* ``hy[i, j]`` at ``(i + 1/2, j)``, shape ``(nx - 1, ny)``

With ``kappa = 1`` the CPML only adds the auxiliary ``psi`` terms, so each
half step is a plain vacuum/material update followed by slab corrections.
"""

from __future__ import annotations

import numba as nb


@nb.njit(cache=True)
def update_h(ez, hx, hy, c):
    nx, ny = ez.shape
    for i in range(nx):
        for j in range(ny - 1):
            hx[i, j] -= c * (ez[i, j + 1] - ez[i, j])
    for i in range(nx - 1):
        for j in range(ny):
            hy[i, j] += c * (ez[i + 1, j] - ez[i, j])


@nb.njit(cache=True)
def update_e(ez, hx, hy, ca, cb, inv_dx):
    nx, ny = ez.shape
    for i in range(1, nx - 1):
        for j in range(1, ny - 1):
            curl = (hy[i, j] - hy[i - 1, j]) - (hx[i, j] - hx[i, j - 1])
            ez[i, j] = ca[i, j] * ez[i, j] + cb[i, j] * curl * inv_dx


@nb.njit(cache=True)
def pml_h(ez, hx, hy, psi_hxy, psi_hyx, bx_h, ax_h, by_h, ay_h, c, npml_x, npml_y):
    """CPML corrections for H inside the x slabs (hy) and y slabs (hx)."""
    nx, ny = ez.shape
    # hy: x-derivative, half-integer x positions
    for i in range(nx - 1):
        if i >= npml_x and i < nx - 1 - npml_x:
            continue
        for j in range(ny):
            psi_hyx[i, j] = bx_h[i] * psi_hyx[i, j] + ax_h[i] * (ez[i + 1, j] - ez[i, j])
            hy[i, j] += c * psi_hyx[i, j]
    # hx: y-derivative, half-integer y positions
    for i in range(nx):
        for j in range(ny - 1):
            if j >= npml_y and j < ny - 1 - npml_y:
                continue
            psi_hxy[i, j] = by_h[j] * psi_hxy[i, j] + ay_h[j] * (ez[i, j + 1] - ez[i, j])
            hx[i, j] -= c * psi_hxy[i, j]


@nb.njit(cache=True)
def pml_e(ez, hx, hy, psi_ezx, psi_ezy, bx_e, ax_e, by_e, ay_e, cb, inv_dx, npml_x, npml_y):
    nx, ny = ez.shape
    for i in range(1, nx - 1):
        in_x = i < npml_x or i >= nx - npml_x
        for j in range(1, ny - 1):
            in_y = j < npml_y or j >= ny - npml_y
            if not (in_x or in_y):
                continue
            corr = 0.0
            if in_x:
                psi_ezx[i, j] = bx_e[i] * psi_ezx[i, j] + ax_e[i] * (hy[i, j] - hy[i - 1, j])
                corr += psi_ezx[i, j]
            if in_y:
                psi_ezy[i, j] = by_e[j] * psi_ezy[i, j] + ay_e[j] * (hx[i, j] - hx[i, j - 1])
                corr -= psi_ezy[i, j]
            ez[i, j] += cb[i, j] * corr * inv_dx


@nb.njit(cache=True)
def field_energy(ez_prev, ez, hx, hy, eps, dx):
    """Leapfrog energy ``(eps E^n E^(n+1) + |H^(n+1/2)|^2) dx^2 / 2``.

    This staggered form is exactly conserved by the lossless Yee update,
    unlike ``|E^n|^2 + |H^(n+1/2)|^2`` which oscillates step to step.
    """
    acc = 0.0
    nx, ny = ez.shape
    for i in range(nx):
        for j in range(ny):
            acc += eps[i, j] * ez_prev[i, j] * ez[i, j]
    for i in range(nx):
        for j in range(ny - 1):
            acc += hx[i, j] * hx[i, j]
    for i in range(nx - 1):
        for j in range(ny):
            acc += hy[i, j] * hy[i, j]
    return 0.5 * acc * dx * dx

"""Compiled inner loop for long chains.

The kernel advances a chain by one block of steps, consuming pre-drawn
uniforms laid out exactly as the per-step sampler draws them (five doubles
per step).  It keeps the Fisher gradient sum and the Coulomb pair sum as
running state, refreshed from scratch at every block boundary so that
floating-point drift cannot accumulate across a long run.

Compiled with fastmath off: results are IEEE-reproducible bit for bit.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _min_image(x: float, length: float) -> float:
    out = x - length * math.floor(x / length + 0.5)
    half = 0.5 * length
    if out >= half:
        out -= length
    elif out < -half:
        out += length
    return out


@njit(cache=True, nogil=True, inline="always")
def _wrap(x: float, length: float) -> float:
    out = x - length * math.floor(x / length)
    if out >= length:
        out -= length
    return out


@njit(cache=True, nogil=True)
def _fisher_gradient(pos, length, rho2):
    """Sum over n >= 1 of the pair-energy gradient wrt electron 0."""
    gx = gy = gz = 0.0
    for m in range(1, pos.shape[0]):
        dx = _min_image(pos[0, 0] - pos[m, 0], length)
        dy = _min_image(pos[0, 1] - pos[m, 1], length)
        dz = _min_image(pos[0, 2] - pos[m, 2], length)
        d2 = dx * dx + dy * dy + dz * dz
        d = math.sqrt(d2)
        inv3 = 1.0 / (d2 * d)
        gx -= rho2 * dx * inv3
        gy -= rho2 * dy * inv3
        gz -= rho2 * dz * inv3
    return gx, gy, gz


@njit(cache=True, nogil=True)
def _pair_sum(pos, length):
    """Sum over distinct pairs of the inverse minimum-image distance."""
    total = 0.0
    n = pos.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            dx = _min_image(pos[i, 0] - pos[j, 0], length)
            dy = _min_image(pos[i, 1] - pos[j, 1], length)
            dz = _min_image(pos[i, 2] - pos[j, 2], length)
            total += 1.0 / math.sqrt(dx * dx + dy * dy + dz * dz)
    return total


@njit(cache=True, nogil=True)
def run_block(pos, length, rho, gamma, beta, hard_core, delta, randoms,
              fisher_out, coulomb_out):
    """Advance the chain by randoms.shape[0] steps, writing one summand pair
    per step; mutates ``pos`` in place and returns the accepted-move count."""
    n = pos.shape[0]
    rho2 = rho * rho
    gx, gy, gz = _fisher_gradient(pos, length, rho2)
    pair_sum = _pair_sum(pos, length)
    fisher_scale = gamma * gamma / 8.0
    accepted = 0

    for t in range(randoms.shape[0]):
        k = int(randoms[t, 0] * n)
        if k >= n:
            k = n - 1
        ox, oy, oz = pos[k, 0], pos[k, 1], pos[k, 2]
        nx = _wrap(ox + (2.0 * randoms[t, 1] - 1.0) * delta, length)
        ny = _wrap(oy + (2.0 * randoms[t, 2] - 1.0) * delta, length)
        nz = _wrap(oz + (2.0 * randoms[t, 3] - 1.0) * delta, length)

        log_ratio = 0.0
        pair_delta = 0.0
        dgx = dgy = dgz = 0.0
        ngx = ngy = ngz = 0.0
        singular = False
        for i in range(n):
            if i == k:
                continue
            dxo = _min_image(pos[i, 0] - ox, length)
            dyo = _min_image(pos[i, 1] - oy, length)
            dzo = _min_image(pos[i, 2] - oz, length)
            d_old = math.sqrt(dxo * dxo + dyo * dyo + dzo * dzo)
            dxn = _min_image(pos[i, 0] - nx, length)
            dyn = _min_image(pos[i, 1] - ny, length)
            dzn = _min_image(pos[i, 2] - nz, length)
            d_new = math.sqrt(dxn * dxn + dyn * dyn + dzn * dzn)
            if d_new < hard_core:
                singular = True
                break
            inv_old = 1.0 / d_old
            inv_new = 1.0 / d_new
            coupling = gamma if (i == 0 or k == 0) else beta
            log_ratio += -coupling * rho2 * (inv_new - inv_old)
            pair_delta += inv_new - inv_old
            if k == 0:
                # rebuild the whole gradient: every pair of electron 0 moved
                inv3 = inv_new * inv_new * inv_new
                ngx += rho2 * dxn * inv3
                ngy += rho2 * dyn * inv3
                ngz += rho2 * dzn * inv3
            elif i == 0:
                invn3 = inv_new * inv_new * inv_new
                invo3 = inv_old * inv_old * inv_old
                dgx += -rho2 * (dxn * invn3 - dxo * invo3)
                dgy += -rho2 * (dyn * invn3 - dyo * invo3)
                dgz += -rho2 * (dzn * invn3 - dzo * invo3)

        accept = False
        if not singular:
            if log_ratio >= 0.0:
                accept = True
            elif randoms[t, 4] < math.exp(log_ratio):
                accept = True
        if accept:
            pos[k, 0] = nx
            pos[k, 1] = ny
            pos[k, 2] = nz
            pair_sum += pair_delta
            if k == 0:
                gx, gy, gz = ngx, ngy, ngz
            else:
                gx += dgx
                gy += dgy
                gz += dgz
            accepted += 1

        fisher_out[t] = fisher_scale * (gx * gx + gy * gy + gz * gz)
        coulomb_out[t] = pair_sum / n
    return accepted

"""Pure-Python/numpy kernels: the import-time fallback for the compiled core.

Two entry styles: vectorized numpy over node arrays (used by the tissue
solver, where the batch amortizes numpy overhead) and a scalar float loop
for the 0D integrator (where per-call numpy overhead would dominate).
Slot layout matches ``abseize.ionic.pack_base`` / ``pack_modifiers`` and is
mirrored by ``_fastcore.pyx``.
"""

from __future__ import annotations

from math import exp, isfinite, log

import numpy as np

# base parameter slots
G_NAL, G_NA, G_K, G_AHP, G_KL, G_CLL, G_CA = 0, 1, 2, 3, 4, 5, 6
E_CA, TAU_CA, TAU_S, GAMMA, RHO, G_GLIA, EPS_K, K_BATH = 7, 8, 9, 10, 11, 12, 13, 14
NA_I_REF, NA_O_REF, K_I_REF, BETA_VOL = 15, 16, 17, 18
E_CL, C_M, NERNST, GRATE = 19, 20, 21, 22
Q1, Q2, J_SIGN, J_CA_SCALE = 23, 24, 25, 26
GC = 27  # 18 gating coefficients: am0..2 bm0..2 ah0..2 bh0..2 an0..2 bn0..2

# amyloid modifier slots
AB_TAU, AB_SHIFT, AB_GKS, AB_SBK, AB_JMAX = 0, 1, 2, 3, 4

U_DIVERGE = 200.0  # mV
GATE_TOL = 1e-9


def rhs_batch(u, y, prm, ab5, out):
    """Vectorized state derivative + membrane forcing.

    u: (N,), y: (6, N) as [ca, ko, na, m, h, n], ab5: (5, N) or (5, 1),
    out: (7, N) filled with [dca, dko, dna, dm, dh, dn, f].
    """
    ca, ko, na, m, h, n = y
    tau_eff, shift, gks, sbk, jmax = ab5

    na_o = prm[NA_O_REF] - prm[BETA_VOL] * (na - prm[NA_I_REF])
    k_i = prm[K_I_REF] + (prm[NA_I_REF] - na)
    e_na = prm[NERNST] * np.log(na_o / na)
    e_k = prm[NERNST] * np.log(ko / k_i)

    i_na = (prm[G_NAL] + prm[G_NA] * m * m * m * h) * (u - e_na)
    i_k = (prm[G_K] * gks * n * n * n * n
           + sbk * prm[G_AHP] * ca / (1.0 + ca)
           + prm[G_KL]) * (u - e_k)
    i_cl = prm[G_CLL] * (u - prm[E_CL])

    i_pump = prm[RHO] / (1.0 + np.exp(5.5 - ko)) / (1.0 + np.exp((25.0 - na) / 3.0))
    i_glia = prm[G_GLIA] / (1.0 + np.exp((18.0 - ko) / 2.5))
    i_diff = prm[EPS_K] * (ko - prm[K_BATH])

    j_ab = jmax / (1.0 + np.exp((u - prm[Q1]) / prm[Q2]))
    vgcc_gate = 1.0 / (1.0 + np.exp(-(25.0 + u + shift) / 2.5))

    out[0] = (-ca / tau_eff
              - 0.002 * prm[G_CA] * (u - prm[E_CA]) * vgcc_gate
              + prm[J_CA_SCALE] * j_ab)
    out[1] = -(i_diff + 14.0 * i_pump + i_glia - 7.0 * prm[GAMMA] * i_k) / prm[TAU_S]
    out[2] = -(prm[GAMMA] * i_na + 3.0 * i_pump) / prm[TAU_S]

    am = _rational_vec(u, prm[GC + 0], prm[GC + 1], prm[GC + 2])
    bm = prm[GC + 3] * np.exp(-(u + prm[GC + 4]) / prm[GC + 5])
    ah = prm[GC + 6] * np.exp(-(u + prm[GC + 7]) / prm[GC + 8])
    bh = prm[GC + 9] / (1.0 + np.exp(-(u + prm[GC + 10]) / prm[GC + 11]))
    an = _rational_vec(u, prm[GC + 12], prm[GC + 13], prm[GC + 14])
    bn = prm[GC + 15] * np.exp(-(u + prm[GC + 16]) / prm[GC + 17])
    fac = prm[GRATE]
    out[3] = fac * (am - (am + bm) * m)
    out[4] = fac * (ah - (ah + bh) * h)
    out[5] = fac * (an - (an + bn) * n)

    out[6] = i_na + i_k + i_cl + prm[J_SIGN] * j_ab / prm[GAMMA]


def _rational_vec(u, c0, c1, c2):
    x = u + c1
    ex = np.exp(-x / c2)
    denom = 1.0 - ex
    tiny = np.abs(denom) < 1e-12
    safe = np.where(tiny, 1.0, denom)
    return np.where(tiny, c0 * c2, c0 * x / safe)


def pore_flux_batch(u, prm, jmax, out):
    """Amyloid pore influx (uM/ms) at an array of potentials."""
    np.divide(jmax, 1.0 + np.exp((u - prm[Q1]) / prm[Q2]), out=out)


def ionic_step_batch(u, y, prm, ab5, dt, out):
    """One explicit-Euler update of the node states; forcing left in out[6]."""
    rhs_batch(u, y, prm, ab5, out)
    for i in range(6):
        y[i] += dt * out[i]
    np.clip(y[3:6], 0.0, 1.0, out=y[3:6])


# ---------------------------------------------------------------------------
# Scalar 0D integrator
# ---------------------------------------------------------------------------


def _rhs_scalar(u, ca, ko, na, m, h, n, prm, ab5):
    na_o = prm[NA_O_REF] - prm[BETA_VOL] * (na - prm[NA_I_REF])
    k_i = prm[K_I_REF] + (prm[NA_I_REF] - na)
    e_na = prm[NERNST] * log(na_o / na)
    e_k = prm[NERNST] * log(ko / k_i)

    i_na = (prm[G_NAL] + prm[G_NA] * m * m * m * h) * (u - e_na)
    i_k = (prm[G_K] * ab5[AB_GKS] * n * n * n * n
           + ab5[AB_SBK] * prm[G_AHP] * ca / (1.0 + ca)
           + prm[G_KL]) * (u - e_k)
    i_cl = prm[G_CLL] * (u - prm[E_CL])

    i_pump = prm[RHO] / (1.0 + exp(5.5 - ko)) / (1.0 + exp((25.0 - na) / 3.0))
    i_glia = prm[G_GLIA] / (1.0 + exp((18.0 - ko) / 2.5))
    i_diff = prm[EPS_K] * (ko - prm[K_BATH])

    j_ab = ab5[AB_JMAX] / (1.0 + exp((u - prm[Q1]) / prm[Q2]))
    vgcc_gate = 1.0 / (1.0 + exp(-(25.0 + u + ab5[AB_SHIFT]) / 2.5))

    dca = (-ca / ab5[AB_TAU]
           - 0.002 * prm[G_CA] * (u - prm[E_CA]) * vgcc_gate
           + prm[J_CA_SCALE] * j_ab)
    dko = -(i_diff + 14.0 * i_pump + i_glia - 7.0 * prm[GAMMA] * i_k) / prm[TAU_S]
    dna = -(prm[GAMMA] * i_na + 3.0 * i_pump) / prm[TAU_S]

    x = u + prm[GC + 1]
    d = 1.0 - exp(-x / prm[GC + 2])
    am = prm[GC] * prm[GC + 2] if abs(d) < 1e-12 else prm[GC] * x / d
    bm = prm[GC + 3] * exp(-(u + prm[GC + 4]) / prm[GC + 5])
    ah = prm[GC + 6] * exp(-(u + prm[GC + 7]) / prm[GC + 8])
    bh = prm[GC + 9] / (1.0 + exp(-(u + prm[GC + 10]) / prm[GC + 11]))
    x = u + prm[GC + 13]
    d = 1.0 - exp(-x / prm[GC + 14])
    an = prm[GC + 12] * prm[GC + 14] if abs(d) < 1e-12 else prm[GC + 12] * x / d
    bn = prm[GC + 15] * exp(-(u + prm[GC + 16]) / prm[GC + 17])
    fac = prm[GRATE]
    dm = fac * (am - (am + bm) * m)
    dh = fac * (ah - (ah + bh) * h)
    dn = fac * (an - (an + bn) * n)

    du = -(i_na + i_k + i_cl + prm[J_SIGN] * j_ab / prm[GAMMA]) / prm[C_M]
    return du, dca, dko, dna, dm, dh, dn


def _valid(u, ca, ko, na, m, h, n):
    if not (isfinite(u) and isfinite(ca) and isfinite(ko) and isfinite(na)):
        return False
    if abs(u) >= U_DIVERGE or ca < 0.0 or ko <= 0.0 or na <= 0.0:
        return False
    for g in (m, h, n):
        if not isfinite(g) or g < -GATE_TOL or g > 1.0 + GATE_TOL:
            return False
    return True


def integrate0d(u0, y0, prm, ab5, dt, n_steps, stride, scheme, rec, final):
    """Fixed-step 0D integration; scheme 0 = RK4, 1 = explicit Euler.

    rec: (5, n_steps//stride + 1) filled with [u, ca, ko, na, j_ab] samples.
    final: (7,) receives [u, ca, ko, na, m, h, n] at the last valid step.
    Returns -1 on success, else the 1-based index of the failing step.
    """
    prm = [float(v) for v in prm]
    ab5 = [float(v) for v in ab5]
    u = float(u0)
    ca, ko, na, m, h, n = (float(v) for v in y0)
    jmax, q1, q2 = ab5[AB_JMAX], prm[Q1], prm[Q2]

    def record(idx):
        rec[0, idx] = u
        rec[1, idx] = ca
        rec[2, idx] = ko
        rec[3, idx] = na
        rec[4, idx] = jmax / (1.0 + exp((u - q1) / q2))

    record(0)
    status = -1
    for k in range(1, n_steps + 1):
        if scheme == 1:
            d = _rhs_scalar(u, ca, ko, na, m, h, n, prm, ab5)
            u += dt * d[0]
            ca += dt * d[1]
            ko += dt * d[2]
            na += dt * d[3]
            m += dt * d[4]
            h += dt * d[5]
            n += dt * d[6]
        else:
            k1 = _rhs_scalar(u, ca, ko, na, m, h, n, prm, ab5)
            hd = 0.5 * dt
            k2 = _rhs_scalar(u + hd * k1[0], ca + hd * k1[1], ko + hd * k1[2],
                             na + hd * k1[3], m + hd * k1[4], h + hd * k1[5],
                             n + hd * k1[6], prm, ab5)
            k3 = _rhs_scalar(u + hd * k2[0], ca + hd * k2[1], ko + hd * k2[2],
                             na + hd * k2[3], m + hd * k2[4], h + hd * k2[5],
                             n + hd * k2[6], prm, ab5)
            k4 = _rhs_scalar(u + dt * k3[0], ca + dt * k3[1], ko + dt * k3[2],
                             na + dt * k3[3], m + dt * k3[4], h + dt * k3[5],
                             n + dt * k3[6], prm, ab5)
            w = dt / 6.0
            u += w * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
            ca += w * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
            ko += w * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2])
            na += w * (k1[3] + 2.0 * k2[3] + 2.0 * k3[3] + k4[3])
            m += w * (k1[4] + 2.0 * k2[4] + 2.0 * k3[4] + k4[4])
            h += w * (k1[5] + 2.0 * k2[5] + 2.0 * k3[5] + k4[5])
            n += w * (k1[6] + 2.0 * k2[6] + 2.0 * k3[6] + k4[6])
        if not _valid(u, ca, ko, na, m, h, n):
            status = k
            break
        m = min(1.0, max(0.0, m))
        h = min(1.0, max(0.0, h))
        n = min(1.0, max(0.0, n))
        if k % stride == 0:
            record(k // stride)

    final[0] = u
    final[1] = ca
    final[2] = ko
    final[3] = na
    final[4] = m
    final[5] = h
    final[6] = n
    return status

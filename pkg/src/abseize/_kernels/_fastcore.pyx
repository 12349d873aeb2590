# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: pointwise ionic derivative and the 0D integrator.

Semantics mirror ``reference.py`` exactly; the slot layout is defined by
``abseize.ionic.pack_base`` / ``pack_modifiers``.
"""

from libc.math cimport exp, fabs, isfinite, log

DEF G_NAL = 0
DEF G_NA = 1
DEF G_K = 2
DEF G_AHP = 3
DEF G_KL = 4
DEF G_CLL = 5
DEF G_CA = 6
DEF E_CA = 7
DEF TAU_CA = 8
DEF TAU_S = 9
DEF GAMMA = 10
DEF RHO = 11
DEF G_GLIA = 12
DEF EPS_K = 13
DEF K_BATH = 14
DEF NA_I_REF = 15
DEF NA_O_REF = 16
DEF K_I_REF = 17
DEF BETA_VOL = 18
DEF E_CL = 19
DEF C_M = 20
DEF NERNST = 21
DEF GRATE = 22
DEF Q1 = 23
DEF Q2 = 24
DEF J_SIGN = 25
DEF J_CA_SCALE = 26
DEF GC = 27

DEF AB_TAU = 0
DEF AB_SHIFT = 1
DEF AB_GKS = 2
DEF AB_SBK = 3
DEF AB_JMAX = 4

DEF U_DIVERGE = 200.0
DEF GATE_TOL = 1e-9

BACKEND_NAME = "compiled"


cdef inline double _rational(double u, double c0, double c1, double c2) nogil:
    cdef double x = u + c1
    cdef double d = 1.0 - exp(-x / c2)
    if fabs(d) < 1e-12:
        return c0 * c2
    return c0 * x / d


cdef inline void _rhs(double u, double ca, double ko, double na,
                      double m, double h, double n,
                      const double* prm, const double* ab5,
                      double* out) nogil:
    cdef double na_o = prm[NA_O_REF] - prm[BETA_VOL] * (na - prm[NA_I_REF])
    cdef double k_i = prm[K_I_REF] + (prm[NA_I_REF] - na)
    cdef double e_na = prm[NERNST] * log(na_o / na)
    cdef double e_k = prm[NERNST] * log(ko / k_i)

    cdef double i_na = (prm[G_NAL] + prm[G_NA] * m * m * m * h) * (u - e_na)
    cdef double i_k = (prm[G_K] * ab5[AB_GKS] * n * n * n * n
                       + ab5[AB_SBK] * prm[G_AHP] * ca / (1.0 + ca)
                       + prm[G_KL]) * (u - e_k)
    cdef double i_cl = prm[G_CLL] * (u - prm[E_CL])

    cdef double i_pump = (prm[RHO] / (1.0 + exp(5.5 - ko))
                          / (1.0 + exp((25.0 - na) / 3.0)))
    cdef double i_glia = prm[G_GLIA] / (1.0 + exp((18.0 - ko) / 2.5))
    cdef double i_diff = prm[EPS_K] * (ko - prm[K_BATH])

    cdef double j_ab = ab5[AB_JMAX] / (1.0 + exp((u - prm[Q1]) / prm[Q2]))
    cdef double vgcc_gate = 1.0 / (1.0 + exp(-(25.0 + u + ab5[AB_SHIFT]) / 2.5))

    out[1] = (-ca / ab5[AB_TAU]
              - 0.002 * prm[G_CA] * (u - prm[E_CA]) * vgcc_gate
              + prm[J_CA_SCALE] * j_ab)
    out[2] = -(i_diff + 14.0 * i_pump + i_glia
               - 7.0 * prm[GAMMA] * i_k) / prm[TAU_S]
    out[3] = -(prm[GAMMA] * i_na + 3.0 * i_pump) / prm[TAU_S]

    cdef double am = _rational(u, prm[GC], prm[GC + 1], prm[GC + 2])
    cdef double bm = prm[GC + 3] * exp(-(u + prm[GC + 4]) / prm[GC + 5])
    cdef double ah = prm[GC + 6] * exp(-(u + prm[GC + 7]) / prm[GC + 8])
    cdef double bh = prm[GC + 9] / (1.0 + exp(-(u + prm[GC + 10]) / prm[GC + 11]))
    cdef double an = _rational(u, prm[GC + 12], prm[GC + 13], prm[GC + 14])
    cdef double bn = prm[GC + 15] * exp(-(u + prm[GC + 16]) / prm[GC + 17])
    cdef double fac = prm[GRATE]
    out[4] = fac * (am - (am + bm) * m)
    out[5] = fac * (ah - (ah + bh) * h)
    out[6] = fac * (an - (an + bn) * n)

    out[0] = -(i_na + i_k + i_cl + prm[J_SIGN] * j_ab / prm[GAMMA]) / prm[C_M]
    # out[0] is du/dt; the batch entry points expose f instead.
    out[7] = i_na + i_k + i_cl + prm[J_SIGN] * j_ab / prm[GAMMA]


def rhs_batch(double[::1] u, double[:, ::1] y, double[::1] prm,
              double[:, ::1] ab5, double[:, ::1] out):
    """Vectorized derivative: y (6,N), ab5 (5,N), out (7,N) = [dy..., f]."""
    cdef Py_ssize_t i, N = u.shape[0]
    cdef double buf[8]
    cdef double ab[5]
    cdef bint shared = ab5.shape[1] == 1
    cdef Py_ssize_t j
    for i in range(N):
        for j in range(5):
            ab[j] = ab5[j, 0] if shared else ab5[j, i]
        _rhs(u[i], y[0, i], y[1, i], y[2, i], y[3, i], y[4, i], y[5, i],
             &prm[0], ab, buf)
        out[0, i] = buf[1]
        out[1, i] = buf[2]
        out[2, i] = buf[3]
        out[3, i] = buf[4]
        out[4, i] = buf[5]
        out[5, i] = buf[6]
        out[6, i] = buf[7]


def ionic_step_batch(double[::1] u, double[:, ::1] y, double[::1] prm,
                     double[:, ::1] ab5, double dt, double[:, ::1] out):
    """Explicit-Euler node update in place; membrane forcing left in out[6]."""
    cdef Py_ssize_t i, j, N = u.shape[0]
    cdef double buf[8]
    cdef double ab[5]
    cdef double g
    cdef bint shared = ab5.shape[1] == 1
    for i in range(N):
        for j in range(5):
            ab[j] = ab5[j, 0] if shared else ab5[j, i]
        _rhs(u[i], y[0, i], y[1, i], y[2, i], y[3, i], y[4, i], y[5, i],
             &prm[0], ab, buf)
        for j in range(6):
            y[j, i] += dt * buf[j + 1]
        for j in range(3, 6):
            g = y[j, i]
            if g < 0.0:
                y[j, i] = 0.0
            elif g > 1.0:
                y[j, i] = 1.0
        out[0, i] = buf[1]
        out[1, i] = buf[2]
        out[2, i] = buf[3]
        out[3, i] = buf[4]
        out[4, i] = buf[5]
        out[5, i] = buf[6]
        out[6, i] = buf[7]


cdef inline bint _valid(double u, double ca, double ko, double na,
                        double m, double h, double n) nogil:
    if not (isfinite(u) and isfinite(ca) and isfinite(ko) and isfinite(na)):
        return False
    if fabs(u) >= U_DIVERGE or ca < 0.0 or ko <= 0.0 or na <= 0.0:
        return False
    if not (isfinite(m) and isfinite(h) and isfinite(n)):
        return False
    if m < -GATE_TOL or m > 1.0 + GATE_TOL:
        return False
    if h < -GATE_TOL or h > 1.0 + GATE_TOL:
        return False
    if n < -GATE_TOL or n > 1.0 + GATE_TOL:
        return False
    return True


cdef inline double _clamp01(double g) nogil:
    if g < 0.0:
        return 0.0
    if g > 1.0:
        return 1.0
    return g


def integrate0d(double u0, double[::1] y0, double[::1] prm, double[::1] ab5,
                double dt, long n_steps, long stride, int scheme,
                double[:, ::1] rec, double[::1] final):
    """Fixed-step 0D integration; scheme 0 = RK4, 1 = explicit Euler.

    Mirrors reference.integrate0d; returns -1 on success, else the failing
    step index.
    """
    cdef double u = u0
    cdef double ca = y0[0], ko = y0[1], na = y0[2]
    cdef double m = y0[3], h = y0[4], n = y0[5]
    cdef double jmax = ab5[AB_JMAX], q1 = prm[Q1], q2 = prm[Q2]
    cdef double k1[8]
    cdef double k2[8]
    cdef double k3[8]
    cdef double k4[8]
    cdef double hd, w
    cdef long k, status = -1
    cdef const double* p = &prm[0]
    cdef const double* ab = &ab5[0]

    rec[0, 0] = u
    rec[1, 0] = ca
    rec[2, 0] = ko
    rec[3, 0] = na
    rec[4, 0] = jmax / (1.0 + exp((u - q1) / q2))

    for k in range(1, n_steps + 1):
        if scheme == 1:
            _rhs(u, ca, ko, na, m, h, n, p, ab, k1)
            u += dt * k1[0]
            ca += dt * k1[1]
            ko += dt * k1[2]
            na += dt * k1[3]
            m += dt * k1[4]
            h += dt * k1[5]
            n += dt * k1[6]
        else:
            _rhs(u, ca, ko, na, m, h, n, p, ab, k1)
            hd = 0.5 * dt
            _rhs(u + hd * k1[0], ca + hd * k1[1], ko + hd * k1[2],
                 na + hd * k1[3], m + hd * k1[4], h + hd * k1[5],
                 n + hd * k1[6], p, ab, k2)
            _rhs(u + hd * k2[0], ca + hd * k2[1], ko + hd * k2[2],
                 na + hd * k2[3], m + hd * k2[4], h + hd * k2[5],
                 n + hd * k2[6], p, ab, k3)
            _rhs(u + dt * k3[0], ca + dt * k3[1], ko + dt * k3[2],
                 na + dt * k3[3], m + dt * k3[4], h + dt * k3[5],
                 n + dt * k3[6], p, ab, k4)
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
        m = _clamp01(m)
        h = _clamp01(h)
        n = _clamp01(n)
        if k % stride == 0:
            rec[0, k // stride] = u
            rec[1, k // stride] = ca
            rec[2, k // stride] = ko
            rec[3, k // stride] = na
            rec[4, k // stride] = jmax / (1.0 + exp((u - q1) / q2))

    final[0] = u
    final[1] = ca
    final[2] = ko
    final[3] = na
    final[4] = m
    final[5] = h
    final[6] = n
    return status

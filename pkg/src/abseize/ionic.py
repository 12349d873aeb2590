"""Pointwise ionic model: currents, fluxes, gating kinetics, state derivative.

Six variables per membrane site: intracellular calcium, extracellular
potassium, intracellular sodium (mM) and the Hodgkin-Huxley gates m, h, n.
Amyloid-beta acts through five static modifiers, all pure functions of the
local concentration:

  * calcium pump slowdown (clearance time tau_ca + k_pmca*[Ab]),
  * voltage-gated calcium-pore influx J with Hill-saturating magnitude,
  * a leftward shift of the calcium-channel activation voltage,
  * partial block of the fast potassium conductance,
  * scaling of the calcium-gated (afterhyperpolarization) potassium current.

Everything here is dtype-agnostic: floats, numpy arrays, and complex inputs
all work (the tests use complex-step differentiation).  The hot loops live
in ``abseize._kernels``; this module is the readable reference used for
tests, parameter packing, and one-off evaluation.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .params import AbetaParams, BaseParams, IonicState, ParameterError

__all__ = [
    "GatingRates",
    "nernst_potentials",
    "gating_rates",
    "pump_glia_diff",
    "pmca_flux",
    "abeta_pore_flux",
    "vgcc_shift",
    "vgcc_current",
    "bk_scaling",
    "fast_k_block",
    "membrane_currents",
    "rhs",
    "abeta_modifiers",
    "pack_base",
    "pack_modifiers",
    "N_BASE_SLOTS",
]


class GatingRates(NamedTuple):
    m_inf: object
    h_inf: object
    n_inf: object
    tau_m: object
    tau_h: object
    tau_n: object


def nernst_potentials(state: IonicState, base: BaseParams):
    """Reversal potentials (E_Na, E_K, E_Cl) in mV.

    Intracellular potassium and extracellular sodium follow the conservation
    relations k_i = k_i_ref + (na_i_ref - na_i) and
    na_o = na_o_ref - beta_vol*(na_i - na_i_ref).
    """
    na_i, k_o = state.na_i, state.k_o
    na_o = base.na_o_ref - base.beta_vol * (na_i - base.na_i_ref)
    k_i = base.k_i_ref + (base.na_i_ref - na_i)
    for name, val in (("na_i", na_i), ("k_o", k_o), ("na_o", na_o), ("k_i", k_i)):
        if np.any(np.real(val) <= 0):
            raise ParameterError(f"non-positive concentration: {name}")
    e_na = base.nernst_mv * np.log(na_o / na_i)
    e_k = base.nernst_mv * np.log(k_o / k_i)
    e_cl = base.nernst_mv * np.log(base.cl_i / base.cl_o)
    return e_na, e_k, e_cl


def _rational_rate(u, c0, c1, c2):
    # c0*x/(1 - exp(-x/c2)) with the removable pole at x = 0 filled in.
    x = u + c1
    ex = np.exp(-x / c2)
    denom = 1.0 - ex
    safe = np.where(np.abs(denom) < 1e-12, 1.0, denom)
    return np.where(np.abs(denom) < 1e-12, c0 * c2, c0 * x / safe)


def gating_rates(u, base: BaseParams) -> GatingRates:
    """Steady states and time constants of the three gates at potential u."""
    g = base.gating
    a_m = _rational_rate(u, *g.am)
    b_m = g.bm[0] * np.exp(-(u + g.bm[1]) / g.bm[2])
    a_h = g.ah[0] * np.exp(-(u + g.ah[1]) / g.ah[2])
    b_h = g.bh[0] / (1.0 + np.exp(-(u + g.bh[1]) / g.bh[2]))
    a_n = _rational_rate(u, *g.an)
    b_n = g.bn[0] * np.exp(-(u + g.bn[1]) / g.bn[2])
    return GatingRates(
        m_inf=a_m / (a_m + b_m),
        h_inf=a_h / (a_h + b_h),
        n_inf=a_n / (a_n + b_n),
        tau_m=1.0 / (a_m + b_m),
        tau_h=1.0 / (a_h + b_h),
        tau_n=1.0 / (a_n + b_n),
    )


def pump_glia_diff(state: IonicState, base: BaseParams):
    """Na/K pump, glial uptake, and bath diffusion rates (mM/s)."""
    i_pump = (
        base.rho
        / (1.0 + np.exp(5.5 - state.k_o))
        / (1.0 + np.exp((25.0 - state.na_i) / 3.0))
    )
    i_glia = base.g_glia / (1.0 + np.exp((18.0 - state.k_o) / 2.5))
    i_diff = base.eps_k * (state.k_o - base.k_bath)
    return i_pump, i_glia, i_diff


def pmca_flux(ca_i, ab: AbetaParams, base: BaseParams):
    """Pump-mediated calcium clearance, mM/ms (negative for ca_i > 0)."""
    return -ca_i / (base.tau_ca + ab.k_pmca * ab.abeta)


def abeta_pore_flux(u, ab: AbetaParams):
    """Calcium influx through amyloid membrane pores, uM/ms."""
    j_max = ab.j_asy * ab.abeta / (ab.k_d + ab.abeta)
    return j_max / (1.0 + np.exp((u - ab.q1) / ab.q2))


def vgcc_shift(ab: AbetaParams):
    """Leftward shift of the calcium-channel activation voltage, mV."""
    if ab.abeta == 0:
        return 0.0
    p = ab.abeta**ab.alpha_hill
    return ab.u_shift_max * p / (ab.k_vgcc**ab.alpha_hill + p)


def vgcc_current(u, shift, base: BaseParams):
    """Calcium source through voltage-gated channels, mM/ms."""
    gate = 1.0 / (1.0 + np.exp(-(25.0 + u + shift) / 2.5))
    return -0.002 * base.g_ca * (u - base.e_ca) * gate


def bk_scaling(ab: AbetaParams):
    """Scaling of the calcium-gated potassium current, in (0, 1].

    The raw fit a/(x+b) + c*exp(-d*x) evaluates to 1.0000171 at x = 0; it is
    capped at 1 so the modifier is exactly inert without amyloid.
    """
    raw = ab.a_bk / (ab.abeta + ab.b_bk) + ab.c_bk * np.exp(-ab.d_bk * ab.abeta)
    return min(1.0, raw) if np.isscalar(raw) else np.minimum(1.0, raw)


def fast_k_block(ab: AbetaParams):
    """Fraction of fast potassium channels left unblocked, in (0, 1]."""
    return 1.0 - ab.abeta / (ab.k_cak + ab.abeta)


def abeta_modifiers(ab: AbetaParams, base: BaseParams):
    """The five static amyloid modifiers:
    (tau_ca_eff, vgcc_shift, gk_scale, s_bk, j_max)."""
    tau_eff = base.tau_ca + ab.k_pmca * ab.abeta
    j_max = ab.j_asy * ab.abeta / (ab.k_d + ab.abeta)
    return tau_eff, vgcc_shift(ab), fast_k_block(ab), bk_scaling(ab), j_max


def membrane_currents(u, state: IonicState, base: BaseParams, ab: AbetaParams):
    """Sodium, potassium, and chloride membrane currents (uA/cm^2)."""
    e_na, e_k, e_cl = nernst_potentials(state, base)
    i_na = (base.g_na_leak + base.g_na * state.m**3 * state.h) * (u - e_na)
    i_k = (
        base.g_k * fast_k_block(ab) * state.n**4
        + bk_scaling(ab) * base.g_ahp * state.ca_i / (1.0 + state.ca_i)
        + base.g_k_leak
    ) * (u - e_k)
    i_cl = base.g_cl_leak * (u - e_cl)
    return i_na, i_k, i_cl


def rhs(u, state: IonicState, base: BaseParams, ab: AbetaParams):
    """Time derivative of the six states plus the membrane forcing f.

    Returns (dy, f) where dy is an IonicState of rates (per ms) and f is the
    total membrane current (uA/cm^2) entering c_m*du/dt = -f.
    """
    i_na, i_k, i_cl = membrane_currents(u, state, base, ab)
    i_pump, i_glia, i_diff = pump_glia_diff(state, base)
    j_ab = abeta_pore_flux(u, ab)

    dca = (
        pmca_flux(state.ca_i, ab, base)
        + vgcc_current(u, vgcc_shift(ab), base)
        + ab.j_ca_scale * j_ab
    )
    dko = (
        -(i_diff + 14.0 * i_pump + i_glia - 7.0 * base.gamma * i_k) / base.tau_s_to_ms
    )
    dna = -(base.gamma * i_na + 3.0 * i_pump) / base.tau_s_to_ms
    rates = gating_rates(u, base)
    fac = base.gate_rate_factor
    dm = fac * (rates.m_inf - state.m) / rates.tau_m
    dh = fac * (rates.h_inf - state.h) / rates.tau_h
    dn = fac * (rates.n_inf - state.n) / rates.tau_n

    f = i_na + i_k + i_cl + ab.j_sign * ab.j_f_scale * j_ab / base.gamma
    dy = IonicState(ca_i=dca, k_o=dko, na_i=dna, m=dm, h=dh, n=dn)
    return dy, f


# ---------------------------------------------------------------------------
# Flat parameter packing shared with the compiled/vectorized kernels.
# ---------------------------------------------------------------------------

# slot layout, kept in sync with _kernels (see tests/test_kernels.py)
N_BASE_SLOTS = 45

_BASE_SLOT_NAMES = [
    "g_na_leak", "g_na", "g_k", "g_ahp", "g_k_leak", "g_cl_leak", "g_ca",
    "e_ca", "tau_ca", "tau_s_to_ms", "gamma", "rho", "g_glia", "eps_k",
    "k_bath", "na_i_ref", "na_o_ref", "k_i_ref", "beta_vol",
]  # slots 0..18; 19 = e_cl, 20 = c_m, 21 = nernst_mv, 22 = gate_rate_factor,
# 23 = q1, 24 = q2, 25 = j_sign, 26 = j_ca_scale, 27..44 = gating coefficients


def pack_base(base: BaseParams, ab: AbetaParams) -> np.ndarray:
    """Flatten the shared scalar constants for the numeric kernels."""
    vec = np.empty(N_BASE_SLOTS, dtype=np.float64)
    for i, name in enumerate(_BASE_SLOT_NAMES):
        vec[i] = getattr(base, name)
    vec[19] = base.nernst_mv * np.log(base.cl_i / base.cl_o)  # e_cl, fixed
    vec[20] = base.c_m
    vec[21] = base.nernst_mv
    vec[22] = base.gate_rate_factor
    vec[23] = ab.q1
    vec[24] = ab.q2
    vec[25] = ab.j_sign * ab.j_f_scale  # combined coefficient of J in f
    vec[26] = ab.j_ca_scale
    vec[27:45] = base.gating.flat()
    return vec


def pack_modifiers(ab: AbetaParams, base: BaseParams) -> np.ndarray:
    """Flatten the five amyloid modifiers for one concentration."""
    return np.asarray(abeta_modifiers(ab, base), dtype=np.float64)

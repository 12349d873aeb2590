"""Model constants and the ionic parameter file.

Unit conventions used throughout the package: potential mV, time ms,
length cm, membrane current uA/cm^2, bulk ion concentration mM,
amyloid-beta concentration uM, conductance mS/cm^2.  See docs/units.md
for how these combine in the tissue model.

The canonical constants ship in ``data/ionic_defaults.yaml``; every entry
can be overridden from a user parameter file or keyword overrides.  The
dataclass defaults below mirror that file (a test keeps them in sync).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from importlib import resources
from typing import Any, Iterable, Mapping

import yaml

PARAM_FILE_VERSION = 1


class ParameterError(ValueError):
    """Raised for invalid or inconsistent parameter values."""


@dataclass(frozen=True)
class GatingCoeffs:
    """Coefficients of the Hodgkin-Huxley style voltage rate functions.

    Each triple (c0, c1, c2) parameterizes one rate with x = u + c1:
      alpha_m, alpha_n: c0 * x / (1 - exp(-x / c2))   (removable pole at x=0)
      beta_m, beta_n, alpha_h: c0 * exp(-x / c2)
      beta_h: c0 / (1 + exp(-x / c2))
    """

    am: tuple[float, float, float] = (0.1, 30.0, 10.0)
    bm: tuple[float, float, float] = (4.0, 55.0, 18.0)
    ah: tuple[float, float, float] = (0.07, 44.0, 20.0)
    bh: tuple[float, float, float] = (1.0, 14.0, 10.0)
    an: tuple[float, float, float] = (0.01, 34.0, 10.0)
    bn: tuple[float, float, float] = (0.125, 44.0, 80.0)

    def flat(self) -> list[float]:
        out: list[float] = []
        for trip in (self.am, self.bm, self.ah, self.bh, self.an, self.bn):
            out.extend(float(v) for v in trip)
        return out


@dataclass(frozen=True)
class BaseParams:
    """Constants of the baseline (amyloid-free) ionic model."""

    # conductances, mS/cm^2
    g_na_leak: float = 0.0175
    g_na: float = 100.0
    g_k: float = 40.0
    g_ahp: float = 0.01
    g_k_leak: float = 0.05
    g_cl_leak: float = 0.05
    g_ca: float = 0.1
    e_ca: float = 120.0  # mV, fixed calcium reversal
    tau_ca: float = 80.0  # ms, calcium pump clearance time
    tau_s_to_ms: float = 1000.0  # the rate constants below are per second
    gamma: float = 0.044494542  # uA/cm^2 -> mM/s conversion
    rho: float = 1.25  # mM/s, Na/K pump strength
    g_glia: float = 66.666666  # mM/s, glial potassium uptake
    eps_k: float = 1.333333  # 1/s, potassium diffusion to the bath
    k_bath: float = 4.0  # mM, reservoir potassium (8 = epileptic regime)
    # conservation references, mM: k_i = k_i_ref + (na_i_ref - na_i),
    # na_o = na_o_ref - beta_vol*(na_i - na_i_ref)
    na_i_ref: float = 18.0
    na_o_ref: float = 144.0
    k_i_ref: float = 140.0
    beta_vol: float = 7.0
    cl_i: float = 6.0  # mM, fixed
    cl_o: float = 130.0  # mM, fixed
    c_m: float = 1.0  # uF/cm^2
    chi_m: float = 1000.0  # 1/cm, membrane surface per tissue volume
    nernst_mv: float = 26.64  # RT/F at physiological temperature, mV
    gate_rate_factor: float = 3.0  # temperature-like multiplier on gate rates
    gating: GatingCoeffs = GatingCoeffs()

    def validate(self) -> None:
        for name in (
            "g_na_leak", "g_na", "g_k", "g_ahp", "g_k_leak", "g_cl_leak",
            "g_ca", "tau_ca", "gamma", "rho", "g_glia", "eps_k",
        ):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be >= 0")
        if self.tau_s_to_ms != 1000.0:
            raise ParameterError("tau_s_to_ms must be 1000 (s -> ms)")
        if self.k_bath <= 0:
            raise ParameterError("k_bath must be > 0")
        if self.cl_i <= 0 or self.cl_o <= 0:
            raise ParameterError("chloride concentrations must be > 0")
        if self.c_m <= 0 or self.chi_m <= 0:
            raise ParameterError("membrane constants must be > 0")


@dataclass(frozen=True)
class AbetaParams:
    """Amyloid-beta concentration and the constants of its five pathways."""

    abeta: float = 0.0  # uM, local concentration
    k_i_diss: float = 2.312  # uM, pump half-inhibition constant
    # defined as tau_ca / k_i_diss (estimated 34.602); kept exact so the
    # clearance rate at [Ab] = k_i_diss is exactly half the amyloid-free rate
    k_pmca: float = 80.0 / 2.312  # ms/uM
    j_asy: float = 10.0  # uM/ms, asymptotic max pore influx
    k_d: float = 10.0  # uM, pore-influx half saturation
    q1: float = 30.0  # mV, pore voltage gate midpoint
    q2: float = 25.0  # mV, pore voltage gate slope
    u_shift_max: float = 25.0  # mV, max calcium-channel activation shift
    alpha_hill: float = 0.5  # Hill exponent of the activation shift
    k_vgcc: float = 0.0444  # uM, activation-shift half constant
    k_cak: float = 10.0  # uM, fast-potassium block constant
    a_bk: float = 0.4498  # uM, BK-scaling fit
    b_bk: float = 1.9295  # uM, BK-scaling fit
    c_bk: float = 0.7669  # BK-scaling fit
    # Corrected decay constant; the commonly printed 10.70 1/uM is selectable
    # but drops the scaling to ~0.154 already at 1 uM instead of the fitted
    # 8.77% reduction.
    d_bk: float = 1.070e-2  # 1/uM
    j_sign: float = -1.0  # sign of the pore-influx term in the membrane forcing
    j_ca_scale: float = 1.0e-3  # uM/ms -> mM/ms bridge into the calcium ODE
    # Same unit bridge applied to the pore term of the membrane forcing;
    # 1.0 recovers the literal gamma^-1 * J, which drives the membrane into
    # depolarization block already at 5 uM (see docs/units.md).
    j_f_scale: float = 1.0e-3

    def validate(self) -> None:
        if self.abeta < 0:
            raise ParameterError("abeta must be >= 0")
        for name in (
            "k_i_diss", "k_pmca", "j_asy", "k_d", "q1", "q2", "u_shift_max",
            "k_vgcc", "k_cak", "a_bk", "b_bk", "c_bk", "d_bk", "j_ca_scale",
            "j_f_scale",
        ):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0")
        if not 0.0 < self.alpha_hill <= 1.0:
            raise ParameterError("alpha_hill must be in (0, 1]")
        if self.j_sign not in (-1.0, 1.0):
            raise ParameterError("j_sign must be +1 or -1")


@dataclass(frozen=True)
class IonicState:
    """The six pointwise unknowns of the ionic model."""

    ca_i: float  # mM
    k_o: float  # mM
    na_i: float  # mM
    m: float
    h: float
    n: float

    def validate(self) -> None:
        if self.ca_i < 0:
            raise ParameterError("ca_i must be >= 0")
        if self.k_o <= 0 or self.na_i <= 0:
            raise ParameterError("k_o and na_i must be > 0")
        for g in (self.m, self.h, self.n):
            if not 0.0 <= g <= 1.0:
                raise ParameterError("gates must lie in [0, 1]")

    def as_array(self):
        import numpy as np

        return np.array(
            [self.ca_i, self.k_o, self.na_i, self.m, self.h, self.n], dtype=float
        )

    @classmethod
    def from_array(cls, y) -> "IonicState":
        return cls(*(float(v) for v in y))


# Resting state of the baseline model at k_bath = 4 mM, computed once by
# root-finding the full rhs (see tests/test_ionic.py::test_equilibrium_probe)
# and rounded.
RESTING_U = -68.11
RESTING_STATE = IonicState(
    ca_i=9.76e-8,
    k_o=3.8284,
    na_i=19.9354,
    m=0.0103,
    h=0.9813,
    n=0.0645,
)

# Conventional start for the epileptic-regime experiments (k_bath = 8 mM):
# inside the oscillatory branch so the 60 s window shows the full dynamics.
SEIZURE_ONSET_STATE = IonicState(
    ca_i=0.0,
    k_o=7.8,
    na_i=15.5,
    m=0.0119,
    h=0.9773,
    n=0.0705,
)


def _coerce_gating(raw: Mapping[str, Any]) -> GatingCoeffs:
    kwargs = {}
    for key in ("am", "bm", "ah", "bh", "an", "bn"):
        if key in raw:
            trip = raw[key]
            if len(trip) != 3:
                raise ParameterError(f"gating.{key} needs exactly 3 numbers")
            kwargs[key] = tuple(float(v) for v in trip)
    return GatingCoeffs(**kwargs)


def _apply_section(cls, defaults, section: Mapping[str, Any], label: str):
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(section) - known
    if unknown:
        raise ParameterError(f"unknown {label} parameter(s): {sorted(unknown)}")
    coerced = {}
    for key, val in section.items():
        if key == "gating":
            coerced[key] = _coerce_gating(val)
        else:
            coerced[key] = float(val)
    return dataclasses.replace(defaults, **coerced)


def params_from_dict(raw: Mapping[str, Any]) -> tuple[BaseParams, AbetaParams]:
    """Build parameter sets from a nested dict (sections: base, gating, abeta)."""
    version = raw.get("version", PARAM_FILE_VERSION)
    if int(version) != PARAM_FILE_VERSION:
        raise ParameterError(f"unsupported parameter file version {version}")
    base = BaseParams()
    ab = AbetaParams()
    sections = set(raw) - {"version", "base", "gating", "abeta"}
    if sections:
        raise ParameterError(f"unknown parameter section(s): {sorted(sections)}")
    if "base" in raw:
        base = _apply_section(BaseParams, base, raw["base"], "base")
    if "gating" in raw:
        base = dataclasses.replace(base, gating=_coerce_gating(raw["gating"]))
    if "abeta" in raw:
        ab = _apply_section(AbetaParams, ab, raw["abeta"], "abeta")
    base.validate()
    ab.validate()
    return base, ab


def params_to_dict(base: BaseParams, ab: AbetaParams) -> dict:
    base_d = dataclasses.asdict(base)
    gating = base_d.pop("gating")
    gating = {k: list(v) for k, v in gating.items()}
    return {
        "version": PARAM_FILE_VERSION,
        "base": base_d,
        "gating": gating,
        "abeta": dataclasses.asdict(ab),
    }


def load_params(path=None, overrides: Mapping[str, Any] | None = None):
    """Load (BaseParams, AbetaParams) from a YAML parameter file.

    With ``path=None`` the packaged canonical defaults are used.  ``overrides``
    is a nested dict merged on top (same sections as the file).
    """
    if path is None:
        text = (
            resources.files("abseize").joinpath("data/ionic_defaults.yaml").read_text()
        )
    else:
        with open(path, "r") as fh:
            text = fh.read()
    raw = yaml.safe_load(text) or {}
    if overrides:
        for sect, vals in overrides.items():
            if sect == "version":
                raw["version"] = vals
                continue
            raw.setdefault(sect, {})
            raw[sect] = {**raw[sect], **vals}
    return params_from_dict(raw)


def default_params() -> tuple[BaseParams, AbetaParams]:
    return BaseParams(), AbetaParams()

"""Model parameters and experimental estimates for an extended Dicke model.

The Hamiltonian is

    H = omega a^dag a + (lambda/sqrt(N)) J_x (a^dag + a)
        + delta J_z + omega_rabi J_x + (v/N) J_z^2

for N two-level atoms (a two-component BEC in an optical cavity) with
collective spin j = N/2.  All frequencies are angular MHz (Mrad/s) unless
noted otherwise; hbar = 1 throughout.

Derived couplings: u = lambda**2/omega competes with the atom-atom coupling
v, and the combination w = u + v controls the critical structure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from scipy.constants import hbar


class ParameterError(ValueError):
    """A model parameter violates its domain."""


@dataclass(frozen=True)
class ModelParams:
    """Couplings of the extended Dicke Hamiltonian, in angular MHz.

    lam is the collective atom-field coupling (lambda in the Hamiltonian;
    serialized under the JSON key "lambda").
    """

    omega: float = 1.0
    lam: float = 0.0
    delta: float = 0.0
    omega_rabi: float = 0.0
    v: float = 0.0
    n_atoms: int = 1

    @property
    def u(self) -> float:
        return self.lam * self.lam / self.omega

    def replace(self, **kw) -> "ModelParams":
        data = self.to_dict()
        for key, val in kw.items():
            data["lambda" if key == "lam" else key] = val
        return ModelParams.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "omega": self.omega,
            "lambda": self.lam,
            "delta": self.delta,
            "omega_rabi": self.omega_rabi,
            "v": self.v,
            "n_atoms": self.n_atoms,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        known = {"omega", "lambda", "lam", "delta", "omega_rabi", "v", "n_atoms"}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown parameter keys: {sorted(unknown)}")
        kw = {k: v for k, v in data.items() if k not in ("lambda", "lam")}
        if "lambda" in data:
            kw["lam"] = data["lambda"]
        elif "lam" in data:
            kw["lam"] = data["lam"]
        return cls(**kw)


def validate(params: ModelParams) -> ModelParams:
    """Check parameter domains; returns params unchanged or raises
    ParameterError naming the first violated constraint."""
    for name in ("omega", "lam", "delta", "omega_rabi", "v"):
        x = getattr(params, name)
        if not isinstance(x, (int, float)) or not math.isfinite(x):
            raise ParameterError(f"non-finite parameter {name!r}")
    if params.omega <= 0.0:
        raise ParameterError("nonpositive cavity frequency")
    if params.lam < 0.0:
        raise ParameterError("negative collective coupling")
    if params.omega_rabi < 0.0:
        # The sign of omega_rabi is a gauge choice (J_x -> -J_x flips it);
        # the nonnegative representative is enforced for uniqueness.
        raise ParameterError("negative Rabi frequency")
    if int(params.n_atoms) != params.n_atoms or params.n_atoms < 1:
        raise ParameterError("no atoms")
    return params


def coupling_u(params: ModelParams) -> float:
    """Photon-mediated coupling u = lambda**2/omega."""
    validate(params)
    return params.u


def lambda_critical(omega: float, omega0: float) -> float:
    """Critical coupling sqrt(omega*omega0) of the standard Dicke limit
    (v = omega_rabi = 0, level splitting omega0)."""
    if omega <= 0.0 or omega0 <= 0.0:
        raise ParameterError("critical coupling requires positive omega and omega0")
    return math.sqrt(omega * omega0)


def omega_critical(u: float, v: float) -> float:
    """Rabi strength |u + v| above which the detuning sweep of the atomic
    population loses its first-order jump."""
    return abs(u + v)


@dataclass(frozen=True)
class TrapSpec:
    """Experimental inputs for coupling estimates.

    Trap frequencies are rad/s, scattering lengths are meters, the mass is
    kg; the cavity/atom couplings (single_coupling = lambda-tilde, g0_max,
    gamma_excited) and cavity_freq are angular MHz.
    """

    omega_trap: tuple[float, float, float]
    rho_intra: float
    rho_inter: float
    mass: float
    n_atoms: int
    single_coupling: float
    cavity_freq: float
    g0_max: float
    gamma_excited: float

    def to_dict(self) -> dict:
        return {
            "omega_trap": list(self.omega_trap),
            "rho_intra": self.rho_intra,
            "rho_inter": self.rho_inter,
            "mass": self.mass,
            "n_atoms": self.n_atoms,
            "single_coupling": self.single_coupling,
            "cavity_freq": self.cavity_freq,
            "g0_max": self.g0_max,
            "gamma_excited": self.gamma_excited,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrapSpec":
        data = dict(data)
        try:
            trap = tuple(float(x) for x in data["omega_trap"])
        except (KeyError, TypeError, ValueError):
            raise ParameterError("trap spec needs 'omega_trap' as 3 numbers") from None
        if len(trap) != 3:
            raise ParameterError("trap spec needs 'omega_trap' as 3 numbers")
        data["omega_trap"] = trap
        try:
            return cls(**data)
        except TypeError as exc:
            raise ParameterError(f"bad trap spec: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "TrapSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class TrapEstimate:
    """Coupling scales derived from a TrapSpec (angular MHz)."""

    v: float
    lam: float
    u: float
    n_crit: float
    metadata: dict = field(default_factory=dict)


def estimate_from_trap(spec: TrapSpec) -> TrapEstimate:
    """Estimate (v, lambda, u, n_crit) from trap and cavity data.

    The atom-atom coupling is N times the difference between the intra- and
    inter-component contact-interaction energies of a normalized Gaussian
    ground-state orbital with oscillator lengths d_i = sqrt(hbar/(m*omega_i)),
    for which int |phi|^4 = (2*pi)**-1.5 / (d_x*d_y*d_z):

        v = N*(rho_intra - rho_inter) * (4*pi*hbar/m) * (2*pi)**-1.5
            / (d_x*d_y*d_z)

    A common shorthand drops the factor 2 relative to this route
    (N*drho*hbar/(sqrt(2*pi)*m*dx*dy*dz)); its value, and the value of v
    read in cyclic MHz instead of Mrad/s, are reported in the metadata.
    """
    wx, wy, wz = spec.omega_trap
    if min(wx, wy, wz) <= 0.0:
        raise ParameterError("nonpositive trap frequency")
    if spec.mass <= 0.0:
        raise ParameterError("nonpositive atomic mass")
    if spec.n_atoms < 1:
        raise ParameterError("no atoms")
    if spec.cavity_freq <= 0.0:
        raise ParameterError("nonpositive cavity frequency")
    if spec.g0_max <= 0.0 or spec.gamma_excited < 0.0:
        raise ParameterError("invalid cavity loss parameters")

    dx = math.sqrt(hbar / (spec.mass * wx))
    dy = math.sqrt(hbar / (spec.mass * wy))
    dz = math.sqrt(hbar / (spec.mass * wz))
    drho = spec.rho_intra - spec.rho_inter
    overlap = (2.0 * math.pi) ** -1.5 / (dx * dy * dz)  # int |phi|^4, 1/m^3
    v_si = spec.n_atoms * drho * (4.0 * math.pi * hbar / spec.mass) * overlap
    v = v_si / 1e6  # rad/s -> Mrad/s (angular MHz)
    v_half = 0.5 * v

    lam = 2.0 * spec.single_coupling * math.sqrt(spec.n_atoms)
    u = lam * lam / spec.cavity_freq
    n_crit = spec.gamma_excited**2 / (2.0 * spec.g0_max**2)

    meta = {
        "d_x": dx,
        "d_y": dy,
        "d_z": dz,
        "v_shorthand": v_half,
        "v_cyclic_mhz": v / (2.0 * math.pi),
    }
    return TrapEstimate(v=v, lam=lam, u=u, n_crit=n_crit, metadata=meta)

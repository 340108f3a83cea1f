"""Pulsed SPDC source: the four-mode polarization-entangled state.

The source emits two identical two-mode-squeezed-vacuum pair processes per
pump pulse.  Tensoring the two pair states and interleaving the modes yields
the four-mode state in the fixed order (a_H, a_V, b_H, b_V), where `a` is the
arm kept on the ground (idler) and `b` the arm sent to the satellite (signal).
Pair process 1 correlates (a_H, b_V); pair process 2 correlates (a_V, b_H).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import fock

#: Mode order of every four-mode object in this package.
MODE_ORDER = ("a_H", "a_V", "b_H", "b_V")

#: Axis permutation turning (pair1_a, pair1_b, pair2_a, pair2_b) into MODE_ORDER.
PAIR_INTERLEAVE = (0, 3, 2, 1)

DEFAULT_CHI_MAX = 1.0

#: A truncated state may ideally carry at most this much weight above the cutoff.
TAIL_TOLERANCE = 1e-3

#: Relative slack on 1/pump = 1/signal + 1/idler, absorbing the pump bandwidth.
ENERGY_CONSERVATION_TOL = 2e-3


class TruncationError(ValueError):
    """The Fock cutoff is too small for the requested squeezing strength."""


@dataclass(frozen=True)
class SourceSpec:
    """Pulsed SPDC source parameters (wavelengths in nm, rates in Hz)."""

    rep_rate_hz: float = 80e6
    pump_center_nm: float = 521.4
    pump_bandwidth_nm: float = 2.0
    signal_center_nm: float = 787.5
    signal_bandwidth_nm: float = 15.0
    idler_center_nm: float = 1543.2
    idler_bandwidth_nm: float = 39.0

    def __post_init__(self):
        fields = {
            "rep_rate_hz": self.rep_rate_hz,
            "pump_center_nm": self.pump_center_nm,
            "pump_bandwidth_nm": self.pump_bandwidth_nm,
            "signal_center_nm": self.signal_center_nm,
            "signal_bandwidth_nm": self.signal_bandwidth_nm,
            "idler_center_nm": self.idler_center_nm,
            "idler_bandwidth_nm": self.idler_bandwidth_nm,
        }
        for name, value in fields.items():
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        lhs = 1.0 / self.pump_center_nm
        rhs = 1.0 / self.signal_center_nm + 1.0 / self.idler_center_nm
        if abs(lhs - rhs) / lhs > ENERGY_CONSERVATION_TOL:
            raise ValueError(
                "pump/signal/idler center wavelengths violate energy conservation: "
                f"1/{self.pump_center_nm} vs 1/{self.signal_center_nm} + 1/{self.idler_center_nm}"
            )


def validate_chi(chi: float, chi_max: float = DEFAULT_CHI_MAX) -> None:
    if not 0.0 <= chi <= chi_max:
        raise ValueError(f"squeezing parameter must lie in [0, {chi_max}], got {chi}")


def truncation_tail(chi: float, dim: int) -> float:
    """Ideal-state weight above the cutoff for ONE pair process: tanh(chi)^(2*dim).

    This is the exact geometric tail of the untruncated two-mode squeezed
    vacuum; it bounds how much the truncated construction can distort the
    retained amplitudes.
    """
    return math.tanh(chi) ** (2 * dim)


def max_feasible_chi(dim: int, tail_tolerance: float = TAIL_TOLERANCE) -> float:
    """Largest squeezing parameter whose two-process truncation tail stays
    within tolerance at the given cutoff (slightly undershot for rounding)."""
    per_pair = 1.0 - math.sqrt(1.0 - tail_tolerance)
    t = per_pair ** (1.0 / (2.0 * dim))
    return math.atanh(t) * (1.0 - 1e-9)


def pair_squeeze_generator(dim: int) -> fock.Operator:
    """Unit-strength two-mode squeeze generator i*(a+b+ + a b) on one pair."""
    single = fock.TruncatedSpace(dim, 1)
    a = fock.annihilation(single)
    ad = fock.creation(single)
    return 1j * (fock.tensor(ad, ad) + fock.tensor(a, a))


@lru_cache(maxsize=4096)
def _pair_state(chi: float, dim: int) -> np.ndarray:
    """exp(chi * G)|00> for the two-mode squeeze generator G (read-only array)."""
    gen = pair_squeeze_generator(dim)
    unitary = fock.expm(chi * gen)
    vac = fock.vacuum_state(gen.space)
    amps = unitary.matrix @ vac.amplitudes
    amps.setflags(write=False)
    return amps


def build_spdc_state(
    chi: float, dim: int = 4, chi_max: float = DEFAULT_CHI_MAX
) -> fock.StateVector:
    """Four-mode SPDC state at squeezing `chi` in (a_H, a_V, b_H, b_V) order.

    Raises TruncationError when the ideal state would put more than
    TAIL_TOLERANCE of its weight above the cutoff; raise `dim` in that case.
    """
    validate_chi(chi, chi_max)
    tail = 1.0 - (1.0 - truncation_tail(chi, dim)) ** 2
    if tail > TAIL_TOLERANCE:
        raise TruncationError(
            f"truncation tail {tail:.2e} exceeds {TAIL_TOLERANCE:.0e} at chi={chi}, "
            f"dim={dim}; increase the Fock cutoff"
        )
    pair = _pair_state(float(chi), int(dim))
    space4 = fock.TruncatedSpace(dim, 4)
    raw = fock.StateVector(space4, np.kron(pair, pair))
    return fock.permute_modes(raw, PAIR_INTERLEAVE)


def expected_pair_number(chi: float) -> float:
    """Mean photon-pair number per pulse, both pair processes: 2*sinh(chi)^2."""
    return 2.0 * math.sinh(chi) ** 2


def pair_process_mean(chi: float) -> float:
    """Mean pair number of a single pair process: sinh(chi)^2."""
    return math.sinh(chi) ** 2

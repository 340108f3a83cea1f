"""Two-fold coincidence statistics with double-click squashing.

The measurement of the four-mode state by two binary POVMs (one per arm,
applied to both polarization modes of that arm) yields a 2x2x2x2 outcome
tensor indexed (a_H, a_V, b_H, b_V) with outcome 0 = click.  Squashing maps
multi-click events onto qubit outcomes: a double click on one side is
assigned to H or V with probability 1/2 each, independently per side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .detect import CLICK, NO_CLICK, Povm
from .fock import StateVector

_PROB_SUM_TOL = 1e-9


class QberUndefinedError(ZeroDivisionError):
    """QBER requested with zero total two-fold probability."""


@dataclass(frozen=True)
class CoincidenceProbs:
    """Per-pulse squashed two-fold probabilities for the four bit pairings."""

    hh: float
    hv: float
    vh: float
    vv: float

    def __post_init__(self):
        for name in ("hh", "hv", "vh", "vv"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name}={p} is not a probability")
        if self.total() > 1.0 + _PROB_SUM_TOL:
            raise ValueError(f"two-fold probabilities sum to {self.total()} > 1")

    def total(self) -> float:
        return self.hh + self.hv + self.vh + self.vv

    def errors(self) -> float:
        """Probability mass of the error outcomes (HH and VV for an
        anticorrelated source)."""
        return self.hh + self.vv

    def scaled(self, factor: float) -> "CoincidenceProbs":
        return CoincidenceProbs(
            self.hh * factor, self.hv * factor, self.vh * factor, self.vv * factor
        )


@dataclass(frozen=True)
class RateContext:
    """Rates and timescales for converting per-pulse probabilities to counts."""

    rep_rate_hz: float
    integration_time_s: float = 1.0
    dead_time_sat_s: float = 1e-6
    dead_time_ground_s: float = 10e-9

    def __post_init__(self):
        for name in ("rep_rate_hz", "integration_time_s"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("dead_time_sat_s", "dead_time_ground_s"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def raw_config_probs(state: StateVector, povm_a: Povm, povm_b: Povm) -> np.ndarray:
    """The 2x2x2x2 joint outcome tensor over (a_H, a_V, b_H, b_V).

    Entry [i, j, k, l] is the probability of outcome i on a_H, j on a_V,
    k on b_H and l on b_V, with index 0 = click.  For complete POVMs the 16
    entries sum to one.
    """
    if state.space.n_modes != 4:
        raise ValueError(f"need a four-mode state, got {state.space.n_modes} modes")
    for povm in (povm_a, povm_b):
        if len(povm.elements) != 2:
            raise ValueError("coincidence model expects binary (click/no-click) POVMs")
        if povm.space.dim != state.space.dim:
            raise ValueError(
                f"POVM cutoff {povm.space.dim} does not match state cutoff {state.space.dim}"
            )
    d = state.space.dim
    prob4 = state.probabilities().reshape(d, d, d, d)
    return kernels.coincidence_tensor(prob4, povm_a.weights(), povm_b.weights())


def squash(tensor: np.ndarray) -> CoincidenceProbs:
    """Squash the outcome tensor into the four qubit coincidence probabilities.

    Exclusive single clicks pass through; a double click on one side splits
    1/2 each way; double clicks on both sides contribute 1/4 to every
    pairing.
    """
    t = np.asarray(tensor, dtype=float)
    if t.shape != (2, 2, 2, 2):
        raise ValueError(f"expected a (2, 2, 2, 2) tensor, got {t.shape}")
    c, n = CLICK, NO_CLICK
    both = 0.25 * t[c, c, c, c]
    hh = t[c, n, c, n] + 0.5 * (t[c, c, c, n] + t[c, n, c, c]) + both
    vv = t[n, c, n, c] + 0.5 * (t[c, c, n, c] + t[n, c, c, c]) + both
    hv = t[c, n, n, c] + 0.5 * (t[c, c, n, c] + t[c, n, c, c]) + both
    vh = t[n, c, c, n] + 0.5 * (t[c, c, c, n] + t[n, c, c, c]) + both
    return CoincidenceProbs(hh=float(hh), hv=float(hv), vh=float(vh), vv=float(vv))


def click_marginals(tensor: np.ndarray) -> tuple[float, float]:
    """Per-pulse probability of at least one click, per side (a, b)."""
    t = np.asarray(tensor, dtype=float)
    n = NO_CLICK
    p_a = 1.0 - float(t[n, n, :, :].sum())
    p_b = 1.0 - float(t[:, :, n, n].sum())
    return p_a, p_b


def dead_time_correct(prob_per_pulse: float, ctx: RateContext, dead_time_s: float) -> float:
    """Saturate a per-pulse probability through the dead-time rate equation.

    The probability converts to a rate via the repetition rate, saturates as
    R / (1 + R * T_D / T_INT), and converts back.  The corrected rate tends to
    1/T_D as the ideal rate diverges.
    """
    if prob_per_pulse < 0:
        raise ValueError(f"probability must be non-negative, got {prob_per_pulse}")
    rate = prob_per_pulse * ctx.rep_rate_hz
    corrected = rate / (1.0 + rate * dead_time_s / ctx.integration_time_s)
    return corrected / ctx.rep_rate_hz


def saturation_factor(prob_per_pulse: float, ctx: RateContext, dead_time_s: float) -> float:
    """Multiplicative throughput of a detector loaded at the given per-pulse
    click probability: corrected/ideal, equal to 1 at zero load."""
    if prob_per_pulse <= 0.0:
        return 1.0
    return dead_time_correct(prob_per_pulse, ctx, dead_time_s) / prob_per_pulse


def qber(probs: CoincidenceProbs) -> float:
    """Quantum bit error rate: error fraction of all squashed two-folds."""
    total = probs.total()
    if total <= 0.0:
        raise QberUndefinedError("QBER is undefined with zero two-fold probability")
    return probs.errors() / total

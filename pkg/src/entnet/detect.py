"""Detector models: click/no-click and photon-number-resolving POVMs.

All POVM elements here are diagonal in the Fock basis.  Channel transmittance
is folded into the detector efficiency (`fold_loss`), so a POVM describes the
whole arm from source to electronics.

Element-order convention, used throughout the coincidence bookkeeping:
outcome index 0 is the *click* (respectively the accepted single-count for a
number-resolving detector), index 1 is its complement.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import fock

#: Outcome index convention for binary detection POVMs.
CLICK = 0
NO_CLICK = 1


class DetectorKind(str, Enum):
    BUCKET = "bucket"
    PNR = "pnr"


@dataclass(frozen=True)
class DetectorSpec:
    """One detection arm: efficiency (channel loss folded in) plus noise/timing."""

    efficiency: float = 1.0
    dark_rate_cps: float = 0.0
    dead_time_s: float = 0.0
    jitter_s: float = 0.0
    kind: DetectorKind = DetectorKind.BUCKET
    coincidence_window_s: float = 1e-9

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError(f"efficiency must lie in [0, 1], got {self.efficiency}")
        for name in ("dark_rate_cps", "dead_time_s", "jitter_s", "coincidence_window_s"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        object.__setattr__(self, "kind", DetectorKind(self.kind))

    @property
    def dark_mean(self) -> float:
        """Mean dark counts per coincidence window."""
        return self.dark_rate_cps * self.coincidence_window_s


@dataclass(frozen=True, eq=False)
class Povm:
    """An ordered, complete set of single-mode POVM elements."""

    space: fock.TruncatedSpace
    elements: tuple
    labels: tuple

    def __post_init__(self):
        if self.space.n_modes != 1:
            raise ValueError("detector POVMs act on a single mode")
        if len(self.elements) != len(self.labels):
            raise ValueError("one label per element required")
        for el in self.elements:
            if el.space != self.space:
                raise ValueError("all POVM elements must share the POVM's space")

    def weights(self) -> np.ndarray:
        """Diagonals of all elements, shape (n_elements, dim)."""
        return np.stack([np.real(np.diagonal(el.matrix)) for el in self.elements])

    def completeness_defect(self) -> float:
        """Max |deviation| of the element sum from the identity."""
        total = sum(el.matrix for el in self.elements)
        return float(np.max(np.abs(total - np.eye(self.space.size))))


def dark_distribution(dark_rate_cps: float, window_s: float, dim: int) -> np.ndarray:
    """Dark counts per coincidence window: Poisson, truncated and renormalized
    to k = 0..dim-1."""
    nu = dark_rate_cps * window_s
    if nu < 0:
        raise ValueError("dark count mean must be non-negative")
    ks = np.arange(dim)
    if nu == 0.0:
        probs = np.zeros(dim)
        probs[0] = 1.0
        return probs
    log_p = -nu + ks * math.log(nu) - np.array([math.lgamma(k + 1) for k in ks])
    probs = np.exp(log_p)
    return probs / probs.sum()


def _diag_op(space: fock.TruncatedSpace, diag: np.ndarray) -> fock.Operator:
    return fock.Operator(space, np.diag(diag.astype(complex)))


def _bucket_click_diag(efficiency: float, dark_mean: float, dim: int) -> np.ndarray:
    d0 = dark_distribution(dark_mean, 1.0, dim)[0] if dark_mean > 0 else 1.0
    m = np.arange(dim)
    return 1.0 - d0 * (1.0 - efficiency) ** m


def bucket_povm(spec: DetectorSpec, space: fock.TruncatedSpace) -> Povm:
    """Threshold-detector POVM {click, no-click}.

    The click element is diagonal with entries 1 - D(0)*(1-eta)^m at photon
    level m; the no-click element is its complement, so the pair is complete
    by construction.
    """
    if spec.kind is not DetectorKind.BUCKET:
        raise ValueError(f"bucket_povm needs a bucket detector, got {spec.kind}")
    click = _bucket_click_diag(spec.efficiency, spec.dark_mean, space.dim)
    return Povm(
        space,
        (_diag_op(space, click), _diag_op(space, 1.0 - click)),
        ("click", "no_click"),
    )


def _pnr_element_diag(n: int, efficiency: float, dark: np.ndarray, dim: int) -> np.ndarray:
    """Diagonal of the n-count element: sum over dark counts k and missed
    photons m with m photons of level n+m-k undetected."""
    eta = efficiency
    diag = np.zeros(dim)
    for level in range(dim):
        total = 0.0
        for k in range(0, n + 1):
            detected = n - k
            missed = level - detected
            if detected < 0 or missed < 0:
                continue
            total += (
                dark[k]
                * math.comb(level, detected)
                * eta**detected
                * (1.0 - eta) ** missed
            )
        diag[level] = total
    return diag


def pnr_povm(spec: DetectorSpec, space: fock.TruncatedSpace, n_max: int | None = None) -> Povm:
    """Photon-number-resolving POVM {E(0)..E(n_max), remainder}.

    Truncating the count outcomes leaves the family short of the identity; the
    deficit is appended as an explicit `remainder` element (an unresolved
    outcome that is discarded), keeping the set complete to rounding.
    """
    if spec.kind is not DetectorKind.PNR:
        raise ValueError(f"pnr_povm needs a PNR detector, got {spec.kind}")
    if n_max is None:
        n_max = space.dim - 1
    if not 0 <= n_max <= space.dim - 1:
        raise ValueError(f"n_max must lie in 0..{space.dim - 1}, got {n_max}")
    dark = dark_distribution(spec.dark_mean, 1.0, space.dim)
    diags = [_pnr_element_diag(n, spec.efficiency, dark, space.dim) for n in range(n_max + 1)]
    remainder = 1.0 - np.sum(diags, axis=0)
    elements = tuple(_diag_op(space, d) for d in diags) + (_diag_op(space, remainder),)
    labels = tuple(f"n={n}" for n in range(n_max + 1)) + ("remainder",)
    return Povm(space, elements, labels)


def pnr_binary(spec: DetectorSpec, space: fock.TruncatedSpace) -> Povm:
    """Reduce a PNR detector to {accept, reject} for qubit-style key extraction.

    The accepted outcome is exactly one registered count, E(1); everything
    else (vacuum, multi-counts, unresolved) is rejected.  In the low-signal
    limit E(1) tends to the bucket click element, which is why number
    resolution buys little at high loss.
    """
    full = pnr_povm(spec, space, n_max=min(1, space.dim - 1))
    e1 = full.elements[1].matrix
    single = fock.Operator(space, e1)
    rest = fock.Operator(space, np.eye(space.size) - e1)
    return Povm(space, (single, rest), ("single", "rest"))


def binary_povm(spec: DetectorSpec, space: fock.TruncatedSpace) -> Povm:
    """The two-outcome POVM a detector feeds into the coincidence model."""
    if spec.kind is DetectorKind.BUCKET:
        return bucket_povm(spec, space)
    return pnr_binary(spec, space)


def fold_loss(spec: DetectorSpec, transmittance: float) -> DetectorSpec:
    """Fold a channel transmittance into the detector efficiency."""
    if not 0.0 <= transmittance <= 1.0:
        raise ValueError(f"transmittance must lie in [0, 1], got {transmittance}")
    return dataclasses.replace(spec, efficiency=spec.efficiency * transmittance)

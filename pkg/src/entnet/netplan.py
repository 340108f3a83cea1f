"""Network-layer arithmetic: channel capacity, wavelength plans, link budgets.

Covers the frequency-to-time channel count achievable within one pulse
period, the dispersion needed to keep adjacent wavelength channels
distinguishable, pair-wise/multipoint channel allocation for the two network
topologies, fibre/satellite link budgets, and the monthly key-yield
bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

SPEED_OF_LIGHT_M_S = 299_792_458.0

#: 100 GHz ITU DWDM grid: channel n sits at (190.0 + 0.1 * n) THz.
ITU_GRID_BASE_THZ = 190.0
ITU_GRID_STEP_THZ = 0.1

SECONDS_PER_MONTH = 30 * 86_400.0

#: Default display names for small demo networks.
_USER_NAMES = ("Alice", "Bob", "Charlie", "Dana")


class CapacityError(ValueError):
    """A requested allocation does not fit the available channels."""


class TopologyKind(str, Enum):
    SATELLITE_PASS = "satellite"
    GROUND = "ground"


@dataclass(frozen=True)
class ChannelPair:
    """A correlated signal/idler wavelength pair serving one network link."""

    index: int
    signal_nm: float
    idler_nm: float
    itu_channel: int | None = None
    time_slot: int | None = None
    user_a: str | None = None
    user_b: str | None = None


@dataclass(frozen=True)
class Topology:
    kind: TopologyKind
    n_users: int
    #: channel index (1-based) -> tuple of user indices (one for a satellite
    #: pass, two for a ground pair).
    assignment: dict


@dataclass(frozen=True)
class LinkBudget:
    fibre_length_km: float = 16.0
    atten_signal_db_per_km: float = 3.5
    atten_idler_db_per_km: float = 0.2
    satellite_loss_db: float = 40.0

    def __post_init__(self):
        for name in (
            "fibre_length_km",
            "atten_signal_db_per_km",
            "atten_idler_db_per_km",
            "satellite_loss_db",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def db_to_transmittance(loss_db: float) -> float:
    return 10.0 ** (-loss_db / 10.0)


def user_name(i: int) -> str:
    return _USER_NAMES[i] if i < len(_USER_NAMES) else f"User{i + 1}"


def channel_capacity(rep_rate_hz: float, jitter_s: float) -> int:
    """Distinguishable frequency-to-time channels within one pulse period.

    floor(period / jitter) slots minus one reserved as an inter-train guard;
    never less than a single channel.
    """
    if jitter_s <= 0:
        raise ValueError(f"timing jitter must be positive, got {jitter_s}")
    if rep_rate_hz <= 0:
        raise ValueError(f"repetition rate must be positive, got {rep_rate_hz}")
    period = 1.0 / rep_rate_hz
    return max(int(math.floor(period / jitter_s)) - 1, 1)


def min_gdd_ps_per_nm(jitter_s: float, channel_spacing_nm: float) -> float:
    """Smallest group-delay dispersion keeping adjacent channels separable."""
    if channel_spacing_nm <= 0:
        raise ValueError(f"channel spacing must be positive, got {channel_spacing_nm}")
    if jitter_s < 0:
        raise ValueError(f"jitter must be non-negative, got {jitter_s}")
    return (jitter_s * 1e12) / channel_spacing_nm


def max_users(channels: int) -> tuple[int, int]:
    """Largest fully-connected user count a channel budget supports.

    Returns (users, surplus) with surplus = channels - C(users, 2).
    """
    if channels < 1:
        raise ValueError(f"need at least one channel, got {channels}")
    n = 2
    while math.comb(n + 1, 2) <= channels:
        n += 1
    return n, channels - math.comb(n, 2)


def pair_wavelengths(pump_nm: float, idler_nm: float) -> float:
    """Signal wavelength conjugate to an idler under energy conservation:
    1/signal = 1/pump - 1/idler."""
    if idler_nm <= pump_nm:
        raise ValueError(
            f"idler ({idler_nm} nm) must be longer than the pump ({pump_nm} nm)"
        )
    inv = 1.0 / pump_nm - 1.0 / idler_nm
    if inv <= 0.0:
        raise ValueError("nonphysical wavelength pairing")
    return 1.0 / inv


def itu_channel_wavelength_nm(channel: int) -> float:
    """Vacuum wavelength of a 100 GHz ITU grid channel."""
    freq_thz = ITU_GRID_BASE_THZ + ITU_GRID_STEP_THZ * channel
    return SPEED_OF_LIGHT_M_S / (freq_thz * 1e12) * 1e9


def ring_pairs(n_users: int):
    """All C(n, 2) user pairs in ring order: distance-1 neighbours first,
    then distance 2, and so on.  Deterministic and symmetric: every user
    appears in exactly n-1 pairs."""
    seen = set()
    for dist in range(1, n_users // 2 + 1):
        for i in range(n_users):
            pair = tuple(sorted((i, (i + dist) % n_users)))
            if pair not in seen:
                seen.add(pair)
                yield pair


def allocate(kind: TopologyKind, n_users: int, channels: int) -> Topology:
    """Assign channels to users (satellite pass) or user pairs (ground).

    Ground: ring-ordered pairing; every pair gets one channel and surplus
    channels cycle through the pairs again in the same order.  Satellite
    pass: one channel per user in index order, surplus channels to the
    lowest-indexed (preferred) users first.
    """
    kind = TopologyKind(kind)
    if n_users < 2:
        raise ValueError(f"need at least two users, got {n_users}")
    assignment: dict[int, tuple] = {}
    if kind is TopologyKind.GROUND:
        pairs = list(ring_pairs(n_users))
        if channels < len(pairs):
            raise CapacityError(
                f"ground topology for {n_users} users needs {len(pairs)} channels, "
                f"got {channels}"
            )
        for ch in range(1, channels + 1):
            assignment[ch] = pairs[(ch - 1) % len(pairs)]
    else:
        if channels < n_users:
            raise CapacityError(
                f"satellite topology for {n_users} users needs {n_users} channels, "
                f"got {channels}"
            )
        for ch in range(1, channels + 1):
            assignment[ch] = ((ch - 1) % n_users,)
    return Topology(kind=kind, n_users=n_users, assignment=assignment)


def channels_per_user(topology: Topology) -> dict[int, list[int]]:
    """Channels touching each user, in channel order."""
    result: dict[int, list[int]] = {u: [] for u in range(topology.n_users)}
    for ch in sorted(topology.assignment):
        for u in topology.assignment[ch]:
            result[u].append(ch)
    return result


def build_channel_plan(
    topology: Topology, pump_nm: float, itu_start_channel: int = 40
) -> list[ChannelPair]:
    """Materialize a topology into wavelength pairs on the ITU grid.

    Idlers climb the 100 GHz grid from `itu_start_channel`; each signal
    follows from energy conservation with the pump.  In the satellite
    configuration every channel also receives its frequency-to-time slot.
    """
    plan = []
    satellite = topology.kind is TopologyKind.SATELLITE_PASS
    for ch in sorted(topology.assignment):
        itu = itu_start_channel + (ch - 1)
        idler = itu_channel_wavelength_nm(itu)
        signal = pair_wavelengths(pump_nm, idler)
        users = topology.assignment[ch]
        plan.append(
            ChannelPair(
                index=ch,
                signal_nm=signal,
                idler_nm=idler,
                itu_channel=itu,
                time_slot=ch if satellite else None,
                user_a=user_name(users[0]),
                user_b="satellite" if satellite else user_name(users[1]),
            )
        )
    return plan


def link_loss_db(
    budget: LinkBudget,
    path: TopologyKind,
    signal_km: float | None = None,
    idler_km: float | None = None,
) -> float:
    """Total two-arm loss of one link.

    Ground pair: signal-arm fibre plus idler-arm fibre.  Satellite pass: the
    signal arm is the fixed free-space budget, the idler arm stays in fibre.
    """
    a_db, b_db = arm_losses_db(budget, path, signal_km=signal_km, idler_km=idler_km)
    return a_db + b_db


def arm_losses_db(
    budget: LinkBudget,
    path: TopologyKind,
    signal_km: float | None = None,
    idler_km: float | None = None,
) -> tuple[float, float]:
    """Per-arm losses (idler/ground arm, signal/remote arm) in dB."""
    path = TopologyKind(path)
    if signal_km is None:
        signal_km = budget.fibre_length_km
    if idler_km is None:
        idler_km = budget.fibre_length_km
    idler_db = idler_km * budget.atten_idler_db_per_km
    if path is TopologyKind.SATELLITE_PASS:
        signal_db = budget.satellite_loss_db
    else:
        signal_db = signal_km * budget.atten_signal_db_per_km
    return idler_db, signal_db


@dataclass(frozen=True)
class MonthlyAssumptions:
    passes: int = 10
    pass_duration_s: float = 100.0
    seconds_per_month: float = SECONDS_PER_MONTH
    duty: float = 1.0

    def __post_init__(self):
        if self.passes < 0:
            raise ValueError("pass count must be non-negative")
        for name in ("pass_duration_s", "seconds_per_month"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 <= self.duty <= 1.0:
            raise ValueError(f"duty must lie in [0, 1], got {self.duty}")


@dataclass(frozen=True)
class MonthlyYield:
    ground_pair_bits: float
    satellite_network_bits: float
    satellite_per_user_bits: float
    channels_per_preferred_user: int


def monthly_key(
    skr_ground_pair_bps: float,
    skr_satellite_channel_bps: float,
    n_channels: int,
    n_users: int,
    assumptions: MonthlyAssumptions,
) -> MonthlyYield:
    """Key produced over one month in both network configurations.

    Ground: one channel per user pair running continuously at the given duty.
    Satellite: per-channel rate times the pass time budget, reported both for
    the whole multipoint configuration (all `n_channels` wavelength channels)
    and for a single preferred user's share of those channels.
    """
    pass_seconds = assumptions.passes * assumptions.pass_duration_s
    preferred = n_channels // n_users + (1 if n_channels % n_users else 0)
    return MonthlyYield(
        ground_pair_bits=skr_ground_pair_bps
        * assumptions.seconds_per_month
        * assumptions.duty,
        satellite_network_bits=skr_satellite_channel_bps * pass_seconds * n_channels,
        satellite_per_user_bits=skr_satellite_channel_bps * pass_seconds * preferred,
        channels_per_preferred_user=preferred,
    )

"""Scenario configuration: flat INI files with strict key checking.

Every key has a default; an empty file is a valid scenario.  The defaults
encode the reference experimental assumptions (80 MHz pulsed source at
521.4 nm, Si-APD satellite receiver with 1 us dead time and 1000 cps dark
rate, SNSPD-class ground receivers with 10 ns and 100 cps, 1 ns coincidence
window, error-correction factor 1.17, 40 dB satellite link).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields

from .coincidence import RateContext
from .detect import DetectorKind, DetectorSpec
from .keyrate import ChannelScenario, MultiplexMode
from .netplan import LinkBudget, MonthlyAssumptions, TopologyKind, db_to_transmittance
from .source import SourceSpec
from . import detect, netplan


class ConfigError(ValueError):
    """A scenario file could not be parsed or contains invalid values."""


class InfeasibleError(ValueError):
    """A scenario is syntactically valid but physically not realizable."""


@dataclass(frozen=True)
class SweepSettings:
    loss_db_start: float = 0.0
    loss_db_stop: float = 60.0
    loss_db_step: float = 2.0
    channels_min: int = 1
    channels_max: int = 6

    def loss_points(self) -> list[float]:
        if self.loss_db_step <= 0 or self.loss_db_stop < self.loss_db_start:
            raise ConfigError("loss sweep range is empty or inverted")
        points = []
        value = self.loss_db_start
        while value <= self.loss_db_stop + 1e-9:
            points.append(round(value, 12))
            value += self.loss_db_step
        return points

    def channel_points(self) -> list[int]:
        if self.channels_max < self.channels_min or self.channels_min < 1:
            raise ConfigError("channel sweep range is empty or inverted")
        return list(range(self.channels_min, self.channels_max + 1))


@dataclass(frozen=True)
class OptimizerSettings:
    chi_min: float = 0.0
    chi_max: float = 1.0
    tolerance: float = 1e-4
    grid_points: int = 50


@dataclass(frozen=True)
class NetworkSettings:
    n_users: int = 4
    itu_start_channel: int = 40


@dataclass(frozen=True)
class ScenarioConfig:
    source: SourceSpec = field(default_factory=SourceSpec)
    detector_satellite: DetectorSpec = field(
        default_factory=lambda: DetectorSpec(
            efficiency=1.0,
            dark_rate_cps=1000.0,
            dead_time_s=1e-6,
            jitter_s=130e-12,
            kind=DetectorKind.BUCKET,
            coincidence_window_s=1e-9,
        )
    )
    detector_ground: DetectorSpec = field(
        default_factory=lambda: DetectorSpec(
            efficiency=1.0,
            dark_rate_cps=100.0,
            dead_time_s=10e-9,
            jitter_s=130e-12,
            kind=DetectorKind.BUCKET,
            coincidence_window_s=1e-9,
        )
    )
    link: LinkBudget = field(default_factory=LinkBudget)
    topology: TopologyKind = TopologyKind.SATELLITE_PASS
    mode: MultiplexMode = MultiplexMode.TIME_FREQUENCY
    n_channels: int = 1
    dim: int = 4
    f_ec: float = 1.17
    integration_time_s: float = 1.0
    #: fixed ground-arm loss for single-point runs; None = idler fibre budget
    ground_loss_db: float | None = None
    sweep: SweepSettings = field(default_factory=SweepSettings)
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)
    network: NetworkSettings = field(default_factory=NetworkSettings)
    monthly: MonthlyAssumptions = field(default_factory=MonthlyAssumptions)
    out_path: str = "entnet_out.csv"

    def rate_context(self) -> RateContext:
        return RateContext(
            rep_rate_hz=self.source.rep_rate_hz,
            integration_time_s=self.integration_time_s,
            dead_time_sat_s=self.detector_satellite.dead_time_s,
            dead_time_ground_s=self.detector_ground.dead_time_s,
        )

    def channel_capacity(self) -> int:
        return netplan.channel_capacity(
            self.source.rep_rate_hz, self.detector_satellite.jitter_s
        )

    def scenario_for_loss(self, ground_loss_db: float) -> ChannelScenario:
        """Fold arm losses into detectors for one evaluation point.

        The swept loss always sits on the ground (idler) arm.  The remote
        (signal) arm carries the fixed satellite budget in the satellite-pass
        topology and the signal-fibre budget in the ground topology, with the
        ground detector spec on both arms in the latter case.
        """
        det_a = detect.fold_loss(
            self.detector_ground, db_to_transmittance(ground_loss_db)
        )
        if self.topology is TopologyKind.SATELLITE_PASS:
            remote_db = self.link.satellite_loss_db
            det_b = detect.fold_loss(self.detector_satellite, db_to_transmittance(remote_db))
        else:
            remote_db = self.link.fibre_length_km * self.link.atten_signal_db_per_km
            det_b = detect.fold_loss(self.detector_ground, db_to_transmittance(remote_db))
        return ChannelScenario(
            detector_a=det_a,
            detector_b=det_b,
            rates=self.rate_context(),
            f_ec=self.f_ec,
            dim=self.dim,
            chi_max=self.optimizer.chi_max,
        )

    def default_ground_loss_db(self) -> float:
        """Idler-arm fibre loss implied by the link budget."""
        return self.link.fibre_length_km * self.link.atten_idler_db_per_km

    def operating_ground_loss_db(self) -> float:
        """Ground-arm loss for single-point runs (sweep-channels,
        optimize-chi): the explicit override when set, the fibre budget
        otherwise."""
        if self.ground_loss_db is not None:
            return self.ground_loss_db
        return self.default_ground_loss_db()


# section -> {key: (target dataclass field, parser)}.
def _float(s: str) -> float:
    return float(s)


def _int(s: str) -> int:
    value = float(s)
    if value != int(value):
        raise ValueError(f"expected an integer, got {s}")
    return int(value)


_SCHEMA = {
    "source": {
        "rep_rate_hz": _float,
        "pump_center_nm": _float,
        "pump_bandwidth_nm": _float,
        "signal_center_nm": _float,
        "signal_bandwidth_nm": _float,
        "idler_center_nm": _float,
        "idler_bandwidth_nm": _float,
    },
    "detectors.satellite": {
        "kind": DetectorKind,
        "efficiency": _float,
        "dark_rate_cps": _float,
        "dead_time_s": _float,
        "jitter_s": _float,
        "coincidence_window_s": _float,
    },
    "detectors.ground": {
        "kind": DetectorKind,
        "efficiency": _float,
        "dark_rate_cps": _float,
        "dead_time_s": _float,
        "jitter_s": _float,
        "coincidence_window_s": _float,
    },
    "link": {
        "fibre_length_km": _float,
        "atten_signal_db_per_km": _float,
        "atten_idler_db_per_km": _float,
        "satellite_loss_db": _float,
    },
    "scenario": {
        "topology": TopologyKind,
        "multiplex_mode": MultiplexMode,
        "n_channels": _int,
        "dim": _int,
        "f_ec": _float,
        "integration_time_s": _float,
        "ground_loss_db": _float,
        "out_path": str,
    },
    "sweep": {
        "loss_db_start": _float,
        "loss_db_stop": _float,
        "loss_db_step": _float,
        "channels_min": _int,
        "channels_max": _int,
    },
    "optimizer": {
        "chi_min": _float,
        "chi_max": _float,
        "tolerance": _float,
        "grid_points": _int,
    },
    "network": {
        "n_users": _int,
        "itu_start_channel": _int,
    },
    "monthly": {
        "passes": _int,
        "pass_duration_s": _float,
        "seconds_per_month": _float,
        "duty": _float,
    },
}


def _parse_section(parser, section: str) -> dict:
    out = {}
    if not parser.has_section(section):
        return out
    schema = _SCHEMA[section]
    for key, raw in parser.items(section):
        if key not in schema:
            raise ConfigError(f"[{section}] has unknown key '{key}'")
        try:
            out[key] = schema[key](raw)
        except ValueError as exc:
            raise ConfigError(f"[{section}] {key} = {raw!r}: {exc}") from exc
    return out


def _build_dataclass(cls, values: dict):
    try:
        return cls(**values)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> ScenarioConfig:
    """Read an INI scenario file; unknown sections or keys are errors."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as handle:
            parser.read_file(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")

    defaults = ScenarioConfig()
    source = _build_dataclass(SourceSpec, _parse_section(parser, "source"))

    def detector(section: str, base: DetectorSpec) -> DetectorSpec:
        values = _parse_section(parser, section)
        merged = {f.name: getattr(base, f.name) for f in fields(DetectorSpec)}
        merged.update(values)
        return _build_dataclass(DetectorSpec, merged)

    det_sat = detector("detectors.satellite", defaults.detector_satellite)
    det_gnd = detector("detectors.ground", defaults.detector_ground)
    link = _build_dataclass(LinkBudget, _parse_section(parser, "link"))
    sweep = _build_dataclass(SweepSettings, _parse_section(parser, "sweep"))
    optimizer = _build_dataclass(OptimizerSettings, _parse_section(parser, "optimizer"))
    network = _build_dataclass(NetworkSettings, _parse_section(parser, "network"))
    monthly = _build_dataclass(MonthlyAssumptions, _parse_section(parser, "monthly"))

    scen = _parse_section(parser, "scenario")
    cfg = ScenarioConfig(
        source=source,
        detector_satellite=det_sat,
        detector_ground=det_gnd,
        link=link,
        topology=scen.get("topology", defaults.topology),
        mode=scen.get("multiplex_mode", defaults.mode),
        n_channels=scen.get("n_channels", defaults.n_channels),
        dim=scen.get("dim", defaults.dim),
        f_ec=scen.get("f_ec", defaults.f_ec),
        integration_time_s=scen.get("integration_time_s", defaults.integration_time_s),
        ground_loss_db=scen.get("ground_loss_db", defaults.ground_loss_db),
        sweep=sweep,
        optimizer=optimizer,
        network=network,
        monthly=monthly,
        out_path=scen.get("out_path", defaults.out_path),
    )
    _validate_semantics(cfg)
    return cfg


def _validate_semantics(cfg: ScenarioConfig) -> None:
    if cfg.dim < 2:
        raise ConfigError(f"truncation dim must be at least 2, got {cfg.dim}")
    if cfg.n_channels < 1:
        raise ConfigError(f"n_channels must be at least 1, got {cfg.n_channels}")
    if cfg.f_ec < 1.0:
        raise ConfigError(f"error correction factor below 1 ({cfg.f_ec}) is unphysical")
    opt = cfg.optimizer
    if not 0.0 <= opt.chi_min <= opt.chi_max:
        raise ConfigError(f"optimizer chi bounds ({opt.chi_min}, {opt.chi_max}) invalid")
    if opt.tolerance <= 0 or opt.grid_points < 1:
        raise ConfigError("optimizer tolerance/grid_points must be positive")


def validate_report(cfg: ScenarioConfig) -> tuple[list[str], list[str]]:
    """Resolved settings plus capacity / feasibility findings (report only).

    Returns (lines, problems); problems is empty for a feasible scenario.
    """
    lines = []
    problems = []
    lines.append("[source]")
    for f in fields(SourceSpec):
        lines.append(f"  {f.name} = {getattr(cfg.source, f.name):g}")
    for label, det in (
        ("detectors.satellite", cfg.detector_satellite),
        ("detectors.ground", cfg.detector_ground),
    ):
        lines.append(f"[{label}]")
        lines.append(f"  kind = {det.kind.value}")
        for name in ("efficiency", "dark_rate_cps", "dead_time_s", "jitter_s",
                     "coincidence_window_s"):
            lines.append(f"  {name} = {getattr(det, name):g}")
    lines.append("[link]")
    for f in fields(LinkBudget):
        lines.append(f"  {f.name} = {getattr(cfg.link, f.name):g}")
    lines.append("[scenario]")
    lines.append(f"  topology = {cfg.topology.value}")
    lines.append(f"  multiplex_mode = {cfg.mode.value}")
    lines.append(f"  n_channels = {cfg.n_channels}")
    lines.append(f"  dim = {cfg.dim}")
    lines.append(f"  f_ec = {cfg.f_ec:g}")

    capacity = cfg.channel_capacity()
    period_ns = 1e9 / cfg.source.rep_rate_hz
    lines.append("[derived]")
    lines.append(f"  pulse_period_ns = {period_ns:g}")
    lines.append(f"  frequency_time_capacity = {capacity}")
    users, surplus = netplan.max_users(capacity)
    lines.append(f"  max_fully_connected_users = {users} (surplus {surplus})")

    if cfg.detector_satellite.jitter_s >= 1.0 / cfg.source.rep_rate_hz:
        problems.append(
            "satellite jitter reaches the pulse period: only one channel usable"
        )
    if cfg.n_channels > capacity:
        problems.append(
            f"n_channels = {cfg.n_channels} exceeds the frequency-time capacity {capacity}"
        )
    # Both topologies draw on the same C(n, 2) wavelength-pair budget.
    needed = (cfg.network.n_users * (cfg.network.n_users - 1)) // 2
    if needed > capacity:
        problems.append(
            f"{cfg.network.n_users} users need {needed} channels, "
            f"capacity is {capacity}"
        )
    inv_pump = 1.0 / cfg.source.pump_center_nm
    inv_pair = 1.0 / cfg.source.signal_center_nm + 1.0 / cfg.source.idler_center_nm
    rel = abs(inv_pump - inv_pair) / inv_pump
    lines.append(f"  energy_conservation_residual = {rel:.2e}")
    return lines, problems

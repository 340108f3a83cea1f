"""entnet: simulator and capacity planner for reconfigurable
entanglement-distribution QKD networks linking ground nodes and a satellite.

The physics stack is layered bottom-up: `fock` (truncated Fock-space linear
algebra), `source` (pulsed SPDC state), `detect` (detector POVMs),
`coincidence` (squashed two-fold statistics, dead time, QBER), `keyrate`
(secure key rate, multiplexing, squeezing optimization).  `netplan` holds the
network-layer arithmetic and `cli` the scenario runner.
"""

from .coincidence import CoincidenceProbs, RateContext
from .detect import DetectorKind, DetectorSpec, Povm
from .fock import Operator, StateVector, TruncatedSpace
from .keyrate import ChannelScenario, MultiplexMode, SkrResult
from .netplan import ChannelPair, LinkBudget, Topology, TopologyKind
from .source import SourceSpec

__version__ = "0.1.0"

__all__ = [
    "ChannelPair",
    "ChannelScenario",
    "CoincidenceProbs",
    "DetectorKind",
    "DetectorSpec",
    "LinkBudget",
    "MultiplexMode",
    "Operator",
    "Povm",
    "RateContext",
    "SkrResult",
    "SourceSpec",
    "StateVector",
    "Topology",
    "TopologyKind",
    "TruncatedSpace",
    "__version__",
]

"""
Partially-dynamic directed all-pairs shortest paths built on reliable hubs.
"""
from .apsp_decr import ApproxDecrApsp, ExactDecrApsp, LasVegasDecrApsp
from .apsp_incr import DenseIncrApsp, EstimateMatrix, RelaxIncrApsp, SparseIncrApsp, auto_hop_parameter
from .blockers import (
    BlockerMonitor,
    BlockerSet,
    RootedTree,
    blocker_monitor,
    decompose_depth,
    forest_from_tree,
    greedy_blocker,
    las_vegas_blocker,
    sample_candidate,
    verify_blocker,
)
from .config import RunConfig, make_config
from .dyntree import EtForest
from .errors import (
    BadD,
    ConfigError,
    DepthExceeded,
    DynTreeError,
    HubsError,
    InvalidEdge,
    InvalidParameter,
    IsRoot,
    ModeViolation,
    NotAHub,
    NotARoot,
    OddD,
    SameTree,
    StreamParseError,
    TrialLimitExceeded,
    UncoveredPath,
    UnknownEdge,
    WeightedGraph,
)
from .graph import (
    INF,
    DynamicDigraph,
    Mode,
    OpKind,
    ShortcutView,
    UpdateOp,
    UpdateStream,
    expround,
    reverse_view,
    round_weights_restricted,
)
from .harness import OracleReport, ReplayResult, replay_verify
from .hub_sets import (
    HubFamily,
    HubFamilyMonitor,
    HubSet,
    extend_on_insert,
    hub_family_monitor,
    hubs_from_approx_trees,
    hubs_from_exact_trees,
    hubs_from_hub_trees,
    is_covered,
)
from .sssp import EsTree, Hsssp
from .streams import format_stream, gen_stream, load_stream, parse_stream, save_stream

__version__ = "0.1.0"

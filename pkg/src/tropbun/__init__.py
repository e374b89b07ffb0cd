"""Exact divisor theory and tropical vector bundles on metric graphs."""

from .bundles import (
    LocalSystemRep,
    Multidivisor,
    bn_rank_bundle,
    bundle_degree,
    bundle_from_local_system,
    bundle_from_multidivisor,
    bundle_iso,
    bundle_rank_n,
    determinant,
    direct_sum,
    dual,
    is_semistable,
    is_stable,
    line_bundle,
    local_system_from_bundle,
    multidivisor_from_cocycle,
    push_pull_bundle,
    slope,
    tensor,
    trivial_bundle,
    wrr_check,
)
from .cocycle import AffineFn, BundleCocycle, Transition, split_block_triangular
from .covers import (
    FreeCover,
    build_cover,
    components_and_genus,
    cover_isomorphisms,
    deck_group,
    disjoint_union,
    enumerate_covers,
    fibered_product,
)
from .divisor import Divisor, degree
from .divisor_theory import linequiv, push_pull_divisor, rank, reduce, rr_check
from .elliptic import (
    CirclePoint,
    SemistableCanonicalForm,
    brill_noether_member,
    circle_rank,
    classify_semistable,
    e_trop,
    psi,
    theta_member,
)
from .errors import InvalidInput, InvariantViolation, SizeLimitExceeded, TropbunError
from .jacobian import JacCoord, abel_jacobi, divisor_from_jac, jac_equiv
from .metric_graph import (
    GraphPoint,
    MetricGraph,
    SimpleModel,
    build_graph,
    canonical_divisor,
    euler_and_genus,
    simple_model,
    subdivide_to_unit,
)
from .root_datum import RootDatum, gl_datum, sl_datum, validate, weyl_group

__version__ = "0.1.0"

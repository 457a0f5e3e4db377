"""Numerical Loewner evolution in the upper half-plane.

Driving functions and half-plane capacity of polyline chords (zipper),
curve reconstruction from drivings (tracer), Loewner energy, hyperbolic
geodesic surgery for incremental chord reversal, and property-check
suites for the capacity and map estimates behind the reversal argument.
"""

from .conformal import INF, Infinity, MobiusMap, mobius_apply, mobius_fixing
from .energy import (
    EnergyReport,
    R_STOP,
    chord_energy,
    dirichlet_energy,
    partial_energy,
)
from .errors import (
    AmbiguityError,
    GeometryError,
    InvalidInputError,
    LoewnerError,
    SingularPointError,
    StepSizeError,
    SurgeryStepError,
    UnsupportedNormalizationError,
)
from .generators import (
    default_suite,
    from_driving_chord,
    geodesic_chord,
    named_chord,
    poly_driving,
    resample_chord,
    resample_segment,
    sin_driving,
)
from .slits import (
    TIP,
    MapStack,
    SlitElement,
    slit_apply,
    slit_invert,
    stack_apply,
    stack_hcap,
    stack_invert,
    stack_tip,
)
from .surgery import (
    GeodesicSpec,
    LedgerRow,
    ReversalLedger,
    ReversalState,
    commutation_defect,
    hyperbolic_geodesic,
    local_reversal_step,
    reverse_chord,
)
from .tracer import (
    TraceOptions,
    TracedCurve,
    slice_by_capacity,
    stack_from_driving,
    trace_curve,
)
from .verify import (
    CheckResult,
    check_dist_bounds,
    check_energy_cone,
    check_hcap_identities,
    check_map_bound,
    map_distance,
    run_all,
)
from .zipper import Chord, DrivingFunction, Segment, ZipperResult, compute_driving

__version__ = "0.1.0"

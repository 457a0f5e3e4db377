"""Hyperbolic geodesics in slit domains and incremental chord reversal.

The local reversal step replaces the final capacity-eps piece of the
not-yet-reversed prefix with the hyperbolic geodesic running the other
way in the current slit domain. Iterated over the whole chord this
produces the reversed chord while keeping the total energy from
increasing; the ledger records the energies, capacities, and the
far-field map distance to the original chord at every step.

Endpoint images are always read off as driving values of the relevant
stacks (slit tips map to their bases), never by evaluating maps at
singular boundary points.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .conformal import mobius_apply, mobius_fixing
from .energy import dirichlet_energy, partial_energy
from .errors import (
    GeometryError,
    InvalidInputError,
    LoewnerError,
    SurgeryStepError,
)
from .slits import (
    TIP,
    LastSlitTip,
    MapStack,
    apply_chain,
    invert_chain,
    stack_apply,
    stack_last_driving,
    stack_tip,
)
from .tracer import TraceOptions, refined_driving, stack_from_driving, trace_curve
from .zipper import (
    Chord,
    DrivingFunction,
    Segment,
    ZipperResult,
    chains_disjoint,
    compute_driving,
)

#: Far-field sampling circle for the ledger's map distance, in units of
#: the chord scale.
CARA_RADIUS_FACTOR = 16.0


@dataclass(frozen=True)
class GeodesicSpec:
    """Sampling resolution for hyperbolic geodesics (uniform in angle)."""

    n_samples: int = 16

    def __post_init__(self):
        if self.n_samples < 3:
            raise InvalidInputError("n_samples must be >= 3")


def _refine_polyline(chain: np.ndarray, factor: int) -> np.ndarray:
    """Insert factor-1 equispaced points on every segment of a chain.

    Refining before a zip resolves the polyline's own hull better; the
    original points stay on the refined chain."""
    if factor <= 1 or chain.size < 2:
        return chain
    steps = np.arange(1, factor + 1) / factor
    blocks = chain[:-1, None] + np.diff(chain)[:, None] * steps[None, :]
    return np.concatenate([chain[:1], blocks.reshape(-1)])


@dataclass
class LedgerRow:
    step: int
    t_cursor: float
    x: float
    y: float
    geodesic_hcap: float
    joint_hcap: float
    energy_prefix: float
    energy_eta: float
    energy_total: float
    cara_distance: float


LEDGER_COLUMNS = (
    "step",
    "t_cursor",
    "x",
    "y",
    "geodesic_hcap",
    "joint_hcap",
    "energy_prefix",
    "energy_eta",
    "energy_total",
    "cara_distance",
)


@dataclass
class ReversalLedger:
    """Per-step record of the reversal iteration, step 0 = initial state."""

    rows: List[LedgerRow] = field(default_factory=list)

    def append(self, row: LedgerRow):
        self.rows.append(row)

    def __len__(self):
        return len(self.rows)

    def energy_totals(self) -> np.ndarray:
        return np.array([r.energy_total for r in self.rows])

    def as_records(self):
        return [
            tuple(getattr(r, name) for name in LEDGER_COLUMNS) for r in self.rows
        ]


@dataclass
class ReversalState:
    """Induction state: prefix driving cursor plus the reversed tail eta.

    eta lives in the original coordinates, runs from the chord's end
    toward gamma(t_cursor), and its final vertex is the current junction
    point on the original curve. The ledger's energies are the paper
    quantities: the prefix's partial energy toward `end` plus eta's
    partial energy toward the junction prime end in the slit domain.
    """

    gamma_driving: DrivingFunction
    t_cursor: float
    eta: np.ndarray
    ledger: ReversalLedger
    chord_start: float
    chord_end: float
    geodesic: GeodesicSpec
    reference_stack: MapStack
    cara_center: float
    cara_radius: float
    cara_n: int
    substeps: int = 4
    refine: int = 4


def _half_circle(a: float, b: float, n: int) -> np.ndarray:
    """n points on the half-circle over [a, b], ordered from the a side,
    uniform in angle, endpoints excluded."""
    c = 0.5 * (a + b)
    r = 0.5 * abs(b - a)
    frac = np.arange(1, n + 1) / (n + 1)
    theta = np.pi * (1.0 - frac) if a < b else np.pi * frac
    return c + r * np.exp(1j * theta)


def _as_chain(stack) -> Tuple[MapStack, ...]:
    if isinstance(stack, MapStack):
        return (stack,)
    return tuple(stack)


def _resolve_end(stacks: Sequence[MapStack], p) -> float:
    if isinstance(p, LastSlitTip):
        idx = max((i for i, s in enumerate(stacks) if len(s)), default=None)
        if idx is None:
            raise InvalidInputError("tip prime end of a stack with no slits")
        x = stack_last_driving(stacks[idx])
        rest = stacks[idx + 1 :]
    else:
        x = float(p)
        rest = stacks
    try:
        out = apply_chain(rest, x)
    except LoewnerError as exc:
        raise InvalidInputError(f"unresolvable prime end {p}: {exc}") from exc
    return float(np.real(out))


def hyperbolic_geodesic(
    stack: Union[MapStack, Sequence[MapStack]],
    a,
    b,
    spec: GeodesicSpec = GeodesicSpec(),
) -> np.ndarray:
    """Sampled hyperbolic geodesic between two prime ends of a slit domain.

    a and b are boundary points of the domain or TIP (the final slit's
    tip). Their images are joined by the half-circle over the connecting
    interval, sampled uniformly in angle from the a side, and pulled back
    through the stack.
    """
    stacks = _as_chain(stack)
    a_img = _resolve_end(stacks, a)
    b_img = _resolve_end(stacks, b)
    if a_img == b_img:
        raise InvalidInputError("prime ends resolve to the same image point")
    samples = _half_circle(a_img, b_img, spec.n_samples)
    try:
        pulled = invert_chain(stacks, samples)
    except LoewnerError as exc:
        raise GeometryError(f"geodesic pullback failed: {exc}") from exc
    if np.any(pulled.imag <= 0):
        raise GeometryError(
            "geodesic pullback left the upper half-plane; increase n_samples "
            "or refine the stack"
        )
    return pulled


def _cara_distance(
    stacks: Sequence[MapStack],
    reference: MapStack,
    center: float,
    radius: float,
    n: int,
) -> float:
    theta = np.pi * (np.arange(n) + 0.5) / n
    z = center + radius * np.exp(1j * theta)
    return float(np.max(np.abs(apply_chain(stacks, z) - stack_apply(reference, z))))


def _prefix_energy(prefix: DrivingFunction, start: float, end: float) -> float:
    """Partial energy of the traced prefix toward the chord endpoint `end`
    (the driving's own Dirichlet energy measures the wrong target, inf)."""
    if len(prefix) < 2:
        return 0.0
    traced = trace_curve(
        prefix, TraceOptions(steps_per_sample=1, max_step_t=prefix.total_t)
    )
    w = mobius_apply(mobius_fixing(start, end), traced.vertices)
    res = compute_driving(Segment(0.0, w), validate=False)
    return dirichlet_energy(res.driving)


def local_reversal_step(state: ReversalState, eps: float) -> ReversalState:
    """One local reversal: peel capacity eps off the prefix and extend eta
    by the reverse geodesic across the freed piece.

    The prefix stack G comes straight from the truncated driving; eta is
    mapped through G and re-zipped into H; the freed piece's endpoint
    images x (new junction, G's final driving value through H) and y
    (old junction, H's final driving value) span the geodesic, which is
    pulled back through H then G and concatenated to eta together with
    the new junction point gamma(t_cursor - eps).
    """
    if not 0.0 < eps <= state.t_cursor:
        raise InvalidInputError(f"eps must lie in (0, {state.t_cursor}], got {eps}")
    tau = state.t_cursor - eps
    if tau < 1e-15 * state.gamma_driving.total_t:
        tau = 0.0
    prefix = state.gamma_driving.restricted(tau)
    G = stack_from_driving(refined_driving(prefix, state.substeps))
    eta = state.eta
    try:
        chain = _refine_polyline(
            np.concatenate(([complex(state.chord_end)], eta)), state.refine
        )
        chain_img = stack_apply(G, chain[1:]) if eta.size else eta
        b_img = float(np.real(stack_apply(G, state.chord_end)))
        hres = compute_driving(Segment(b_img, chain_img), validate=False)
        y = float(hres.driving.lam[-1])
        lam_g = float(prefix.lam[-1])
        x = float(np.real(stack_apply(hres.stack, lam_g)))
        samples = _half_circle(y, x, state.geodesic.n_samples)
        pulled = invert_chain((G, hres.stack), samples)
        if np.any(pulled.imag <= 0):
            raise GeometryError(
                "geodesic pullback left the upper half-plane; increase "
                "n_samples or use smaller eps"
            )
        zres = compute_driving(Segment(y, samples), validate=False)
    except LoewnerError as exc:
        raise SurgeryStepError(
            f"reversal step {len(state.ledger)} at t_cursor={state.t_cursor}: {exc}",
            ledger=state.ledger,
        ) from exc
    if len(G):
        eta_body = np.concatenate([eta, pulled])
        eta_new = np.concatenate([eta_body, [stack_tip(G)]])
    else:
        eta_body = eta_new = np.concatenate([eta, pulled])
    try:
        energy_prefix = _prefix_energy(prefix, state.chord_start, state.chord_end)
        body = Segment(state.chord_end, eta_body)
        if len(G):
            energy_eta = partial_energy(body, TIP, ambient=G, validate=False)
        else:
            energy_eta = partial_energy(body, state.chord_start, validate=False)
    except LoewnerError as exc:
        raise SurgeryStepError(
            f"reversal step {len(state.ledger)} energy bookkeeping failed: {exc}",
            ledger=state.ledger,
        ) from exc
    row = LedgerRow(
        step=len(state.ledger),
        t_cursor=tau,
        x=x,
        y=y,
        geodesic_hcap=(0.5 * abs(x - y)) ** 2,
        joint_hcap=2.0 * (tau + hres.total_t + zres.total_t),
        energy_prefix=energy_prefix,
        energy_eta=energy_eta,
        energy_total=energy_prefix + energy_eta,
        cara_distance=_cara_distance(
            (G, hres.stack, zres.stack),
            state.reference_stack,
            state.cara_center,
            state.cara_radius,
            state.cara_n,
        ),
    )
    state.ledger.append(row)
    return replace(state, t_cursor=tau, eta=eta_new)


def reverse_chord(
    chord: Chord,
    k: int,
    spec: GeodesicSpec = GeodesicSpec(),
    *,
    validate: bool = True,
    cara_n: int = 32,
    substeps: int = 4,
    refine: int = 4,
    zipped: Optional[ZipperResult] = None,
) -> Tuple[Chord, ReversalLedger]:
    """Reverse a chord in k equal capacity increments.

    Returns the reversed chord (running end -> start, endpoints swapped
    exactly) and the full ledger. substeps subdivides the prefix driving
    and refine the eta polyline inside each step; both only sharpen the
    internal stacks, the output keeps n_samples vertices per step. Step
    failures raise SurgeryStepError with the partial ledger attached.
    """
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    res = zipped if zipped is not None else compute_driving(chord, validate=validate)
    total = res.total_t
    center = 0.5 * (chord.start + chord.end)
    scale = max(chord.radius_about(center), abs(chord.start - chord.end))
    ledger = ReversalLedger()
    full_energy = _prefix_energy(res.driving, chord.start, chord.end)
    ledger.append(
        LedgerRow(
            step=0,
            t_cursor=total,
            x=float("nan"),
            y=float("nan"),
            geodesic_hcap=0.0,
            joint_hcap=res.total_hcap,
            energy_prefix=full_energy,
            energy_eta=0.0,
            energy_total=full_energy,
            cara_distance=0.0,
        )
    )
    state = ReversalState(
        gamma_driving=res.driving,
        t_cursor=total,
        eta=np.empty(0, dtype=complex),
        ledger=ledger,
        chord_start=chord.start,
        chord_end=chord.end,
        geodesic=spec,
        reference_stack=res.stack,
        cara_center=center,
        cara_radius=CARA_RADIUS_FACTOR * scale,
        cara_n=cara_n,
        substeps=substeps,
        refine=refine,
    )
    for i in range(1, k + 1):
        eps = state.t_cursor - total * (k - i) / k
        state = local_reversal_step(state, eps)
    reversed_chord = Chord(chord.end, chord.start, state.eta)
    try:
        reversed_chord.validate()
    except InvalidInputError as exc:
        raise SurgeryStepError(
            f"reversed chord failed validation: {exc}", ledger=ledger
        ) from exc
    return reversed_chord, ledger


def commutation_defect(
    seg_a: Segment, seg_b: Segment, *, r_stop: float = 1e6
) -> Tuple[float, float]:
    """Both orderings of the joint energy of two disjoint segments.

    lhs zips seg_a first (toward seg_b's base) and adds seg_b's energy in
    the slit domain toward seg_a's tip; rhs swaps the roles. The two
    agree exactly in the continuum.
    """
    seg_a.validate()
    seg_b.validate()
    if seg_a.base == seg_b.base:
        raise InvalidInputError("segments must start at distinct boundary points")
    if seg_a.vertices.size and seg_b.vertices.size:
        if not chains_disjoint(seg_a.chain(), seg_b.chain()):
            raise InvalidInputError("segments intersect")
    stack_a = compute_driving(seg_a, validate=False).stack
    stack_b = compute_driving(seg_b, validate=False).stack
    tip_a = TIP if len(stack_a) else seg_a.base
    tip_b = TIP if len(stack_b) else seg_b.base
    lhs = partial_energy(
        seg_a, seg_b.base, validate=False, r_stop=r_stop
    ) + partial_energy(seg_b, tip_a, ambient=stack_a, validate=False, r_stop=r_stop)
    rhs = partial_energy(
        seg_b, seg_a.base, validate=False, r_stop=r_stop
    ) + partial_energy(seg_a, tip_b, ambient=stack_b, validate=False, r_stop=r_stop)
    return lhs, rhs

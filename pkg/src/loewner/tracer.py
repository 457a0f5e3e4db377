"""Forward Loewner transform: reconstruct curves from driving functions.

Each sub-step [t, t + dt] with driving value taken at the right endpoint
contributes the slit (lambda, 2 sqrt(dt)); the curve point at time t_k is
the composed inverse of the earlier slits evaluated at slit k's tip. This
pairs exactly with the zipper's slit-at-image convention, so driving ->
trace -> zip reproduces the sub-step samples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .conformal import MobiusMap
from .errors import InvalidInputError, StepSizeError
from .slits import MapStack, SlitElement, _backward
from .zipper import Chord, DrivingFunction, Segment, ZipperResult, compute_driving


@dataclass(frozen=True)
class TraceOptions:
    """Time-grid refinement for tracing.

    Each driving sample interval is split into at least steps_per_sample
    sub-steps and enough that no sub-step exceeds max_step_t (default
    1e-3 of the total capacity).
    """

    steps_per_sample: int = 4
    max_step_t: Optional[float] = None

    def __post_init__(self):
        if self.steps_per_sample < 1:
            raise InvalidInputError("steps_per_sample must be >= 1")
        if self.max_step_t is not None and not self.max_step_t > 0:
            raise InvalidInputError("max_step_t must be positive")


@dataclass
class TracedCurve:
    """Open curve segment with its capacity grid (t[k] = time at vertex k)
    and the mapping-out stack of the traced hull."""

    base: float
    vertices: np.ndarray
    t: np.ndarray
    stack: MapStack

    def as_segment(self) -> Segment:
        return Segment(self.base, self.vertices)


def _refined_grid(driving: DrivingFunction, opts: TraceOptions):
    max_step = opts.max_step_t
    if max_step is None:
        max_step = 1e-3 * driving.total_t if driving.total_t > 0 else 1.0
    ts = [np.array([0.0])]
    lams = [np.array([driving.base])]
    for i in range(len(driving) - 1):
        t0, t1 = driving.t[i], driving.t[i + 1]
        l0, l1 = driving.lam[i], driving.lam[i + 1]
        m = max(opts.steps_per_sample, int(np.ceil((t1 - t0) / max_step)))
        frac = np.arange(1, m + 1) / m
        ts.append(t0 + (t1 - t0) * frac)
        lams.append(l0 + (l1 - l0) * frac)
    return np.concatenate(ts), np.concatenate(lams)


def refined_driving(driving: DrivingFunction, steps_per_sample: int) -> DrivingFunction:
    """Same piecewise-linear driving on a grid subdivided uniformly."""
    if steps_per_sample <= 1:
        return driving
    t, lam = _refined_grid(
        driving, TraceOptions(steps_per_sample=steps_per_sample, max_step_t=np.inf)
    )
    return DrivingFunction(t, lam)


def elements_from_driving(t: np.ndarray, lam: np.ndarray):
    """Slit elements of the piecewise-constant flow, relative to lam[0].

    Interval (t[j], t[j+1]] with right-endpoint value lam[j+1] yields the
    slit (lam[j+1] - lam[0], 2 sqrt(dt)).
    """
    dt = np.diff(t)
    if np.any(dt <= 0):
        raise InvalidInputError("time grid must be strictly increasing")
    v = 2.0 * np.sqrt(dt)
    u = lam[1:] - lam[0]
    return [SlitElement(float(ui), float(vi)) for ui, vi in zip(u, v)]


def stack_from_driving(driving: DrivingFunction) -> MapStack:
    """Mapping-out stack of the discrete Loewner flow, one slit per interval."""
    x0 = driving.base
    return MapStack(
        tuple(elements_from_driving(driving.t, driving.lam)),
        pre=MobiusMap.translation(-x0),
        post=MobiusMap.translation(x0),
    )


def trace_curve(
    driving: DrivingFunction, opts: TraceOptions = TraceOptions()
) -> TracedCurve:
    """Trace the curve generated by a sampled driving function.

    Returns the curve vertices (one per sub-step), the base point
    lambda(0), and the capacity grid aligned with the vertices.
    """
    t, lam = _refined_grid(driving, opts)
    x0 = driving.base
    frames = dict(pre=MobiusMap.translation(-x0), post=MobiusMap.translation(x0))
    if t.size < 2:
        return TracedCurve(x0, np.empty(0, dtype=complex), t[1:], MapStack(**frames))
    elements = elements_from_driving(t, lam)
    m = len(elements)
    tips = np.array([e.tip for e in elements], dtype=complex)
    # Vertex k is slit k's tip pulled back through slits k-1, ..., 0; the
    # descending loop applies each inverse to all later tips at once, which
    # hits every tip in exactly that order.
    verts = tips
    for j in range(m - 2, -1, -1):
        e = elements[j]
        verts[j + 1 :] = e.u + _backward(verts[j + 1 :] - e.u, e.v)
    floor = 1e-12
    if np.any(verts.imag < floor):
        k = int(np.argmin(verts.imag))
        raise StepSizeError(
            f"traced vertex {k} collapsed onto the real line; driving too "
            "rough for the step size, refine the grid"
        )
    return TracedCurve(x0, verts + x0, t[1:], MapStack(tuple(elements), **frames))


def slice_by_capacity(
    chord: Chord,
    t: float,
    opts: TraceOptions = TraceOptions(),
    *,
    zipped: Optional[ZipperResult] = None,
):
    """Capacity-t prefix of a chord, re-traced from its driving function.

    Returns (prefix TracedCurve, tip point gamma(t)). Re-tracing rather
    than cutting the polyline keeps hcap(prefix) = 2t exact in the
    discrete model.
    """
    res = zipped if zipped is not None else compute_driving(chord)
    if not 0.0 < t < res.total_t:
        raise InvalidInputError(f"t must lie in (0, {res.total_t}), got {t}")
    prefix = trace_curve(res.driving.restricted(t), opts)
    return prefix, complex(prefix.vertices[-1])

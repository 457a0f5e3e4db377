"""Test-chord generators and polyline resampling.

Generated chords close onto their far endpoint with a hyperbolic
geodesic, so the appended piece carries no energy, plus a geometric tail
of extra samples on the same arc so the final vertex meets the zipper's
closing tolerance.
"""

from __future__ import annotations

import numpy as np

from .errors import AmbiguityError, InvalidInputError
from .slits import stack_invert, stack_last_driving
from .tracer import TraceOptions, trace_curve
from .zipper import CLOSE_TOL, Chord, DrivingFunction, Segment


def _arc_angles(n_uniform: int, tail_to: float) -> np.ndarray:
    """Angle fractions in (0, 1) from the start side of a half-circle:
    n_uniform uniform samples plus halvings of the last gap until the
    angular distance to the far end drops below tail_to (in radians)."""
    frac = np.arange(1, n_uniform + 1) / (n_uniform + 1)
    gap = np.pi / (n_uniform + 1)
    tail = []
    while gap > tail_to:
        gap /= 2.0
        tail.append(1.0 - gap / np.pi)
    return np.concatenate([frac, np.array(tail)])


def _half_circle_with_tail(a: float, b: float, n: int) -> np.ndarray:
    """Samples on the half-circle over [a, b] from the a side, with the
    tail refined so the last sample sits within the closing tolerance of b."""
    c = 0.5 * (a + b)
    r = 0.5 * abs(b - a)
    # chord distance ~ r * angle, closing tolerance CLOSE_TOL * 2r
    tail_to = 2.0 * CLOSE_TOL
    frac = _arc_angles(n, tail_to)
    extra = frac.size - n
    if extra > 0 and n - extra >= 8:
        frac = _arc_angles(n - extra, tail_to)
    theta = np.pi * (1.0 - frac) if a < b else np.pi * frac
    return c + r * np.exp(1j * theta)


def geodesic_chord(a: float = -1.0, b: float = 1.0, n: int = 200) -> Chord:
    """Hyperbolic geodesic of the half-plane: the half-circle over [a, b]."""
    if a == b:
        raise InvalidInputError("endpoints must be distinct")
    if n < 8:
        raise InvalidInputError("n must be >= 8")
    return Chord(a, b, _half_circle_with_tail(float(a), float(b), n))


def from_driving_chord(
    driving: DrivingFunction, n: int, offset: float = 1.0
) -> Chord:
    """Chord generated by a driving function, closed by a geodesic.

    Traces the driving (about three quarters of the n vertices), then
    appends the hyperbolic geodesic from the curve's tip prime end to the
    boundary point whose image sits `offset` to the right of the final
    driving value.
    """
    if n < 16:
        raise InvalidInputError("n must be >= 16")
    if not offset > 0:
        raise InvalidInputError("offset must be positive")
    n_trace = max(8, int(round(0.75 * n)))
    n_close = n - n_trace
    grid = np.linspace(0.0, driving.total_t, n_trace + 1)
    uniform = DrivingFunction(grid, np.interp(grid, driving.t, driving.lam))
    traced = trace_curve(
        uniform, TraceOptions(steps_per_sample=1, max_step_t=driving.total_t)
    )
    stack = traced.stack
    lam_end = stack_last_driving(stack)
    target, end = _admissible_target(stack, lam_end, offset)
    tol_len = CLOSE_TOL * abs(end - driving.base)
    pulled = _closing_arc(stack, lam_end, target, n_close, end, tol_len)
    return Chord(driving.base, end, np.concatenate([traced.vertices, pulled]))


def _admissible_target(stack, lam_end: float, offset: float):
    """First image point lam_end + offset * 2^j whose preimage lies on the
    real line rather than on the hull side (doubling until off the
    welding interval). Returns (image target, its real preimage)."""
    for _ in range(60):
        try:
            pre = stack_invert(stack, lam_end + offset)
        except AmbiguityError:
            offset *= 2.0
            continue
        return lam_end + offset, float(np.real(pre))
    raise InvalidInputError("no admissible closing target found")


def _closing_arc(
    stack, a_img: float, b_img: float, n_uniform: int, end: float, tol_len: float
):
    """Closing geodesic pullback: n_uniform uniform-angle samples plus an
    adaptive tail that halves the final angular gap until the last pulled
    vertex sits within tol_len of `end` in the domain frame."""

    c = 0.5 * (a_img + b_img)
    r = 0.5 * abs(b_img - a_img)

    def sample(f):
        theta = np.pi * (1.0 - f) if a_img < b_img else np.pi * f
        return c + r * np.exp(1j * theta)

    frac = np.arange(1, n_uniform + 1) / (n_uniform + 1)
    pulled = list(stack_invert(stack, sample(frac)))
    gap = np.pi / (n_uniform + 1)
    for _ in range(80):
        if abs(pulled[-1] - end) <= tol_len:
            break
        gap *= 0.5
        pulled.append(stack_invert(stack, complex(sample(1.0 - gap / np.pi))))
    verts = np.asarray(pulled, dtype=complex)
    if np.any(verts.imag <= 0):
        raise InvalidInputError("closing geodesic collapsed; increase n")
    return verts


def sin_driving(freq: float = 4.0, total_t: float = 1.0, amplitude: float = 1.0,
                samples: int = 256) -> DrivingFunction:
    t = np.linspace(0.0, total_t, samples + 1)
    return DrivingFunction(t, amplitude * np.sin(freq * t))


def poly_driving(coeffs, total_t: float = 1.0, samples: int = 256) -> DrivingFunction:
    """Polynomial driving sum(coeffs[j] * t^j); coeffs[0] is the base point."""
    t = np.linspace(0.0, total_t, samples + 1)
    lam = np.zeros_like(t)
    for j, c in enumerate(coeffs):
        lam += c * t**j
    return DrivingFunction(t, lam)


#: Canonical named test chords: (builder, description).
G1_FREQ = 4.0
G1_TOTAL_T = 1.0
POLY1_COEFFS = (0.0, 2.0, -2.0)


def named_chord(name: str, n: int = 800) -> Chord:
    """Canonical artifacts: geodesic, g1, g1m, poly1, poly1m."""
    builders = {
        "geodesic": lambda: geodesic_chord(-1.0, 1.0, n),
        "g1": lambda: from_driving_chord(
            sin_driving(G1_FREQ, G1_TOTAL_T, samples=max(64, n)), n
        ),
        "g1m": lambda: named_chord("g1", n).mirrored(),
        "poly1": lambda: from_driving_chord(
            poly_driving(POLY1_COEFFS, samples=max(64, n)), n
        ),
        "poly1m": lambda: named_chord("poly1", n).mirrored(),
    }
    if name not in builders:
        raise InvalidInputError(
            f"unknown chord name {name!r}; known: {sorted(builders)}"
        )
    return builders[name]()


SUITE_NAMES = ("geodesic", "g1", "g1m", "poly1", "poly1m")


def default_suite(n: int = 800) -> dict:
    """The finite-energy reversal suite: geodesic, two generated chords,
    and their mirrors."""
    return {name: named_chord(name, n) for name in SUITE_NAMES}


def resample_segment(segment: Segment, n: int) -> Segment:
    """Arclength-uniform resampling to n vertices; the tip is preserved."""
    if n < 1:
        raise InvalidInputError("n must be >= 1")
    chain = segment.chain()
    s = np.concatenate(([0.0], np.cumsum(np.abs(np.diff(chain)))))
    targets = s[-1] * np.arange(1, n + 1) / n
    re = np.interp(targets, s, chain.real)
    im = np.interp(targets, s, chain.imag)
    verts = re + 1j * im
    verts[-1] = chain[-1]
    return Segment(segment.base, verts)


def resample_chord(chord: Chord, n: int) -> Chord:
    """Arclength-uniform resampling to n vertices.

    The final vertex keeps the original one when that sits closer to
    `end`, so resampling never degrades the closing gap.
    """
    if n < 2:
        raise InvalidInputError("n must be >= 2")
    chain = chord.chain()
    s = np.concatenate(([0.0], np.cumsum(np.abs(np.diff(chain)))))
    targets = s[-1] * np.arange(1, n + 1) / (n + 1)
    re = np.interp(targets, s, chain.real)
    im = np.interp(targets, s, chain.imag)
    verts = re + 1j * im
    old_last = chord.vertices[-1]
    if abs(old_last - chord.end) < abs(verts[-1] - chord.end):
        verts[-1] = old_last
    return Chord(chord.start, chord.end, verts)

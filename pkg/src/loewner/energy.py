"""Loewner energy: Dirichlet energy of drivings and conformally
normalized chord/segment energies.

Chordal energy sends the endpoints to 0 and infinity with a Mobius map
and integrates the squared driving derivative. The reported value is the
exact Dirichlet energy of the piecewise-linear interpolation, which is
the minimal-energy driving consistent with the samples, so refinement
can only reveal energy. Energies should be compared at matched
resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .conformal import INF, Boundary, Infinity, MobiusMap, mobius_apply, mobius_fixing
from .errors import GeometryError, InvalidInputError, LoewnerError
from .slits import TIP, LastSlitTip, MapStack, stack_apply, stack_last_driving
from .zipper import Chord, DrivingFunction, Segment, compute_driving

#: Image-plane modulus beyond which vertices are left unzipped.
R_STOP = 1e6


@dataclass
class EnergyReport:
    """Chordal energy with the truncation diagnostics that qualify it."""

    energy: float
    t_used: float
    tail_hcap_bound: float
    resolution: int


def dirichlet_energy(driving: DrivingFunction) -> float:
    """(1/2) sum (dlam)^2 / dt, exact for the PL interpolation."""
    if len(driving) < 2:
        return 0.0
    dl = np.diff(driving.lam)
    dt = np.diff(driving.t)
    return float(0.5 * np.sum(dl * dl / dt))


def _zip_image(base_img: float, image: np.ndarray, r_stop: float):
    """Zip an image polyline from base_img, stopping past modulus r_stop."""
    big = np.abs(image) > r_stop
    cut = int(np.argmax(big)) if np.any(big) else image.size
    res = compute_driving(Segment(base_img, image[:cut]), validate=False)
    return res, cut


def chord_energy(
    chord: Chord,
    *,
    r_stop: float = R_STOP,
    scale: float = 1.0,
    validate: bool = True,
) -> EnergyReport:
    """Loewner energy of a chord between finite boundary points.

    Normalizes with mobius_fixing(start, end) (optionally rescaled by the
    residual freedom `scale`, which the result is invariant to), zips the
    image curve toward infinity, and returns the Dirichlet energy of the
    resulting driving. The unzipped closing gap is bounded in the
    original frame and reported.
    """
    if validate:
        chord.validate()
    phi = mobius_fixing(chord.start, chord.end)
    if scale != 1.0:
        phi = phi.scaled(scale)
    image = mobius_apply(phi, chord.vertices)
    if np.any(image.imag <= 0):
        raise GeometryError("chord image left the upper half-plane")
    res, cut = _zip_image(0.0, image, r_stop)
    last = chord.vertices[cut - 1] if cut else chord.start
    tail = float(abs(chord.end - last) ** 2)
    return EnergyReport(
        energy=dirichlet_energy(res.driving),
        t_used=res.total_t,
        tail_hcap_bound=tail,
        resolution=cut,
    )


PrimeEnd = Union[float, Infinity, LastSlitTip]


def resolve_prime_end(ambient: Optional[MapStack], target: PrimeEnd) -> Boundary:
    """Image of a prime-end spec under the ambient stack (identity if None)."""
    if isinstance(target, LastSlitTip):
        if ambient is None or not len(ambient):
            raise InvalidInputError("tip prime end needs an ambient stack with slits")
        return stack_last_driving(ambient)
    if target is INF:
        return INF if ambient is None else stack_apply(ambient, INF)
    x = float(target)
    if ambient is None:
        return x
    out = stack_apply(ambient, x)
    if out is INF:
        return INF
    return float(np.real(out))


def partial_energy(
    segment: Segment,
    target: PrimeEnd,
    ambient: Optional[MapStack] = None,
    *,
    r_stop: float = R_STOP,
    validate: bool = True,
) -> float:
    """Energy of an open curve toward a marked target prime end.

    The segment is mapped through the ambient stack (its slit domain),
    the base and target prime ends are resolved to boundary points of
    the image half-plane, and the Dirichlet energy of the renormalized
    driving is returned. `target` may be a finite boundary point, INF,
    or TIP (the tip of the ambient stack's last slit).
    """
    if validate:
        segment.validate()
    if len(segment) == 0:
        return 0.0
    try:
        base_img = resolve_prime_end(ambient, segment.base)
        image = (
            stack_apply(ambient, segment.vertices)
            if ambient is not None
            else segment.vertices.astype(complex)
        )
    except LoewnerError as exc:
        raise GeometryError(f"segment touches the ambient hull: {exc}") from exc
    target_img = resolve_prime_end(ambient, target)
    if target_img == base_img:
        raise InvalidInputError("target prime end coincides with the base")
    psi = mobius_fixing(base_img, target_img)
    w = mobius_apply(psi, image)
    if np.any(w.imag <= 0):
        raise GeometryError("segment image left the upper half-plane")
    res, _ = _zip_image(0.0, w, r_stop)
    return dirichlet_energy(res.driving)

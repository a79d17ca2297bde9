"""Orbit volume, Ricci form and moment map of a toric Kähler potential.

The torus orbit over x in R^n has Riemannian volume (2 pi)^n sqrt(H(x)),
H = det Hess F, and since torus orbits are Lagrangian this equals the
J-volume. The Ricci form is i ddbar(-log H); in log coordinates its sign is
the sign of the real quadratic form R = -Hess(log H).
"""
import logging
from typing import Any, Callable, Dict, List, Optional

import numpy as np
from joblib import Parallel, delayed
from scipy import linalg

from orbitlab.errors import NotKaehler, StencilTooWide, SubmersionFailure
from orbitlab.finite_differences import EPS, central_hessian, default_steps, richardson_extrapolate
from orbitlab.models import GridRegion, RicciClassification, RicciSample, RicciVerdict, as_list
from orbitlab.potentials import ToricPotential

logger = logging.getLogger(__name__)

LOG_TWO_PI = float(np.log(2.0 * np.pi))

# Largest finite-difference step accepted from a caller
MAX_STENCIL_STEP = 0.1


def log_H(potential: ToricPotential, x) -> float:
    """log det Hess F(x) through a Cholesky factorization.

    Raises NotKaehler when a pivot is not positive.
    """
    hess = potential.hess(x)
    if not np.all(np.isfinite(hess)):
        raise NotKaehler(f"Hess F is not finite at x={as_list(x)}", x=as_list(x))
    try:
        factor = linalg.cholesky(hess, lower=True)
    except linalg.LinAlgError:
        raise NotKaehler(f"Hess F is not positive definite at x={as_list(x)}", x=as_list(x))
    diagonal = np.diag(factor)
    if np.any(diagonal <= 0.0):
        raise NotKaehler(f"Hess F has a non-positive pivot at x={as_list(x)}", x=as_list(x))
    return 2.0 * float(np.sum(np.log(diagonal)))


def orbit_log_volume(potential: ToricPotential, x) -> float:
    """log Vol of the torus orbit over x: log sqrt(H) plus the Haar factor n log(2 pi)."""
    return 0.5 * log_H(potential, x) + potential.n * LOG_TWO_PI


def _stencil_steps(x: np.ndarray, step: Optional[float], max_step: float) -> np.ndarray:
    if step is None:
        return default_steps(x)
    if step <= 0:
        raise ValueError(f"Finite-difference step must be positive, got {step}")
    if step > max_step:
        raise StencilTooWide(
            f"Finite-difference step {step} exceeds the bound {max_step}",
            step=step,
            bound=max_step,
        )
    return np.full(x.shape, float(step))


def ricci_form(potential: ToricPotential, x, step: Optional[float] = None,
               richardson: bool = False, max_step: float = MAX_STENCIL_STEP) -> RicciSample:
    """R = -Hess(log H) at x by central second differences of the exact log H.

    The default step is eps**(1/4) * (1 + |x_i|). With richardson=True the
    Hessian is taken at steps h and h/2 and combined as (4 A_{h/2} - A_h) / 3.
    """
    point = potential.check_point(x)
    steps = _stencil_steps(point, step, max_step)

    def func(y: np.ndarray) -> float:
        try:
            return log_H(potential, y)
        except NotKaehler as e:
            raise NotKaehler(
                f"Stencil point {as_list(y)} around x={as_list(point)} is not Kähler",
                x=as_list(point),
                stencil_point=as_list(y),
            ) from e

    center = func(point)
    hess = central_hessian(func, point, steps, center_value=center)
    if richardson:
        half = central_hessian(func, point, steps / 2.0, center_value=center)
        hess = richardson_extrapolate([hess, half], p=2, r=2.0)

    form = -0.5 * (hess + hess.T)
    eigenvalues = np.sort(np.linalg.eigvalsh(form))
    return RicciSample(x=point, form=form, eigenvalues=eigenvalues)


def default_threshold(samples: List[RicciSample]) -> float:
    """tau = 1e-6 * (1 + max |R entry|) over all samples."""
    largest = max(float(np.max(np.abs(s.form))) for s in samples) if samples else 0.0
    return 1e-6 * (1.0 + largest)


def map_ordered(func: Callable[[Any], Any], items, workers: int = 1) -> List[Any]:
    """Evaluate func on every item; results come back in input order."""
    if workers > 1:
        return Parallel(n_jobs=workers, prefer="threads")(delayed(func)(item) for item in items)
    return [func(item) for item in items]


def classify_ricci(potential: ToricPotential, region: GridRegion, tau: Optional[float] = None,
                   richardson: bool = False, workers: int = 1) -> RicciClassification:
    """Classify the sign of the Ricci form over every node of a grid.

    PositiveDefinite if every eigenvalue > tau, NegativeDefinite if every
    eigenvalue < -tau, Zero if every |eigenvalue| <= tau, Indefinite if some
    node has eigenvalues of both signs beyond tau, Mixed otherwise.
    """
    if region.dimension != potential.n:
        raise ValueError(f"Region has dimension {region.dimension}, potential has {potential.n}")
    if tau is not None and not tau > 0:
        raise ValueError(f"Threshold must be positive, got {tau}")

    nodes = region.nodes()
    logger.debug(f"Classifying Ricci sign of {potential.kind} on {len(nodes)} nodes")
    samples = map_ordered(lambda node: ricci_form(potential, node, richardson=richardson), nodes, workers)

    threshold = default_threshold(samples) if tau is None else float(tau)
    lows = np.array([s.eigenvalues[0] for s in samples])
    highs = np.array([s.eigenvalues[-1] for s in samples])

    if np.all(lows > threshold):
        verdict = RicciVerdict.POSITIVE_DEFINITE
    elif np.all(highs < -threshold):
        verdict = RicciVerdict.NEGATIVE_DEFINITE
    elif np.all(np.maximum(np.abs(lows), np.abs(highs)) <= threshold):
        verdict = RicciVerdict.ZERO
    elif np.any((lows < -threshold) & (highs > threshold)):
        verdict = RicciVerdict.INDEFINITE
    else:
        verdict = RicciVerdict.MIXED

    closest = int(np.argmin(np.minimum(np.abs(lows), np.abs(highs))))
    witnesses = {
        "min_eigenvalue": {"x": as_list(nodes[int(np.argmin(lows))]), "value": float(np.min(lows))},
        "max_eigenvalue": {"x": as_list(nodes[int(np.argmax(highs))]), "value": float(np.max(highs))},
        "closest_to_zero": {
            "x": as_list(nodes[closest]),
            "eigenvalues": as_list(samples[closest].eigenvalues),
        },
    }
    logger.info(f"Ricci verdict for {potential.kind}: {verdict.value} (tau={threshold:.3g})")
    return RicciClassification(
        verdict=verdict,
        threshold=threshold,
        region=region,
        node_extremes=[(float(lo), float(hi)) for lo, hi in zip(lows, highs)],
        witnesses=witnesses,
    )


def moment_map(potential: ToricPotential, x) -> np.ndarray:
    """mu(x) = grad F(x); its Jacobian Hess F must be nonsingular (submersion)."""
    point = potential.check_point(x)
    eigenvalues = np.linalg.eigvalsh(potential.hess(point))
    largest = max(float(np.max(np.abs(eigenvalues))), np.finfo(float).tiny)
    if eigenvalues[0] <= potential.n * EPS * largest:
        raise SubmersionFailure(
            f"Moment map is not a submersion at x={as_list(point)}",
            x=as_list(point),
            eigenvalues=as_list(eigenvalues),
        )
    return potential.grad(point)


def levi_form(func: Callable[[np.ndarray], float], z: np.ndarray,
              steps: Optional[np.ndarray] = None) -> np.ndarray:
    """Complex Hessian d^2 f / dz_j dzbar_k of a real function on C^n.

    func takes the real vector (Re z, Im z) of length 2n. The result is
    1/4 [(f_xx + f_yy) + i (f_xy - f_yx)].
    """
    z = np.asarray(z, dtype=complex).reshape(-1)
    n = z.size
    real = np.concatenate((z.real, z.imag))
    hess = central_hessian(func, real, steps)
    fxx, fyy = hess[:n, :n], hess[n:, n:]
    fxy, fyx = hess[:n, n:], hess[n:, :n]
    levi = 0.25 * ((fxx + fyy) + 1j * (fxy - fyx))
    return 0.5 * (levi + levi.conj().T)


def check_toric_psh(potential: ToricPotential, region: GridRegion,
                    tau: Optional[float] = None) -> Dict[str, Any]:
    """Compare plurisubharmonicity of log sqrt(H) with the Ricci sign on a grid.

    log sqrt(H) is a torus-invariant function on (C*)^n; it is PSH iff its
    restriction to the orbit space is convex iff Ric <= 0.
    """
    n = potential.n

    def half_log_H(real: np.ndarray) -> float:
        return 0.5 * log_H(potential, real[:n])

    min_levi = np.inf
    min_real = np.inf
    max_ricci = -np.inf
    for node in region.nodes():
        levi = levi_form(half_log_H, node.astype(complex))
        min_levi = min(min_levi, float(np.linalg.eigvalsh(levi)[0]))
        real_hess = central_hessian(lambda y: 0.5 * log_H(potential, y), node)
        min_real = min(min_real, float(np.linalg.eigvalsh(0.5 * (real_hess + real_hess.T))[0]))
        max_ricci = max(max_ricci, float(ricci_form(potential, node).eigenvalues[-1]))

    threshold = 1e-6 if tau is None else float(tau)
    psh = min_levi >= -threshold
    convex = min_real >= -threshold
    ricci_nonpositive = max_ricci <= threshold
    return {
        "psh": bool(psh),
        "convex": bool(convex),
        "ricci_nonpositive": bool(ricci_nonpositive),
        "consistent": bool(psh == convex == ricci_nonpositive),
        "min_levi_eigenvalue": min_levi,
        "min_convexity_eigenvalue": min_real,
        "max_ricci_eigenvalue": max_ricci,
        "threshold": threshold,
    }

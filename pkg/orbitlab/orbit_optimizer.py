"""Critical torus orbits of the volume functional.

A critical point of Vol on the orbit space is a minimal Lagrangian torus.
We minimize phi = -log Vol by damped Newton; phi is strictly convex when
Ric > 0, and has no minimizer when Ric <= 0, which the search reports
instead of inventing one.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from orbitlab.errors import NotKaehler
from orbitlab.finite_differences import EPS, central_gradient, central_hessian, default_steps, richardson_extrapolate
from orbitlab.models import (
    BoundaryDecayResult,
    CriticalOrbitResult,
    GridRegion,
    OrbitStatus,
    UniquenessResult,
    as_list,
    pairwise_max_distance,
)
from orbitlab.potentials import ToricPotential
from orbitlab.toric_calculus import map_ordered, orbit_log_volume

logger = logging.getLogger(__name__)

ARMIJO_C1 = 1e-4
BACKTRACK = 0.5
MIN_STEP = 1e-12


def phi(potential: ToricPotential, x) -> float:
    """-log Vol of the orbit over x."""
    return -orbit_log_volume(potential, x)


def phi_derivatives(potential: ToricPotential, x: np.ndarray,
                    step_scale: float = 1.0) -> Tuple[float, np.ndarray, np.ndarray]:
    """phi, its gradient and Hessian at x by central differences.

    The gradient is Richardson-extrapolated from steps h and h/2, so its
    O(h^2) truncation error does not hide a residual slope at the solution.
    """
    func = lambda y: phi(potential, y)
    steps = step_scale * default_steps(x)
    value = func(x)
    gradient = richardson_extrapolate(
        [central_gradient(func, x, steps), central_gradient(func, x, steps / 2.0)], p=2, r=2.0,
    )
    hessian = central_hessian(func, x, steps, center_value=value)
    return value, np.atleast_1d(gradient), 0.5 * (hessian + hessian.T)


def hessian_noise_floor(value: float, x: np.ndarray, step_scale: float = 1.0) -> float:
    """Rounding noise of the central-difference Hessian of phi: 10 eps (1 + |phi|) / h^2."""
    h = float(np.min(step_scale * default_steps(x)))
    return 10.0 * EPS * (1.0 + abs(value)) / h ** 2


def _descent_direction(gradient: np.ndarray, hessian: np.ndarray, tau: float) -> Tuple[np.ndarray, bool]:
    """Newton direction when the Hessian is positive definite, steepest descent otherwise."""
    eigenvalues = np.linalg.eigvalsh(hessian)
    if eigenvalues[0] > tau:
        return -np.linalg.solve(hessian, gradient), True
    return -gradient, False


def _safe_phi(potential: ToricPotential, x: np.ndarray) -> Optional[float]:
    try:
        value = phi(potential, x)
    except NotKaehler:
        return None
    return value if np.isfinite(value) else None


def find_critical_orbit(potential: ToricPotential, x0, tol: float = 1e-10, max_iter: int = 100,
                        divergence_radius: float = 50.0, tau: float = 1e-8) -> CriticalOrbitResult:
    """Damped Newton on phi = -log Vol with Armijo backtracking.

    Stops when |grad phi| < tol or after max_iter iterations. A stationary
    point counts as converged only if the phi-Hessian is positive definite
    (a strict local maximum of Vol); an identically vanishing Hessian is
    reported as degenerate. Iterates leaving the ball of radius
    divergence_radius are reported as unbounded.

    Eigenvalue tests compare against max(tau, hessian_noise_floor(phi, x)).
    """
    x = potential.check_point(x0).copy()
    value, gradient, hessian = phi_derivatives(potential, x)
    history = [value]
    status = OrbitStatus.MAX_ITERATIONS
    iterations = 0

    while iterations < max_iter:
        grad_norm = float(np.linalg.norm(gradient))
        threshold = max(tau, hessian_noise_floor(value, x))
        if grad_norm < tol:
            smallest = float(np.linalg.eigvalsh(hessian)[0])
            if smallest > threshold:
                status = OrbitStatus.MAXIMUM
            elif float(np.max(np.abs(hessian))) <= threshold:
                status = OrbitStatus.DEGENERATE
            else:
                status = OrbitStatus.NOT_A_MAXIMUM
            break

        direction, newton = _descent_direction(gradient, hessian, threshold)
        slope = float(gradient @ direction)
        alpha = 1.0
        while alpha >= MIN_STEP:
            trial = x + alpha * direction
            trial_value = _safe_phi(potential, trial)
            # iterates outside the Kähler domain are pulled back by halving
            if trial_value is not None and trial_value <= value + ARMIJO_C1 * alpha * slope:
                break
            alpha *= BACKTRACK
        else:
            logger.debug(f"Line search stalled at x={as_list(x)}")
            break

        x = trial
        iterations += 1
        value, gradient, hessian = phi_derivatives(potential, x)
        history.append(value)
        logger.debug(
            f"Newton iteration {iterations}: phi={value:.12g} |grad|={np.linalg.norm(gradient):.3e} "
            f"alpha={alpha:g} {'newton' if newton else 'steepest'}"
        )
        if np.linalg.norm(x) > divergence_radius:
            status = OrbitStatus.UNBOUNDED
            break

    result = CriticalOrbitResult(
        x_star=x,
        grad_norm=float(np.linalg.norm(gradient)),
        newton_iterations=iterations,
        hessian_at_solution=hessian,
        converged=status is OrbitStatus.MAXIMUM,
        status=status,
        phi_history=history,
    )
    if result.converged:
        logger.info(f"Critical orbit of {potential.kind} at x={as_list(x)} after {iterations} iterations")
    else:
        logger.info(f"No interior maximum of Vol for {potential.kind}: {status.value} after {iterations} iterations")
    return result


def multistart_uniqueness(potential: ToricPotential, starts: Sequence, tol: float = 1e-10,
                          max_iter: int = 100, workers: int = 1) -> UniquenessResult:
    """Run find_critical_orbit from every start and compare the solutions.

    unique means every run converged and all solutions are within 10 * tol
    of each other.
    """
    starts = [np.asarray(s, dtype=float) for s in starts]
    if len(starts) < 2:
        raise ValueError(f"Multistart needs at least 2 starts, got {len(starts)}")

    results = map_ordered(
        lambda start: find_critical_orbit(potential, start, tol=tol, max_iter=max_iter), starts, workers,
    )

    spread = pairwise_max_distance([r.x_star for r in results])
    unique = all(r.converged for r in results) and spread < 10.0 * tol
    return UniquenessResult(unique=unique, spread=spread, results=results)


def seeded_starts(n: int, count: int, seed: int, half_width: float = 1.0) -> List[np.ndarray]:
    """count uniform starts in [-half_width, half_width]^n."""
    rng = np.random.default_rng(seed)
    return [rng.uniform(-half_width, half_width, n) for _ in range(count)]


def sphere_points(n: int, radius: float, samples: int, seed: int = 0) -> np.ndarray:
    """Points on the sphere |x| = radius.

    n = 1 gives the two points +-radius, n = 2 equally spaced angles; higher
    dimensions get the coordinate and diagonal directions plus seeded
    Gaussian directions.
    """
    if n == 1:
        return np.array([[-radius], [radius]])
    if n == 2:
        angles = 2.0 * np.pi * np.arange(samples) / samples
        return radius * np.column_stack((np.cos(angles), np.sin(angles)))
    directions = [np.eye(n), -np.eye(n), np.ones((1, n)) / np.sqrt(n), -np.ones((1, n)) / np.sqrt(n)]
    rng = np.random.default_rng(seed)
    gaussian = rng.standard_normal((samples, n))
    directions.append(gaussian / np.linalg.norm(gaussian, axis=1, keepdims=True))
    return radius * np.vstack(directions)


def boundary_decay_check(potential: ToricPotential, radii: Sequence[float], samples_per_sphere: int = 64,
                         relative_floor: float = 1e-4, seed: int = 0) -> BoundaryDecayResult:
    """Sup of Vol over spheres of increasing radius, and whether it goes to zero.

    decays_to_zero requires the sup profile to decrease strictly over the
    tail (second half of the radii) and the last sup to fall below
    relative_floor times the sup at the smallest radius.
    """
    radii = [float(r) for r in radii]
    if not radii or radii[0] <= 0 or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError(f"Radii must be positive and increasing, got {radii}")

    profile = []
    for radius in radii:
        log_vols = [orbit_log_volume(potential, point)
                    for point in sphere_points(potential.n, radius, samples_per_sphere, seed)]
        profile.append(float(np.exp(max(log_vols))))

    floor = relative_floor * profile[0]
    tail = profile[len(profile) // 2:] if len(profile) > 1 else profile
    monotone = all(b < a for a, b in zip(tail, tail[1:])) and (len(profile) == 1 or profile[-1] < profile[0])
    decays = bool(monotone and profile[-1] < floor)
    logger.info(f"Boundary decay for {potential.kind}: sup Vol {profile[0]:.3e} -> {profile[-1]:.3e}, decays={decays}")
    return BoundaryDecayResult(decays_to_zero=decays, radii=radii, sup_profile=profile, floor=floor)


def grid_search_maximum(potential: ToricPotential, region: GridRegion, refinements: int = 3,
                        shrink: float = 0.1, refine_count: int = 11) -> Tuple[np.ndarray, float]:
    """Brute-force argmax of log Vol over a grid, then over shrinking boxes around the best node.

    Each refinement box is shrink times the previous one, sampled with
    refine_count nodes per axis.
    """
    best_x, best_value = None, -np.inf
    current = region
    for round_index in range(refinements + 1):
        for node in current.nodes():
            value = orbit_log_volume(potential, node)
            if value > best_value:
                best_x, best_value = node, value
        widths = (np.asarray(current.hi) - np.asarray(current.lo)) * shrink
        current = GridRegion(
            lo=best_x - widths / 2.0,
            hi=best_x + widths / 2.0,
            counts=[refine_count] * potential.n,
        )
        logger.debug(f"Grid search round {round_index}: best x={as_list(best_x)} log Vol={best_value:.12g}")
    return best_x, float(best_value)

"""CP^3 = P(gl(2,C)) as a compactification of PGL(2,C), with the Fubini-Study metric.

Points are nonzero 2x2 complex matrices up to scale. The right SU(2)-orbit
of p has fundamental tangent vectors u_k = p X_k. On homogeneous
representatives the Fubini-Study Hermitian form is

    h(u, v) = (scale / 2) * (<u,v><p,p> - <u,p><p,v>) / <p,p>^2,

which is (scale/2) i ddbar log|p|^2, the normalization of the toric
Fubini-Study potential. The J-volume density of the orbit is
sqrt(det h(u_j, u_k)) and the Riemannian density is sqrt(det Re h(u_j, u_k));
both are taken against the normalized Haar measure, so the orbit volumes
omit the constant volume of PU(2).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.linalg import expm

from orbitlab.convexity_lab import convexity_of_values, second_differences
from orbitlab.errors import SingularPath, ZeroPoint
from orbitlab.models import ConvexityReport, ConvexityVerdict, as_list
from orbitlab.su2.group import IDENTITY, HaarQuadrature, SU2LieBasis

logger = logging.getLogger(__name__)


@dataclass
class ProjectivePoint:
    """A point of CP^3 given by a nonzero 2x2 complex matrix (homogeneous coordinates in C^4, row-major)."""
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex).reshape(2, 2)
        if not np.linalg.norm(self.matrix) > 0.0:
            raise ZeroPoint("The zero matrix is not a point of CP^3")


def _gram_batch(matrices: np.ndarray, basis: SU2LieBasis, scale: float) -> np.ndarray:
    """h(u_j, u_k) for a stack of representatives, shape (N, 3, 3)."""
    p = np.asarray(matrices, dtype=complex).reshape(-1, 2, 2)
    tangent = np.einsum("nab,kbc->nkac", p, basis.matrices)
    norm2 = np.einsum("nab,nab->n", p.conj(), p).real
    inner = np.einsum("njab,nkab->njk", tangent.conj(), tangent)
    with_p = np.einsum("nkab,nab->nk", tangent.conj(), p)
    numerator = inner * norm2[:, None, None] - with_p[:, :, None] * with_p.conj()[:, None, :]
    gram = 0.5 * scale * numerator / norm2[:, None, None] ** 2
    return 0.5 * (gram + np.conj(np.swapaxes(gram, 1, 2)))


def _as_point(p) -> ProjectivePoint:
    return p if isinstance(p, ProjectivePoint) else ProjectivePoint(p)


def fs_tangent_gram(p, basis: SU2LieBasis, scale: float = 1.0) -> np.ndarray:
    """Hermitian 3x3 Gram matrix of the orbit's fundamental vectors at p."""
    return _gram_batch(_as_point(p).matrix[None], basis, scale)[0]


def _sqrt_det(dets: np.ndarray) -> np.ndarray:
    return np.sqrt(np.clip(np.real(dets), 0.0, None))


def jvol_density(p, basis: SU2LieBasis, scale: float = 1.0) -> float:
    """sqrt(det h(u_j, u_k)); zero on rank-one matrices."""
    return float(_sqrt_det(np.linalg.det(fs_tangent_gram(p, basis, scale))))


def riemannian_density(p, basis: SU2LieBasis, scale: float = 1.0) -> float:
    """sqrt(det Re h(u_j, u_k)); never below jvol_density."""
    return float(_sqrt_det(np.linalg.det(fs_tangent_gram(p, basis, scale).real)))


def orbit_kaehler_form(p, basis: SU2LieBasis, scale: float = 1.0) -> np.ndarray:
    """omega(u_j, u_k) = Im h(u_j, u_k); zero exactly when the orbit is Lagrangian."""
    return fs_tangent_gram(p, basis, scale).imag


@dataclass
class OrbitVolumes:
    """J-volume and volume of one right SU(2)-orbit."""
    vol_j: float
    vol: float
    density_rel_stddev: float
    omega_norm: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "vol_J": self.vol_j,
            "vol": self.vol,
            "density_rel_stddev": self.density_rel_stddev,
            "omega_norm": self.omega_norm,
        }


def orbit_volumes(p, basis: SU2LieBasis, scale: float, quadrature: HaarQuadrature) -> OrbitVolumes:
    """Integrate both densities over the orbit p.SU(2) with the Haar quadrature."""
    point = _as_point(p)
    grams = _gram_batch(point.matrix[None] @ quadrature.matrices, basis, scale)
    j_densities = _sqrt_det(np.linalg.det(grams))
    r_densities = _sqrt_det(np.linalg.det(grams.real))

    vol_j = quadrature.integrate_values(j_densities)
    vol = quadrature.integrate_values(r_densities)
    variance = quadrature.integrate_values((j_densities - vol_j) ** 2)
    rel_stddev = math.sqrt(max(variance, 0.0)) / vol_j if vol_j > 0 else 0.0
    omega_norm = float(np.linalg.norm(orbit_kaehler_form(point, basis, scale)))
    return OrbitVolumes(vol_j=vol_j, vol=vol, density_rel_stddev=rel_stddev, omega_norm=omega_norm)


def geodesic_point(X: np.ndarray, t: float, k0: Optional[np.ndarray] = None) -> np.ndarray:
    """k0 exp(i t X): the geodesic through [k0] generated by J X."""
    start = IDENTITY if k0 is None else np.asarray(k0, dtype=complex)
    return start @ expm(1j * t * np.asarray(X, dtype=complex))


def geodesic_path(X: np.ndarray, t_grid: Sequence[float], k0: Optional[np.ndarray] = None) -> List[np.ndarray]:
    return [geodesic_point(X, float(t), k0) for t in t_grid]


def _check_uniform(t_grid: Sequence[float]) -> float:
    t = np.asarray(t_grid, dtype=float)
    if t.size < 5:
        raise ValueError(f"t grid needs at least 5 points, got {t.size}")
    steps = np.diff(t)
    if np.any(steps <= 0) or np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, abs(steps[0])):
        raise ValueError("t grid must be uniform and increasing")
    return float(steps[0])


@dataclass
class ProfileRow:
    t: float
    vol_j: float
    vol: float
    defect: float
    second_diff_neg_log_vol_j: Optional[float]
    omega_norm: float
    density_rel_stddev: float


@dataclass
class GeodesicProfile:
    """Orbit volumes along a geodesic of PGL(2,C)/PU(2)."""
    rows: List[ProfileRow]
    convexity: ConvexityReport
    resolution: tuple
    scale: float
    k0: Optional[List[List[float]]] = None

    @property
    def argmax_t(self) -> float:
        return max(self.rows, key=lambda row: row.vol_j).t

    @property
    def defect_at_argmax(self) -> float:
        return max(self.rows, key=lambda row: row.vol_j).defect

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(row, name) for row in self.rows], dtype=float)

    def summary(self) -> Dict[str, Any]:
        return {
            "argmax_t": self.argmax_t,
            "defect_at_argmax": self.defect_at_argmax,
            "convexity_verdict": self.convexity.verdict.value,
            "min_second_difference": self.convexity.min_second_difference,
            "max_density_rel_stddev": float(self.column("density_rel_stddev").max()),
            "quadrature_resolution": list(self.resolution),
            "lambda": self.scale,
            "k0": self.k0,
        }


def geodesic_profile(X: np.ndarray, t_grid: Sequence[float], scale: float, quadrature: HaarQuadrature,
                     basis: Optional[SU2LieBasis] = None, k0: Optional[np.ndarray] = None) -> GeodesicProfile:
    """vol_J, vol, the Lagrangian defect and second differences of -log vol_J along k0 exp(i t X)."""
    X = np.asarray(X, dtype=complex)
    if not np.linalg.norm(X) > 0.0:
        raise ValueError("Geodesic generator X must be nonzero")
    step = _check_uniform(t_grid)
    basis = SU2LieBasis() if basis is None else basis

    volumes = [orbit_volumes(p, basis, scale, quadrature) for p in geodesic_path(X, t_grid, k0)]
    neg_log = np.array([-math.log(v.vol_j) for v in volumes])
    diffs = second_differences(neg_log, step)

    rows = []
    for i, (t, v) in enumerate(zip(t_grid, volumes)):
        rows.append(ProfileRow(
            t=float(t),
            vol_j=v.vol_j,
            vol=v.vol,
            defect=v.vol - v.vol_j,
            second_diff_neg_log_vol_j=float(diffs[i - 1]) if 0 < i < len(volumes) - 1 else None,
            omega_norm=v.omega_norm,
            density_rel_stddev=v.density_rel_stddev,
        ))
    report = convexity_of_values("negLogVolJ", neg_log, step)
    logger.info(f"Geodesic profile over {len(rows)} points: -log vol_J is {report.verdict.value}")
    return GeodesicProfile(
        rows=rows,
        convexity=report,
        resolution=quadrature.resolution,
        scale=scale,
        k0=None if k0 is None else [[str(complex(v)) for v in row] for row in np.asarray(k0)],
    )


def geodesic_coverage(directions: Sequence[np.ndarray], translates: Sequence[Optional[np.ndarray]],
                      t_grid: Sequence[float], scale: float, quadrature: HaarQuadrature) -> Dict[str, Any]:
    """Fraction of sampled geodesics k0 exp(i t X) along which -log vol_J is strictly convex."""
    basis = SU2LieBasis()
    entries = []
    for k_index, k0 in enumerate(translates):
        for d_index, X in enumerate(directions):
            profile = geodesic_profile(X, t_grid, scale, quadrature, basis, k0)
            entries.append({
                "direction": d_index,
                "translate": k_index,
                "verdict": profile.convexity.verdict.value,
                "min_second_difference": profile.convexity.min_second_difference,
            })
    strict = sum(e["verdict"] == ConvexityVerdict.STRICTLY_CONVEX.value for e in entries)
    return {
        "geodesics": len(entries),
        "strictly_convex": strict,
        "coverage": strict / len(entries) if entries else 0.0,
        "entries": entries,
    }


def _frobenius_log(m: np.ndarray) -> np.ndarray:
    return np.log(np.sum(np.abs(m) ** 2, axis=(-2, -1)))


def _first_row_log(m: np.ndarray) -> np.ndarray:
    return np.log(np.abs(m[..., 0, 0]) ** 2 + np.abs(m[..., 0, 1]) ** 2)


def _first_column_log(m: np.ndarray) -> np.ndarray:
    return np.log(np.abs(m[..., 0, 0]) ** 2 + np.abs(m[..., 1, 0]) ** 2)


# PSH functions on GL(2,C); frobenius_log and first_row_log are right-U(2)-invariant
PSH_INTEGRANDS = {
    "frobenius_log": _frobenius_log,
    "first_row_log": _first_row_log,
    "first_column_log": _first_column_log,
}


@dataclass
class LassalleResult:
    """Haar averages F(k) = int f(k g) dmu along a path, with their convexity."""
    integrand: str
    t: List[float]
    values: List[float]
    report: ConvexityReport
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"integrand": self.integrand, "t": self.t, "values": self.values, "report": self.report.to_dict()}


def lassalle_average(integrand: str, t_grid: Sequence[float], path: Sequence[np.ndarray],
                     quadrature: HaarQuadrature) -> LassalleResult:
    """Average a PSH function over right SU(2)-orbits along a path and test convexity."""
    if integrand not in PSH_INTEGRANDS:
        raise ValueError(f"Unknown integrand {integrand!r}; expected one of {sorted(PSH_INTEGRANDS)}")
    if len(path) != len(t_grid):
        raise ValueError("Path and t grid must have the same length")
    step = _check_uniform(t_grid)
    f = PSH_INTEGRANDS[integrand]

    values = []
    for t, k in zip(t_grid, path):
        k = np.asarray(k, dtype=complex)
        if abs(np.linalg.det(k)) <= 1e-14 * max(np.linalg.norm(k) ** 2, 1e-300):
            raise SingularPath(f"Path matrix is singular at t={t}", t=float(t))
        values.append(quadrature.integrate_values(f(k[None] @ quadrature.matrices)))

    report = convexity_of_values(integrand, values, step)
    return LassalleResult(integrand=integrand, t=as_list(t_grid), values=as_list(values), report=report)

"""SU(2) elements, its Lie algebra, and Haar quadrature by Euler angles."""
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from orbitlab.errors import ResolutionTooSmall

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

IDENTITY = np.eye(2, dtype=complex)


def quaternion_to_matrix(q) -> np.ndarray:
    """q0*I + q1*i*sigma1 + q2*i*sigma2 + q3*i*sigma3; works on (..., 4) arrays."""
    q = np.asarray(q, dtype=float)
    m = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = q[..., 0] + 1j * q[..., 3]
    m[..., 0, 1] = q[..., 2] + 1j * q[..., 1]
    m[..., 1, 0] = -q[..., 2] + 1j * q[..., 1]
    m[..., 1, 1] = q[..., 0] - 1j * q[..., 3]
    return m


def matrix_to_quaternion(m) -> np.ndarray:
    """Inverse of quaternion_to_matrix on special unitary matrices."""
    m = np.asarray(m, dtype=complex)
    return np.stack((m[..., 0, 0].real, m[..., 0, 1].imag, m[..., 0, 1].real, m[..., 0, 0].imag), axis=-1)


def euler_to_matrix(phi, theta, psi) -> np.ndarray:
    """exp(-i phi sigma3/2) exp(-i theta sigma2/2) exp(-i psi sigma3/2), broadcasting over angles."""
    phi, theta, psi = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (phi, theta, psi)))
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    m = np.empty(phi.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = c * np.exp(-0.5j * (phi + psi))
    m[..., 0, 1] = -s * np.exp(-0.5j * (phi - psi))
    m[..., 1, 0] = s * np.exp(0.5j * (phi - psi))
    m[..., 1, 1] = c * np.exp(0.5j * (phi + psi))
    return m


@dataclass(frozen=True)
class SU2Element:
    """A unit quaternion (q0, q1, q2, q3) viewed as a special unitary 2x2 matrix."""
    q0: float
    q1: float
    q2: float
    q3: float

    def __post_init__(self):
        norm = math.sqrt(self.q0 ** 2 + self.q1 ** 2 + self.q2 ** 2 + self.q3 ** 2)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"SU(2) quaternion must have norm 1, has norm {norm}")

    @property
    def quaternion(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3])

    @property
    def matrix(self) -> np.ndarray:
        return quaternion_to_matrix(self.quaternion)

    @classmethod
    def from_matrix(cls, m) -> "SU2Element":
        return cls(*(float(v) for v in matrix_to_quaternion(m)))

    @classmethod
    def from_euler(cls, phi: float, theta: float, psi: float) -> "SU2Element":
        return cls.from_matrix(euler_to_matrix(phi, theta, psi))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "SU2Element":
        """Haar-random element: a normalized Gaussian quaternion is uniform on S^3."""
        q = rng.standard_normal(4)
        q /= np.linalg.norm(q)
        return cls(*(float(v) for v in q))


class SU2LieBasis:
    """The basis X_k = -i sigma_k / 2 of su(2), with [X_1, X_2] = X_3 cyclically."""

    def __init__(self):
        self.matrices = -0.5j * PAULI

    def __getitem__(self, k: int) -> np.ndarray:
        return self.matrices[k]

    def __len__(self) -> int:
        return 3

    def element(self, coefficients) -> np.ndarray:
        """sum_k c_k X_k for real coefficients."""
        return np.einsum("k,kij->ij", np.asarray(coefficients, dtype=float), self.matrices)

    def structure_residual(self) -> float:
        """Largest deviation from [X_1,X_2]=X_3, [X_2,X_3]=X_1, [X_3,X_1]=X_2."""
        x = self.matrices
        residual = 0.0
        for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            commutator = x[a] @ x[b] - x[b] @ x[a]
            residual = max(residual, float(np.max(np.abs(commutator - x[c]))))
        return residual


@dataclass
class HaarQuadrature:
    """Product rule for normalized Haar measure on SU(2).

    Gauss-Legendre in cos(theta) (absorbing the sin(theta) density),
    periodic trapezoid in phi over [0, 2 pi) and psi over [0, 4 pi).
    """
    quaternions: np.ndarray
    weights: np.ndarray
    resolution: Tuple[int, int, int]

    def __post_init__(self):
        self.matrices = quaternion_to_matrix(self.quaternions)

    def __len__(self) -> int:
        return int(self.weights.size)

    def nodes(self):
        """Nodes as SU2Element objects."""
        return [SU2Element(*(float(v) for v in q)) for q in self.quaternions]

    def integrate_values(self, values) -> complex:
        """sum_g w_g v_g with an exactly rounded, order-independent sum."""
        values = np.asarray(values)
        real = math.fsum(self.weights * np.real(values))
        if np.iscomplexobj(values):
            return complex(real, math.fsum(self.weights * np.imag(values)))
        return real

    def integrate(self, func: Callable[[np.ndarray], complex]) -> complex:
        """Integrate a function of the 2x2 matrix of g."""
        return self.integrate_values([func(m) for m in self.matrices])

    def refined(self, factor: int = 2) -> "HaarQuadrature":
        n_theta, n_phi, n_psi = self.resolution
        return build_haar_quadrature(factor * n_theta, factor * n_phi, factor * n_psi)


def build_haar_quadrature(n_theta: int = 24, n_phi: int = 24, n_psi: int = 48) -> HaarQuadrature:
    """Euler-angle product quadrature with total mass 1."""
    if min(n_theta, n_phi, n_psi) < 4:
        raise ResolutionTooSmall(
            f"Haar quadrature needs at least 4 nodes per angle, got ({n_theta}, {n_phi}, {n_psi})",
            resolution=[n_theta, n_phi, n_psi],
        )
    u, u_weights = np.polynomial.legendre.leggauss(n_theta)
    theta = np.arccos(u)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    psi = 4.0 * np.pi * np.arange(n_psi) / n_psi

    grid_phi, grid_theta, grid_psi = np.meshgrid(phi, theta, psi, indexing="ij")
    weights = np.broadcast_to(u_weights[None, :, None], grid_theta.shape).reshape(-1).copy()
    weights /= math.fsum(weights)
    # the last weight absorbs the rounding so the weights sum to 1
    weights[-1] = 1.0 - math.fsum(weights[:-1])

    matrices = euler_to_matrix(grid_phi, grid_theta, grid_psi).reshape(-1, 2, 2)
    return HaarQuadrature(
        quaternions=matrix_to_quaternion(matrices),
        weights=weights,
        resolution=(n_theta, n_phi, n_psi),
    )


def random_unitary(rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """A Haar-random element of U(2): random SU(2) times a random phase."""
    rng = np.random.default_rng() if rng is None else rng
    phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
    return phase * SU2Element.random(rng).matrix

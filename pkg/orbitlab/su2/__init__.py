"""SU(2), its Haar measure, and right SU(2)-orbits in CP^3."""
from orbitlab.su2.group import (
    HaarQuadrature,
    SU2Element,
    SU2LieBasis,
    build_haar_quadrature,
    euler_to_matrix,
    random_unitary,
)
from orbitlab.su2.compactification import (
    PSH_INTEGRANDS,
    GeodesicProfile,
    LassalleResult,
    OrbitVolumes,
    ProjectivePoint,
    fs_tangent_gram,
    geodesic_coverage,
    geodesic_path,
    geodesic_point,
    geodesic_profile,
    jvol_density,
    lassalle_average,
    orbit_kaehler_form,
    orbit_volumes,
    riemannian_density,
)

__all__ = [
    'HaarQuadrature',
    'SU2Element',
    'SU2LieBasis',
    'build_haar_quadrature',
    'euler_to_matrix',
    'random_unitary',
    'PSH_INTEGRANDS',
    'GeodesicProfile',
    'LassalleResult',
    'OrbitVolumes',
    'ProjectivePoint',
    'fs_tangent_gram',
    'geodesic_coverage',
    'geodesic_path',
    'geodesic_point',
    'geodesic_profile',
    'jvol_density',
    'lassalle_average',
    'orbit_kaehler_form',
    'orbit_volumes',
    'riemannian_density',
]

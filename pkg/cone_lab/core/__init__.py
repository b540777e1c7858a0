"""Core numerics: sphere geometry, cone nets, perturbations, replacements and decay."""

from .battery import BatteryRunner, BatteryTracker, resolve_threads
from .certificate import componentwise_certificate, full_length_certificate
from .cone_net import (
    ConeNet,
    VertexMap,
    apply_vertex_map,
    build_cube,
    build_plane,
    build_T,
    build_union,
    build_Y,
    embed_orthogonal,
    length_gradient,
    net_components,
    net_density,
    net_length,
    normalized_hausdorff_distance,
    standard_decompose,
    validate_minimal_looking,
)
from .decay import (
    DensityProfile,
    GaugeSpec,
    alpha_to_a,
    check_near_monotonicity,
    decay_bound,
    log_gauge_decay,
    split_decay_bound,
    synthesize_profile,
    weak_decay_envelope,
)
from .harmonic import SectorProfile, area_saving, build_replacement, random_sector_profile, sine_expand
from .perturbation import BumpSpec, alpha_plus, push_deformation_area_gain, vertex_deviation
from .sphere import SphericalTriangle, geodesic_distance, geodesic_point, tangent_at, unit_vector, vertex_angle
from .straighten import default_tau1, energy_diagnostics, parameterize, straighten, to_sector_profile

__all__ = [
    'BatteryRunner', 'BatteryTracker', 'resolve_threads',
    'componentwise_certificate', 'full_length_certificate',
    'ConeNet', 'VertexMap', 'apply_vertex_map', 'build_cube', 'build_plane', 'build_T', 'build_union',
    'build_Y', 'embed_orthogonal', 'length_gradient', 'net_components', 'net_density', 'net_length',
    'normalized_hausdorff_distance', 'standard_decompose', 'validate_minimal_looking',
    'DensityProfile', 'GaugeSpec', 'alpha_to_a', 'check_near_monotonicity', 'decay_bound',
    'log_gauge_decay', 'split_decay_bound', 'synthesize_profile', 'weak_decay_envelope',
    'SectorProfile', 'area_saving', 'build_replacement', 'random_sector_profile', 'sine_expand',
    'BumpSpec', 'alpha_plus', 'push_deformation_area_gain', 'vertex_deviation',
    'SphericalTriangle', 'geodesic_distance', 'geodesic_point', 'tangent_at', 'unit_vector', 'vertex_angle',
    'default_tau1', 'energy_diagnostics', 'parameterize', 'straighten', 'to_sector_profile',
]

"""Spherical-cap discrepancy of permutation orbits.

Exact empty-cap thresholds and discrepancies for permutation orbits on the
(q-2)-sphere, the regular/maximal/normal configuration families, coordinate
marginal laws, permutohedron volume ratios, and seeded Monte Carlo
experiments for the coverage, hypothesis-test, and subindependence
inequalities.
"""

from .capfun import (
    CapAreaQuery,
    cap_area,
    cap_area_gaussian_bound,
    cap_area_wendel_bound,
    lemma21_diagnostic,
    log_gamma,
    normal_cdf,
    normal_quantile,
    regularized_incomplete_beta,
)
from .discrepancy import (
    CapSpec,
    DiscrepancyReport,
    cap_fraction,
    empty_cap_certificate,
    lecd_report,
    marginal_distance,
    nscd_lower_bound,
    orbit_threshold,
    orbit_threshold_oracle,
)
from .families import (
    FamilyTag,
    common_norm,
    configuration,
    maximal,
    maximal_norm_bounds,
    normal,
    quantile_tail_diagnostic,
    regular,
    verify_maximal_optimality,
)
from .geometry import (
    CenteredConfiguration,
    Configuration,
    center_project,
    extreme_ray,
    helmert_matrix,
    orbit_enumerate,
    simplex_vertex,
)
from .marginals import (
    DiscreteLaw,
    ks_distance,
    orbit_marginal,
    scaled_marginal_ks,
    sphere_marginal_law,
    stochastic_order_check,
    w_statistics,
)
from .sampling import (
    CoverageSpec,
    McEstimate,
    ape_coverage,
    ball_sample,
    coverage_spec,
    hypothesis_test,
    slepian_halfspace_check,
    sphere_sample,
    subindependence_check,
)
from .volumes import (
    VolumeReport,
    ball_volume,
    cube_ratio,
    hull_contains,
    mc_volume_ratio,
    regular_ratio,
    regular_volume,
    volume_report,
)

__version__ = "0.1.0"

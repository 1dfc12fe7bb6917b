"""Placement of multiple aerial base stations for user coverage and power efficiency."""

from aerialbs.channel import (
    EnvParams,
    altitude_for_radius,
    coverage_radius,
    los_probability,
    path_loss,
    path_loss_angle,
    total_power,
    transmit_power,
)
from aerialbs.geometry import (
    ConvexRegion,
    Disk,
    HalfPlane,
    chebyshev_disk,
    constrained_one_center,
    disk_pair_intersections,
    intersect_halfplanes,
    inward_offset,
    min_enclosing_disk,
    voronoi_cell,
)
from aerialbs.scenarios import (
    ScenarioConfig,
    UserSet,
    gen_hpp,
    gen_ipp,
    gen_pcp,
    generate_users,
    perturb_uli,
)
from aerialbs.coverage import (
    CoverageSolution,
    eliminate_regions,
    gr_candidate_regions,
    max_coverage_disk,
)
from aerialbs.planners import (
    PLANNERS,
    AerialBS,
    Deployment,
    PlannerConfig,
    kmeans_partition,
    plan,
    plan_cpt,
    plan_sd_gr,
    plan_sd_km,
    plan_sd_kmvr,
    robustify,
)
from aerialbs.evaluation import (
    TrialMetrics,
    coverage_probability,
    run_sweep,
    run_trial,
)

__version__ = "0.1.0"

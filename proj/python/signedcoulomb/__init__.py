"""Signed Coulomb particle system: simulation and verification toolkit."""

from ._core import (  # noqa: F401
    BesselResult,
    CollisionEvent,
    Configuration,
    EnsembleReport,
    HittingEstimate,
    OdeCollision,
    OdeRunResult,
    OdeTermination,
    SdeRunOptions,
    SdeRunResult,
    SdeTermination,
    SignVector,
    SimParams,
    ValidationReport,
    Vec2,
    associated_partition,
    bessel_dimension,
    cluster_separation,
    derive_seed,
    drift,
    energy,
    good_set_constant,
    hitting_probability,
    in_good_set,
    inverse_sqrt_time_integral,
    kernel,
    local_dispersion,
    local_mean,
    parse_config_text,
    radial_power,
    run_ode,
    run_sde,
    serialize_config,
    sign_extremes,
    simulate_sqb0,
    split_cluster,
    validate,
    verify_collision_count,
    verify_dispersion_law,
    verify_simple_collisions,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

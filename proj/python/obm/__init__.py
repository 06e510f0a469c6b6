"""Oscillating Brownian motion with drift: simulation, drift estimation and limit laws."""

from ._core import (
    Error,
    ModelParams,
    arcsine_cdf,
    arcsine_density,
    chi2_2dof_quantile,
    classify_regime,
    ergodic_limit_sd,
    ergodic_occupation_limit,
    estimate_drift,
    invariant_density,
    kde,
    ks_distance,
    n0_beta_density,
    n0_beta_marginal_cdf,
    n0_beta_marginal_density,
    n0_joint_density,
    n1_minus_cdf,
    n1_minus_density,
    path_stats,
    run_experiment,
    scale_function,
    simulate_path,
    speed_density,
    split_seed,
    t1_divergence_probability,
    transient_ratio_density,
    wilk_test,
)

__all__ = [name for name in dir() if not name.startswith("_")]

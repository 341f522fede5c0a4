"""Point-vortex dynamics on a catenoid."""

import json as _json

from ._core import (
    CollisionError,
    ConfigError,
    InadmissibleError,
    NoRootError,
    PerturbationTooLarge,
    StepFailure,
    UnsupportedError,
    VortexError,
    WindowEmpty,
    chord_distance,
    conformal_factor,
    curvature_gradient,
    gaussian_curvature,
    hamiltonian,
    momentum,
    momentum_density,
    omega_from_curvature,
    omega_symmetric,
    reduced_constants,
    solve_V,
    stability,
    v_star,
    vector_field,
)

__all__ = [
    "CollisionError",
    "ConfigError",
    "InadmissibleError",
    "NoRootError",
    "PerturbationTooLarge",
    "StepFailure",
    "UnsupportedError",
    "VortexError",
    "WindowEmpty",
    "chord_distance",
    "conformal_factor",
    "curvature_gradient",
    "gaussian_curvature",
    "hamiltonian",
    "momentum",
    "momentum_density",
    "omega_from_curvature",
    "omega_symmetric",
    "reduced_constants",
    "run_scenario",
    "solve_V",
    "stability",
    "v_star",
    "vector_field",
]


def run_scenario(scenario, out=".", **settings):
    """Run a scenario (rigid, instability, pair, reduce, cluster, profile).

    Keyword settings use the config-file keys (a, gamma, v0, eta0, t_final,
    rtol, atol, seed, ...). Output files go to ``out``; the summary is returned
    as a dict.
    """
    overrides = {key: value for key, value in settings.items()}
    overrides["out"] = str(out)
    return _json.loads(_core_run(scenario, overrides))


from ._core import _run_scenario_json as _core_run  # noqa: E402

"""Potential-outcome generation for the linear interference model."""

from typing import NamedTuple, Sequence, Union

import numpy as np

from ..structures.assignment import Assignment
from ..structures.model import OutcomeModel, UnitShift
from ..utils.errors import DimensionError
from ..utils.rng import as_generator

SeedLike = Union[int, np.random.Generator, None]


class TrueEffects(NamedTuple):
    direct: float
    spillover: float
    total: float


def true_effects(model: OutcomeModel) -> TrueEffects:
    """Under the linear model: direct = beta, spillover = gamma, total = beta + gamma."""
    return TrueEffects(direct=model.beta, spillover=model.gamma, total=model.beta + model.gamma)


def sample_outcomes(
    model: OutcomeModel,
    z: Union[Assignment, Sequence[int], np.ndarray],
    rho: Sequence[float],
    rep_seed: SeedLike = None,
) -> np.ndarray:
    """
    y_i = alpha + U_i + beta z_i + gamma rho_i + eps_i.

    U_i ~ Unif(0, 1) (only with the uniform unit shift) and eps_i ~ N(0, sigma^2)
    are drawn from the replication stream, U first.
    """
    model.validate()
    treatment = z.to_array() if isinstance(z, Assignment) else np.asarray(z, dtype=float)
    exposures = np.asarray(rho, dtype=float)
    if len(treatment) != len(exposures):
        raise DimensionError(f"z has {len(treatment)} entries, rho has {len(exposures)}")

    rng = as_generator(model.seed if rep_seed is None else rep_seed)
    n = len(exposures)
    shift = rng.uniform(0.0, 1.0, size=n) if model.unit_shift is UnitShift.UNIFORM else 0.0
    noise = rng.normal(0.0, model.sigma, size=n) if model.sigma > 0 else 0.0
    return model.alpha + shift + model.beta * treatment + model.gamma * exposures + noise

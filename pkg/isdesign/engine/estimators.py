"""
Effect estimators on the independent set and their closed-form diagnostics.

All variances and covariances of design vectors use divisor n (population
convention), so the predicted variances match the OLS algebra exactly.
"""

from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np
from scipy import linalg

from ..structures.model import Estimand
from ..structures.report import EstimateSummary, OlsFit
from ..utils.errors import (
    DegenerateDesignError,
    DimensionError,
    MissingCoefficientError,
    ParameterError,
    PreconditionError,
    SingularDesignError,
)

ArrayLike = Union[Sequence[float], np.ndarray]
DEGENERATE_TOL = 1e-14
RANK_TOL = 1e-10


class TotalVariancePrediction(NamedTuple):
    variance: float
    floor: float


def _vector(values: ArrayLike, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=float).ravel()
    if not np.all(np.isfinite(array)):
        raise ParameterError(f"{name} contains non-finite values")
    return array


def population_variance(values: ArrayLike) -> float:
    array = np.asarray(values, dtype=float)
    return float(np.mean((array - array.mean()) ** 2)) if array.size else 0.0


def population_covariance(a: ArrayLike, b: ArrayLike) -> float:
    x, y = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.mean((x - x.mean()) * (y - y.mean())))


def diff_in_means(y: ArrayLike, z: ArrayLike) -> float:
    """(2/n_I) sum y_i z_i - (2/n_I) sum y_i (1 - z_i) for a balanced assignment."""
    outcomes, treatment = _vector(y, "y"), _vector(z, "z")
    n = len(outcomes)
    if len(treatment) != n:
        raise DimensionError(f"y has {n} entries, z has {len(treatment)}")
    if n < 2 or n % 2:
        raise PreconditionError(f"difference in means needs an even n_I >= 2, got {n}")
    if int(treatment.sum()) != n // 2:
        raise PreconditionError(f"assignment is unbalanced: {int(treatment.sum())} treated of {n}")
    return float(2.0 / n * np.sum(outcomes * treatment) - 2.0 / n * np.sum(outcomes * (1 - treatment)))


def arm_mean_difference(y: ArrayLike, z: ArrayLike) -> float:
    """Mean of treated minus mean of control, arms of any size."""
    outcomes, treatment = _vector(y, "y"), _vector(z, "z")
    if len(treatment) != len(outcomes):
        raise DimensionError(f"y has {len(outcomes)} entries, z has {len(treatment)}")
    treated = treatment == 1
    if treated.all() or not treated.any():
        raise DegenerateDesignError("one treatment arm is empty")
    return float(outcomes[treated].mean() - outcomes[~treated].mean())


def ols_fit(z: ArrayLike, rho: ArrayLike, y: ArrayLike) -> OlsFit:
    """
    Least squares of y on [1, Z, rho] via pivoted QR.

    A constant Z column is dropped (beta_hat is then absent); a constant rho,
    or Z collinear with rho, raises SingularDesignError.
    """
    treatment, exposures, outcomes = _vector(z, "z"), _vector(rho, "rho"), _vector(y, "y")
    n = len(outcomes)
    if len(treatment) != n or len(exposures) != n:
        raise DimensionError(f"z, rho and y lengths differ ({len(treatment)}, {len(exposures)}, {n})")
    if n < 3:
        raise PreconditionError(f"regression needs at least 3 units, got {n}")
    if np.ptp(exposures) == 0:
        raise SingularDesignError(["intercept", "rho"], "exposure is constant")

    names: List[str] = ["intercept"]
    columns = [np.ones(n)]
    has_treatment = bool(np.ptp(treatment) > 0)
    if has_treatment:
        names.append("z")
        columns.append(treatment)
    names.append("rho")
    columns.append(exposures)
    design = np.column_stack(columns)

    q, r, pivot = linalg.qr(design, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    tolerance = RANK_TOL * diagonal[0]
    rank = int(np.sum(diagonal > tolerance))
    if rank < design.shape[1]:
        raise SingularDesignError(_collinear_columns(design, names, pivot, rank))

    solution = linalg.solve_triangular(r, q.T @ outcomes)
    coefficients = np.empty(design.shape[1])
    coefficients[pivot] = solution

    residuals = outcomes - design @ coefficients
    dof = n - design.shape[1]
    residual_variance = float(residuals @ residuals / dof) if dof > 0 else 0.0

    values = dict(zip(names, coefficients))
    return OlsFit(
        alpha_hat=float(values["intercept"]),
        beta_hat=float(values["z"]) if has_treatment else None,
        gamma_hat=float(values["rho"]),
        residual_variance=residual_variance,
        n_used=n,
    )


def _collinear_columns(design: np.ndarray, names: List[str], pivot: np.ndarray, rank: int) -> List[str]:
    kept = pivot[:rank]
    involved = set()
    for dropped in pivot[rank:]:
        weights, *_ = np.linalg.lstsq(design[:, kept], design[:, dropped], rcond=None)
        involved.add(int(dropped))
        involved.update(int(k) for k, w in zip(kept, weights) if abs(w) > 1e-8)
    return [names[k] for k in sorted(involved)]


def spillover_estimate(fit: OlsFit) -> float:
    """tau^(i)(z, 1, 0) = gamma_hat."""
    return fit.gamma_hat


def total_estimate(fit: OlsFit) -> float:
    """tau^(t) = beta_hat + gamma_hat."""
    if fit.beta_hat is None:
        raise MissingCoefficientError("total effect needs beta_hat, but Z was constant")
    return fit.beta_hat + fit.gamma_hat


def bias_bound_direct(lipschitz: float, delta: Union[float, ArrayLike], n_independent: int) -> float:
    """(2L / n_I) * ||Delta||_1; ``delta`` is the deviation vector or its L1 norm."""
    if lipschitz < 0:
        raise ParameterError(f"Lipschitz constant {lipschitz} must be >= 0")
    if n_independent < 1:
        raise ParameterError(f"n_I={n_independent} must be >= 1")
    norm = float(abs(delta)) if np.ndim(delta) == 0 else float(np.abs(np.asarray(delta, dtype=float)).sum())
    return 2.0 * lipschitz / n_independent * norm


def predicted_var_spillover(sigma: float, rho: ArrayLike) -> float:
    """sigma^2 / (n_I Var_n[rho_I])."""
    exposures = _vector(rho, "rho")
    variance = population_variance(exposures)
    if variance <= DEGENERATE_TOL:
        raise DegenerateDesignError("exposure vector is constant")
    return sigma**2 / (len(exposures) * variance)


def predicted_var_total(sigma: float, z: ArrayLike, rho: ArrayLike) -> TotalVariancePrediction:
    """
    sigma^2/n_I * Var[Z - rho] / (Var[Z] Var[rho] - Cov^2[Z, rho]), plus the
    floor sigma^2 / (n_I Var[rho]) it can never go below.
    """
    treatment, exposures = _vector(z, "z"), _vector(rho, "rho")
    n = len(exposures)
    if len(treatment) != n:
        raise DimensionError(f"z has {len(treatment)} entries, rho has {n}")
    var_z = population_variance(treatment)
    var_rho = population_variance(exposures)
    if var_z <= DEGENERATE_TOL or var_rho <= DEGENERATE_TOL:
        raise DegenerateDesignError("treatment or exposure vector is constant")
    covariance = population_covariance(treatment, exposures)
    determinant = var_z * var_rho - covariance**2
    if determinant <= DEGENERATE_TOL * var_z * var_rho:
        raise DegenerateDesignError("|Corr(Z_I, rho_I)| = 1")
    variance = sigma**2 / n * population_variance(treatment - exposures) / determinant
    return TotalVariancePrediction(variance=variance, floor=sigma**2 / (n * var_rho))


def correlation(z: ArrayLike, rho: ArrayLike) -> Optional[float]:
    var_z, var_rho = population_variance(z), population_variance(rho)
    if var_z <= DEGENERATE_TOL or var_rho <= DEGENERATE_TOL:
        return None
    return population_covariance(z, rho) / float(np.sqrt(var_z * var_rho))


def estimand_tag(estimand: Estimand, rho_target: Optional[float] = None, own_treatment: int = 1) -> str:
    if estimand is Estimand.DIRECT:
        return f"direct({rho_target:g})"
    if estimand is Estimand.SPILLOVER:
        return f"spillover({own_treatment},1,0)"
    return "total"


def summarize_estimate(
    estimand: Estimand,
    z: ArrayLike,
    rho: ArrayLike,
    y: ArrayLike,
    sigma: Optional[float] = None,
    lipschitz: Optional[float] = None,
    rho_target: Optional[float] = None,
    own_treatment: int = 1,
) -> EstimateSummary:
    """Point estimate for ``estimand`` on the in-sample units, with diagnostics."""
    treatment, exposures, outcomes = _vector(z, "z"), _vector(rho, "rho"), _vector(y, "y")
    tag = estimand_tag(estimand, rho_target, own_treatment)
    var_rho = population_variance(exposures)

    if estimand is Estimand.DIRECT:
        if rho_target is None:
            raise ParameterError("direct estimand needs rho_target")
        delta = exposures - rho_target
        norm_delta = float(np.abs(delta).sum())
        bound = bias_bound_direct(lipschitz, norm_delta, len(exposures)) if lipschitz is not None else None
        return EstimateSummary(
            estimand=tag,
            point=diff_in_means(outcomes, treatment),
            bias_bound=bound,
            norm_delta=norm_delta,
            var_rho=var_rho,
            corr_z_rho=correlation(treatment, exposures),
        )

    fit = ols_fit(treatment, exposures, outcomes)
    if estimand is Estimand.SPILLOVER:
        point = spillover_estimate(fit)
        predicted = predicted_var_spillover(sigma, exposures) if sigma is not None else None
    else:
        point = total_estimate(fit)
        predicted = predicted_var_total(sigma, treatment, exposures).variance if sigma is not None else None
    return EstimateSummary(
        estimand=tag,
        point=point,
        predicted_variance=predicted,
        norm_delta=0.0,
        var_rho=var_rho,
        corr_z_rho=correlation(treatment, exposures),
    )

"""
Decay-law fits of echo curves.

Both laws are linear in log space:
    exponential  ln M = ln A - rate * t
    gaussian     ln M = ln A - quad_coeff * t^2
and are fitted by weighted least squares over a window that skips the
short-time transient and the saturation plateau.
"""
import logging
import math
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from echolab.errors import InsufficientDataError, ValidationError

logger = logging.getLogger(__name__)

# Residuals closer than this fraction are treated as a tie
MODEL_TIE_TOLERANCE = 0.10


class DecayModel(str, Enum):
    EXPONENTIAL = 'exponential'
    GAUSSIAN = 'gaussian'
    LYAPUNOV_CAPPED = 'lyapunov_capped'


@dataclass(frozen=True)
class WindowPolicy:
    """
    Which curve points enter a fit.

    By default the window opens at the first time with mean < upper and
    closes at the last time with mean > lower_factor / N. Explicit t_lo and
    t_hi replace the respective bound.
    """
    upper: float = 0.8
    lower_factor: float = 10.0
    min_points: int = 4
    t_lo: int = None
    t_hi: int = None

    def __post_init__(self):
        if not 0.0 < self.upper <= 1.0:
            raise ValidationError(f"Window upper bound must lie in (0, 1], got {self.upper}", field='upper')
        if self.lower_factor < 0:
            raise ValidationError("lower_factor must be non-negative", field='lower_factor')
        if self.min_points < 2:
            raise ValidationError("A fit needs at least two points", field='min_points')
        if self.t_lo is not None and self.t_hi is not None and self.t_hi < self.t_lo:
            raise ValidationError(f"Empty fit window [{self.t_lo}, {self.t_hi}]")


@dataclass
class DecayFit:
    model: DecayModel
    rate: float
    quad_coeff: float
    prefactor: float
    fit_window: tuple
    residual_rms: float
    dof: int
    uncertainty: float
    n_points: int
    capped: bool = False

    @property
    def value(self):
        """Fitted decay parameter of this model."""
        return self.quad_coeff if self.model is DecayModel.GAUSSIAN else self.rate

    def predict(self, t):
        t = np.asarray(t, dtype=float)
        if self.model is DecayModel.GAUSSIAN:
            return self.prefactor * np.exp(-self.quad_coeff * t ** 2)
        return self.prefactor * np.exp(-self.rate * t)

    def to_dict(self):
        data = asdict(self)
        data['model'] = self.model.value
        data['fit_window'] = list(self.fit_window)
        return data


def select_window(curve, policy):
    """
    Boolean mask of the points a fit may use.

    Raises:
        InsufficientDataError: fewer than policy.min_points points qualify
    """
    times, mean = curve.times, curve.mean
    lower = policy.lower_factor / curve.hilbert_dim

    below_upper = np.nonzero(mean < policy.upper)[0]
    above_lower = np.nonzero(mean > lower)[0]
    t_lo = policy.t_lo if policy.t_lo is not None else (
        int(times[below_upper[0]]) if below_upper.size else None
    )
    t_hi = policy.t_hi if policy.t_hi is not None else (
        int(times[above_lower[-1]]) if above_lower.size else None
    )

    if t_lo is None or t_hi is None or t_hi < t_lo:
        raise InsufficientDataError(
            f"No fit window: no points between {lower:.3g} and {policy.upper}",
            window=(t_lo, t_hi),
        )

    mask = (times >= t_lo) & (times <= t_hi) & (mean > 0.0)
    if policy.t_lo is None:
        mask &= mean < policy.upper
    if policy.t_hi is None:
        mask &= mean > lower

    n_points = int(mask.sum())
    if n_points < policy.min_points:
        raise InsufficientDataError(
            f"Fit window [{t_lo}, {t_hi}] holds {n_points} usable points, need {policy.min_points}",
            window=(t_lo, t_hi),
            details={'n_points': n_points, 'min_points': policy.min_points},
        )
    return mask, (t_lo, t_hi)


def _log_weights(mean, stderr):
    """1 / sigma(ln M) = M / stderr, or None when any stderr is zero."""
    if np.all(stderr > 0):
        return mean / stderr
    return None


def _linear_log_fit(x, mean, stderr):
    """Weighted fit of ln(mean) = intercept + slope * x."""
    y = np.log(mean)
    weights = _log_weights(mean, stderr)
    coeffs, cov = np.polyfit(x, y, 1, w=weights, cov=True)
    slope, intercept = coeffs
    residuals = y - (intercept + slope * x)
    residual_rms = float(np.sqrt(np.mean(residuals ** 2)))
    uncertainty = float(np.sqrt(max(cov[0, 0], 0.0)))
    return float(slope), float(intercept), residual_rms, uncertainty


def _fit(curve, policy, model):
    policy = policy or WindowPolicy()
    mask, window = select_window(curve, policy)
    t = curve.times[mask].astype(float)
    x = t ** 2 if model is DecayModel.GAUSSIAN else t

    slope, intercept, residual_rms, uncertainty = _linear_log_fit(x, curve.mean[mask], curve.stderr[mask])
    decay = max(-slope, 0.0)
    n_points = int(mask.sum())

    fit = DecayFit(
        model=model,
        rate=decay if model is DecayModel.EXPONENTIAL else None,
        quad_coeff=decay if model is DecayModel.GAUSSIAN else None,
        prefactor=math.exp(intercept),
        fit_window=window,
        residual_rms=residual_rms,
        dof=n_points - 2,
        uncertainty=uncertainty,
        n_points=n_points,
    )
    logger.debug(f"{model.value} fit over {window}: {decay:.6g} +/- {uncertainty:.2g}, rms={residual_rms:.3g}")
    return fit


def fit_exponential(curve, policy=None):
    """Rate of exp(-rate t) decay inside the window."""
    return _fit(curve, policy, DecayModel.EXPONENTIAL)


def fit_gaussian(curve, policy=None):
    """Coefficient of exp(-quad_coeff t^2) decay inside the window."""
    return _fit(curve, policy, DecayModel.GAUSSIAN)


def fit_lyapunov_capped(curve, lyapunov, policy=None):
    """Exponential fit whose rate is capped at the Lyapunov exponent."""
    fit = fit_exponential(curve, policy)
    capped = fit.rate >= lyapunov
    fit.model = DecayModel.LYAPUNOV_CAPPED
    fit.rate = min(fit.rate, lyapunov)
    fit.capped = capped
    return fit


@dataclass
class ModelComparison:
    exponential: DecayFit
    gaussian: DecayFit
    preferred: DecayModel = None

    @property
    def residual_ratio(self):
        """Gaussian over exponential residual RMS."""
        if self.exponential.residual_rms == 0:
            return math.inf if self.gaussian.residual_rms > 0 else 1.0
        return self.gaussian.residual_rms / self.exponential.residual_rms


def compare_models(curve, policy=None, lyapunov=None):
    """
    Fit both laws over the same window and report the residuals.

    `preferred` stays None when the residuals are within 10% of each other.
    """
    exponential = fit_exponential(curve, policy)
    if lyapunov is not None and exponential.rate >= lyapunov:
        exponential = fit_lyapunov_capped(curve, lyapunov, policy)
    gaussian = fit_gaussian(curve, policy)

    comparison = ModelComparison(exponential=exponential, gaussian=gaussian)
    best = min(exponential.residual_rms, gaussian.residual_rms)
    worst = max(exponential.residual_rms, gaussian.residual_rms)
    if worst > best * (1.0 + MODEL_TIE_TOLERANCE):
        comparison.preferred = (
            DecayModel.GAUSSIAN if gaussian.residual_rms < exponential.residual_rms
            else exponential.model
        )
    return comparison


def rates_agree(fits, n_sigma=2.0):
    """
    Whether every pair of fitted decay values agrees.

    A pair agrees when the difference is within n_sigma combined
    uncertainties.
    """
    values = [fit.value for fit in fits]
    errors = [fit.uncertainty for fit in fits]
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            diff = abs(values[i] - values[j])
            if diff > n_sigma * math.hypot(errors[i], errors[j]):
                return False
    return True

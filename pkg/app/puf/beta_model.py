"""
Beta distribution numerics: density, CDF, quantile and parameter estimation.

The one-probability population is strongly U-shaped (shapes around 0.003),
so densities and likelihoods are evaluated in log space and the CDF uses the
continued-fraction form of the regularized incomplete beta function.
"""
import logging
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import betaln, digamma, polygamma

from errors import ConvergenceError, DegenerateSampleError, DomainError
from models import BetaParams, Censoring, FitMethod, FitReport


logger = logging.getLogger("latchkey")

CF_EPS = 1e-15
CF_MAX_ITER = 10_000
FPMIN = 1e-300

QUANTILE_TOL = 1e-12
ROUND_TRIP_TOL = 1e-9
QUANTILE_MAX_ITER = 2_000

MLE_TOL = 1e-9
MLE_MAX_ITER = 500
PARAM_FLOOR = 1e-6
PARAM_CEIL = 1e6

CENSORED_XTOL = 1e-8
CENSORED_FTOL = 1e-12
CENSORED_MAX_ITER = 4_000


def log_beta(params: BetaParams) -> float:
    return float(betaln(params.alpha, params.beta))


def _check_unit(value: float, name: str) -> None:
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name}={value!r} outside [0, 1]")


def _log_density(p: float, a: float, b: float, lbeta: float) -> float:
    return (a - 1.0) * math.log(p) + (b - 1.0) * math.log1p(-p) - lbeta


def beta_pdf(p: float, params: BetaParams) -> float:
    """Density p^(a-1) (1-p)^(b-1) / B(a, b)."""
    _check_unit(p, "p")
    a, b = params.alpha, params.beta
    lbeta = log_beta(params)

    if p == 0.0 or p == 1.0:
        shape = a if p == 0.0 else b
        if shape < 1.0:
            raise DomainError(f"density diverges at p={p!r} for shape {shape!r} < 1")
        if shape > 1.0:
            return 0.0
        # the opposite factor is 1 at this endpoint
        return math.exp(-lbeta)

    return math.exp(_log_density(p, a, b, lbeta))


def _continued_fraction(a: float, b: float, x: float) -> float:
    """Modified Lentz evaluation of the incomplete beta continued fraction."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d

    for m in range(1, CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < CF_EPS:
            return h

    raise ConvergenceError(
        f"incomplete beta continued fraction did not converge for a={a!r}, b={b!r}, x={x!r}", estimate=h
    )


def beta_cdf(p: float, params: BetaParams) -> float:
    """Regularized incomplete beta function I_p(alpha, beta)."""
    _check_unit(p, "p")
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0

    a, b = params.alpha, params.beta
    log_front = a * math.log(p) + b * math.log1p(-p) - log_beta(params)
    # Evaluate the fraction on whichever side converges fastest.
    if p < (a + 1.0) / (a + b + 2.0):
        value = math.exp(log_front) * _continued_fraction(a, b, p) / a
    else:
        value = 1.0 - math.exp(log_front) * _continued_fraction(b, a, 1.0 - p) / b
    return min(1.0, max(0.0, value))


def _initial_guess(q: float, a: float, b: float, lbeta: float) -> float:
    """
    Start from the extreme-tail approximations I_x ~ x^a / (a B) and
    1 - I_x ~ (1-x)^b / (b B); fall back to the mean.
    """
    pivot = (a + 1.0) / (a + b + 2.0)
    log_x = (math.log(q) + math.log(a) + lbeta) / a
    if log_x < math.log(pivot):
        return math.exp(log_x)
    log_y = (math.log1p(-q) + math.log(b) + lbeta) / b
    if log_y < math.log1p(-pivot):
        return 1.0 - math.exp(log_y)
    return a / (a + b)


def _split(lo: float, hi: float) -> float:
    """Bisect, geometrically when the bracket hugs an endpoint."""
    if lo == 0.0 and hi < 0.25:
        candidate = hi * 1e-3
    elif lo > 0.0 and hi > 4.0 * lo:
        candidate = math.sqrt(lo) * math.sqrt(hi)
    elif hi < 1.0 and (1.0 - lo) > 4.0 * (1.0 - hi):
        candidate = 1.0 - math.sqrt(1.0 - lo) * math.sqrt(1.0 - hi)
    else:
        candidate = lo + 0.5 * (hi - lo)
    if lo < candidate < hi:
        return candidate
    return lo + 0.5 * (hi - lo)


def beta_quantile(q: float, params: BetaParams) -> float:
    """
    Inverse CDF by bracketed Newton iteration.

    Newton steps that leave the current bracket are replaced by bisection.
    Returns p with |I_p - q| <= 1e-12; when the bracket closes onto two
    adjacent doubles first, the better endpoint is accepted if its residual
    is within 1e-9, otherwise ConvergenceError reports the bracket.
    """
    _check_unit(q, "q")
    if q == 0.0:
        return 0.0
    if q == 1.0:
        return 1.0

    a, b = params.alpha, params.beta
    lbeta = log_beta(params)
    lo, hi = 0.0, 1.0
    f_lo, f_hi = -q, 1.0 - q
    x = _initial_guess(q, a, b, lbeta)

    for iteration in range(QUANTILE_MAX_ITER):
        if not lo < x < hi:
            x = _split(lo, hi)
        f = beta_cdf(x, params) - q
        if abs(f) <= QUANTILE_TOL:
            return x
        if f < 0.0:
            lo, f_lo = x, f
        else:
            hi, f_hi = x, f

        if math.nextafter(lo, 1.0) >= hi:
            best, residual = (lo, -f_lo) if -f_lo <= f_hi else (hi, f_hi)
            if residual <= ROUND_TRIP_TOL:
                logger.debug("quantile q=%r resolved to machine precision after %d steps", q, iteration + 1)
                return best
            raise ConvergenceError(f"quantile q={q!r} is not representable in double precision", lower=lo, upper=hi)

        log_d = _log_density(x, a, b, lbeta)
        if math.isfinite(log_d):
            step = math.copysign(math.exp(min(math.log(abs(f)) - log_d, 700.0)), f)
            x = x - step
        else:
            x = math.nan

    raise ConvergenceError(f"quantile q={q!r} did not converge in {QUANTILE_MAX_ITER} steps", lower=lo, upper=hi)


def _validated_samples(samples: Sequence[float]) -> np.ndarray:
    values = np.asarray(samples, dtype=np.float64).ravel()
    if values.size < 2:
        raise DegenerateSampleError(f"need at least 2 samples, got {values.size}")
    outside = ~((values > 0.0) & (values < 1.0))
    if outside.any():
        index = int(np.flatnonzero(outside)[0])
        raise DomainError(f"sample {index} = {values[index]!r} outside (0, 1); re-scale before fitting")
    if float(values.var()) <= 0.0:
        raise DegenerateSampleError("samples have zero variance")
    return values


def fit_moments(samples: Sequence[float]) -> FitReport:
    values = _validated_samples(samples)
    mean = float(values.mean())
    variance = float(values.var())
    c = mean * (1.0 - mean) / variance - 1.0
    if c <= 0.0:
        raise DegenerateSampleError(f"variance {variance!r} too large for a beta fit (c={c!r})")
    return FitReport(
        params=BetaParams(alpha=mean * c, beta=(1.0 - mean) * c),
        method=FitMethod.MOMENTS,
        sample_count=int(values.size),
    )


def _mean_log_likelihood(theta: np.ndarray, s1: float, s2: float) -> float:
    a, b = theta
    return float((a - 1.0) * s1 + (b - 1.0) * s2 - betaln(a, b))


def _score(theta: np.ndarray, s1: float, s2: float) -> np.ndarray:
    a, b = theta
    common = digamma(a + b)
    return np.array([common - digamma(a) + s1, common - digamma(b) + s2])


def _hessian(theta: np.ndarray) -> np.ndarray:
    a, b = theta
    common = polygamma(1, a + b)
    return np.array([[common - polygamma(1, a), common], [common, common - polygamma(1, b)]])


def fit_mle(samples: Sequence[float], init: Optional[BetaParams] = None) -> FitReport:
    """
    Maximum-likelihood fit by Newton iteration on the score equations.

    The gradient is the per-sample score; `converged` means its norm fell
    below 1e-9. Parameters are kept inside [1e-6, 1e6]. When no `init` is
    given the moment estimate is used, or (0.5, 0.5) if moments fail.
    """
    values = _validated_samples(samples)
    n = int(values.size)
    s1 = float(np.log(values).mean())
    s2 = float(np.log1p(-values).mean())

    if init is None:
        try:
            init = fit_moments(values).params
        except DegenerateSampleError:
            logger.info("moment estimate unavailable, starting MLE from (0.5, 0.5)")
            init = BetaParams(alpha=0.5, beta=0.5)

    theta = np.clip(np.array([init.alpha, init.beta], dtype=np.float64), PARAM_FLOOR, PARAM_CEIL)
    current = _mean_log_likelihood(theta, s1, s2)
    converged = False
    iterations = 0
    gradient = _score(theta, s1, s2)

    while iterations < MLE_MAX_ITER:
        if float(np.hypot(*gradient)) < MLE_TOL:
            converged = True
            break
        iterations += 1
        step = np.linalg.solve(_hessian(theta), gradient)

        scale = 1.0
        accepted = False
        for _ in range(60):
            candidate = np.clip(theta - scale * step, PARAM_FLOOR, PARAM_CEIL)
            value = _mean_log_likelihood(candidate, s1, s2)
            if value >= current - 1e-14 * max(1.0, abs(current)):
                accepted = True
                break
            scale *= 0.5
        if not accepted or np.array_equal(candidate, theta):
            logger.debug("MLE line search stalled at alpha=%r beta=%r", theta[0], theta[1])
            break

        theta, current = candidate, value
        gradient = _score(theta, s1, s2)

    gradient_norm = float(np.hypot(*gradient))
    converged = converged or gradient_norm < MLE_TOL
    if not converged:
        logger.warning(
            "beta MLE stopped after %d iterations with gradient norm %.3g", iterations, gradient_norm
        )
    return FitReport(
        params=BetaParams(alpha=float(theta[0]), beta=float(theta[1])),
        method=FitMethod.MLE,
        sample_count=n,
        log_likelihood=n * current,
        converged=converged,
        iterations=iterations,
        gradient_norm=gradient_norm,
    )


def _censored_log_likelihood(
    theta: np.ndarray, n: int, sum_log: float, sum_log1m: float, censoring: Optional[Censoring]
) -> float:
    a, b = np.exp(theta)
    total = (a - 1.0) * sum_log + (b - 1.0) * sum_log1m - n * betaln(a, b)
    if censoring is None:
        return float(total)
    try:
        if censoring.n_below:
            below = beta_cdf(censoring.lower, BetaParams(alpha=a, beta=b))
            total += censoring.n_below * math.log(below) if below > 0.0 else -math.inf
        if censoring.n_above:
            # 1 - I_upper(a, b) == I_(1-upper)(b, a), without cancellation near 1
            above = beta_cdf(1.0 - censoring.upper, BetaParams(alpha=b, beta=a))
            total += censoring.n_above * math.log(above) if above > 0.0 else -math.inf
    except ConvergenceError:
        return -math.inf
    return float(total)


def fit_censored(
    samples: Sequence[float], censoring: Optional[Censoring] = None, init: Optional[BetaParams] = None
) -> FitReport:
    """
    Maximum-likelihood fit that also counts the cells outside the modeled
    range. Variable samples contribute the density; `censoring.n_below`
    cells contribute log I_lower and `censoring.n_above` cells
    log(1 - I_upper). Nelder-Mead runs on (log alpha, log beta).
    """
    values = _validated_samples(samples)
    n = int(values.size)
    sum_log = float(np.log(values).sum())
    sum_log1m = float(np.log1p(-values).sum())
    total_cells = n + (censoring.n_below + censoring.n_above if censoring else 0)

    if init is None:
        init = fit_mle(values).params
    start = np.log(np.clip([init.alpha, init.beta], PARAM_FLOOR, PARAM_CEIL))
    log_floor, log_ceil = math.log(PARAM_FLOOR), math.log(PARAM_CEIL)

    def objective(theta: np.ndarray) -> float:
        if not ((theta >= log_floor) & (theta <= log_ceil)).all():
            return math.inf
        value = _censored_log_likelihood(theta, n, sum_log, sum_log1m, censoring)
        return -value / total_cells if math.isfinite(value) else math.inf

    result = minimize(
        objective,
        start,
        method="Nelder-Mead",
        options={"xatol": CENSORED_XTOL, "fatol": CENSORED_FTOL, "maxiter": CENSORED_MAX_ITER},
    )
    alpha, beta = (float(v) for v in np.exp(result.x))
    converged = bool(result.success) and math.isfinite(result.fun)
    if not converged:
        logger.warning("censored beta fit stopped after %d iterations: %s", result.nit, result.message)
    logger.debug("censored fit alpha=%r beta=%r over %d cells", alpha, beta, total_cells)
    return FitReport(
        params=BetaParams(alpha=alpha, beta=beta),
        method=FitMethod.CENSORED,
        sample_count=total_cells,
        log_likelihood=-float(result.fun) * total_cells if math.isfinite(result.fun) else None,
        converged=converged,
        iterations=int(result.nit),
    )


def fit_beta(samples: Sequence[float], method: FitMethod, censoring: Optional[Censoring] = None) -> FitReport:
    """Dispatch to the estimator named by `method`; only the censored fit reads `censoring`."""
    if method is FitMethod.MOMENTS:
        return fit_moments(samples)
    if method is FitMethod.CENSORED:
        return fit_censored(samples, censoring)
    return fit_mle(samples)

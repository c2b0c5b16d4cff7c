"""Maximum-likelihood fits of RCS statistics and AIC model ranking.

Candidate families are log-normal, Rayleigh and the generalized extreme
value (GEV) distribution. All fits run on linear RCS values in m^2.

GEV parametrization: shape ``xi``, location ``mu``, scale ``sigma`` with
``F(x) = exp(-(1 + xi (x - mu) / sigma) ** (-1 / xi))``; ``xi = 0`` is the
Gumbel limit. Note scipy's ``genextreme`` uses ``c = -xi``.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (DegenerateFitError, DomainError, FitError, FitFailureError,
                     InsufficientDataError, NoModelError)

FITTING_SCALE = "linear_m2"
MODELS = ("lognormal", "rayleigh", "gev")
N_PARAMS = {"lognormal": 2, "rayleigh": 1, "gev": 3}

GEV_MIN_SAMPLES = 10
GEV_XI0 = 0.1
GEV_FTOL = 1e-10
# the GEV likelihood is unbounded for xi <= -1
GEV_XI_MIN = -1.0

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass
class RcsSamples:
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()
        if self.values.size < 2:
            raise DomainError("need at least two RCS samples")
        if not np.all(np.isfinite(self.values)) or np.any(self.values <= 0):
            raise DomainError("RCS samples must be positive and finite (linear m^2)")

    @property
    def count(self):
        return self.values.size


def as_samples(samples):
    return samples if isinstance(samples, RcsSamples) else RcsSamples(samples)


def aic(loglik, k):
    """Akaike information criterion -2 loglik + 2k."""
    if int(k) != k or k < 1:
        raise DomainError("parameter count k must be a positive integer")
    return -2.0 * loglik + 2.0 * k


@dataclass
class FitResult:
    model: str
    params: dict
    loglik: float
    k: int
    status: str = "ok"
    aic: float = field(init=False)

    def __post_init__(self):
        self.aic = aic(self.loglik, self.k)

    def as_dict(self):
        return {"params": dict(self.params), "loglik": self.loglik, "K": self.k,
                "aic": self.aic, "status": self.status}


@dataclass
class ModelRanking:
    results: list
    skipped: dict = field(default_factory=dict)

    def __post_init__(self):
        self.results = sorted(self.results, key=lambda r: (r.aic, r.k, r.model))

    @property
    def best(self):
        return self.results[0]


# -- log-likelihoods ------------------------------------------------------

def lognormal_loglik(x, mu, s):
    logx = np.log(x)
    return float(np.sum(-logx - math.log(s) - 0.5 * _LOG_2PI - (logx - mu) ** 2 / (2.0 * s * s)))


def rayleigh_loglik(x, b):
    return float(np.sum(np.log(x) - 2.0 * math.log(b) - x * x / (2.0 * b * b)))


def gev_loglik(x, xi, mu, sigma):
    return -kernels.gev_nll(float(xi), float(mu), float(sigma), np.asarray(x, dtype=float))


# -- fits ------------------------------------------------------------------

def fit_lognormal(samples):
    x = as_samples(samples).values
    logx = np.log(x)
    if np.ptp(logx) == 0:
        raise DegenerateFitError("log-normal fit needs samples that are not all equal")
    mu = float(np.mean(logx))
    s = math.sqrt(float(np.mean((logx - mu) ** 2)))
    return FitResult("lognormal", {"mu": mu, "s": s}, lognormal_loglik(x, mu, s), 2)


def fit_rayleigh(samples):
    x = as_samples(samples).values
    b = math.sqrt(float(np.sum(x * x)) / (2.0 * x.size))
    return FitResult("rayleigh", {"b": b}, rayleigh_loglik(x, b), 1)


def gev_initial_guess(x, xi0=GEV_XI0):
    """Method-of-moments start for a fixed shape ``xi0``, nudged into the support."""
    g1 = math.gamma(1.0 - xi0)
    g2 = math.gamma(1.0 - 2.0 * xi0)
    sd = float(np.std(x))
    sigma = sd * abs(xi0) / math.sqrt(g2 - g1 * g1)
    mu = float(np.mean(x)) - sigma * (g1 - 1.0) / xi0
    # lower support edge mu - sigma/xi must sit below every sample
    if float(np.min(x)) <= mu - sigma / xi0:
        mu = float(np.min(x)) + 0.9 * sigma / xi0
    return xi0, mu, sigma


def nelder_mead(fun, x0, steps, ftol=GEV_FTOL, max_iter=1500):
    """Minimize ``fun`` with the Nelder-Mead simplex.

    Stops once the spread of objective values across the simplex falls below
    ``ftol``, then restarts once from the best vertex to guard against a
    collapsed simplex. Returns ``(x_best, f_best, n_iter)``; raises
    :class:`FitFailureError` carrying the best iterate if ``max_iter`` runs out.
    """
    alpha, gamma, rho, shrink = 1.0, 2.0, 0.5, 0.5
    x0 = np.asarray(x0, dtype=float)
    steps = np.asarray(steps, dtype=float)
    n = x0.size
    total_iter = 0
    restarts = 0
    best_x, best_f = x0, fun(x0)
    while True:
        simplex = np.vstack([best_x] + [best_x + np.eye(n)[i] * steps[i] for i in range(n)])
        fvals = np.array([fun(p) for p in simplex])
        converged = False
        while total_iter < max_iter:
            order = np.argsort(fvals, kind="stable")
            simplex, fvals = simplex[order], fvals[order]
            if np.isfinite(fvals[-1]) and fvals[-1] - fvals[0] < ftol:
                converged = True
                break
            total_iter += 1
            centroid = simplex[:-1].mean(axis=0)
            xr = centroid + alpha * (centroid - simplex[-1])
            fr = fun(xr)
            if fr < fvals[0]:
                xe = centroid + gamma * (xr - centroid)
                fe = fun(xe)
                if fe < fr:
                    simplex[-1], fvals[-1] = xe, fe
                else:
                    simplex[-1], fvals[-1] = xr, fr
            elif fr < fvals[-2]:
                simplex[-1], fvals[-1] = xr, fr
            else:
                if fr < fvals[-1]:
                    xc = centroid + rho * (xr - centroid)
                else:
                    xc = centroid + rho * (simplex[-1] - centroid)
                fc = fun(xc)
                if fc < min(fr, fvals[-1]):
                    simplex[-1], fvals[-1] = xc, fc
                else:
                    simplex[1:] = simplex[0] + shrink * (simplex[1:] - simplex[0])
                    fvals[1:] = [fun(p) for p in simplex[1:]]
        i = int(np.argmin(fvals))
        improved = best_f - fvals[i] if np.isfinite(best_f) else math.inf
        if fvals[i] <= best_f:
            best_x, best_f = simplex[i].copy(), float(fvals[i])
        if not converged:
            raise FitFailureError(f"simplex did not converge in {max_iter} iterations",
                                  best=best_x, best_value=best_f)
        if restarts >= 1 and improved < ftol:
            return best_x, best_f, total_iter
        restarts += 1


def fit_gev(samples):
    """Numeric GEV MLE by simplex descent on the negative log-likelihood.

    Unlike the other fits this accepts any finite real samples, since the GEV
    support is not restricted to positive values.
    """
    if isinstance(samples, RcsSamples):
        x = samples.values
    else:
        x = np.asarray(samples, dtype=float).ravel()
        if not np.all(np.isfinite(x)):
            raise DomainError("GEV samples must be finite")
    x = np.ascontiguousarray(x)
    k = N_PARAMS["gev"]
    if x.size < GEV_MIN_SAMPLES:
        raise InsufficientDataError(f"GEV fit needs at least {GEV_MIN_SAMPLES} samples, got {x.size}")
    if np.ptp(x) == 0:
        raise DegenerateFitError("GEV fit needs samples that are not all equal")
    nll = kernels.gev_nll

    def objective(theta):
        xi, mu, sigma = theta
        if xi <= GEV_XI_MIN:
            return math.inf
        return nll(xi, mu, sigma, x)

    theta0 = np.array(gev_initial_guess(x))
    steps = np.array([0.05, 0.1 * theta0[2], 0.1 * theta0[2]])
    try:
        theta, f, _ = nelder_mead(objective, theta0, steps, max_iter=500 * k)
    except FitFailureError as exc:
        raise FitFailureError(f"GEV fit failed: {exc}", best=exc.best, best_value=exc.best_value) from None
    xi, mu, sigma = (float(v) for v in theta)
    return FitResult("gev", {"xi": xi, "mu": mu, "sigma": sigma}, -float(f), k)


FITTERS = {"lognormal": fit_lognormal, "rayleigh": fit_rayleigh, "gev": fit_gev}


def select_model(samples, models=MODELS):
    """Fit each requested family and rank the successes by AIC (ties: smaller K, then name).

    Families that fail are recorded in ``skipped`` with the reason.
    """
    samples = as_samples(samples)
    results, skipped = [], {}
    for name in models:
        if name not in FITTERS:
            raise DomainError(f"unknown model {name!r}; choose from {', '.join(MODELS)}")
        try:
            results.append(FITTERS[name](samples))
        except FitError as exc:
            skipped[name] = f"{type(exc).__name__}: {exc}"
    if not results:
        raise NoModelError(f"no model could be fitted ({skipped})")
    return ModelRanking(results, skipped)


def ranking_report(ranking, n_samples):
    """JSON-ready summary of a ranking."""
    models = {r.model: r.as_dict() for r in ranking.results}
    for name, reason in ranking.skipped.items():
        models[name] = {"status": "skipped", "reason": reason}
    return {
        "fitting_scale": FITTING_SCALE,
        "n_samples": int(n_samples),
        "models": models,
        "ranking": [r.model for r in ranking.results],
        "best": ranking.best.model,
    }

"""Closed-form oracles for the squaring detector and threshold calibration.

Under pure noise the normalized p=2 statistic sum(y^2)/sigma^2 of n
Gaussian samples is chi-square with n degrees of freedom.  With a
constant-envelope unit-power signal at linear SNR gamma and fading gain
h it is noncentral chi-square with noncentrality delta = n*gamma*h^2.
Averaging the AWGN detection probability over the Rayleigh gain
distribution (h^2 exponential with mean 1, so instantaneous SNR is
exponential with mean gamma_bar) gives the fading-averaged P_D.

The incomplete gamma functions are implemented here rather than taken
from a heavier dependency so that the simulation and its oracle share
nothing but IEEE arithmetic:

* ``chi2_sf(nu, lam) = Q(nu/2, lam/2)``, the regularized upper
  incomplete gamma, via the standard power series for x < a+1 and a
  modified Lentz continued fraction otherwise (Numerical Recipes
  section 6.2), good to about 1e-12 absolute.
* The noncentral survival function is the Poisson mixture
  sum_k w_k(delta/2) * chi2_sf(nu+2k, lam) with the central values
  obtained by the stable upward recurrence
  Q(a+1, x) = Q(a, x) + x^a e^-x / Gamma(a+1).  Summation starts at the
  Poisson mode (so the first weight never underflows) and expands both
  ways until the remaining Poisson tail mass is below 1e-12.  A Marcum-Q
  routine would compute the same quantity; the mixture needs nothing
  beyond the incomplete gamma and has an explicit truncation bound.

No closed form is attempted for the cubing detector: a sum of |Gaussian|^3
terms has no standard distribution, which is the gap the Monte Carlo
engine fills.  Cubing thresholds come from the empirical quantile route
of :func:`calibrate_threshold`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

_GAMMA_EPS = 1e-16
_GAMMA_ITMAX = 10000
_MIXTURE_TAIL = 1e-12
_MIXTURE_ITMAX = 1_000_000
_BISECT_TOL = 1e-10  # inner solve tolerance; round-trip contract is 1e-9


class NumericError(RuntimeError):
    """An iterative numeric routine failed to converge."""


def _gammap_series(a: float, x: float) -> float:
    # Power series for P(a, x); converges fast for x < a + 1.
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_GAMMA_ITMAX):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise NumericError(f"incomplete gamma series stalled at a={a}, x={x}")


def _gammaq_contfrac(a: float, x: float) -> float:
    # Modified Lentz continued fraction for Q(a, x); converges for x >= a + 1.
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_ITMAX + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise NumericError(f"incomplete gamma continued fraction stalled at a={a}, x={x}")


def gammaq(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0."""
    if not (math.isfinite(a) and a > 0):
        raise ValueError(f"shape a must be positive and finite, got {a!r}")
    if not (math.isfinite(x) and x >= 0):
        raise ValueError(f"argument x must be finite and >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gammap_series(a, x)
    return _gammaq_contfrac(a, x)


def chi2_sf(nu: int, lam: float) -> float:
    """P(chi-square with nu dof > lam) = Q(nu/2, lam/2)."""
    if not isinstance(nu, (int, np.integer)) or nu < 1:
        raise ValueError(f"degrees of freedom must be an integer >= 1, got {nu!r}")
    if not (math.isfinite(lam) and lam >= 0):
        raise ValueError(f"lam must be finite and >= 0, got {lam!r}")
    return gammaq(nu / 2.0, lam / 2.0)


def _qterm(a: float, x: float) -> float:
    # t(a, x) = x^a e^-x / Gamma(a+1), the step in Q(a+1,x) = Q(a,x) + t(a,x).
    if x == 0.0:
        return 0.0
    return math.exp(a * math.log(x) - x - math.lgamma(a + 1.0))


def noncentral_chi2_sf(nu: int, delta: float, lam: float) -> float:
    """Survival function of the noncentral chi-square (nu dof, noncentrality delta).

    delta == 0 short-circuits to the central :func:`chi2_sf` exactly.
    """
    if not isinstance(nu, (int, np.integer)) or nu < 1:
        raise ValueError(f"degrees of freedom must be an integer >= 1, got {nu!r}")
    if not (math.isfinite(delta) and delta >= 0):
        raise ValueError(f"noncentrality must be finite and >= 0, got {delta!r}")
    if not (math.isfinite(lam) and lam >= 0):
        raise ValueError(f"lam must be finite and >= 0, got {lam!r}")
    if delta == 0.0:
        return chi2_sf(nu, lam)

    a0 = nu / 2.0
    x = lam / 2.0
    half = delta / 2.0
    k0 = int(half)  # Poisson mode: the largest weight, never underflows
    logw0 = -half if k0 == 0 else k0 * math.log(half) - half - math.lgamma(k0 + 1.0)
    w0 = math.exp(logw0)
    q0 = gammaq(a0 + k0, x)

    acc = w0 * q0
    mass = w0

    # Upward from the mode: weights via w_{k+1} = w_k * half/(k+1), central
    # survival via the stable upward recurrence on Q.
    w = w0
    q = q0
    t = _qterm(a0 + k0, x)
    k = k0
    while mass < 1.0 - _MIXTURE_TAIL:
        k += 1
        if k - k0 > _MIXTURE_ITMAX:
            raise NumericError(
                f"noncentral mixture exceeded {_MIXTURE_ITMAX} terms "
                f"(nu={nu}, delta={delta}, lam={lam})"
            )
        q = min(q + t, 1.0)
        t *= x / (a0 + k)
        w *= half / k
        acc += w * q
        mass += w
        if w < 1e-300 and k > half:
            break
    # Downward from the mode when it is interior.
    w = w0
    k = k0
    while k > 0 and mass < 1.0 - _MIXTURE_TAIL:
        w *= k / half
        k -= 1
        acc += w * gammaq(a0 + k, x)
        mass += w
        if w < 1e-300 and k < half:
            break
    return min(max(acc, 0.0), 1.0)


def pfa_analytic(n: int, lam: float) -> float:
    """False-alarm probability of the normalized squaring detector."""
    return chi2_sf(n, lam)


def pd_awgn_analytic(n: int, gamma: float, lam: float) -> float:
    """Detection probability on AWGN at linear SNR gamma (gain h = 1).

    The normalized statistic is noncentral chi-square with n dof and
    noncentrality n*gamma for a unit-power constant-envelope signal.
    """
    if not (math.isfinite(gamma) and gamma >= 0):
        raise ValueError(f"gamma must be finite and >= 0, got {gamma!r}")
    return noncentral_chi2_sf(n, n * gamma, lam)


_LAGUERRE_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def pd_rayleigh_analytic(n: int, gamma_bar: float, lam: float, nodes: int = 128) -> float:
    """Rayleigh-averaged detection probability at mean linear SNR gamma_bar.

    Evaluates integral_0^inf pd_awgn(n, gamma_bar*u, lam) e^-u du by
    Gauss-Laguerre quadrature; u = h^2 is exponential(1) under the
    E[h^2] = 1 envelope convention.  128 nodes hold the result to about
    1e-6 absolute over the SNR range of interest (cross-checked against
    adaptive quadrature in the test suite).
    """
    if not (math.isfinite(gamma_bar) and gamma_bar > 0):
        raise ValueError(f"gamma_bar must be positive and finite, got {gamma_bar!r}")
    if nodes < 64:
        raise ValueError(f"need at least 64 quadrature nodes, got {nodes}")
    if nodes not in _LAGUERRE_CACHE:
        _LAGUERRE_CACHE[nodes] = np.polynomial.laguerre.laggauss(nodes)
    xs, ws = _LAGUERRE_CACHE[nodes]
    total = 0.0
    for xi, wi in zip(xs, ws):
        total += wi * pd_awgn_analytic(n, gamma_bar * float(xi), lam)
    if not (math.isfinite(total) and -1e-9 <= total <= 1.0 + 1e-9):
        raise NumericError(f"quadrature produced {total!r} for n={n}, "
                           f"gamma_bar={gamma_bar}, lam={lam}")
    return min(max(total, 0.0), 1.0)


class CalibrationMethod(enum.Enum):
    ANALYTIC = "analytic"
    EMPIRICAL_QUANTILE = "empirical-quantile"


@dataclass(frozen=True)
class CalibrationResult:
    """A calibrated threshold with its achieved false-alarm rate.

    ``tolerance`` records the guarantee under which the calibration ran;
    construction fails if ``achieved_pfa`` strays outside it.
    """

    threshold: float
    target_pfa: float
    achieved_pfa: float
    method: CalibrationMethod
    tolerance: float
    mc_trials: int = 0
    stderr_pfa: float = 0.0

    def __post_init__(self):
        if abs(self.achieved_pfa - self.target_pfa) > self.tolerance:
            raise ValueError(
                f"achieved pfa {self.achieved_pfa} misses target {self.target_pfa} "
                f"beyond tolerance {self.tolerance}"
            )


def calibrate_threshold(
    spec,
    n: int,
    target_pfa: float,
    method: CalibrationMethod = CalibrationMethod.ANALYTIC,
    *,
    channel=None,
    trials: int = 100_000,
    seed: int = 0,
) -> CalibrationResult:
    """Find lambda such that the detector's P_FA hits ``target_pfa``.

    Analytic: bisection on :func:`pfa_analytic`; available only for the
    p=2 detector, whose H0 law is known.  The normalized threshold is
    rescaled by sigma^p for an unnormalized spec.

    EmpiricalQuantile: lambda is the (1 - target) linear-interpolation
    quantile of ``trials`` >= 1e5 seeded pure-noise statistics, drawn
    from the calibration domain of the seed's stream (disjoint from
    evaluation trials); works for every p.  ``channel`` defaults to AWGN
    with unit noise variance.
    """
    from .detector import DetectorSpec

    if not isinstance(spec, DetectorSpec):
        raise ValueError(f"spec must be a DetectorSpec, got {spec!r}")
    if not (isinstance(target_pfa, (int, float)) and 0.0 < target_pfa < 1.0):
        raise ValueError(f"target_pfa must lie strictly inside (0, 1), got {target_pfa!r}")
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"n must be an integer >= 1, got {n!r}")

    if method is CalibrationMethod.ANALYTIC:
        if spec.p != 2:
            raise ValueError(
                "analytic calibration is only available for the squaring detector (p=2); "
                "use EMPIRICAL_QUANTILE for other exponents"
            )
        lam = _bisect_chi2_isf(n, target_pfa)
        achieved = pfa_analytic(n, lam)
        if not spec.normalized:
            if channel is None:
                raise ValueError("unnormalized calibration needs the channel for sigma")
            lam *= channel.noise_variance  # sigma^2 = sigma^p at p=2
        return CalibrationResult(
            threshold=lam,
            target_pfa=target_pfa,
            achieved_pfa=achieved,
            method=method,
            tolerance=1e-9,
        )

    if method is CalibrationMethod.EMPIRICAL_QUANTILE:
        if trials < 100_000:
            raise ValueError(f"empirical calibration needs >= 1e5 trials, got {trials}")
        # Engine import is local so this closed-form module stays
        # import-light; the calibration domain keeps these draws
        # disjoint from every evaluation trial of the same seed.
        from .montecarlo import calibration_h0_statistics

        stats = calibration_h0_statistics(spec, n, trials, channel=channel, seed=seed)
        lam = float(np.quantile(stats, 1.0 - target_pfa, method="linear"))
        achieved = float(np.mean(stats >= lam))
        stderr = math.sqrt(achieved * (1.0 - achieved) / trials)
        return CalibrationResult(
            threshold=lam,
            target_pfa=target_pfa,
            achieved_pfa=achieved,
            method=method,
            tolerance=max(3.0 * stderr, 2.0 / trials),
            mc_trials=trials,
            stderr_pfa=stderr,
        )

    raise ValueError(f"unknown calibration method {method!r}")


def _bisect_chi2_isf(n: int, target: float) -> float:
    """Solve chi2_sf(n, lam) = target by bisection to |residual| <= 1e-10."""
    lo = 0.0
    hi = max(4.0 * n, 8.0)
    while pfa_analytic(n, hi) > target:
        hi *= 2.0
        if hi > 1e12:
            raise NumericError(f"could not bracket threshold for n={n}, target={target}")
    for _ in range(500):
        mid = 0.5 * (lo + hi)
        f = pfa_analytic(n, mid)
        if abs(f - target) <= _BISECT_TOL:
            return mid
        if f > target:
            lo = mid
        else:
            hi = mid
    raise NumericError(f"threshold bisection stalled for n={n}, target={target}")

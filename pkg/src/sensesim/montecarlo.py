"""Seeded Monte Carlo engine for false-alarm and missed-detection rates.

Reproducibility contract
------------------------
Every estimator here is a pure function of (scenario, detector spec,
thresholds, seed).  Trial t of a run draws from the per-trial stream

    Stream.from_seed(scenario.seed).child(TRIAL_DOMAIN, t)

and hands it to the frame primitives of :mod:`sensesim.signal_channel`,
which read their fixed role sub-streams from it.  A naive loop over
trials,

    root = Stream.from_seed(sc.seed)
    for t in range(sc.trials):
        trial = root.child(TRIAL_DOMAIN, t)
        x = gen_primary(sc.signal, sc.n_samples, trial)
        y, _ = transmit(x, sc.channel, sc.snr_db, trial)
        hit = statistic(y, spec, sc.channel.noise_std) >= lam

reproduces the engine's statistics and counts bit for bit (H0 frames via
``noise_frame`` or the ``snr_db=None`` sentinel).  The engine merely
vectorizes that loop in fixed-size trial blocks; block boundaries and
worker counts cannot change any value, only wall-clock time.

Empirical-quantile threshold calibration draws from
``child(CALIBRATION_DOMAIN, t)`` instead, so calibration noise is
disjoint from every evaluation trial of the same seed.

Common random numbers
---------------------
Per-trial statistics are computed once and compared against every
threshold of a sweep, so empirical ROC curves and P_MD columns are
exactly monotone, not just statistically so.  Scenarios sharing a seed
share noise realizations trial for trial (the fading and signal draws
live on separate role streams), which pairs H0 with H1 and one SNR
column with the next.  The detector comparison evaluates both exponents
on the identical received frames and reports a paired-difference
standard error.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import reference
from .analytic import CalibrationMethod, calibrate_threshold
from .detector import DetectorSpec, statistic_rows
from .metrics import (
    ConfusionCounts,
    RatePoint,
    RocCurve,
    binomial_stderr,
    rates_from_counts,
    roc_assemble,
)
from .rng import MASK64, Stream, fold_in, fold_range, normal_block, uniform_block
from .signal_channel import (
    AWGN,
    FADING_ROLE,
    NOISE_ROLE,
    RAYLEIGH,
    SIGNAL_ROLE,
    Bpsk,
    ChannelModel,
    GaussianIid,
    SignalModel,
    Sinusoid,
    snr_to_linear,
)

TRIAL_DOMAIN = 1
CALIBRATION_DOMAIN = 2

# Trials per vectorized block, shrunk for very long frames to bound the
# working set.  Block size affects memory and speed only, never values.
_BLOCK_TRIALS = 65536
_BLOCK_BUDGET = 4_194_304  # samples per block


@dataclass(frozen=True)
class Scenario:
    """One experiment: channel, frame length, SNR (or noise-only), trials, seed."""

    channel: ChannelModel
    n_samples: int
    trials: int
    seed: int
    signal: SignalModel | None = None
    snr_db: float | None = None
    noise_only: bool = False

    def __post_init__(self):
        if not isinstance(self.n_samples, int) or self.n_samples < 1:
            raise ValueError(f"n_samples must be an integer >= 1, got {self.n_samples!r}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ValueError(f"trials must be an integer >= 1, got {self.trials!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= MASK64:
            raise ValueError(f"seed must be a 64-bit integer, got {self.seed!r}")
        if self.noise_only:
            if self.signal is not None or self.snr_db is not None:
                raise ValueError("a noise-only scenario carries no signal model or SNR")
        else:
            if self.signal is None:
                raise ValueError("a signal scenario needs a signal model")
            if not isinstance(self.signal, SignalModel):
                raise ValueError(f"signal must be a SignalModel, got {self.signal!r}")
            if not (isinstance(self.snr_db, (int, float)) and math.isfinite(self.snr_db)):
                raise ValueError(
                    f"snr_db must be finite, got {self.snr_db!r} "
                    "(use noise_only=True for the H0 case, not an SNR sentinel)"
                )

    def as_noise_only(self) -> "Scenario":
        """The H0 twin: same channel, frame length, trials, and seed."""
        return replace(self, signal=None, snr_db=None, noise_only=True)


@dataclass(frozen=True)
class ThresholdGrid:
    """Strictly decreasing thresholds, optionally carrying the P_FA targets
    they were calibrated to."""

    values: tuple[float, ...]
    pfa_targets: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.values:
            raise ValueError("a threshold grid needs at least one value")
        for lam in self.values:
            if not (isinstance(lam, float) and math.isfinite(lam) and lam >= 0):
                raise ValueError(f"thresholds must be finite floats >= 0, got {lam!r}")
        if any(b >= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError(f"thresholds must be strictly decreasing, got {self.values}")
        if self.pfa_targets is not None and len(self.pfa_targets) != len(self.values):
            raise ValueError("pfa_targets must pair one-to-one with thresholds")

    @classmethod
    def explicit(cls, values) -> "ThresholdGrid":
        return cls(tuple(float(v) for v in values))


DEFAULT_PFA_TARGETS = tuple(float(t) for t in np.geomspace(0.001, 0.9, 26))


def grid_from_pfa_targets(
    targets,
    spec: DetectorSpec,
    n: int,
    *,
    channel: ChannelModel | None = None,
    cal_trials: int = 100_000,
    seed: int = 0,
) -> ThresholdGrid:
    """Calibrate one threshold per P_FA target (given in increasing order).

    The squaring detector calibrates analytically; any other exponent
    goes through the empirical quantile of seeded calibration-domain
    noise statistics.
    """
    targets = [float(t) for t in targets]
    if any(b <= a for a, b in zip(targets, targets[1:])):
        raise ValueError("pfa targets must be strictly increasing")
    method = (
        CalibrationMethod.ANALYTIC if spec.p == 2 else CalibrationMethod.EMPIRICAL_QUANTILE
    )
    lams = []
    for t in targets:
        cal = calibrate_threshold(
            spec, n, t, method, channel=channel, trials=cal_trials, seed=seed
        )
        lams.append(cal.threshold)
    return ThresholdGrid(tuple(lams), pfa_targets=tuple(targets))


def default_threshold_grid(
    spec: DetectorSpec,
    n: int,
    *,
    channel: ChannelModel | None = None,
    cal_trials: int = 100_000,
    seed: int = 0,
) -> ThresholdGrid:
    """The 26-row default grid: P_FA targets log-spaced from 0.001 to 0.9."""
    return grid_from_pfa_targets(
        DEFAULT_PFA_TARGETS, spec, n, channel=channel, cal_trials=cal_trials, seed=seed
    )


def _signal_block(signal: SignalModel, keys: np.ndarray, n: int) -> np.ndarray:
    """Unit-convention signal samples for a block of trial keys."""
    if isinstance(signal, Bpsk):
        u = uniform_block(fold_in(keys, SIGNAL_ROLE), n)
        return np.where(u < 0.5, -1.0, 1.0) * math.sqrt(signal.power)
    if isinstance(signal, Sinusoid):
        k = np.arange(n, dtype=np.float64)
        row = math.sqrt(2.0 * signal.power) * np.cos(
            2.0 * np.pi * signal.cycles_per_frame * k / n
        )
        return np.broadcast_to(row, (keys.size, n))
    if isinstance(signal, GaussianIid):
        return normal_block(fold_in(keys, SIGNAL_ROLE), n) * math.sqrt(signal.power)
    raise ValueError(f"unknown signal model {signal!r}")


def _received_block(sc: Scenario, lo: int, hi: int, domain: int) -> np.ndarray:
    """Received frames for trials [lo, hi), shape (hi-lo, n_samples)."""
    n = sc.n_samples
    dom_key = Stream.from_seed(sc.seed).child(domain).key
    keys = fold_range(dom_key, np.arange(lo, hi, dtype=np.uint64))
    w = normal_block(fold_in(keys, NOISE_ROLE), n) * sc.channel.noise_std
    if sc.noise_only:
        return w
    x = _signal_block(sc.signal, keys, n)
    gamma = snr_to_linear(sc.snr_db)
    root_power = math.sqrt(gamma * sc.channel.noise_variance)
    if sc.channel.kind == RAYLEIGH:
        u = uniform_block(fold_in(keys, FADING_ROLE), 1)[:, 0]
        amp = np.sqrt(-np.log(u)) * root_power
        return amp[:, None] * x + w
    return root_power * x + w


def _stats_block(sc: Scenario, specs, lo: int, hi: int, domain: int):
    y = _received_block(sc, lo, hi, domain)
    sigma = sc.channel.noise_std
    return tuple(statistic_rows(y, spec, sigma) for spec in specs)


def _block_ranges(trials: int, n: int):
    block = max(1, min(_BLOCK_TRIALS, _BLOCK_BUDGET // max(1, n)))
    return [(lo, min(lo + block, trials)) for lo in range(0, trials, block)]


def _run_blocks(sc: Scenario, specs, domain: int, workers: int):
    outs = tuple(np.empty(sc.trials, dtype=np.float64) for _ in specs)
    ranges = _block_ranges(sc.trials, sc.n_samples)
    if workers <= 1:
        for lo, hi in ranges:
            for out, block in zip(outs, _stats_block(sc, specs, lo, hi, domain)):
                out[lo:hi] = block
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_stats_block, sc, specs, lo, hi, domain): (lo, hi)
                for lo, hi in ranges
            }
            for fut, (lo, hi) in futures.items():
                for out, block in zip(outs, fut.result()):
                    out[lo:hi] = block
    return outs


def trial_statistics(
    sc: Scenario, spec: DetectorSpec, *, workers: int = 1
) -> np.ndarray:
    """Detection statistics of every trial, in trial order.

    Identical values for any worker count; element t equals the scalar
    recomputation through the per-trial stream recipe in the module
    docstring.
    """
    return _run_blocks(sc, (spec,), TRIAL_DOMAIN, workers)[0]


def trial_statistics_pair(
    sc: Scenario, spec_a: DetectorSpec, spec_b: DetectorSpec, *, workers: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Both detectors' statistics over the identical received frames."""
    return _run_blocks(sc, (spec_a, spec_b), TRIAL_DOMAIN, workers)


def calibration_h0_statistics(
    spec: DetectorSpec,
    n: int,
    trials: int,
    *,
    channel: ChannelModel | None = None,
    seed: int = 0,
    workers: int = 1,
) -> np.ndarray:
    """Pure-noise statistics from the calibration domain of ``seed``."""
    channel = channel if channel is not None else ChannelModel(AWGN, 1.0)
    sc = Scenario(channel=channel, n_samples=n, trials=trials, seed=seed, noise_only=True)
    return _run_blocks(sc, (spec,), CALIBRATION_DOMAIN, workers)[0]


def count_detections(
    sc: Scenario, spec: DetectorSpec, lam: float, *, workers: int = 1
) -> int:
    """Number of trials whose statistic meets the threshold (ties detect)."""
    if not (math.isfinite(lam) and lam >= 0):
        raise ValueError(f"threshold must be finite and >= 0, got {lam!r}")
    stats = trial_statistics(sc, spec, workers=workers)
    return int(np.count_nonzero(stats >= lam))


def estimate_pfa(
    sc: Scenario, spec: DetectorSpec, lam: float, *, workers: int = 1
) -> RatePoint:
    """Empirical false-alarm probability of a noise-only scenario."""
    if not sc.noise_only:
        raise ValueError("estimate_pfa needs a noise-only scenario; "
                         "use estimate_pmd for signal scenarios")
    fa = count_detections(sc, spec, lam, workers=workers)
    pfa = fa / sc.trials
    return RatePoint.pfa_only(pfa, stderr_pfa=binomial_stderr(pfa, sc.trials))


def estimate_pmd(
    sc: Scenario, spec: DetectorSpec, lam: float, *, workers: int = 1
) -> RatePoint:
    """Empirical missed-detection probability of a signal scenario.

    pmd is the measured fraction; pd = 1 - pmd is derived from it.
    """
    if sc.noise_only:
        raise ValueError("estimate_pmd needs a signal scenario; "
                         "use estimate_pfa for noise-only scenarios")
    det = count_detections(sc, spec, lam, workers=workers)
    pmd = (sc.trials - det) / sc.trials
    return RatePoint.from_pmd(pmd, stderr_pd=binomial_stderr(pmd, sc.trials))


def roc_sweep(
    sc_h0: Scenario,
    sc_h1: Scenario,
    spec: DetectorSpec,
    grid: ThresholdGrid,
    *,
    workers: int = 1,
) -> RocCurve:
    """One operating point per threshold, all thresholds sharing trials.

    Per-trial statistics are computed once per hypothesis and reused
    across the grid, so the empirical curve is exactly monotone.
    """
    if not sc_h0.noise_only:
        raise ValueError("sc_h0 must be noise-only")
    if sc_h1.noise_only:
        raise ValueError("sc_h1 must carry a signal")
    if sc_h0.n_samples != sc_h1.n_samples or sc_h0.channel != sc_h1.channel:
        raise ValueError("H0 and H1 scenarios must share frame length and channel")
    s0 = trial_statistics(sc_h0, spec, workers=workers)
    s1 = trial_statistics(sc_h1, spec, workers=workers)
    points = []
    for lam in grid.values:
        counts = ConfusionCounts(
            h0_trials=sc_h0.trials,
            h1_trials=sc_h1.trials,
            false_alarms=int(np.count_nonzero(s0 >= lam)),
            detections=int(np.count_nonzero(s1 >= lam)),
        )
        points.append((lam, rates_from_counts(counts)))
    return roc_assemble(points)


@dataclass(frozen=True)
class PmdTable:
    """Missed-detection grid: one row per threshold, one column per SNR.

    Construction validates the two trend invariants at 3 combined
    standard errors: pmd must not increase down any column (thresholds
    fall) nor along any row (SNR rises).
    """

    grid: ThresholdGrid
    snr_list_db: tuple[float, ...]
    values: np.ndarray
    stderr: np.ndarray
    detector: DetectorSpec

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64)
        se = np.array(self.stderr, dtype=np.float64)
        rows, cols = len(self.grid.values), len(self.snr_list_db)
        if v.shape != (rows, cols) or se.shape != (rows, cols):
            raise ValueError(
                f"table shape {v.shape} does not match grid x snr ({rows}, {cols})"
            )
        if np.any((v < 0) | (v > 1)):
            raise ValueError("pmd values must lie in [0, 1]")
        slack_col = 3.0 * (se[:-1, :] + se[1:, :])
        if np.any(v[1:, :] > v[:-1, :] + slack_col):
            raise ValueError("pmd increased down a column beyond 3 stderr")
        slack_row = 3.0 * (se[:, :-1] + se[:, 1:])
        if np.any(v[:, 1:] > v[:, :-1] + slack_row):
            raise ValueError("pmd increased with SNR beyond 3 stderr")
        for arr in (v, se):
            arr.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "stderr", se)

    @property
    def reference_pmd(self) -> np.ndarray | None:
        """The bundled reference table matching this detector's exponent,
        when the simulated shape lines up with it (26 rows, SNR -10/0/10 dB)."""
        if self.detector.p not in (2, 3):
            return None
        if len(self.grid.values) != reference.REFERENCE_ROWS:
            return None
        if tuple(self.snr_list_db) != reference.REFERENCE_SNR_DB:
            return None
        return reference.reference_for(self.detector.p)


def pmd_table(
    columns: Sequence[Scenario],
    spec: DetectorSpec,
    grid: ThresholdGrid,
    *,
    workers: int = 1,
) -> PmdTable:
    """Fill the threshold-by-SNR missed-detection matrix.

    Columns are signal scenarios in strictly increasing SNR order and
    must share the frame length.  Within a column all thresholds share
    the same trials (exactly monotone down the grid); columns sharing a
    seed also share noise and fading draws trial for trial.
    """
    if not columns:
        raise ValueError("pmd_table needs at least one scenario column")
    n = columns[0].n_samples
    for sc in columns:
        if sc.noise_only:
            raise ValueError("pmd_table columns must be signal scenarios")
        if sc.n_samples != n:
            raise ValueError("pmd_table columns must share the frame length")
    snrs = [sc.snr_db for sc in columns]
    if any(b <= a for a, b in zip(snrs, snrs[1:])):
        raise ValueError("pmd_table columns must come in strictly increasing SNR order")
    rows = len(grid.values)
    values = np.empty((rows, len(columns)))
    stderr = np.empty_like(values)
    for c, sc in enumerate(columns):
        stats = trial_statistics(sc, spec, workers=workers)
        for r, lam in enumerate(grid.values):
            pmd = int(np.count_nonzero(stats < lam)) / sc.trials
            values[r, c] = pmd
            stderr[r, c] = binomial_stderr(pmd, sc.trials)
    return PmdTable(
        grid=grid,
        snr_list_db=tuple(float(s) for s in snrs),
        values=values,
        stderr=stderr,
        detector=spec,
    )


@dataclass(frozen=True)
class ComparisonRow:
    """One matched-P_FA comparison of the two detectors."""

    target_pfa: float
    lambda_a: float
    lambda_b: float
    pmd_a: float
    pmd_b: float
    delta: float  # pmd_a - pmd_b; positive means detector b misses less
    stderr_delta: float


@dataclass(frozen=True)
class ComparisonReport:
    """Matched-P_FA detector comparison over identical received frames."""

    rows: tuple[ComparisonRow, ...]
    spec_a: DetectorSpec
    spec_b: DetectorSpec
    snr_db: float | None
    n_samples: int
    trials: int
    seed: int

    def sign_summary(self) -> str:
        """State the measured sign of each delta; no outcome is assumed."""
        lines = []
        for row in self.rows:
            if row.delta > 0:
                verdict = f"p={self.spec_b.p} misses less"
            elif row.delta < 0:
                verdict = f"p={self.spec_a.p} misses less"
            else:
                verdict = "no measured difference"
            lines.append(
                f"target pfa {row.target_pfa:g}: "
                f"pmd(p={self.spec_a.p}) - pmd(p={self.spec_b.p}) = "
                f"{row.delta:+.6f} +/- {row.stderr_delta:.6f} ({verdict})"
            )
        return "\n".join(lines)


def compare_detectors(
    sc_h0: Scenario,
    sc_h1: Scenario,
    pfa_targets,
    spec_a: DetectorSpec = DetectorSpec(p=2),
    spec_b: DetectorSpec = DetectorSpec(p=3),
    *,
    cal_trials: int = 100_000,
    workers: int = 1,
) -> ComparisonReport:
    """Calibrate both detectors to each target P_FA and compare their P_MD.

    Thresholds come from the analytic route when the exponent admits one
    (p=2) and from the empirical quantile otherwise, both anchored to
    ``sc_h0``'s channel and seed.  Both detectors then score the
    identical received frames of ``sc_h1``, and each row reports the
    paired difference delta = pmd_a - pmd_b with its paired standard
    error.  The sign of delta is measured, never assumed.

    ``sc_h1`` may itself be noise-only: that is the degenerate no-signal
    check, where both detectors should miss at rate 1 - target.
    """
    if not sc_h0.noise_only:
        raise ValueError("sc_h0 must be noise-only")
    if sc_h0.n_samples != sc_h1.n_samples or sc_h0.channel != sc_h1.channel:
        raise ValueError("scenarios must share frame length and channel")
    targets = [float(t) for t in pfa_targets]
    for t in targets:
        if not 0.0 < t < 1.0:
            raise ValueError(f"pfa targets must lie strictly inside (0, 1), got {t!r}")

    def calibrate(spec: DetectorSpec, target: float) -> float:
        method = (
            CalibrationMethod.ANALYTIC if spec.p == 2 else CalibrationMethod.EMPIRICAL_QUANTILE
        )
        cal = calibrate_threshold(
            spec,
            sc_h0.n_samples,
            target,
            method,
            channel=sc_h0.channel,
            trials=cal_trials,
            seed=sc_h0.seed,
        )
        return cal.threshold

    stats_a, stats_b = trial_statistics_pair(sc_h1, spec_a, spec_b, workers=workers)
    trials = sc_h1.trials
    rows = []
    for t in targets:
        lam_a = calibrate(spec_a, t)
        lam_b = calibrate(spec_b, t)
        miss_a = stats_a < lam_a
        miss_b = stats_b < lam_b
        pmd_a = int(np.count_nonzero(miss_a)) / trials
        pmd_b = int(np.count_nonzero(miss_b)) / trials
        d = miss_a.astype(np.float64) - miss_b.astype(np.float64)
        stderr_delta = float(np.sqrt(np.var(d) / trials))
        rows.append(
            ComparisonRow(
                target_pfa=t,
                lambda_a=lam_a,
                lambda_b=lam_b,
                pmd_a=pmd_a,
                pmd_b=pmd_b,
                delta=pmd_a - pmd_b,
                stderr_delta=stderr_delta,
            )
        )
    return ComparisonReport(
        rows=tuple(rows),
        spec_a=spec_a,
        spec_b=spec_b,
        snr_db=sc_h1.snr_db,
        n_samples=sc_h1.n_samples,
        trials=trials,
        seed=sc_h1.seed,
    )

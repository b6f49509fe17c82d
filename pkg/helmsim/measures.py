# helmsim/measures.py
"""
Time-aligned distance measures between a ground-truth trajectory and a
prediction, and the cVDM quality category.

Every measure averages over knots 1..n; knot 0 is the shared initial
condition. Heading residuals are wrapped to the shortest angular distance.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, ConfigError, DegenerateContextError, DegenerateDenominatorError
from .validation import require_positive

logger = logging.getLogger(__name__)

DENOM_EPS = 1e-6
OPTIMAL = "optimal"
SATISFACTORY = "satisfactory"
SUB_OPTIMAL = "sub_optimal"


@dataclass(frozen=True, eq=False)
class AlignedTrajectoryPair:
    """Truth and prediction with identical knot times (n + 1 >= 2 knots)."""

    truth: object       # Trajectory
    prediction: object  # Trajectory

    def __post_init__(self):
        if len(self.truth) != len(self.prediction):
            raise AlignmentError(f"truth has {len(self.truth)} knots, prediction {len(self.prediction)}")
        if len(self.truth) < 2:
            raise AlignmentError("at least two knots (n >= 1) are needed")
        if not np.array_equal(self.truth.t, self.prediction.t):
            raise AlignmentError("truth and prediction timestamps differ")

    @property
    def n(self):
        return len(self.truth) - 1

    def residuals(self):
        """
        Per-knot absolute differences for knots 1..n.

        Returns:
            dict: x, y, psi, u, v, r -> np.ndarray of length n
        """
        t, p = self.truth, self.prediction
        out = {name: np.abs(getattr(t, name)[1:] - getattr(p, name)[1:]) for name in ("x", "y", "u", "v", "r")}
        out["psi"] = np.abs(heading_residual(t.psi[1:], p.psi[1:]))
        return out


def heading_residual(a, b):
    """Shortest signed angular distance a - b, in (-pi, pi]."""
    d = np.mod(np.asarray(a, dtype=float) - np.asarray(b, dtype=float) + math.pi, 2.0 * math.pi) - math.pi
    return np.where(d == -math.pi, math.pi, d)


def mmd(pair):
    """Mean Manhattan distance over position, m."""
    res = pair.residuals()
    return float(np.mean(res["x"] + res["y"]))


def med(pair):
    """Mean Euclidean distance over position, m."""
    res = pair.residuals()
    return float(np.mean(np.hypot(res["x"], res["y"])))


def asd(pair):
    """Absolute state distance; mixes units across all six state dimensions."""
    res = pair.residuals()
    return float(np.mean(sum(res[k] for k in ("x", "y", "psi", "u", "v", "r"))))


def msd(pair):
    res = pair.residuals()
    return float(np.mean(np.sqrt(sum(res[k] ** 2 for k in ("x", "y", "psi", "u", "v", "r")))))


def _percentage_terms(pair, denom_eps):
    # positions relative to the truth's first knot; the prediction shares the shift
    t = pair.truth
    x0, y0 = t.x[0], t.y[0]
    truth_dims = np.vstack([t.x[1:] - x0, t.y[1:] - y0, t.psi[1:], t.u[1:]])
    res = pair.residuals()
    diffs = np.vstack([res["x"], res["y"], res["psi"], res["u"]])
    l1_denominator = np.sum(np.abs(truth_dims), axis=0)
    keep = l1_denominator >= denom_eps
    if not keep.any():
        raise DegenerateDenominatorError(f"every knot has a denominator below {denom_eps}")
    return truth_dims[:, keep], diffs[:, keep], int(np.count_nonzero(~keep))


def _manhattan_pct(truth_dims, diffs):
    return float(100.0 * np.mean(np.sum(diffs, axis=0) / np.sum(np.abs(truth_dims), axis=0)))


def _euclidean_pct(truth_dims, diffs):
    ratio = np.sqrt(np.sum(diffs ** 2, axis=0)) / np.sqrt(np.sum(truth_dims ** 2, axis=0))
    return float(100.0 * np.mean(ratio))


def pmd(pair, denom_eps=DENOM_EPS):
    """
    Percentage of Manhattan distance over x, y, psi and u.

    Positions are taken in a local frame anchored at the truth's first knot and
    the denominator sums absolute values. Knots whose denominator is below
    denom_eps are skipped.

    Returns:
        float: percent
    """
    return _manhattan_pct(*_percentage_terms(pair, denom_eps)[:2])


def ped(pair, denom_eps=DENOM_EPS):
    """Percentage of Euclidean distance; same frame and skip rule as pmd()."""
    return _euclidean_pct(*_percentage_terms(pair, denom_eps)[:2])


def skipped_knots(pair, denom_eps=DENOM_EPS):
    """Number of knots excluded from pmd()/ped() for a vanishing denominator."""
    return _percentage_terms(pair, denom_eps)[2]


@dataclass(frozen=True)
class NormalizationContext:
    l_bar: float     # m, chord length of the truth track
    u_mean: float    # m/s, mean total speed of the truth
    r_max: float     # rad/s, maximum turning capability

    def __post_init__(self):
        for name in ("l_bar", "u_mean", "r_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DegenerateContextError(f"{name} must be > 0, got {value}")


def normalization_context(truth, r_max, denom_eps=DENOM_EPS):
    """
    Normalisers for cVDM taken from the truth trajectory.

    Args:
        truth (Trajectory): Ground truth, at least two knots
        r_max (float): Maximum yaw rate of the vessel, rad/s
        denom_eps (float): Lower bound for L_bar and U_mean

    Returns:
        NormalizationContext: sum of chords, mean of sqrt(u^2 + v^2) over all knots, r_max

    Raises:
        DegenerateContextError: On fewer than two knots or vanishing normalisers
    """
    if len(truth) < 2:
        raise DegenerateContextError("truth needs at least two knots")
    l_bar = float(np.sum(np.hypot(np.diff(truth.x), np.diff(truth.y))))
    u_mean = float(np.mean(np.hypot(truth.u, truth.v)))
    if l_bar < denom_eps:
        raise DegenerateContextError(f"truth track length {l_bar} m is below {denom_eps}")
    if u_mean < denom_eps:
        raise DegenerateContextError(f"truth mean speed {u_mean} m/s is below {denom_eps}")
    return NormalizationContext(l_bar, u_mean, r_max)


def cvdm(pair, ctx):
    """
    Custom vessel distance measure, percent.

    Per knot: |dx|/L + |dy|/L + |dpsi|/pi + |du|/U_mean + |dv|/U_mean + |dr|/r_max,
    summed (not averaged) over the six terms, then averaged over knots.
    """
    res = pair.residuals()
    per_knot = ((res["x"] + res["y"]) / ctx.l_bar
                + res["psi"] / math.pi
                + (res["u"] + res["v"]) / ctx.u_mean
                + res["r"] / ctx.r_max)
    return float(100.0 * np.mean(per_knot))


@dataclass(frozen=True)
class MeasureThresholds:
    optimal_below: float = 1.5
    satisfactory_below: float = 4.0

    def __post_init__(self):
        require_positive("measures.optimal_below", self.optimal_below)
        if not self.satisfactory_below > self.optimal_below:
            raise ConfigError("must exceed optimal_below", field="measures.satisfactory_below")


def categorize(cvdm_value, thresholds=None):
    """
    Quality category of a cVDM value.

    Args:
        cvdm_value (float): cVDM, percent
        thresholds (MeasureThresholds): Category limits, defaults 1.5 / 4.0

    Returns:
        str: 'optimal', 'satisfactory' or 'sub_optimal'
    """
    thresholds = thresholds or MeasureThresholds()
    if cvdm_value < thresholds.optimal_below:
        return OPTIMAL
    if cvdm_value < thresholds.satisfactory_below:
        return SATISFACTORY
    return SUB_OPTIMAL


@dataclass(frozen=True)
class MeasureReport:
    mmd: float
    med: float
    asd: float
    msd: float
    pmd: float
    ped: float
    cvdm: float
    category: str
    skipped_knots: int = 0

    def to_dict(self):
        return {
            "mmd_m": self.mmd, "med_m": self.med, "asd": self.asd, "msd": self.msd,
            "pmd_pct": self.pmd, "ped_pct": self.ped, "cvdm_pct": self.cvdm,
            "category": self.category, "skipped_knots": self.skipped_knots,
        }


def measure_report(pair, ctx, thresholds=None, denom_eps=DENOM_EPS):
    """Every measure, the category and the number of knots pmd/ped skipped."""
    truth_dims, diffs, skipped = _percentage_terms(pair, denom_eps)
    pmd_value = _manhattan_pct(truth_dims, diffs)
    ped_value = _euclidean_pct(truth_dims, diffs)
    cvdm_value = cvdm(pair, ctx)
    if skipped:
        logger.debug(f"{skipped} knot(s) skipped in pmd/ped")
    return MeasureReport(
        mmd=mmd(pair), med=med(pair), asd=asd(pair), msd=msd(pair),
        pmd=pmd_value, ped=ped_value, cvdm=cvdm_value,
        category=categorize(cvdm_value, thresholds),
        skipped_knots=skipped,
    )

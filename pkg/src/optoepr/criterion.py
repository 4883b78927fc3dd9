"""Closed-form EPR inference-variance machinery on the reduced parameters.

For each quadrature angle the minimized error of inferring mode 1 from mode 2
is ``gamma_c * (1 + eps/(1 + eps))`` with

    eps(0)    = ((t_cal - 1)/2) * p_cal / (delta^2 + p_cal + 1/4)^2
    eps(pi/2) = ((delta^2 + p_cal + t_cal/4) / (2 delta^2))
                 * p_cal / (delta^2 + p_cal + 1/4)^2

Both inferred variances are reported in units of gamma_c, so the Heisenberg
bound on their product is exactly 1 and a paradox is ``lhs < 1``.

The module also carries the generic quadratic-gain minimizer used by the
frequency-domain solver, dense (p_cal, t_cal) grid scans, extraction of the
``lhs = 1`` boundary contour, and a 1-D power optimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidRegimeError, ParameterError
from .model import DimensionlessParams

# Below this value of eps the closed form would give a non-positive variance;
# such a point is flagged as an invalid regime rather than clamped.
EPS_FLOOR = -0.5

# Relative tolerance on positive semidefiniteness of a spectral triple.
PSD_TOL = 1e-9


@dataclass(frozen=True)
class EprResult:
    """Criterion evaluation at one reduced parameter point.

    ``var_x`` and ``var_y`` are the minimized inference variances at phi = 0
    and phi = pi/2 in units of gamma_c; ``lhs`` is their product and
    ``paradox`` is true when it beats the Heisenberg bound of 1.
    """

    eps0: float
    eps_half_pi: float
    var_x: float
    var_y: float
    lhs: float
    paradox: bool


@dataclass(frozen=True)
class GainPair:
    """Optimal inference gains at phi = 0 (g_x) and phi = pi/2 (g_y)."""

    g_x: float
    g_y: float


@dataclass(frozen=True)
class ScanGrid:
    """Dense criterion evaluation over a (p_cal, t_cal) rectangle.

    ``lhs_values`` has shape (len(t_axis), len(p_axis)); invalid-regime cells
    hold NaN.
    """

    p_axis: np.ndarray
    t_axis: np.ndarray
    delta: float
    lhs_values: np.ndarray


def epsilon_zero(dp: DimensionlessParams) -> float:
    """Amplitude-quadrature correlation parameter eps(0).

    Negative exactly when t_cal < 1 and p_cal > 0, which is the resource
    that pulls the phi = 0 inference variance below the vacuum level.
    """
    d2 = dp.delta * dp.delta
    return 0.5 * (dp.t_cal - 1.0) * dp.p_cal / (d2 + dp.p_cal + 0.25) ** 2


def epsilon_half_pi(dp: DimensionlessParams) -> float:
    """Phase-quadrature correlation parameter eps(pi/2); always >= 0.

    Diverges as delta -> 0 at fixed p_cal: with vanishing detuning only the
    amplitude quadratures correlate and no paradox can form.
    """
    if dp.delta == 0.0:
        raise ParameterError("epsilon_half_pi is undefined at delta = 0")
    d2 = dp.delta * dp.delta
    return ((d2 + dp.p_cal + 0.25 * dp.t_cal) / (2.0 * d2)
            * dp.p_cal / (d2 + dp.p_cal + 0.25) ** 2)


def inferred_variance(eps: float) -> float:
    """Minimized inference variance 1 + eps/(1 + eps), in gamma_c units.

    Raises
    ------
    InvalidRegimeError
        For eps <= -1/2, where the closed form would violate variance
        positivity.
    """
    if eps <= EPS_FLOOR:
        raise InvalidRegimeError(
            f"eps = {eps!r} <= -1/2: inference variance would be non-positive")
    return 1.0 + eps / (1.0 + eps)


def epr_lhs(dp: DimensionlessParams) -> EprResult:
    """Evaluate the full criterion at one reduced parameter point."""
    e0 = epsilon_zero(dp)
    eh = epsilon_half_pi(dp)
    vx = inferred_variance(e0)
    vy = inferred_variance(eh)
    lhs = vx * vy
    return EprResult(eps0=e0, eps_half_pi=eh, var_x=vx, var_y=vy,
                     lhs=lhs, paradox=lhs < 1.0)


def optimal_gains(dp: DimensionlessParams) -> GainPair:
    """Closed-form optimal inference gains, g = eps/(1 + eps) per angle."""
    e0 = epsilon_zero(dp)
    eh = epsilon_half_pi(dp)
    if e0 <= EPS_FLOOR:
        raise InvalidRegimeError(f"eps0 = {e0!r} <= -1/2")
    return GainPair(g_x=e0 / (1.0 + e0), g_y=eh / (1.0 + eh))


def optimal_gain(s11: float, s12: float, s22: float) -> float:
    """Minimizer g* = s12/s22 of the inference quadratic s11 - 2 g s12 + g^2 s22.

    The minimized value is s11 - s12^2/s22.  The triple must be a valid
    symmetrized spectral matrix: s22 > 0 and s11*s22 >= s12^2 within a
    relative tolerance of 1e-9.
    """
    if not (s22 > 0.0):
        raise ParameterError(f"s22 must be positive, got {s22!r}")
    violation = s12 * s12 - s11 * s22
    scale = max(abs(s11 * s22), s12 * s12)
    if violation > PSD_TOL * scale:
        raise ParameterError(
            f"spectral matrix not positive semidefinite: s12^2 - s11*s22 = {violation!r}")
    return s12 / s22


def _lhs_arrays(p: np.ndarray, t: np.ndarray, delta: float) -> np.ndarray:
    """Vectorized criterion with NaN sentinels for invalid-regime cells."""
    d2 = delta * delta
    denom = (d2 + p + 0.25) ** 2
    e0 = 0.5 * (t - 1.0) * p / denom
    eh = (d2 + p + 0.25 * t) / (2.0 * d2) * p / denom
    with np.errstate(invalid="ignore", divide="ignore"):
        lhs = (1.0 + e0 / (1.0 + e0)) * (1.0 + eh / (1.0 + eh))
    return np.where(e0 <= EPS_FLOOR, np.nan, lhs)


def scan(p_range: tuple[float, float], t_range: tuple[float, float],
         delta: float, resolution: int | tuple[int, int]) -> ScanGrid:
    """Evaluate the criterion on a dense rectangular (p_cal, t_cal) grid.

    ``resolution`` is the number of points per axis (a single int applies to
    both axes) and must be at least 2; ranges must be non-degenerate with
    non-negative lower ends.
    """
    if isinstance(resolution, int):
        res_p = res_t = resolution
    else:
        res_p, res_t = resolution
    p_lo, p_hi = map(float, p_range)
    t_lo, t_hi = map(float, t_range)
    if not (p_hi > p_lo) or not (t_hi > t_lo):
        raise ParameterError("scan ranges must be non-degenerate")
    if p_lo < 0.0 or t_lo < 0.0:
        raise ParameterError("p_cal and t_cal ranges must be non-negative")
    if not (delta > 0.0):
        raise ParameterError(f"delta must be > 0, got {delta!r}")
    if res_p < 2 or res_t < 2:
        raise ParameterError("resolution must be >= 2 per axis")
    p_axis = np.linspace(p_lo, p_hi, res_p)
    t_axis = np.linspace(t_lo, t_hi, res_t)
    lhs = _lhs_arrays(p_axis[np.newaxis, :], t_axis[:, np.newaxis], delta)
    return ScanGrid(p_axis=p_axis, t_axis=t_axis, delta=delta, lhs_values=lhs)


def paradox_boundary(grid: ScanGrid) -> np.ndarray:
    """Linear-interpolation contour of lhs = 1 along grid edges.

    Returns an (n, 2) array of (p_cal, t_cal) crossing points collected by
    marching over horizontal then vertical cell edges; empty when the grid
    never crosses the bound.  Edges touching NaN cells are skipped.
    """
    f = grid.lhs_values - 1.0
    points = []
    nt, npnts = f.shape
    for i in range(nt):
        for j in range(npnts - 1):
            a, b = f[i, j], f[i, j + 1]
            if not (np.isfinite(a) and np.isfinite(b)):
                continue
            if a == 0.0:
                points.append((grid.p_axis[j], grid.t_axis[i]))
            elif a * b < 0.0:
                frac = a / (a - b)
                p = grid.p_axis[j] + frac * (grid.p_axis[j + 1] - grid.p_axis[j])
                points.append((p, grid.t_axis[i]))
    for j in range(npnts):
        for i in range(nt - 1):
            a, b = f[i, j], f[i + 1, j]
            if not (np.isfinite(a) and np.isfinite(b)):
                continue
            if a * b < 0.0:
                frac = a / (a - b)
                t = grid.t_axis[i] + frac * (grid.t_axis[i + 1] - grid.t_axis[i])
                points.append((grid.p_axis[j], t))
    if not points:
        return np.empty((0, 2))
    return np.array(points)


def best_power(t_cal: float, delta: float, p_max: float = 10.0,
               tol: float = 1e-6) -> tuple[float, float]:
    """Minimize lhs over p_cal in (0, p_max] at fixed (t_cal, delta).

    A coarse grid brackets the global minimum, then golden-section search
    refines it to absolute tolerance ``tol`` in p_cal.  Returns
    (p_star, lhs_star).
    """
    if t_cal < 0.0:
        raise ParameterError(f"t_cal must be >= 0, got {t_cal!r}")
    if not (delta > 0.0):
        raise ParameterError(f"delta must be > 0, got {delta!r}")
    if not (p_max > 0.0):
        raise ParameterError(f"p_max must be > 0, got {p_max!r}")

    def lhs_at(p: float) -> float:
        return float(_lhs_arrays(np.array(p), np.array(t_cal), delta))

    # Bracket the global minimum on a linear grid plus a geometric tail: with
    # no paradox window the infimum sits at the p -> 0 edge, where the
    # landscape varies on scales far below p_max.
    n = 512
    lin = np.linspace(p_max / n, p_max, n)
    geo = np.geomspace(p_max * 1e-10, p_max / n, 65)[:-1]
    ps = np.concatenate([geo, lin])
    vals = _lhs_arrays(ps, np.full_like(ps, t_cal), delta)
    k = int(np.nanargmin(vals))
    lo = ps[k - 1] if k > 0 else 0.5 * ps[0]
    hi = ps[k + 1] if k < len(ps) - 1 else p_max

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = lhs_at(c), lhs_at(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = lhs_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = lhs_at(d)
    p_star = 0.5 * (a + b)
    return p_star, lhs_at(p_star)

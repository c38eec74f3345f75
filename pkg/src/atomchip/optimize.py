"""Gate-duration optimisation for the simulated blockade CZ gate."""

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import minimize_scalar

from .gates import minimum_gate_error
from .simulate import simulate_cz_gate


@dataclass(frozen=True)
class PulseOptimum:
    duration: float
    error: float
    method: str                  # "golden" or "grid"
    evaluations: int
    advisory: str | None = None
    report: object = None


def golden_minimize(func, lower, upper, grid_points=15, xtol=1e-4):
    """Minimise ``func`` over [lower, upper] on a log scale.

    A coarse log grid brackets the minimum and golden-section search
    refines it. If the best grid point sits on an edge there is no
    bracket; the grid optimum is returned with an advisory instead.
    """
    if not 0 < lower < upper:
        raise ValueError("need 0 < lower < upper")
    xs = np.linspace(math.log(lower), math.log(upper), grid_points)
    cache = {}

    def f(x):
        if x not in cache:
            cache[x] = float(func(math.exp(x)))
        return cache[x]

    ys = [f(x) for x in xs]
    i = int(np.argmin(ys))
    if i in (0, grid_points - 1):
        side = "lower" if i == 0 else "upper"
        return math.exp(xs[i]), ys[i], "grid", len(cache), (
            f"no interior minimum: optimum on the {side} search boundary (grid fallback)")
    res = minimize_scalar(f, bracket=(xs[i - 1], xs[i], xs[i + 1]), method="golden",
                          options={"xtol": xtol})
    x, y = (res.x, res.fun) if res.fun <= ys[i] else (xs[i], ys[i])
    return math.exp(x), y, "golden", len(cache), None


def estimated_optimal_duration(blockade_hz, lifetime):
    """Rough pi-2pi-pi optimum from balancing decay ~ 1/(Omega tau) against leakage ~ (Omega/B)^2."""
    b = 2 * math.pi * blockade_hz
    rabi = (14.0 * b * b / lifetime) ** (1 / 3)
    return 4 * math.pi / rabi


def averaged_cz_error(control, target, level, duration, *, blockade_hz, decay_rate=None,
                      samples=8):
    """CZ error averaged over one period of the blockade-shifted oscillation.

    With a finite blockade the target's 2 pi pulse leaves a residual
    Rydberg population (Omega/B)^2 sin^2(~ pi B T) that oscillates fast
    with the gate time. Averaging over gate times spread across 2/B removes
    these fringes, leaving the smooth trade-off between decay and imperfect
    blockade.
    """
    if not math.isfinite(blockade_hz) or samples <= 1:
        offsets = [0.0]
    else:
        offsets = [k * 2.0 / (blockade_hz * samples) for k in range(samples)]
    errs = [simulate_cz_gate(control, target, level, blockade_hz=blockade_hz,
                             gate_duration=duration + dt, decay_rate=decay_rate).gate_error
            for dt in offsets]
    return math.fsum(errs) / len(errs)


def optimize_cz_duration(control, target, level, *, blockade_hz, decay_rate=None,
                         bounds=None, grid_points=15, samples=8):
    """Golden-section search over the total pi-2pi-pi duration.

    The objective is :func:`averaged_cz_error`; ``samples=1`` optimises
    the bare error instead, which has many local minima. Returns the best
    duration, the averaged error there and the fidelity report of a
    single gate of that duration.
    """
    if decay_rate is None:
        decay_rate = level.decay_rate
    if bounds is None:
        if decay_rate > 0 and math.isfinite(blockade_hz):
            t0 = estimated_optimal_duration(blockade_hz, 1 / decay_rate)
            bounds = (t0 / 10, t0 * 10)
        else:
            raise ValueError("bounds are required without finite blockade and decay")

    def err(t):
        return averaged_cz_error(control, target, level, t, blockade_hz=blockade_hz,
                                 decay_rate=decay_rate, samples=samples)

    t, e, method, n, advisory = golden_minimize(err, *bounds, grid_points=grid_points)
    report = simulate_cz_gate(control, target, level, blockade_hz=blockade_hz,
                              gate_duration=t, decay_rate=decay_rate)
    return PulseOptimum(duration=t, error=e, method=method, evaluations=n,
                        advisory=advisory, report=report)


def error_law_sweep(control, target, level, blockades_hz, decay_rate=None):
    """Optimised simulated CZ error for each blockade, with the closed-form law.

    Returns rows of (B tau, simulated optimum, 3 (B tau)^(-2/3), duration).
    """
    if decay_rate is None:
        decay_rate = level.decay_rate
    tau = 1 / decay_rate
    rows = []
    for b in blockades_hz:
        opt = optimize_cz_duration(control, target, level, blockade_hz=b, decay_rate=decay_rate)
        rows.append((2 * math.pi * b * tau, opt.error, minimum_gate_error(b, tau), opt.duration))
    return rows


def fit_loglog_slope(x, y):
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)

"""Worst-case guarantee curves for the solvers, as functions of prices.

All factors multiply the true optimum: the ratio greedy is guaranteed
half of ``factor_lb_greedy``; its enumerated variant (start size >= 4)
gets the full curve. ``factor_general`` is the threshold solver's
guarantee at price threshold b with a sub-solver factor alpha, and
``general_constant`` is its value at the best threshold, independent of
any price floor.
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, TextIO

Q = 1.0 - 1.0 / math.e

CSV_HEADER = "c_min,seed_only,lb_greedy,general_const"


def _check_cost_floor(c_min: float) -> float:
    c = float(c_min)
    if not (0.0 <= c <= 1.0):
        raise ValueError(f"cost floor {c_min} outside [0, 1]")
    return c


def factor_seed_only(c_min: float) -> float:
    """Guarantee of greedy seeding alone when prices are at least c_min."""
    return Q * _check_cost_floor(c_min)


def factor_lb_greedy(c_min: float) -> float:
    """Guarantee curve for ratio-greedy selection under a price floor.

    The enumerated variant achieves this in full; the plain loop with
    the pair fallback achieves half of it.
    """
    c = _check_cost_floor(c_min)
    return 1.0 - math.exp(-c / (1.0 + c))


def default_alpha(threshold: float) -> float:
    """Sub-solver factor when cheap bundles are bought greedily."""
    return Q / (float(threshold) + 1.0)


def factor_general(threshold: float, alpha: float | None = None) -> float:
    """Threshold solver's guarantee at price threshold b, any prices."""
    b = float(threshold)
    if b <= 0.0:
        raise ValueError("threshold must be positive")
    a = default_alpha(b) if alpha is None else float(alpha)
    if not (0.0 < a <= 1.0):
        raise ValueError(f"alpha {alpha} outside (0, 1]")
    return 1.0 - math.exp(-b * a / (b * a + b + a + 2.0))


def _golden_max(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> float:
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def _bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    flo = f(lo)
    if flo == 0.0:
        return lo
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


@lru_cache(maxsize=1)
def optimal_threshold(tol: float = 1e-9) -> tuple[float, float]:
    """The price threshold maximizing the guarantee, with its value.

    Grid scan over (0, 64] bracketing the peak, then golden-section
    refinement. The 64 cap is non-binding: the exponent falls off for
    large thresholds as the sub-solver factor vanishes.
    """
    step = 0.01
    grid = [step * i for i in range(1, int(64 / step) + 1)]
    best_i = max(range(len(grid)), key=lambda i: factor_general(grid[i]))
    lo = grid[best_i - 1] if best_i > 0 else grid[0] / 2.0
    hi = grid[best_i + 1] if best_i + 1 < len(grid) else grid[-1]
    b = _golden_max(factor_general, lo, hi, tol)
    factor = factor_general(b)
    assert factor > 0.0878
    return b, factor


def general_constant() -> float:
    return optimal_threshold()[1]


@lru_cache(maxsize=1)
def crossing_points(tol: float = 1e-12) -> dict[str, float]:
    """Price floors where the guarantee curves trade places.

    Below ``general_vs_lb`` the constant threshold guarantee beats the
    ratio-greedy curve; above ``seed_vs_lb`` plain greedy seeding
    already beats it. Roots by bisection on the curve differences.
    """
    g_const = general_constant()
    lb_cross = _bisect(lambda c: factor_lb_greedy(c) - g_const, 0.0, 1.0, tol)
    seed_cross = _bisect(
        lambda c: factor_seed_only(c) - factor_lb_greedy(c), 0.01, 1.0, tol
    )
    return {"general_vs_lb": lb_cross, "seed_vs_lb": seed_cross}


def factor_table(step: float = 0.001) -> list[tuple[float, float, float, float]]:
    """Guarantee curves sampled on a price-floor grid over [0, 1]."""
    if not (0.0 < step <= 0.1):
        raise ValueError("step must lie in (0, 0.1]")
    steps = round(1.0 / step)
    g_const = general_constant()
    rows = []
    for i in range(steps + 1):
        c = min(i * step, 1.0)
        rows.append((c, factor_seed_only(c), factor_lb_greedy(c), g_const))
    return rows


def write_factor_csv(out: TextIO, step: float = 0.001) -> None:
    """Emit the guarantee curves as CSV with a fixed header."""
    out.write(CSV_HEADER + "\n")
    for c, seed, lb, const in factor_table(step):
        out.write(f"{c:.6f},{seed:.6f},{lb:.6f},{const:.6f}\n")

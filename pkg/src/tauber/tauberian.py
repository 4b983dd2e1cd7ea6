"""Regular-variation index estimation and Karamata-style verification.

For a measure whose transform behaves like tau^(-rho) * L(1/tau) with L
slowly varying, the index is estimated from transform ratios at the small
end of a geometric grid (and, independently, from distribution-function
ratios at the large end).  The package then verifies the two conversion
directions numerically:

* transform side -> distribution side: the family of rescaled measures
  nu_n = (rescale by 1/tau_n, normalise by psi(tau_n)) is run through the
  full convergence battery against the gamma-type limit with parameter
  rho, and the asymptotic ratio psi(1/t) / (F(t) Gamma(rho+1)) is checked
  against 1 over the top decade of the t grid;
* distribution side -> transform side: the integrated-tail measure (with
  density F past a start point) is certified nonnegative, its index is
  checked to be rho + 1, and the same asymptotic ratio closes the loop.

Signed measures need a non-cancellation safeguard before any of this is
meaningful: the sign-ratio condition bounds |psi| away from zero relative
to an upper bound for the total-variation transform.  When the Jordan
decomposition is computable the bound is the exact total-variation
transform; otherwise the envelope transform (amplitude bound) stands in,
which keeps the check sound: a ratio floor passed against a larger
denominator is passed a fortiori against the true one.  The measured
ratio |psi| / |psi|_tv is reported alongside whenever an exact
total-variation transform is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from statistics import median
from typing import Callable, Sequence

import numpy as np

from .convergence import (
    DEFAULT_BAND,
    DEFAULT_H_GRID,
    MeasureSequence,
    TailEstimate,
    VerdictReport,
    bounded_laplace_test,
    classify,
    distribution_convergence_test,
    index_grid,
    laplace_convergence_test,
    right_equicontinuity_test,
    _worst,
)
from .decomposition import certified_nonnegative, total_variation
from .errors import (
    SignChangeIsolationFailure,
    SignChangeNearInfinity,
    SignChangeNearZero,
    ZeroTransform,
)
from .measures import SignedMeasure, Term
from .transforms import (
    abs_transform_value,
    envelope_transform,
    laplace_transform,
)

__all__ = [
    "DEFAULT_TAU_GRID",
    "DEFAULT_T_GRID",
    "DEFAULT_RATIO_POINTS",
    "RVEstimate",
    "rv_index_from_transform",
    "rv_index_from_distribution",
    "rv_report",
    "sign_ratio_condition",
    "window_increment_condition",
    "asymptotic_ratio",
    "gamma_limit_measure",
    "rescaled_family",
    "slow_variation_diagnostic",
    "KaramataConfig",
    "karamata_pipeline",
]

DEFAULT_TAU_GRID = tuple(10.0 ** (-k / 4.0) for k in range(25))   # 1 .. 1e-6
DEFAULT_T_GRID = tuple(10.0 ** (k / 4.0) for k in range(25))       # 1 .. 1e6
DEFAULT_RATIO_POINTS = (0.25, 0.5, 2.0, 4.0)
DEFAULT_EVAL_POINTS = (0.25, 0.5, 1.0, 2.0, 4.0)


@dataclass(frozen=True, slots=True)
class RVEstimate:
    """Regular-variation index estimate with internal consistency data."""

    index: float
    dispersion: float            # max deviation of per-ratio estimates
    per_ratio: dict[float, float]
    regression_index: float      # log-log regression cross-check
    anchor: float                # grid point the ratios were taken at
    method: str                  # "transform" | "distribution"


def rv_index_from_transform(
    measure: SignedMeasure,
    ratio_points: Sequence[float] = DEFAULT_RATIO_POINTS,
    tau_grid: Sequence[float] = DEFAULT_TAU_GRID,
) -> RVEstimate:
    """Index rho from transform ratios at the small-argument end.

    psi(lam * tau) / psi(tau) -> lam^(-rho), so each ratio point gives an
    estimate -log(ratio)/log(lam); the median is returned with the spread
    as a consistency measure.  Raises SignChangeNearZero when the
    transform vanishes or changes sign on the grid (the index is then
    undefined).
    """
    taus = sorted({float(t) for t in tau_grid}, reverse=True)
    if not taus or taus[-1] <= 0:
        raise ValueError("tau grid must be positive")
    psis = {t: laplace_transform(measure, t) for t in taus}
    signs = {math.copysign(1.0, v) for v in psis.values() if v != 0.0}
    if len(signs) != 1 or any(v == 0.0 for v in psis.values()):
        raise SignChangeNearZero(
            "transform changes sign or vanishes on the small-argument grid"
        )
    anchor = taus[-1]
    base = psis[anchor]
    per_ratio: dict[float, float] = {}
    for lam in ratio_points:
        lam = float(lam)
        if lam <= 0 or lam == 1.0:
            continue  # lam == 1 carries no information (0/0 exponent)
        r = laplace_transform(measure, lam * anchor) / base
        if r <= 0:
            raise SignChangeNearZero(
                f"transform ratio at {lam} * {anchor} is not positive"
            )
        per_ratio[lam] = -math.log(r) / math.log(lam)
    if not per_ratio:
        raise ValueError("ratio points must contain a positive value != 1")
    rho = float(median(per_ratio.values()))
    dispersion = max(abs(v - rho) for v in per_ratio.values())
    k0 = max(0, int(math.floor(len(taus) * 0.75)))
    small = taus[k0:]
    slope = float(np.polyfit(
        np.log(small), np.log([abs(psis[t]) for t in small]), 1,
    )[0]) if len(small) >= 2 else math.nan
    return RVEstimate(rho, dispersion, per_ratio, -slope, anchor, "transform")


def rv_index_from_distribution(
    measure: SignedMeasure,
    ratio_points: Sequence[float] = DEFAULT_RATIO_POINTS,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
    window_decades: float = 1.0,
) -> RVEstimate:
    """Index rho from distribution-function ratios at the large end.

    F(x t)/F(t) -> x^rho; each ratio point is averaged over the top
    `window_decades` of the grid to damp oscillatory corrections.  Raises
    SignChangeNearInfinity when F vanishes or changes sign there.
    """
    ts = sorted({float(t) for t in t_grid})
    if not ts or ts[0] <= 0:
        raise ValueError("t grid must be positive")
    t_max = ts[-1]
    window = [t for t in ts if t >= t_max / 10.0 ** window_decades]
    fvals: dict[float, float] = {}

    def F(t: float) -> float:
        if t not in fvals:
            fvals[t] = measure.distribution(t)
        return fvals[t]

    signs = {math.copysign(1.0, F(t)) for t in window if F(t) != 0.0}
    if len(signs) != 1 or any(F(t) == 0.0 for t in window):
        raise SignChangeNearInfinity(
            "distribution function changes sign or vanishes on the window"
        )
    per_ratio: dict[float, float] = {}
    for x in ratio_points:
        x = float(x)
        if x <= 0 or x == 1.0:
            continue
        ests = []
        for t in window:
            r = F(x * t) / F(t)
            if r <= 0:
                raise SignChangeNearInfinity(
                    f"distribution ratio at {x} * {t} is not positive"
                )
            ests.append(math.log(r) / math.log(x))
        per_ratio[x] = float(np.mean(ests))
    if not per_ratio:
        raise ValueError("ratio points must contain a positive value != 1")
    rho = float(median(per_ratio.values()))
    dispersion = max(abs(v - rho) for v in per_ratio.values())
    slope = float(np.polyfit(
        np.log(window), np.log([abs(F(t)) for t in window]), 1,
    )[0]) if len(window) >= 2 else math.nan
    return RVEstimate(rho, dispersion, per_ratio, slope, t_max, "distribution")


def rv_report(
    est: RVEstimate,
    declared: float | None = None,
    rho_tol: float = 0.05,
    band: float = DEFAULT_BAND,
    check: str | None = None,
) -> VerdictReport:
    """Verdict wrapper: per-ratio spread, regression cross-check, and
    (when an index is declared) agreement with it, all within rho_tol."""
    stats = {
        "index": est.index,
        "dispersion": est.dispersion,
        "regression_index": est.regression_index,
    }
    statuses = [classify(est.dispersion, rho_tol, band)]
    if math.isfinite(est.regression_index):
        statuses.append(classify(abs(est.regression_index - est.index), rho_tol, band))
    if declared is not None:
        stats["declared"] = float(declared)
        statuses.append(classify(abs(est.index - declared), rho_tol, band))
    table = tuple(
        {"ratio_point": k, "estimate": v} for k, v in sorted(est.per_ratio.items())
    )
    return VerdictReport(
        check=check or f"rv_index_{est.method}",
        status=_worst(statuses),
        statistics=stats,
        tolerances={"rho_tol": rho_tol, "band": band},
        table=table,
    )


def sign_ratio_condition(
    measure: SignedMeasure,
    tau_grid: Sequence[float] = DEFAULT_TAU_GRID,
    floor: float = 0.01,
    tail_fraction: float = 0.25,
    band: float = DEFAULT_BAND,
) -> VerdictReport:
    """Non-cancellation near zero: |psi(tau)| stays above `floor` times an
    upper bound for the total-variation transform as tau -> 0.

    The denominator is the exact total-variation transform when the Jordan
    decomposition is computable, else the envelope transform; either way
    the bound statistic is a valid lower bound for the true ratio, so a
    pass is sound.  The measured ratio against the exact total-variation
    transform is reported per grid point whenever available.
    """
    taus = sorted({float(t) for t in tau_grid}, reverse=True)
    if not taus or taus[-1] <= 0:
        raise ValueError("tau grid must be positive")
    notes: tuple[str, ...]
    try:
        tv = total_variation(measure)
        denom = lambda t: laplace_transform(tv, t)  # noqa: E731
        method = "exact total variation"
    except SignChangeIsolationFailure:
        tv = None
        denom = lambda t: envelope_transform(measure, t)  # noqa: E731
        method = "envelope upper bound"
    notes = (f"denominator: {method}",)
    if certified_nonnegative(measure):
        notes = notes + ("measure certified nonnegative: ratio is identically 1",)
    table = []
    ratios = []
    for t in taus:
        num = abs(laplace_transform(measure, t))
        den = denom(t)
        ratio = num / den if den > 0 else (math.inf if num > 0 else math.nan)
        row = {"tau": t, "bound_ratio": ratio}
        try:
            exact = abs_transform_value(measure, t, allow_quadrature=False)
            row["measured_ratio"] = num / exact if exact > 0 else math.nan
        except SignChangeIsolationFailure:
            pass
        ratios.append(ratio)
        table.append(row)
    est = TailEstimate.from_values(
        list(range(1, len(taus) + 1)), ratios, tail_fraction,
    )
    stat = est.tail_min
    # pass when comfortably above the floor; the band flips orientation
    if math.isnan(stat):
        status = "inconclusive"
    elif stat >= (1.0 + band) * floor:
        status = "pass"
    elif stat <= (1.0 - band) * floor:
        status = "fail"
    else:
        status = "inconclusive"
    witnesses = ()
    if status != "pass":
        k = min(range(len(taus)), key=lambda i: ratios[i])
        witnesses = ({"tau": taus[k], "bound_ratio": ratios[k]},)
    return VerdictReport(
        check="sign_ratio_condition",
        status=status,
        statistics={"min_tail_bound_ratio": stat},
        tolerances={"floor": floor, "band": band},
        witnesses=witnesses,
        notes=notes,
        table=tuple(table),
    )


def window_increment_condition(
    measure: SignedMeasure,
    point: float,
    h_grid: Sequence[float] = DEFAULT_H_GRID,
    tau_grid: Sequence[float] = DEFAULT_TAU_GRID,
    ceiling: float = 0.05,
    tail_fraction: float = 0.25,
    band: float = DEFAULT_BAND,
) -> VerdictReport:
    """Distribution increments over shrinking windows stay small relative
    to the transform: |F((x+h)/tau) - F(x/tau)| / |psi(tau)| below the
    ceiling for small h, uniformly as tau -> 0.

    Inner statistic: tail max over the tau grid; outer: max over the small
    quarter of the h grid.  Raises ZeroTransform if psi vanishes on the
    grid.
    """
    x = float(point)
    if x <= 0:
        raise ValueError(f"point must be > 0, got {x}")
    taus = sorted({float(t) for t in tau_grid}, reverse=True)
    hs = sorted({float(h) for h in h_grid}, reverse=True)
    if not hs or hs[-1] <= 0:
        raise ValueError("window grid must be positive")
    psis = {}
    for t in taus:
        v = laplace_transform(measure, t)
        if v == 0.0:
            raise ZeroTransform(f"transform vanishes at tau={t}")
        psis[t] = v
    inner = {}
    for h in hs:
        vals = [
            abs(measure.distribution((x + h) / t) - measure.distribution(x / t))
            / abs(psis[t])
            for t in taus
        ]
        est = TailEstimate.from_values(list(range(1, len(taus) + 1)), vals, tail_fraction)
        inner[h] = est.tail_max
    k0 = min(len(hs) - 1, int(math.floor(len(hs) * (1.0 - tail_fraction))))
    small_hs = hs[k0:]
    stat = max(inner[h] for h in small_hs)
    status = classify(stat, ceiling, band)
    witnesses = ()
    if status != "pass":
        worst_h = max(small_hs, key=lambda h: inner[h])
        witnesses = ({"h": worst_h, "value": inner[worst_h]},)
    return VerdictReport(
        check="window_increment_condition",
        status=status,
        statistics={"max_small_window_stat": stat, "point": x},
        tolerances={"ceiling": ceiling, "band": band},
        witnesses=witnesses,
        table=tuple({"h": h, "tail_max": inner[h]} for h in hs),
    )


def asymptotic_ratio(
    measure: SignedMeasure,
    rho: float,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
    window_decades: float = 1.0,
    tol: float = 0.02,
    band: float = DEFAULT_BAND,
) -> VerdictReport:
    """psi(1/t) / (F(t) * Gamma(rho+1)) -> 1: windowed mean over the top
    decade(s) of the t grid, compared against 1 within tol."""
    if rho < 0:
        raise ValueError(f"index must be >= 0, got {rho}")
    ts = sorted({float(t) for t in t_grid})
    t_max = ts[-1]
    gamma_factor = math.gamma(rho + 1.0)
    table = []
    window_vals = []
    skipped = []
    for t in ts:
        F = measure.distribution(t)
        psi = laplace_transform(measure, 1.0 / t)
        if F == 0.0:
            skipped.append(t)
            continue
        ratio = psi / (F * gamma_factor)
        in_window = t >= t_max / 10.0 ** window_decades
        table.append({"t": t, "ratio": ratio})
        if in_window:
            window_vals.append(ratio)
    if not window_vals:
        raise ZeroTransform("distribution function vanishes on the whole window")
    mean_ratio = float(np.mean(window_vals))
    stat = abs(mean_ratio - 1.0)
    status = classify(stat, tol, band)
    notes = ()
    if skipped:
        notes = (f"skipped {len(skipped)} grid point(s) with F(t) == 0",)
    witnesses = ()
    if status != "pass":
        witnesses = ({"windowed_mean": mean_ratio},)
    return VerdictReport(
        check="asymptotic_ratio",
        status=status,
        statistics={"windowed_mean": mean_ratio, "abs_deviation": stat},
        tolerances={"tol": tol, "band": band},
        witnesses=witnesses,
        notes=notes,
        table=tuple(table),
    )


def gamma_limit_measure(rho: float) -> SignedMeasure:
    """Limit of the rescaled families: unit mass at 0 for rho == 0, else
    density x^(rho-1)/Gamma(rho) on [0, inf); its transform is lam^(-rho)."""
    rho = float(rho)
    if rho < 0 or not math.isfinite(rho):
        raise ValueError(f"index must be finite and >= 0, got {rho}")
    if rho == 0.0:
        return SignedMeasure.point_mass(0.0, 1.0)
    return SignedMeasure.from_density((Term(1.0 / math.gamma(rho), rho - 1.0),))


def rescaled_family(
    measure: SignedMeasure,
    rho: float | None = None,
    tau_rule: Callable[[int], float] | None = None,
) -> MeasureSequence:
    """Family nu_n = (rescale measure by 1/tau_n, normalise by psi(tau_n)),
    declared to converge to the gamma-type limit with parameter rho
    (estimated from the transform when not supplied).

    Raises ZeroTransform when a normaliser psi(tau_n) vanishes.
    """
    if tau_rule is None:
        tau_rule = lambda n: 1.0 / n  # noqa: E731
    if rho is None:
        rho = rv_index_from_transform(measure).index
    limit = gamma_limit_measure(rho)

    def rule(n: int) -> SignedMeasure:
        tau = float(tau_rule(n))
        if tau <= 0:
            raise ValueError(f"tau rule must be positive, got {tau} at n={n}")
        norm = laplace_transform(measure, tau)
        if norm == 0.0:
            raise ZeroTransform(f"normaliser psi({tau}) vanishes at n={n}")
        return measure.scaled(1.0 / tau, norm)

    exceptional = tuple(a.location for a in limit.atoms)
    return MeasureSequence(rule=rule, limit=limit, exceptional=exceptional,
                           name="rescaled_family")


def slow_variation_diagnostic(
    measure: SignedMeasure,
    rho: float,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
    ratio_points: Sequence[float] = DEFAULT_RATIO_POINTS,
    tol: float = 0.01,
    window_decades: float = 1.0,
    band: float = DEFAULT_BAND,
) -> VerdictReport:
    """Check that l(t) = F(t)/t^rho is slowly varying: l(x t)/l(t) -> 1
    over the top decade(s) of the grid for each ratio point."""
    ts = sorted({float(t) for t in t_grid})
    t_max = ts[-1]
    window = [t for t in ts if t >= t_max / 10.0 ** window_decades]

    def ell(t: float) -> float:
        return measure.distribution(t) / t ** rho

    devs = []
    table = []
    for x in ratio_points:
        x = float(x)
        if x <= 0 or x == 1.0:
            continue
        rs = []
        for t in window:
            lt = ell(t)
            if lt == 0.0:
                continue
            rs.append(ell(x * t) / lt)
        if not rs:
            continue
        dev = max(abs(r - 1.0) for r in rs)
        devs.append(dev)
        table.append({"ratio_point": x, "max_abs_deviation": dev})
    if not devs:
        raise ValueError("no usable ratio points for slow-variation check")
    stat = max(devs)
    return VerdictReport(
        check="slow_variation",
        status=classify(stat, tol, band),
        statistics={"max_abs_deviation": stat},
        tolerances={"tol": tol, "band": band},
        table=tuple(table),
    )


# -- end-to-end pipelines -------------------------------------------------


@dataclass(frozen=True)
class KaramataConfig:
    """Tolerances and grids for the two pipeline directions."""

    rho: float | None = None                    # declared index, if any
    tau_grid: tuple[float, ...] = DEFAULT_TAU_GRID
    t_grid: tuple[float, ...] = DEFAULT_T_GRID
    ratio_points: tuple[float, ...] = DEFAULT_RATIO_POINTS
    eval_points: tuple[float, ...] = DEFAULT_EVAL_POINTS
    lambdas: tuple[float, ...] = DEFAULT_EVAL_POINTS
    h_grid: tuple[float, ...] = DEFAULT_H_GRID
    n_max: int = 10_000
    grid_ratio: float = 2.0
    rho_tol: float = 0.05
    floor: float = 0.01
    ceiling: float = 0.05
    psi_tol: float = 1e-5
    F_tol: float = 0.02
    ratio_tol: float = 0.02
    sv_tol: float = 0.01
    epsilon: float = 0.05
    band: float = DEFAULT_BAND
    integrated_tail_start: float = 10.0
    window_decades: float = 1.0


def _equicontinuity_sweep(
    family: MeasureSequence, cfg: KaramataConfig
) -> VerdictReport:
    reports = {
        x: right_equicontinuity_test(
            family, x, epsilon=cfg.epsilon, h_grid=cfg.h_grid,
            n_max=cfg.n_max, ratio=cfg.grid_ratio, band=cfg.band,
        )
        for x in cfg.eval_points
    }
    worst_x = max(reports, key=lambda x: reports[x].statistics["best_window_stat"])
    table = tuple(
        {"point": x, "best_window_stat": r.statistics["best_window_stat"]}
        for x, r in sorted(reports.items())
    )
    return VerdictReport(
        check="rescaled_equicontinuity",
        status=_worst(r.status for r in reports.values()),
        statistics={"max_best_window_stat": reports[worst_x].statistics["best_window_stat"]},
        tolerances={"epsilon": cfg.epsilon, "band": cfg.band},
        witnesses=reports[worst_x].witnesses,
        table=table,
    )


def _window_sweep(measure: SignedMeasure, cfg: KaramataConfig) -> VerdictReport:
    reports = {
        x: window_increment_condition(
            measure, x, h_grid=cfg.h_grid, tau_grid=cfg.tau_grid,
            ceiling=cfg.ceiling, band=cfg.band,
        )
        for x in cfg.eval_points
    }
    worst_x = max(reports, key=lambda x: reports[x].statistics["max_small_window_stat"])
    table = tuple(
        {"point": x, "max_small_window_stat": r.statistics["max_small_window_stat"]}
        for x, r in sorted(reports.items())
    )
    return VerdictReport(
        check="window_increment_condition",
        status=_worst(r.status for r in reports.values()),
        statistics=dict(reports[worst_x].statistics),
        tolerances={"ceiling": cfg.ceiling, "band": cfg.band},
        witnesses=reports[worst_x].witnesses,
        table=table,
    )


def karamata_pipeline(
    measure: SignedMeasure,
    direction: str = "psi_to_F",
    cfg: KaramataConfig | None = None,
) -> VerdictReport:
    """Run one conversion direction end to end and aggregate verdicts.

    direction "psi_to_F": hypotheses on the transform side (index from
    transform ratios, sign-ratio floor, window-increment ceiling), then
    the rescaled family against the gamma-type limit, the distribution
    index, the asymptotic ratio, and the slow-variation diagnostic.

    direction "F_to_psi": index from the distribution side, nonnegativity
    of the integrated-tail measure, its index shift by one, then the
    asymptotic ratio and transform-side index agreement.
    """
    cfg = cfg or KaramataConfig()
    if direction not in ("psi_to_F", "F_to_psi"):
        raise ValueError(f"unknown direction {direction!r}")
    children: list[VerdictReport] = []
    if direction == "psi_to_F":
        est = rv_index_from_transform(measure, cfg.ratio_points, cfg.tau_grid)
        rho = cfg.rho if cfg.rho is not None else est.index
        children.append(rv_report(est, declared=cfg.rho, rho_tol=cfg.rho_tol,
                                  band=cfg.band, check="rv_index_transform"))
        children.append(sign_ratio_condition(measure, cfg.tau_grid, cfg.floor,
                                             band=cfg.band))
        children.append(_window_sweep(measure, cfg))
        family = rescaled_family(measure, rho=rho)
        children.append(laplace_convergence_test(
            family, cfg.lambdas, n_max=cfg.n_max, ratio=cfg.grid_ratio,
            tol=cfg.psi_tol, band=cfg.band,
        ))
        children.append(bounded_laplace_test(
            family, cfg.lambdas, n_max=cfg.n_max, ratio=cfg.grid_ratio,
            band=cfg.band,
        ))
        children.append(_equicontinuity_sweep(family, cfg))
        children.append(distribution_convergence_test(
            family, cfg.eval_points, n_max=cfg.n_max, ratio=cfg.grid_ratio,
            tol=cfg.F_tol, band=cfg.band, exclude=family.exceptional,
        ))
        est_F = rv_index_from_distribution(measure, cfg.ratio_points, cfg.t_grid,
                                           cfg.window_decades)
        children.append(rv_report(est_F, declared=rho, rho_tol=cfg.rho_tol,
                                  band=cfg.band, check="rv_index_distribution"))
        children.append(asymptotic_ratio(measure, rho, cfg.t_grid,
                                         cfg.window_decades, cfg.ratio_tol, cfg.band))
        children.append(slow_variation_diagnostic(
            measure, rho, cfg.t_grid, cfg.ratio_points, cfg.sv_tol,
            cfg.window_decades, cfg.band,
        ))
        headline = {"rho": rho, "rho_transform": est.index, "rho_distribution": est_F.index}
    else:
        est_F = rv_index_from_distribution(measure, cfg.ratio_points, cfg.t_grid,
                                           cfg.window_decades)
        rho = cfg.rho if cfg.rho is not None else est_F.index
        children.append(rv_report(est_F, declared=cfg.rho, rho_tol=cfg.rho_tol,
                                  band=cfg.band, check="rv_index_distribution"))
        xi = measure.integrated_tail(cfg.integrated_tail_start)
        nonneg = certified_nonnegative(xi)
        children.append(VerdictReport(
            check="integrated_tail_nonnegative",
            status="pass" if nonneg else "fail",
            statistics={"start": cfg.integrated_tail_start},
            notes=(
                "integrated-tail density certified nonnegative"
                if nonneg else
                "integrated-tail density could not be certified nonnegative",
            ),
        ))
        est_xi = rv_index_from_distribution(xi, cfg.ratio_points, cfg.t_grid,
                                            cfg.window_decades)
        children.append(rv_report(est_xi, declared=rho + 1.0, rho_tol=cfg.rho_tol,
                                  band=cfg.band, check="rv_index_integrated_tail"))
        children.append(asymptotic_ratio(measure, rho, cfg.t_grid,
                                         cfg.window_decades, cfg.ratio_tol, cfg.band))
        est_psi = rv_index_from_transform(measure, cfg.ratio_points, cfg.tau_grid)
        children.append(rv_report(est_psi, declared=rho, rho_tol=cfg.rho_tol,
                                  band=cfg.band, check="rv_index_transform"))
        headline = {"rho": rho, "rho_distribution": est_F.index,
                    "rho_integrated_tail": est_xi.index, "rho_transform": est_psi.index}
    return VerdictReport(
        check=f"karamata_{direction}",
        status=_worst(c.status for c in children),
        statistics=headline,
        children=tuple(children),
    )

"""Release gate: the eight shipping criteria, tolerances pinned.

Every test here prints (and registers, see conftest) a single
``criterion N ...: PASS/FAIL`` line so a plain pytest run doubles as the
sign-off sheet.  The tolerances and runtime budgets are fixed numbers on
purpose — relaxing one is a release decision, not a test fix.  Criteria
that time their body assert the wall-clock budget as part of the verdict.
"""

from __future__ import annotations

import filecmp
import math
import pathlib
import time

import numpy as np
from scipy import integrate

import tauber.cli as cli
from tauber import (
    MeasureSequence,
    SignedMeasure,
    abs_transform,
    asymptotic_ratio,
    bounded_laplace_test,
    certified_nonnegative,
    continuity_forward,
    distribution_convergence_test,
    gamma_limit_measure,
    jordan,
    laplace_convergence_test,
    laplace_transform,
    right_equicontinuity_test,
    rv_index_from_transform,
    sign_ratio_condition,
    tilt_identity_residual,
)
from tests.conftest import (
    ACCEPTANCE_LINES,
    N_PROPERTY_CASES,
    dipole_sequence_rule,
    mollified_delta_rule,
    random_measure,
    worked_oscillatory_measure,
)

DATA_DIR = pathlib.Path(__file__).parents[1] / "src" / "tauber" / "data"
LAMBDAS = (0.5, 1.0, 2.0)


def _verdict(num: int, name: str, ok: bool, detail: str) -> None:
    line = f"criterion {num} [{name}]: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_closed_form_transform_identity():
    # density x*(1/2 + cos x) against its closed-form transform on a
    # 25-point geometric grid spanning four decades
    t0 = time.perf_counter()
    m = worked_oscillatory_measure()
    worst = 0.0
    for tau in np.geomspace(1e-3, 10.0, 25):
        expected = (3.0 * tau**4 + 1.0) / (2.0 * (tau**3 + tau) ** 2)
        got = laplace_transform(m, tau)
        worst = max(worst, abs(got - expected) / abs(expected))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-8 and elapsed < 1.0
    _verdict(1, "closed-form transform identity", ok,
             f"worst rel err {worst:.2e} <= 1e-08, {elapsed:.2f}s < 1s")


def test_criterion_2_index_recovery_from_transform():
    t0 = time.perf_counter()
    est = rv_index_from_transform(worked_oscillatory_measure())
    elapsed = time.perf_counter() - t0
    ok = (abs(est.index - 2.0) <= 0.05
          and est.dispersion <= 0.05
          and elapsed < 5.0)
    _verdict(2, "index recovery from transform", ok,
             f"index {est.index:.6f} (want 2 +/- 0.05), "
             f"dispersion {est.dispersion:.2e} <= 0.05, {elapsed:.2f}s < 5s")


def test_criterion_3_sign_ratio_tail_statistic():
    rep = sign_ratio_condition(worked_oscillatory_measure())
    stat = rep.statistics["min_tail_bound_ratio"]
    ok = rep.status == "pass" and 0.30 <= stat <= 0.40
    _verdict(3, "non-cancellation ratio near zero", ok,
             f"tail statistic {stat:.6f} in [0.30, 0.40], status {rep.status}")


def test_criterion_4_asymptotic_ratio_window():
    rep = asymptotic_ratio(
        worked_oscillatory_measure(), 2.0,
        t_grid=np.geomspace(1e3, 1e4, 21), window_decades=1.0, tol=0.02,
    )
    mean = rep.statistics["windowed_mean"]
    ok = rep.status == "pass" and abs(mean - 1.0) <= 0.02
    _verdict(4, "transform/distribution asymptotic ratio", ok,
             f"windowed mean {mean:.6f} within 2% of 1 over t in [1e3, 1e4]")


def test_criterion_5_dipole_counterexample():
    # shrinking dipole at x=1: transforms converge and stay bounded, yet
    # the distribution functions do not converge at the collision point —
    # the equicontinuity hypothesis is what fails
    t0 = time.perf_counter()
    seq = MeasureSequence(
        dipole_sequence_rule(1.0), limit=SignedMeasure.zero(), exceptional=(1.0,),
    )
    psi = laplace_convergence_test(seq, LAMBDAS, n_max=10_000, tol=1e-6)
    bounded = bounded_laplace_test(seq, LAMBDAS, n_max=10_000)
    bound_rows = {row["lam"]: row["extrapolated"] for row in bounded.table}
    bound_dev = max(abs(bound_rows[lam] - 2.0 * math.exp(-lam)) for lam in LAMBDAS)
    equi = right_equicontinuity_test(seq, 1.0, n_max=10_000)
    dist = distribution_convergence_test(seq, (1.0,), n_max=10_000)
    elapsed = time.perf_counter() - t0

    witness_ok = bool(equi.witnesses) and (
        equi.witnesses[0]["n"] >= 1.0 / equi.witnesses[0]["delta"]
    )
    dist_ok = (dist.status == "fail" and bool(dist.witnesses)
               and dist.witnesses[0]["point"] == 1.0
               and abs(dist.witnesses[0]["deviation"]) == 1.0)
    ok = (psi.status == "pass"
          and bounded.status == "pass" and bound_dev <= 1e-6
          and equi.status == "fail" and witness_ok
          and dist_ok
          and elapsed < 5.0)
    _verdict(5, "dipole counterexample", ok,
             f"psi {psi.status}, bounded {bounded.status} "
             f"(tail vs 2e^-lam dev {bound_dev:.2e} <= 1e-06), "
             f"equicontinuity {equi.status} w/ witness, "
             f"distribution {dist.status} |F_n(1)-0|="
             f"{abs(dist.witnesses[0]['deviation']) if dist.witnesses else float('nan'):.0f}, "
             f"{elapsed:.2f}s < 5s")


def test_criterion_6_mollified_delta_positive_case():
    # n * Lebesgue on [1, 1+1/n] -> point mass at 1; x=2 is a continuity
    # point of the limit so the full forward implication must go through,
    # with and without the equicontinuity check
    seq = MeasureSequence(
        mollified_delta_rule(1.0), limit=SignedMeasure.point_mass(1.0),
        exceptional=(1.0,),
    )
    rep = continuity_forward(seq, 2.0, LAMBDAS, psi_tol=1e-3, F_tol=1e-3)
    skipped = continuity_forward(seq, 2.0, LAMBDAS, psi_tol=1e-3, F_tol=1e-3,
                                 skip_equicontinuity=True)
    children_ok = all(c.status == "pass" for c in rep.children)
    skip_noted = any(
        "skipped" in n for n in skipped.child("right_equicontinuity").notes
    )
    ok = (rep.status == "pass" and children_ok
          and skipped.status == "pass" and skip_noted)
    _verdict(6, "mollified point-mass family", ok,
             f"forward {rep.status} with {len(rep.children)} sub-checks pass, "
             f"skip-equicontinuity mode {skipped.status}")


def test_criterion_7_randomised_property_suites():
    t0 = time.perf_counter()
    n_cases = max(100, N_PROPERTY_CASES)

    # (a) Jordan decomposition dominates the signed transform
    rng = np.random.default_rng(701)
    for _ in range(n_cases):
        m = random_measure(rng, signed=True, with_tail=True, certifiable=True)
        pos, neg = jordan(m)
        assert certified_nonnegative(pos) and certified_nonnegative(neg)
        assert (pos + neg.scaled(1.0, -1.0)).isclose(m) or (pos - neg).isclose(m)
        for lam in (0.5, 2.0):
            assert abs(laplace_transform(m, lam)) <= (
                abs_transform(m, lam).value * (1 + 1e-9) + 1e-12
            )

    # (b) tilting is a semigroup and shifts the transform argument
    rng = np.random.default_rng(702)
    worst_tilt = 0.0
    for _ in range(n_cases):
        m = random_measure(rng, signed=True, with_tail=True)
        eps = float(rng.uniform(0.05, 1.5))
        lam = float(rng.uniform(0.2, 3.0))
        assert m.tilted(eps).tilted(lam).isclose(m.tilted(eps + lam))
        worst_tilt = max(worst_tilt, tilt_identity_residual(m, eps, lam))
    assert worst_tilt <= 1e-10

    # (c) integration by parts for the tilted distribution function,
    #     right side via adaptive quadrature with breakpoints pinned at
    #     the atoms and segment edges
    rng = np.random.default_rng(703)
    worst_parts = 0.0
    for _ in range(n_cases):
        m = random_measure(rng, signed=True, with_tail=True)
        eps = float(rng.uniform(0.1, 2.0))
        t = float(rng.uniform(0.5, 6.0))
        breakpoints = sorted(
            {a.location for a in m.atoms if 0.0 < a.location < t}
            | {edge for seg in m.segments for edge in (seg.lo, seg.hi)
               if edge is not None and 0.0 < edge < t}
        )
        lhs = m.tilted(eps).distribution(t)
        integral, _ = integrate.quad(
            lambda x: math.exp(-eps * x) * m.distribution(x),
            0.0, t, points=breakpoints or None, limit=200,
            epsabs=1e-11, epsrel=1e-11,
        )
        rhs = math.exp(-eps * t) * m.distribution(t) + eps * integral
        worst_parts = max(worst_parts, abs(lhs - rhs) / max(1.0, abs(lhs)))
    assert worst_parts <= 1e-8

    # (d) the canonical index-rho limit measure has transform lam^-rho
    rng = np.random.default_rng(704)
    worst_gamma = 0.0
    for _ in range(n_cases):
        rho = float(rng.uniform(0.1, 4.0))
        lam = float(rng.uniform(0.2, 5.0))
        got = laplace_transform(gamma_limit_measure(rho), lam)
        worst_gamma = max(worst_gamma,
                          abs(got - lam ** -rho) / max(1.0, lam ** -rho))
    assert worst_gamma <= 1e-8

    # (e) rescaling bridges the transform: psi_{c^-1 mu(t .)}(lam) =
    #     psi_mu(lam/t) / c
    rng = np.random.default_rng(705)
    worst_bridge = 0.0
    for _ in range(n_cases):
        m = random_measure(rng, signed=True, with_tail=True)
        t = float(rng.uniform(0.3, 4.0))
        c = float(rng.uniform(0.2, 5.0))
        lam = float(rng.uniform(0.2, 3.0))
        lhs = laplace_transform(m.scaled(t, c), lam)
        rhs = laplace_transform(m, lam / t) / c
        worst_bridge = max(worst_bridge, abs(lhs - rhs) / max(1.0, abs(rhs)))
    assert worst_bridge <= 1e-10

    elapsed = time.perf_counter() - t0
    ok = elapsed < 60.0
    _verdict(7, "randomised property suites", ok,
             f"{n_cases} cases each: tilt {worst_tilt:.1e} <= 1e-10, "
             f"parts {worst_parts:.1e} <= 1e-08, gamma {worst_gamma:.1e} <= 1e-08, "
             f"bridge {worst_bridge:.1e} <= 1e-10, {elapsed:.1f}s < 60s")


def test_criterion_8_deterministic_reports(tmp_path):
    # two back-to-back CLI runs over every bundled scenario must emit
    # byte-identical JSON
    first = tmp_path / "first"
    second = tmp_path / "second"
    first.mkdir()
    second.mkdir()
    scenarios = sorted(DATA_DIR.glob("*.json"))
    assert scenarios, "bundled scenario files missing"
    for path in scenarios:
        for out in (first, second):
            code = cli.main(["run", str(path), "--out", str(out), "--quiet"])
            assert code == 0, f"{path.name} exited {code}"
    reports = sorted(p.name for p in first.glob("*.json"))
    assert len(reports) == len(scenarios)
    assert reports == sorted(p.name for p in second.glob("*.json"))
    identical = [
        filecmp.cmp(first / name, second / name, shallow=False)
        for name in reports
    ]
    ok = all(identical)
    _verdict(8, "deterministic scenario reports", ok,
             f"{len(scenarios)} scenarios, JSON byte-identical across runs: "
             f"{sum(identical)}/{len(identical)}")

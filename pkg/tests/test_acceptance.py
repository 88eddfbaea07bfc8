"""Acceptance suite: one test per release criterion, with a summary line each.

Every test calls :func:`conftest.record` with its criterion name and outcome
*before* asserting, so the terminal summary lists every criterion even when
one fails. Tolerances and time budgets are pinned in the criteria and appear
inline below.

The incentive criteria sample from a moderate-transmission domain: the
reopened-regime reproduction number lambda * d_max / gamma is drawn inside
(1, 1/beta). That keeps the epidemic supercritical (the checks exercise real
dynamics, not decay to zero) while every degree class's endemic prevalence
stays below 1 - beta, the regime where both trajectory-comparison properties
hold. Outside it — 1 - beta below the endemic ceiling — both properties have
genuine, step-size-independent counterexamples; tests/test_incentives.py
pins one and checks that the reports flag it.
"""

import time
from pathlib import Path

import numpy as np
import pytest

from conftest import record
from vaxgame import (
    EconParams,
    EpidemicParams,
    HerdThresholds,
    Partition,
    PopulationModel,
    SignalParams,
    average_action,
    complementarity_check,
    cost_bounds,
    disease_free_stable,
    herd_thresholds,
    integrate,
    limit_threshold,
    load_config,
    posterior_reopen_probability,
    public_signal_condition,
    run_sweep,
    solve_threshold,
    std_normal_cdf,
    std_normal_quantile,
    steady_state,
    substitutes_check,
    suggest_region,
    terminal_profile,
    threshold_mu_sensitivity,
    threshold_residual,
    uniqueness_condition,
)

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def _single_degree_model():
    return PopulationModel.independent([4], [1.0], [1.0])


def _moderate_transmission_setup(rng):
    """One random scenario with reproduction number in (1, 1/beta).

    Supercritical for the most-connected class, yet every class's endemic
    prevalence is capped at 1 - 1/R below 1 - beta, so infection gaps stay
    ordered along trajectories. Initial profiles are action- and
    type-independent and weakly increasing in degree.
    """
    n_deg = int(rng.integers(1, 4))
    degrees = sorted(rng.choice(np.arange(1, 9), size=n_deg, replace=False).tolist())
    d_masses = rng.dirichlet(np.ones(n_deg))
    n_typ = int(rng.integers(1, 3))
    t_masses = rng.dirichlet(np.ones(n_typ))
    model = PopulationModel.independent(degrees, d_masses, t_masses)
    gamma = float(rng.uniform(0.1, 0.3))
    beta = float(rng.uniform(0.3, 0.9))
    reproduction = float(rng.uniform(1.0, 1.0 / beta))
    params = EpidemicParams(
        gamma=gamma,
        lam=reproduction * gamma / max(degrees),
        beta=beta,
        alpha=float(rng.uniform(0.2, 0.8)),
        horizon=float(rng.uniform(5.0, 20.0)),
    )
    econ = EconParams(
        cost_c=float(rng.uniform(0.1, 0.6)),
        risk_r=float(rng.uniform(0.5, 2.0)),
        gains=rng.uniform(0.0, 1.0, size=n_deg),
    )
    partition = Partition.from_fractions(model, rng.uniform(0.2, 0.8, size=n_typ))
    levels = np.sort(rng.uniform(0.005, 0.08, size=n_deg))
    initial = np.tile(levels[:, None, None], (1, n_typ, 2))
    return model, params, econ, partition, initial


def test_normal_round_trip():
    """cdf(quantile(p)) recovers p to 1e-9 across ten decades of tail mass."""
    t0 = time.perf_counter()
    p = np.geomspace(1e-8, 1.0 - 1e-8, 10_000)
    err = float(np.max(np.abs(std_normal_cdf(std_normal_quantile(p)) - p)))
    elapsed = time.perf_counter() - t0
    ok = err <= 1e-9 and elapsed < 1.0
    record("normal round-trip accuracy", ok,
           f"max |cdf(quantile(p)) - p| = {err:.2e} over 1e4 points, "
           f"{elapsed:.2f}s")
    assert err <= 1e-9
    assert elapsed < 1.0


def test_symmetric_equilibrium():
    """Cost 1/2 and a centered prior put the threshold and cutoff at 1/2."""
    t0 = time.perf_counter()
    model = _single_degree_model()
    signals = SignalParams(mu=0.5, sigma=1.0, sigma_k=np.array([2.0]))
    result = solve_threshold(model, signals, 0.5)
    elapsed = time.perf_counter() - t0
    err_theta = abs(result.theta_star - 0.5)
    err_x = abs(float(result.x_star[0]) - 0.5)
    ok = err_theta <= 1e-8 and err_x <= 1e-8 and elapsed < 1.0
    record("symmetric equilibrium point", ok,
           f"|theta*-0.5| = {err_theta:.2e}, |x*-0.5| = {err_x:.2e}, "
           f"{elapsed:.2f}s")
    assert err_theta <= 1e-8
    assert err_x <= 1e-8
    assert elapsed < 1.0


def test_uniqueness_and_fixed_point():
    """Under the precision condition the residual crosses zero exactly once,
    and each solved equilibrium satisfies the fixed-point and posterior
    consistency identities."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    grid = np.linspace(1e-6, 1.0 - 1e-6, 100_000)
    sign_changes = []
    worst_fp = 0.0
    worst_post = 0.0
    accepted = 0
    while accepted < 100:
        n_typ = int(rng.integers(1, 4))
        t_masses = rng.dirichlet(np.ones(n_typ))
        model = PopulationModel.independent([4], [1.0], t_masses)
        signals = SignalParams(
            mu=float(rng.uniform(0.05, 0.95)),
            sigma=float(rng.uniform(0.2, 3.0)),
            sigma_k=rng.uniform(0.5, 20.0, size=n_typ),
        )
        cost_c = float(rng.uniform(0.05, 0.95))
        if not uniqueness_condition(model, signals):
            continue
        accepted += 1
        values = threshold_residual(grid, model, signals, cost_c)
        sign = np.sign(values)
        sign = sign[sign != 0]
        sign_changes.append(int(np.count_nonzero(sign[:-1] * sign[1:] < 0)))
        result = solve_threshold(model, signals, cost_c)
        worst_fp = max(worst_fp, abs(
            average_action(result.theta_star, result.x_star, model, signals)
            - result.theta_star))
        for k in range(len(result.x_star)):
            post = posterior_reopen_probability(
                result.theta_star, float(result.x_star[k]), k, signals)
            worst_post = max(worst_post, abs(post - cost_c))
    elapsed = time.perf_counter() - t0
    unique_ok = all(n == 1 for n in sign_changes) and elapsed < 30.0
    record("equilibrium uniqueness under the precision condition", unique_ok,
           f"sign changes on 1e5-point grid: "
           f"min {min(sign_changes)}, max {max(sign_changes)} over "
           f"100 draws, {elapsed:.1f}s")
    fixed_ok = worst_fp <= 1e-9 and worst_post <= 1e-9
    record("fixed-point and posterior consistency", fixed_ok,
           f"max |A(theta*) - theta*| = {worst_fp:.2e}, "
           f"max |posterior - c| = {worst_post:.2e}")
    assert unique_ok
    assert fixed_ok


def test_endemic_convergence():
    """An unvaccinated degree-4 population with recovery 0.2 and infection
    0.1 settles at aggregate prevalence 1/2, and integration reaches it."""
    t0 = time.perf_counter()
    model = _single_degree_model()
    unvaccinated = Partition.from_fractions(model, [0.0])
    params = EpidemicParams(gamma=0.2, lam=0.1, beta=0.5, alpha=0.4,
                            horizon=500.0)
    state = steady_state("+", params, model, unvaccinated)
    trajectory = integrate("+", params, model, unvaccinated,
                           np.full((1, 1, 2), 0.1), step=0.01)
    elapsed = time.perf_counter() - t0
    err_ss = abs(state.theta - 0.5)
    err_traj = abs(float(trajectory.theta[-1]) - 0.5)
    ok = err_ss <= 1e-6 and err_traj <= 1e-4 and elapsed < 5.0
    record("endemic steady state and convergence", ok,
           f"|steady - 0.5| = {err_ss:.2e}, |theta(500) - 0.5| = "
           f"{err_traj:.2e}, {elapsed:.1f}s")
    assert err_ss <= 1e-6
    assert err_traj <= 1e-4
    assert elapsed < 5.0


def test_disease_free_clearance():
    """With coverage above the herd threshold, random initial prevalence
    drains below 1e-6 well before t = 2000."""
    t0 = time.perf_counter()
    model = _single_degree_model()
    fully_vaccinated = Partition.from_fractions(model, [1.0])
    params = EpidemicParams(gamma=0.19, lam=0.05, beta=0.5, alpha=0.4,
                            horizon=100.0)
    certificate = disease_free_stable(params, model, fully_vaccinated)
    rng = np.random.default_rng(3)
    clearance_times = []
    for _ in range(20):
        profile = rng.uniform(0.01, 0.9, size=(1, 1, 2))
        reached = None
        offset = 0.0
        for _segment in range(20):
            trajectory = integrate("+", params, model, fully_vaccinated,
                                   profile, step=0.1)
            below = np.nonzero(trajectory.theta < 1e-6)[0]
            if len(below):
                reached = offset + float(trajectory.times[below[0]])
                break
            profile = terminal_profile(trajectory)
            offset += params.horizon
        clearance_times.append(reached)
    elapsed = time.perf_counter() - t0
    ok = (certificate and all(t is not None and t <= 2000.0
                              for t in clearance_times) and elapsed < 30.0)
    record("disease-free clearance under the coverage certificate", ok,
           f"20/20 initials cleared, slowest at t = "
           f"{max(clearance_times):.0f}, {elapsed:.1f}s")
    assert certificate
    assert all(t is not None and t <= 2000.0 for t in clearance_times)
    assert elapsed < 30.0


def test_reopening_widens_gaps():
    """With the reopened aggregate dominating the restricted one, every
    group's infection-risk gap is at least its fixed-restricted value."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(2026)
    premise_all = True
    worst_margin = np.inf
    failures = 0
    for _ in range(50):
        model, params, econ, partition, initial = \
            _moderate_transmission_setup(rng)
        report = complementarity_check(params, econ, model, partition,
                                       initial, step=0.01)
        premise_all = premise_all and report.premise_holds
        margin = float((report.gaps_plus - report.gaps_minus).min())
        worst_margin = min(worst_margin, margin)
        if not (report.premise_holds and report.complementarity_holds):
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = premise_all and failures == 0 and worst_margin >= -1e-9 \
        and elapsed < 60.0
    record("reopening widens vaccination gaps (complementarity)", ok,
           f"50/50 draws counterexample-free, worst margin "
           f"{worst_margin:+.2e}, {elapsed:.1f}s")
    assert premise_all
    assert failures == 0
    assert worst_margin >= -1e-9
    assert elapsed < 60.0


def test_coverage_bump_shrinks_gaps():
    """Raising coverage by 0.1 weakly lowers every group's gap when the
    regime stays fixed."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(2027)
    worst_rise = -np.inf
    failures = 0
    for _ in range(50):
        model, params, econ, partition, initial = \
            _moderate_transmission_setup(rng)
        regime = "+" if rng.random() < 0.5 else "-"
        report = substitutes_check(regime, params, econ, model, partition,
                                   0.1, initial, step=0.01)
        rise = float((report.bumped_gaps - report.base_gaps).max())
        worst_rise = max(worst_rise, rise)
        if not report.decreasing_holds:
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and worst_rise <= 1e-9 and elapsed < 60.0
    record("coverage bumps shrink gaps (substitutes)", ok,
           f"50/50 draws weakly decreasing, worst rise {worst_rise:+.2e}, "
           f"{elapsed:.1f}s")
    assert failures == 0
    assert worst_rise <= 1e-9
    assert elapsed < 60.0


def _sensitivity_draws():
    rng = np.random.default_rng(5)
    draws = []
    for _ in range(20):
        n_typ = int(rng.integers(1, 3))
        t_masses = rng.dirichlet(np.ones(n_typ))
        model = PopulationModel.independent([4], [1.0], t_masses)
        draws.append((float(rng.uniform(0.5, 4.0)),
                      float(rng.uniform(0.1, 0.9)),
                      float(rng.uniform(0.1, 0.9)),
                      model))
    return draws


def test_sensitivity_matches_finite_differences():
    """The closed-form threshold sensitivity to the prior mean agrees with
    central finite differences of the limiting threshold."""
    t0 = time.perf_counter()
    h = 1e-5
    worst_rel = 0.0
    for l, cost_c, mu, model in _sensitivity_draws():
        theta = limit_threshold(l, cost_c, mu, model)
        sens = threshold_mu_sensitivity(theta, l, cost_c, mu, model)
        fd = (limit_threshold(l, cost_c, mu + h, model)
              - limit_threshold(l, cost_c, mu - h, model)) / (2 * h)
        worst_rel = max(worst_rel, abs(sens - fd) / max(abs(fd), 1e-30))
    elapsed = time.perf_counter() - t0
    ok = worst_rel <= 1e-4 and elapsed < 5.0
    record("threshold sensitivity matches finite differences", ok,
           f"max relative error {worst_rel:.2e} over 20 draws, "
           f"{elapsed:.1f}s")
    assert worst_rel <= 1e-4
    assert elapsed < 5.0


def test_sensitivity_nonnegative():
    """Stated criterion: the sensitivity is >= -1e-12 on the same draws.

    This fails honestly. The derivative of the limiting threshold in the
    prior mean is S/(S-1) with S in (0, 1) on the unique-equilibrium branch,
    which is strictly negative; central finite differences confirm the sign
    at every draw (see test_sensitivity_matches_finite_differences, which
    passes). The claim being checked here has the sign flipped, so the
    criterion and the finite-difference criterion cannot both hold.
    """
    values = []
    for l, cost_c, mu, model in _sensitivity_draws():
        theta = limit_threshold(l, cost_c, mu, model)
        values.append(threshold_mu_sensitivity(theta, l, cost_c, mu, model))
    worst = min(values)
    negative = sum(v < -1e-12 for v in values)
    ok = worst >= -1e-12
    record("threshold sensitivity nonnegativity", ok,
           f"min sensitivity {worst:+.6f}, {negative}/20 draws negative; "
           f"finite differences confirm the negative sign, so the sign "
           f"claim itself is wrong (expected red)")
    assert worst >= -1e-12, (
        "sensitivity is genuinely negative on the unique-equilibrium "
        "branch; the finite-difference companion test confirms the sign")


def test_design_condition_worked_point():
    """The public-signal certificate and cost bounds reproduce their
    hand-computed values."""
    herd = HerdThresholds(degrees=(4,), values=np.array([0.1]))
    worked = SignalParams(mu=0.2, sigma=1.0, sigma_k=np.array([1.0]))
    holds = public_signal_condition(worked, 0.3, herd)
    c_flip = float(std_normal_cdf(-0.2)) + 1e-6
    fails = not public_signal_condition(worked, c_flip, herd)
    bounds = cost_bounds(SignalParams(mu=0.25, sigma=1.0,
                                      sigma_k=np.array([1.0])), 0.83333)
    err_lower = abs(bounds.lower - 2.1e-8)
    err_upper = abs(bounds.upper - 0.40129)
    ok = holds and fails and err_lower <= 1e-5 and err_upper <= 1e-5
    record("design condition worked point and cost bounds", ok,
           f"condition true/false as expected: {holds}/{fails}, "
           f"bounds ({bounds.lower:.3e}, {bounds.upper:.5f}) vs "
           f"(2.1e-08, 0.40129)")
    assert holds
    assert fails
    assert err_lower <= 1e-5
    assert err_upper <= 1e-5


def test_demo_sweep_shape():
    """The shipped demo sweep has a nondecreasing reopening curve, zero
    severity exactly where the public-signal certificate holds (positive
    after its boundary), and a nonempty suggested region at target 0.9."""
    t0 = time.perf_counter()
    config = load_config(CONFIG_DIR / "demo.toml")
    rows = run_sweep(config)
    elapsed = time.perf_counter() - t0
    errors = [r for r in rows if r.error]
    reopen = np.array([r.reopen_prob for r in rows])
    min_diff = float(np.diff(reopen).min())
    herd = herd_thresholds(config.model, config.epidemic)
    severity_ok = True
    for row in rows:
        certified = public_signal_condition(
            config.signals.with_sigma(row.sigma), config.econ.cost_c, herd)
        if certified:
            severity_ok = severity_ok and row.severity == 0.0
        else:
            severity_ok = severity_ok and row.severity > 0.0
    region = suggest_region(rows, config.target_reopen_probability)
    first_hit = next((r.sigma for r in rows
                      if r.reopen_prob >= config.target_reopen_probability),
                     None)
    last_free = next((r.sigma for r in reversed(rows) if r.disease_free),
                     None)
    consistent = region is not None and region == (first_hit, last_free)
    ok = (len(rows) == 200 and not errors and min_diff >= -1e-9
          and severity_ok and consistent and elapsed < 120.0)
    record("demo sweep shape and suggestion", ok,
           f"200 rows, min adjacent reopening diff {min_diff:+.2e}, "
           f"suggested region {region}, {elapsed:.1f}s")
    assert len(rows) == 200
    assert not errors
    assert min_diff >= -1e-9
    assert severity_ok
    assert consistent
    assert elapsed < 120.0

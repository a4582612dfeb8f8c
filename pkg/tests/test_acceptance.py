"""Acceptance criteria, one test per criterion.

Each test prints a single [PASS]/[FAIL] line (visible with pytest -s)
and asserts the criterion at its stated tolerance and runtime budget.
"""

import hashlib
import math
import time

import numpy as np

from eamac import cli, fock, gaussian, planner, region as rg, validate as val
from eamac.channel import MacParams, ModulationConfig, conditioned_cov, conditioned_cov_oracle, effective_params

P_CANON = MacParams(tau=0.5, kappa=0.5, n_b=1.0)


def _report(num, passed, detail, elapsed, budget):
    status = "PASS" if passed and elapsed < budget else "FAIL"
    print(f"[{status}] criterion {num}: {detail} (elapsed {elapsed:.2f}s / budget {budget:.0f}s)")
    assert passed, f"criterion {num} failed: {detail}"
    assert elapsed < budget, f"criterion {num} exceeded runtime budget"


def test_criterion_1_gaussian_fock_entropy_agreement():
    start = time.time()
    worst = 0.0
    for n_s in (0.1, 0.5):
        gauss = gaussian.entropy_from_cov(gaussian.thermal_cov(n_s))
        thermal = fock.entropy_fock(fock.thermal_fock(n_s, 40))
        reduced = fock.entropy_fock(fock.tmsv_fock(n_s, 40).to_density().partial_trace([1]))
        worst = max(worst, abs(gauss - thermal), abs(gauss - reduced))
    _report(1, worst <= 1e-6, f"entropy agreement, max |diff| = {worst:.3e} <= 1e-6", time.time() - start, 5.0)


def test_criterion_2_schur_table_consistency():
    start = time.time()
    rng = np.random.default_rng(321)
    worst_cov = worst_nt = 0.0
    for _ in range(100):
        p = MacParams(tau=rng.uniform(), kappa=rng.uniform(0.05, 0.95), n_b=rng.uniform(0.1, 5.0))
        m = ModulationConfig(n_s=rng.uniform(0.0, 3.0))
        theta = rng.uniform(0.0, 2.0 * math.pi)
        for sender in ("x", "y"):
            diff = np.max(np.abs(conditioned_cov(p, m, sender, theta) - conditioned_cov_oracle(p, m, sender, theta)))
            worst_cov = max(worst_cov, float(diff))
            eff = effective_params(p, m, sender, conditioned=True)
            worst_nt = max(worst_nt, abs(eff.n_t_eff - p.n_t))
    passed = worst_cov <= 1e-12 and worst_nt <= 1e-12
    detail = (
        f"conditioned covariance vs Schur oracle {worst_cov:.2e}, conditioned noise vs n_t {worst_nt:.2e}; "
        "conditioning cancels the interferer exactly (n_t_eff = n_t), ruling out the alternative "
        "reading n_t - kappa n_s (1 - tau)"
    )
    _report(2, passed, detail, time.time() - start, 1.0)


def test_criterion_3_covert_rectangle_asymptotics():
    start = time.time()
    numerics = rg.RegionNumerics(cutoff=32, psk_order=64)
    ratios = {}
    disc_worst = 0.0
    for s in (1e-1, 1e-2):
        eff = effective_params(P_CANON, ModulationConfig(n_s=s), "x", conditioned=True)
        mi = rg.continuous_phase_mi(eff, numerics)
        mi_128 = fock.psk_ensemble_mi(eff, 128, 32) - fock.psk_ensemble_mi(eff, 64, 32)
        disc_worst = max(disc_worst, abs(mi_128))
        ratios[s] = mi / rg.covert_rectangle(P_CANON, s).x_bound
    passed = (
        abs(ratios[1e-2] - 1.0) < abs(ratios[1e-1] - 1.0)
        and 0.5 <= ratios[1e-2] <= 1.5
        and disc_worst <= 1e-6
    )
    detail = (
        f"ratio(1e-1) = {ratios[1e-1]:.4f}, ratio(1e-2) = {ratios[1e-2]:.4f}, "
        f"L=64 vs L=128 gap {disc_worst:.1e}"
    )
    _report(3, passed, detail, time.time() - start, 600.0)


def test_criterion_4_relent_leading_order():
    start = time.time()
    alpha = beta = 1e-3
    s = 1e-2
    lead = planner.relent_leading(P_CANON, alpha, beta, s, "bob", "joint")
    exact = planner.relent_exact(P_CANON, alpha, beta, s, "bob", "joint")
    err = abs(exact.d - lead.d) / exact.d
    lead_h = planner.relent_leading(P_CANON, alpha / 2, beta / 2, s / 2, "bob", "joint")
    exact_h = planner.relent_exact(P_CANON, alpha / 2, beta / 2, s / 2, "bob", "joint")
    err_h = abs(exact_h.d - lead_h.d) / exact_h.d
    ratio = exact_h.v / exact_h.d
    passed = err <= 0.10 and err_h < err and abs(ratio - 2.0) <= 0.2
    detail = f"D relative error {err:.4f} -> {err_h:.4f} after halving, V/D = {ratio:.4f}"
    _report(4, passed, detail, time.time() - start, 30.0)


def test_criterion_5_willie_detection_monte_carlo():
    start = time.time()
    n = 10**4
    p, alpha, beta, s = val.tv_experiment_params(0.30, n)
    lead = planner.willie_tv_leading(n, alpha, beta, s, p)
    est = planner.willie_tv_mc(n, alpha, beta, s, p, samples=10**6, seed=2718)
    passed = abs(lead - 0.30) <= 1e-9 and abs(est.value - 0.30) <= 0.05
    detail = f"leading = {lead:.6f}, mc = {est.value:.6f} +- {est.stderr:.6f} (10^6 samples)"
    _report(5, passed, detail, time.time() - start, 120.0)


def test_criterion_6_q_inv_and_budget_scaling():
    start = time.time()
    worst_rt = max(abs(planner.q_func(planner.q_inv(p)) - p) for p in np.linspace(0.01, 0.99, 99))
    worst_scale = 0.0
    for n in (10, 10**3, 10**6):
        b1 = planner.covert_budget(n, 0.15, P_CANON)
        b4 = planner.covert_budget(4 * n, 0.15, P_CANON)
        worst_scale = max(worst_scale, abs(b4 - b1 / 2.0) / b1)
    passed = worst_rt <= 1e-12 and worst_scale <= 1e-15
    detail = f"round-trip error {worst_rt:.2e}, scaling error {worst_scale:.2e}"
    _report(6, passed, detail, time.time() - start, 1.0)


def test_criterion_7_region_sanity():
    start = time.time()
    numerics = rg.RegionNumerics(cutoff=24, psk_order=64, tail_tol=1e-5)

    reg_tau1 = rg.achievable_region(MacParams(tau=1.0, kappa=0.5, n_b=1.0), ModulationConfig(n_s=0.1), numerics)
    reg_ns0 = rg.achievable_region(P_CANON, ModulationConfig(n_s=0.0), numerics)
    checks = [reg_tau1.y_bound == 0.0, reg_ns0.vertices == [(0.0, 0.0)]]

    rng = np.random.default_rng(777)
    for _ in range(50):
        p = MacParams(tau=rng.uniform(0.05, 0.95), kappa=rng.uniform(0.1, 0.9), n_b=rng.uniform(0.2, 1.2))
        m = ModulationConfig(n_s=rng.uniform(0.02, 0.3))
        reg = rg.achievable_region(p, m, numerics)
        checks.append(all(vx >= 0.0 and vy >= 0.0 for vx, vy in reg.vertices))
        checks.append(reg.sum_bound >= max(reg.sum_candidates) - 1e-15)
    passed = all(checks)
    detail = "degenerate cases collapse correctly; 50-point grid has nonnegative vertices and valid max branch"
    _report(7, passed, detail, time.time() - start, 1200.0)


def test_criterion_8_scaling_limit_convergence():
    start = time.time()
    gamma, alpha, beta, delta = 0.25, 0.5, 0.5, 0.1
    coeff = 2.0 * math.sqrt(P_CANON.kappa * P_CANON.n_b * (1.0 + P_CANON.kappa * P_CANON.n_b)) / (1.0 - P_CANON.kappa)
    s = coeff * planner.q_inv((1.0 - delta) / 2.0) / (alpha * P_CANON.tau + beta * (1.0 - P_CANON.tau))
    lim = planner.scaling_limits(gamma, alpha, beta, s, P_CANON, delta=delta)
    targets = {
        "layer1_x": lim.layer1_x,
        "layer1_y": lim.layer1_y,
        "layer2_x": lim.layer2_x,
        "layer2_y": lim.layer2_y,
        "ent_x": lim.ent_nats_x,
        "ent_y": lim.ent_nats_y,
    }
    errors = []
    l2_over_l1 = []
    for n in (10**4, 10**6, 10**8):
        plan = planner.scaling_plan(n, gamma, alpha, beta, s, P_CANON, delta)
        norm1 = n ** (0.5 - gamma)
        norm2 = math.sqrt(n) * math.log(n)
        outs = {
            "layer1_x": plan.layer1.log_m_x1 / norm1,
            "layer1_y": plan.layer1.log_m_y1 / norm1,
            "layer2_x": plan.layer2.log_m_x2 / norm2,
            "layer2_y": plan.layer2.log_m_y2 / norm2,
            "ent_x": plan.layer2.ent_nats_x / norm2,
            "ent_y": plan.layer2.ent_nats_y / norm2,
        }
        errors.append({k: abs(outs[k] - targets[k]) for k in targets})
        l2_over_l1.append(plan.layer2.log_m_x2 / plan.layer1.log_m_x1)
    checks = []
    for prev, curr in zip(errors, errors[1:]):
        for key in targets:
            # layer-1 normalized outputs equal their limits identically (the
            # planner reports leading-order equalities), so their error is 0
            if key.startswith("layer1"):
                checks.append(curr[key] <= prev[key] + 1e-15 and curr[key] <= 1e-12)
            else:
                checks.append(curr[key] < prev[key])
    checks.append(l2_over_l1[0] < l2_over_l1[1] < l2_over_l1[2])
    passed = all(checks)
    detail = (
        f"layer2_x errors {errors[0]['layer2_x']:.2e} > {errors[1]['layer2_x']:.2e} > "
        f"{errors[2]['layer2_x']:.2e}; L2/L1 ratios {l2_over_l1[0]:.1f} < {l2_over_l1[1]:.1f} < {l2_over_l1[2]:.1f}"
    )
    _report(8, passed, detail, time.time() - start, 1.0)


def test_criterion_9_cli_determinism(tmp_path):
    start = time.time()
    sweep_cfg = tmp_path / "sweep.cfg"
    sweep_cfg.write_text(
        "tau = 0.5\nkappa = 0.5\nn_b = 1.0\nn = 1000000\ndelta = 0.1\n"
        "alpha = 0.01\nbeta = 0.01\ns = 0.01\nvary = s\nstart = 0.001\nstop = 0.03\ncount = 25\n"
    )
    val_cfg = tmp_path / "val.cfg"
    val_cfg.write_text("samples = 200000\n")

    def run_and_hash(command, cfg, name, workers):
        out = tmp_path / name
        rc = cli.main(
            [command, "--config", str(cfg), "--out", str(out), "--seed", "42", "--workers", str(workers)]
        )
        assert rc == 0
        return hashlib.sha256(out.read_bytes()).hexdigest()

    sweep_hashes = {
        run_and_hash("sweep", sweep_cfg, f"sweep_{i}_{w}.csv", w)
        for i, w in enumerate((1, 1, 4, 4))
    }
    validate_hashes = {
        run_and_hash("validate", val_cfg, f"val_{i}_{w}.txt", w)
        for i, w in enumerate((1, 1, 4, 4))
    }
    passed = len(sweep_hashes) == 1 and len(validate_hashes) == 1
    detail = "sweep and validate byte-identical across repeated runs and worker counts {1, 4}"
    _report(9, passed, detail, time.time() - start, 300.0)

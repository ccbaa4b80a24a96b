"""Release gate: the nine pinned acceptance properties.

Each test prints a single verdict line so the gate can be audited from the
pytest log. Tolerances are fixed here on purpose; loosening them is a
release decision, not a test fix.
"""

import numpy as np
import pytest

import risync as rs
from risync import harness, reference

from helpers import complex_normal, make_model, random_theta


def _verdict(idx, label, ok, note=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {idx} {label}: {status}  {note}")
    assert ok, f"acceptance {idx} {label}: {note}"


# ---------------------------------------------------------------------------
# 1. every optimization trace is non-decreasing at full scale


def test_acceptance_1_monotone_traces():
    config = rs.SystemConfig()  # 4 surfaces x 32 elements, 0 dB
    worst = np.inf
    for seed in range(100):
        model = rs.model_from_config(config.updated(seed=20_000 + seed))
        init = rs.random_phases(np.random.default_rng(seed), model.n_phases)
        res = rs.optimize_phases(model, init=init, tol=1e-9, max_iters=120)
        steps = np.diff(res.trace)
        if steps.size:
            worst = min(worst, float(steps.min()))
    _verdict(1, "monotone traces", worst >= -1e-9,
             f"min step {worst:+.3e} over 100 seeds")


# ---------------------------------------------------------------------------
# 2. the per-iteration surrogate really minorizes the objective


def test_acceptance_2_surrogate_soundness():
    rng = np.random.default_rng(2024)
    worst_gap = np.inf
    worst_tangency = 0.0
    for _ in range(100):
        model = make_model(rng, n_surfaces=2, n_elements=2, obs_len=2, lag=1,
                           oversample=2, symbol_power=float(rng.uniform(0.3, 3.0)))
        anchor = random_theta(rng, model.n_phases)
        probe = random_theta(rng, model.n_phases)
        gap = (rs.mse_reduction(probe, model)
               - rs.surrogate_value(probe, anchor, model))
        worst_gap = min(worst_gap, float(gap))
        tangency = abs(rs.surrogate_value(anchor, anchor, model)
                       - rs.mse_reduction(anchor, model))
        worst_tangency = max(worst_tangency, float(tangency))
    ok = worst_gap >= -1e-9 and worst_tangency <= 1e-9
    _verdict(2, "surrogate soundness", ok,
             f"min slack {worst_gap:+.3e}, max tangency {worst_tangency:.3e}")


# ---------------------------------------------------------------------------
# 3. the norm-product quadratic bound majorizes the matrix quadratic form


def test_acceptance_3_quadratic_majorizer():
    rng = np.random.default_rng(3031)
    worst_slack = np.inf
    worst_anchor = 0.0
    worst_eig = np.inf
    for _ in range(100):
        dm, dz = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        a = complex_normal(rng, (dm, dm))
        m_mat = a @ a.conj().T
        b = complex_normal(rng, (dz, dz))
        z_mat = b @ b.conj().T
        x_t = complex_normal(rng, (dz, dm))
        lam, coef = rs.quadratic_majorizer(m_mat, z_mat, x_t)

        def form(x):
            return float(np.real(np.trace(z_mat @ x @ m_mat @ x.conj().T)))

        const = (form(x_t) - lam * np.linalg.norm(x_t) ** 2
                 + 2.0 * float(np.real(np.trace(x_t.conj().T @ coef))))

        def upper(x):
            return (lam * np.linalg.norm(x) ** 2
                    - 2.0 * float(np.real(np.trace(x.conj().T @ coef))) + const)

        worst_anchor = max(worst_anchor, abs(upper(x_t) - form(x_t)))
        for _ in range(5):
            x = complex_normal(rng, (dz, dm)) * float(rng.uniform(0.5, 4.0))
            worst_slack = min(worst_slack, upper(x) - form(x))
        floor = (np.linalg.eigvalsh(m_mat)[-1] * np.linalg.eigvalsh(z_mat)[-1])
        worst_eig = min(worst_eig, lam - floor)
    ok = worst_slack >= -1e-9 and worst_anchor <= 1e-9 and worst_eig >= -1e-9
    _verdict(3, "quadratic majorizer", ok,
             f"min slack {worst_slack:+.3e}, anchor err {worst_anchor:.3e}, "
             f"eig margin {worst_eig:+.3e}")


# ---------------------------------------------------------------------------
# 4. the closed-form equalizer is optimal and completes the MSE budget


def test_acceptance_4_equalizer_optimality():
    rng = np.random.default_rng(4042)
    worst_perturb = np.inf
    worst_identity = 0.0
    for _ in range(20):
        model = make_model(rng, n_surfaces=1 + int(rng.integers(3)),
                           n_elements=1 + int(rng.integers(4)),
                           obs_len=3, lag=2,
                           symbol_power=float(rng.uniform(0.3, 5.0)),
                           noise_power=float(rng.uniform(0.3, 2.0)))
        theta = random_theta(rng, model.n_phases)
        g = rs.equalizer_for(model, theta)
        base = rs.mse_full(theta, g, model)
        for _ in range(100):
            delta = complex_normal(rng, g.shape)
            delta *= 1e-3 / np.linalg.norm(delta)
            worst_perturb = min(worst_perturb,
                                rs.mse_full(theta, g + delta, model) - base)
        identity = abs(base + rs.mse_reduction(theta, model)
                       - rs.mse_no_equalizer(model))
        worst_identity = max(worst_identity, float(identity))
    ok = worst_perturb >= -1e-12 and worst_identity <= 1e-9
    _verdict(4, "equalizer optimality", ok,
             f"min perturbation gain {worst_perturb:+.3e}, "
             f"max budget error {worst_identity:.3e}")


# ---------------------------------------------------------------------------
# 5. factored, equivalent, and structured channel forms agree


def test_acceptance_5_model_equivalence():
    rng = np.random.default_rng(5053)
    worst_forms = 0.0
    worst_fast = 0.0
    for _ in range(10):
        model = make_model(rng, n_surfaces=1 + int(rng.integers(3)),
                           n_elements=1 + int(rng.integers(3)),
                           obs_len=3, lag=2)
        theta = random_theta(rng, model.n_phases)
        h = reference.dense_dest_matrix(model.channel, model.block_len)
        w = reference.dense_phase_matrix(theta, model.block_len)
        f = reference.dense_source_matrix(model.channel, model.block_len)
        lhs = h @ w @ f
        heq = reference.dense_cascade_matrix(model.channel, model.block_len)
        rhs = heq @ reference.dense_theta(theta, model.block_len)
        worst_forms = max(worst_forms,
                          np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))
        fast = rs.effective_channel(model, theta)
        dense = reference.dense_effective_channel(model, theta)
        worst_fast = max(worst_fast,
                         np.linalg.norm(fast - dense) / np.linalg.norm(dense))
    ok = worst_forms <= 1e-12 and worst_fast <= 1e-12
    _verdict(5, "model equivalence", ok,
             f"factored {worst_forms:.3e}, structured {worst_fast:.3e}")


# ---------------------------------------------------------------------------
# 6. closed-form MSE equals symbol-level simulation


def test_acceptance_6_analytic_vs_empirical_mse():
    rng = np.random.default_rng(6064)
    draws = 100_000
    worst_sigma = 0.0
    for trial in range(5):
        model = make_model(rng, n_surfaces=2, n_elements=3, obs_len=4, lag=2,
                           symbol_power=float(rng.uniform(0.5, 4.0)),
                           noise_power=float(rng.uniform(0.5, 2.0)))
        if trial % 2:
            theta = rs.perfect_sync_alignment(model.channel)
        else:
            theta = rs.PhaseSolution(random_theta(rng, model.n_phases))
        g = rs.equalizer_for(model, theta)
        analytic = rs.mse_full(theta, g, model)
        syms = rs.draw_symbols(rng, model.block_len, model.symbol_power,
                               size=draws)
        y = rs.simulate_received(syms, model, theta, rng)
        err = np.sum(np.abs(y @ g.T - syms @ model.window.T) ** 2, axis=1)
        stderr = err.std(ddof=1) / np.sqrt(draws)
        worst_sigma = max(worst_sigma, abs(err.mean() - analytic) / stderr)
    _verdict(6, "analytic vs empirical MSE", worst_sigma <= 3.0,
             f"max deviation {worst_sigma:.2f} standard errors")


# ---------------------------------------------------------------------------
# 7. the optimizer is near the exhaustive optimum on tiny instances


def test_acceptance_7_brute_force_near_optimality():
    levels = np.exp(2j * np.pi * np.arange(64) / 64.0)
    worst_ratio = np.inf
    for seed in range(20):
        rng = np.random.default_rng(7075 + seed)
        model = make_model(rng, n_surfaces=1, n_elements=2, obs_len=2, lag=1,
                           oversample=2)
        best = 0.0
        for a in levels:
            for b in levels:
                best = max(best, rs.mse_reduction(np.array([a, b]), model))
        achieved = rs.optimize_phases(model).trace[-1]
        worst_ratio = min(worst_ratio, achieved / best)
    _verdict(7, "brute-force near-optimality", worst_ratio >= 0.999,
             f"min objective ratio {worst_ratio:.6f} over 20 seeds")


# ---------------------------------------------------------------------------
# 8. sweep curves reproduce the qualitative experiment findings


def test_acceptance_8_figure_reproduction():
    schemes = ("mm", "baseline", "baseline-naive-eq", "random")
    snr_settings = harness.SweepSettings(trials=200, workers=4,
                                         schemes=schemes, bits_list=(2,))
    snr_result = harness.sweep_snr(rs.SystemConfig(), snr_settings)
    by_snr = {}
    for row in snr_result.rows:
        by_snr.setdefault(row.sweep_value, {})[row.scheme] = row

    ordering_ok = True
    fair_ok = True
    discrete_ok = True
    notes = []
    for snr in sorted(by_snr):
        d = by_snr[snr]
        mm, naive = d["mm"].mse_mean, d["baseline-naive-eq"].mse_mean
        ordering_ok &= mm < naive
        fair_ok &= mm <= d["baseline"].mse_mean + 1e-9
        discrete_ok &= d["mm-b2"].mse_mean <= 3.0 * mm
        notes.append(f"{snr:+.0f}dB x{naive / mm:.0f}")

    k_settings = harness.SweepSettings(trials=200, workers=4, schemes=schemes,
                                       bits_list=(), snr_list_db=(0.0,))
    k_result = harness.sweep_k(rs.SystemConfig(n_elements=16), k_settings)
    by_k = {}
    for row in k_result.rows:
        by_k.setdefault(int(row.sweep_value), {})[row.scheme] = row

    # the separation between the sync-naive curve and the optimized curve,
    # read on the log axis (a ratio), must not shrink as surfaces are added
    trend_ok = True
    prev_ratio, prev_err = None, None
    for k in sorted(by_k):
        d = by_k[k]
        mm, naive = d["mm"], d["baseline-naive-eq"]
        fair_ok &= mm.mse_mean <= d["baseline"].mse_mean + 1e-9
        ratio = naive.mse_mean / mm.mse_mean
        err = ratio * np.hypot(naive.mse_stderr / naive.mse_mean,
                               mm.mse_stderr / mm.mse_mean)
        if prev_ratio is not None:
            trend_ok &= ratio >= prev_ratio - (err + prev_err)
        prev_ratio, prev_err = ratio, err

    ok = ordering_ok and fair_ok and discrete_ok and trend_ok
    _verdict(8, "figure reproduction", ok,
             f"ordering={ordering_ok} fair={fair_ok} discrete={discrete_ok} "
             f"k-trend={trend_ok}  gaps: {' '.join(notes)}")


# ---------------------------------------------------------------------------
# 9. sweeps are byte-reproducible for any worker count


def test_acceptance_9_deterministic_sweeps():
    config = rs.SystemConfig()
    snr_settings = dict(trials=10, snr_list_db=(-5.0, 0.0, 5.0),
                        schemes=("mm", "baseline", "baseline-naive-eq", "random"),
                        bits_list=(2,))
    texts = {
        workers: harness.csv_text(harness.sweep_snr(
            config, harness.SweepSettings(workers=workers, **snr_settings)))
        for workers in (1, 3, 8)
    }
    same_snr = texts[1] == texts[3] == texts[8]

    k_settings = dict(trials=10, k_list=(1, 2, 4), snr_list_db=(0.0,),
                      schemes=("mm", "baseline"), bits_list=())
    k_texts = {
        workers: harness.csv_text(harness.sweep_k(
            rs.SystemConfig(n_elements=16),
            harness.SweepSettings(workers=workers, **k_settings)))
        for workers in (1, 5)
    }
    same_k = k_texts[1] == k_texts[5]
    _verdict(9, "deterministic sweeps", same_snr and same_k,
             f"snr bytes equal={same_snr}, k bytes equal={same_k}")

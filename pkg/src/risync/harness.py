"""Trial harness: config files, seeded sweeps, CSV output and validation.

Sweeps are reproducible by construction: every trial seed is a pure function
of (master seed, sweep index, trial index), results land in pre-assigned
slots, and aggregation is order-independent.  The CSV bytes therefore depend
only on the configuration and master seed, never on the worker-pool size.
Wall-clock timing is the one physical measurement in the schema; it is
disabled by default (column written as 0.0) and opt-in via ``measure_time``,
which documents that timing runs are not byte-reproducible.
"""

import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .baselines import naive_sync_equalizer, perfect_sync_alignment, random_phases
from .channel import ChannelRealization
from .errors import ConfigError, NumericError
from .mm import (
    PhaseSolution,
    equalizer_for,
    linearized_bound,
    mse_full,
    mse_reduction,
    optimize_phases,
    quadratic_majorizer,
    quantize_phases,
    surrogate_value,
    update_phases,
    phase_update_matrix,
    majorizer_coefficient,
    linearization_filter,
    induced_one_norm,
)
from .pulse import PulseModel, autocorrelation, build_window_matrix
from .reference import (
    dense_cascade_matrix,
    dense_dest_matrix,
    dense_effective_channel,
    dense_phase_matrix,
    dense_source_matrix,
    dense_theta,
)
from .sysmodel import (
    SystemConfig,
    build_model,
    draw_symbols,
    effective_channel,
    mse_no_equalizer,
    model_from_config,
    simulate_received,
)

_MASK = (1 << 64) - 1
_RANDOM_SCHEME_TAG = 0x52414E44  # namespace for the random-phase draws

CSV_HEADER = "sweep_var,scheme,bits,mse_mean,mse_stderr,trials,mean_iters,mean_ms"

KNOWN_SCHEMES = ("mm", "baseline", "baseline-naive-eq", "random")


def _splitmix64(z):
    z = (z + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix_seed(*parts):
    """Deterministic 64-bit hash of integer parts (seed derivation)."""
    state = 0x8531CAFE5E46D1A9
    for part in parts:
        state = _splitmix64((state ^ (int(part) & _MASK)) & _MASK)
    return state


@dataclass(frozen=True)
class SweepSettings:
    """Sweep-level knobs that sit alongside the scenario config."""

    trials: int = 200
    snr_list_db: tuple = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
    k_list: tuple = (1, 2, 4, 6, 8)
    schemes: tuple = ("mm", "baseline", "baseline-naive-eq", "random")
    bits_list: tuple = (2,)
    workers: int = 1
    measure_time: bool = False

    def validate(self):
        problems = []
        if self.trials < 1:
            problems.append(f"trials must be >= 1, got {self.trials}")
        if not self.snr_list_db:
            problems.append("snr_list_db must be non-empty")
        if not self.k_list or any(k < 1 for k in self.k_list):
            problems.append("k_list entries must be >= 1")
        if any(b < 1 for b in self.bits_list):
            problems.append("bits_list entries must be >= 1")
        if self.workers < 1:
            problems.append(f"workers must be >= 1, got {self.workers}")
        try:
            resolve_schemes(self.schemes, self.bits_list)
        except ConfigError as exc:
            problems.append(str(exc))
        if problems:
            raise ConfigError("; ".join(problems))
        return self


def resolve_schemes(schemes, bits_list):
    """Expand scheme names into concrete (scheme_id, bits) pairs.

    "mm" expands to the continuous run plus one "mm-b<B>" run per entry of
    ``bits_list``; explicit "mm-b<B>" names are also accepted.
    """
    out = []
    for name in schemes:
        name = name.strip()
        if name == "mm":
            out.append(("mm", None))
            out.extend((f"mm-b{b}", int(b)) for b in bits_list)
        elif m := re.fullmatch(r"mm-b(\d+)", name):
            out.append((name, int(m.group(1))))
        elif name in KNOWN_SCHEMES:
            out.append((name, None))
        else:
            raise ConfigError(f"unknown scheme {name!r}")
    seen, unique = set(), []
    for item in out:
        if item[0] not in seen:
            seen.add(item[0])
            unique.append(item)
    if not unique:
        raise ConfigError("no schemes selected")
    return unique


# ---------------------------------------------------------------------------
# config files

_SCALAR_KEYS = {
    "n_surfaces": int, "n_elements": int, "obs_len": int, "lag": int,
    "oversample": int, "beta": float, "snr_db": float, "noise_power": float,
    "n_paths": int, "tol": float, "max_iters": int, "seed": int,
}
_SWEEP_SCALARS = {"trials": int, "workers": int}
_LIST_KEYS = {"snr_list_db": float, "k_list": int, "bits_list": int, "schemes": str}


def parse_config_text(text, path="<config>"):
    """Parse ``key = value`` lines into (SystemConfig, SweepSettings).

    '#' starts a comment; list values are comma-separated; unknown keys are
    rejected.  ``quant_bits`` accepts an integer or ``none``.
    """
    cfg_kwargs, sweep_kwargs = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key in _SCALAR_KEYS:
                cfg_kwargs[key] = _SCALAR_KEYS[key](value)
            elif key == "quant_bits":
                cfg_kwargs[key] = None if value.lower() in ("", "none") else int(value)
            elif key in _SWEEP_SCALARS:
                sweep_kwargs[key] = _SWEEP_SCALARS[key](value)
            elif key == "measure_time":
                sweep_kwargs[key] = value.lower() in ("1", "true", "yes")
            elif key in _LIST_KEYS:
                conv = _LIST_KEYS[key]
                sweep_kwargs[key] = tuple(
                    conv(item.strip()) for item in value.split(",") if item.strip())
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    config = SystemConfig(**cfg_kwargs).validate()
    sweep = SweepSettings(**sweep_kwargs).validate()
    return config, sweep


def load_config(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, path=str(path))


# ---------------------------------------------------------------------------
# trials and sweeps

@dataclass(frozen=True)
class TrialRecord:
    """One scheme evaluated on one channel draw.  ``mse`` is the raw block
    MSE; sweep aggregation divides by the symbol power."""

    scheme: str
    bits: int | None
    mse: float
    iterations: int
    wall_ms: float


def run_trial(config, trial_seed, schemes=None, bits_list=(2,), measure_time=False):
    """Draw one channel from ``trial_seed`` and evaluate every scheme on it.

    Returns a list of TrialRecord in scheme order.  Deterministic given
    (config, trial_seed, schemes, bits_list).
    """
    config.validate()
    pairs = resolve_schemes(schemes or ("mm", "baseline", "random"), bits_list)
    nx, ny = config.array_shape
    channel = ChannelRealization.draw(trial_seed, config.n_surfaces, nx, ny,
                                      config.n_paths)
    model = model_from_config(config, channel=channel)
    records = []
    for scheme, bits in pairs:
        tic = time.perf_counter()
        iters = 0
        if scheme == "mm" or scheme.startswith("mm-b"):
            result = optimize_phases(model, tol=config.tol,
                                     max_iters=config.max_iters, quant_bits=bits)
            mse, iters = result.mse_final, result.iterations
        elif scheme == "baseline":
            sol = perfect_sync_alignment(channel)
            mse = mse_full(sol, equalizer_for(model, sol), model)
        elif scheme == "baseline-naive-eq":
            sol = perfect_sync_alignment(channel)
            mse = mse_full(sol, naive_sync_equalizer(model, sol), model)
        elif scheme == "random":
            rng = np.random.default_rng(mix_seed(trial_seed, _RANDOM_SCHEME_TAG))
            sol = random_phases(rng, model.n_phases)
            mse = mse_full(sol, equalizer_for(model, sol), model)
        else:  # pragma: no cover - resolve_schemes guards this
            raise ConfigError(f"unknown scheme {scheme!r}")
        wall = 1e3 * (time.perf_counter() - tic) if measure_time else 0.0
        records.append(TrialRecord(scheme, bits, float(mse), int(iters), wall))
    return records


@dataclass(frozen=True)
class SweepRow:
    sweep_value: float
    scheme: str
    bits: int | None
    mse_mean: float
    mse_stderr: float
    trials: int
    mean_iters: float
    mean_ms: float


@dataclass(frozen=True)
class SweepResult:
    """Aggregated sweep output.  ``mse_mean`` is normalized by the symbol
    power of the sweep point, so curves are comparable across SNR."""

    sweep_name: str
    rows: tuple
    config: SystemConfig
    master_seed: int
    settings: SweepSettings = field(default=None)


def _run_sweep(name, configs, values, settings, master_seed):
    """Shared sweep engine: slot-indexed fan-out plus order-independent
    aggregation."""
    settings.validate()
    pairs = resolve_schemes(settings.schemes, settings.bits_list)
    slots = [[None] * settings.trials for _ in configs]

    def job(idx):
        i, j = idx
        seed = mix_seed(master_seed, i, j)
        slots[i][j] = run_trial(configs[i], seed, schemes=settings.schemes,
                                bits_list=settings.bits_list,
                                measure_time=settings.measure_time)

    indices = [(i, j) for i in range(len(configs)) for j in range(settings.trials)]
    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            list(pool.map(job, indices))
    else:
        for idx in indices:
            job(idx)

    rows = []
    for i, value in enumerate(values):
        es = configs[i].symbol_power
        for pos, (scheme, bits) in enumerate(pairs):
            per = [slots[i][j][pos] for j in range(settings.trials)]
            mses = np.array([rec.mse for rec in per]) / es
            stderr = (float(np.std(mses, ddof=1)) / np.sqrt(len(mses))
                      if len(mses) > 1 else 0.0)
            rows.append(SweepRow(
                sweep_value=float(value),
                scheme=scheme,
                bits=bits,
                mse_mean=float(np.mean(mses)),
                mse_stderr=stderr,
                trials=settings.trials,
                mean_iters=float(np.mean([rec.iterations for rec in per])),
                mean_ms=float(np.mean([rec.wall_ms for rec in per])),
            ))
    rows.sort(key=lambda r: (r.sweep_value, r.scheme))
    return SweepResult(name, tuple(rows), configs[0], master_seed, settings)


def sweep_snr(config, settings=None, master_seed=None):
    """Sweep the SNR grid at fixed surface count."""
    settings = settings or SweepSettings()
    master = config.seed if master_seed is None else master_seed
    configs = [config.updated(snr_db=float(v)) for v in settings.snr_list_db]
    return _run_sweep("snr_db", configs, list(settings.snr_list_db), settings, master)


def sweep_k(config, settings=None, master_seed=None):
    """Sweep the number of surfaces at fixed SNR."""
    settings = settings or SweepSettings()
    master = config.seed if master_seed is None else master_seed
    configs = [config.updated(n_surfaces=int(k)) for k in settings.k_list]
    return _run_sweep("n_surfaces", configs, [float(k) for k in settings.k_list],
                      settings, master)


# ---------------------------------------------------------------------------
# CSV and plot script

def _fmt(x):
    return format(float(x), ".17e")


def csv_text(result):
    """Render a SweepResult as CSV text; deterministic for a fixed input."""
    lines = [CSV_HEADER]
    for r in result.rows:
        bits = "continuous" if r.bits is None else str(int(r.bits))
        lines.append(",".join([
            _fmt(r.sweep_value), r.scheme, bits, _fmt(r.mse_mean),
            _fmt(r.mse_stderr), str(int(r.trials)), _fmt(r.mean_iters),
            _fmt(r.mean_ms),
        ]))
    return "\n".join(lines) + "\n"


def emit_csv(result, path):
    text = csv_text(result)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return text


def read_csv(path):
    """Parse a sweep CSV back into SweepRow tuples (full round trip)."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ConfigError(f"{path}: missing or unexpected CSV header")
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 8:
            raise ConfigError(f"{path}: bad CSV row {ln!r}")
        rows.append(SweepRow(
            sweep_value=float(parts[0]),
            scheme=parts[1],
            bits=None if parts[2] == "continuous" else int(parts[2]),
            mse_mean=float(parts[3]),
            mse_stderr=float(parts[4]),
            trials=int(parts[5]),
            mean_iters=float(parts[6]),
            mean_ms=float(parts[7]),
        ))
    return rows


def emit_gnuplot_script(csv_path, script_path, result):
    """Write a small gnuplot script plotting mse_mean per scheme."""
    schemes = []
    for r in result.rows:
        if r.scheme not in schemes:
            schemes.append(r.scheme)
    xlabel = "SNR (dB)" if result.sweep_name == "snr_db" else "number of surfaces"
    plots = ", \\\n  ".join(
        f"'{csv_path}' using 1:(stringcolumn(2) eq '{s}' ? column(4) : 1/0) "
        f"with linespoints title '{s}'" for s in schemes)
    text = (
        "set datafile separator ','\n"
        "set key outside\n"
        f"set xlabel '{xlabel}'\n"
        "set ylabel 'MSE per unit symbol power'\n"
        "set logscale y\n"
        f"plot \\\n  {plots}\n"
    )
    with open(script_path, "w", newline="") as fh:
        fh.write(text)
    return text


# ---------------------------------------------------------------------------
# validation suite

@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    margin: float
    detail: str

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:32s} margin={self.margin:+.3e}  {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def lines(self):
        return [c.line() for c in self.checks]


def _small_model(rng, n_surfaces=2, n_elements=2, obs_len=2, lag=1, oversample=2,
                 beta=0.3, symbol_power=1.0, noise_power=1.0):
    """Small random scenario for structural checks (dense path affordable)."""
    pulse = PulseModel.build(beta, lag, oversample, obs_len)
    shape = (n_surfaces, n_elements)
    source = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    dest = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    eps = rng.uniform(-0.999, 0.999, size=n_surfaces)
    channel = ChannelRealization(source, dest, eps)
    return build_model(pulse, channel, symbol_power, noise_power)


def _rand_theta(rng, count):
    return np.exp(1j * rng.uniform(0, 2 * np.pi, size=count))


def check_pulse_tables(config):
    pulse = PulseModel.build(config.beta, config.lag, config.oversample,
                             config.obs_len)
    r0_err = abs(float(pulse.autocorr[config.lag]) - 1.0)
    even_err = float(np.max(np.abs(pulse.autocorr - pulse.autocorr[::-1])))
    leak = max(abs(autocorrelation(pulse, t)) for t in range(1, 2 * config.lag + 1))
    worst = max(r0_err, even_err)
    ok = worst <= 1e-12 and leak <= 0.05
    return PropertyResult("pulse-tables", ok, 0.05 - leak,
                          f"R(0) err {r0_err:.1e}, leakage {leak:.3e}")


def check_model_equivalence(rng):
    model = _small_model(rng)
    theta = _rand_theta(rng, model.n_phases)
    l = model.block_len
    lhs = (dense_dest_matrix(model.channel, l)
           @ dense_phase_matrix(theta, l)
           @ dense_source_matrix(model.channel, l))
    rhs = dense_cascade_matrix(model.channel, l) @ dense_theta(theta, l)
    rel = float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), 1e-300))
    structured = effective_channel(model, theta)
    dense = dense_effective_channel(model, theta)
    rel2 = float(np.linalg.norm(structured - dense)
                 / max(np.linalg.norm(dense), 1e-300))
    worst = max(rel, rel2)
    return PropertyResult("model-equivalence", worst <= 1e-12, 1e-12 - worst,
                          f"factored {rel:.1e}, structured {rel2:.1e}")


def check_window_selection(config):
    lag, obs_len = config.lag, config.obs_len
    block = obs_len + 2 * lag
    ideal = np.zeros(block)
    ideal[lag] = 1.0
    win = build_window_matrix(ideal, obs_len)
    sel = win @ np.arange(block)
    err = float(np.max(np.abs(sel - (np.arange(obs_len) + lag))))
    return PropertyResult("window-selection", err == 0.0, -err,
                          "ideal target picks symbol m+lag")


def check_equalizer_stationarity(rng):
    model = _small_model(rng)
    theta = _rand_theta(rng, model.n_phases)
    geq = equalizer_for(model, theta)
    base = mse_full(theta, geq, model)
    ident = abs(base - (mse_no_equalizer(model) - mse_reduction(theta, model)))
    worst = 0.0
    for _ in range(20):
        delta = (rng.standard_normal(geq.shape) + 1j * rng.standard_normal(geq.shape))
        delta *= 1e-3 / np.linalg.norm(delta)
        worst = min(worst, mse_full(theta, geq + delta, model) - base)
    ok = worst >= -1e-12 and ident <= 1e-9
    return PropertyResult("equalizer-stationarity", ok, worst,
                          f"identity err {ident:.1e}, worst perturbation {worst:.1e}")


def check_tangent_bound(rng):
    model = _small_model(rng)
    theta_t = _rand_theta(rng, model.n_phases)
    tang = abs(linearized_bound(theta_t, theta_t, model)
               - mse_reduction(theta_t, model))
    worst = np.inf
    for _ in range(10):
        theta = _rand_theta(rng, model.n_phases)
        worst = min(worst, mse_reduction(theta, model)
                    - linearized_bound(theta, theta_t, model))
    ok = worst >= -1e-9 and tang <= 1e-9
    return PropertyResult("tangent-bound", ok, worst,
                          f"tangency err {tang:.1e}, min slack {worst:.1e}")


def check_majorization(rng, lambda_scale=1.0):
    """Norm-product majorization on random PSD pairs.

    ``lambda_scale`` exists for fault injection in tests: scaling the
    coefficient below 1 must break the bound.
    """
    worst = np.inf
    eig_margin = np.inf
    for _ in range(20):
        dim_z, dim_m = rng.integers(2, 5, size=2)
        a = rng.standard_normal((dim_m, dim_m)) + 1j * rng.standard_normal((dim_m, dim_m))
        m_mat = a @ a.conj().T
        b = rng.standard_normal((dim_z, dim_z)) + 1j * rng.standard_normal((dim_z, dim_z))
        z_mat = b @ b.conj().T
        x_t = rng.standard_normal((dim_z, dim_m)) + 1j * rng.standard_normal((dim_z, dim_m))
        lam, coef = quadratic_majorizer(m_mat, z_mat, x_t)
        lam *= lambda_scale
        coef = lam * x_t - z_mat @ x_t @ m_mat
        const = (lam * float(np.vdot(x_t, x_t).real)
                 - float(np.trace(z_mat @ x_t @ m_mat @ x_t.conj().T).real))
        eig_margin = min(eig_margin,
                         lam - float(np.max(np.linalg.eigvalsh(m_mat)))
                         * float(np.max(np.linalg.eigvalsh(z_mat))))
        for _ in range(10):
            x = rng.standard_normal(x_t.shape) + 1j * rng.standard_normal(x_t.shape)
            val = float(np.trace(z_mat @ x @ m_mat @ x.conj().T).real)
            bound = (-2.0 * float(np.real(np.vdot(coef, x)))
                     + lam * float(np.vdot(x, x).real) + const)
            worst = min(worst, bound - val)
    # a coefficient below the spectral floor is not a majorizer, even when
    # the sampled probes happen to miss the violating directions
    ok = worst >= -1e-9 and eig_margin >= -1e-9
    return PropertyResult("majorization", ok, min(worst, eig_margin),
                          f"min slack {worst:.3e}, eig margin {eig_margin:.3e}")


def check_surrogate_sandwich(rng):
    model = _small_model(rng)
    theta_t = _rand_theta(rng, model.n_phases)
    red_t = mse_reduction(theta_t, model)
    tang = abs(surrogate_value(theta_t, theta_t, model) - red_t)
    worst = np.inf
    for _ in range(10):
        theta = _rand_theta(rng, model.n_phases)
        worst = min(worst, mse_reduction(theta, model)
                    - surrogate_value(theta, theta_t, model))
    # one full update must not decrease the reduction
    filt = linearization_filter(model, theta_t)
    lam = majorizer_coefficient(model, filt)
    b_mat = phase_update_matrix(theta_t, filt, lam, model)
    theta_next = update_phases(b_mat, model.block_len, prev=theta_t)
    step = mse_reduction(theta_next, model) - red_t
    ok = worst >= -1e-9 and tang <= 1e-9 and step >= -1e-9
    return PropertyResult("surrogate-sandwich", ok, min(worst, step),
                          f"tangency {tang:.1e}, min slack {worst:.1e}, step {step:+.1e}")


def check_monotone_run(rng):
    worst = np.inf
    for _ in range(3):
        model = _small_model(rng, n_surfaces=3, n_elements=4, obs_len=4, lag=2)
        result = optimize_phases(model, tol=1e-6, max_iters=60)
        diffs = np.diff(result.trace)
        worst = min(worst, float(np.min(diffs)) if diffs.size else 0.0)
        ident = abs(result.mse_final
                    - (mse_no_equalizer(model) - result.trace[-1]))
        if ident > 1e-9:
            return PropertyResult("monotone-run", False, -ident,
                                  f"final-mse identity err {ident:.1e}")
        mods = np.abs(np.abs(result.theta_final.theta) - 1.0)
        if float(np.max(mods)) > 1e-12:
            return PropertyResult("monotone-run", False, -float(np.max(mods)),
                                  "unit modulus violated")
    return PropertyResult("monotone-run", worst >= -1e-9, worst,
                          f"min trace step {worst:+.3e}")


def check_quantizer(rng):
    theta = _rand_theta(rng, 64)
    for bits in (1, 2, 3):
        q = quantize_phases(theta, bits)
        grid = 2 * np.pi * np.arange(2 ** bits) / 2 ** bits
        ang = np.mod(np.angle(q), 2 * np.pi)
        dist = np.min(np.abs(ang[:, None] - grid[None, :]), axis=1)
        dist = np.minimum(dist, 2 * np.pi - dist)
        if float(np.max(dist)) > 1e-12:
            return PropertyResult("quantizer", False, -float(np.max(dist)),
                                  f"off-grid output at bits={bits}")
        again = quantize_phases(q, bits)
        if float(np.max(np.abs(again - q))) > 0.0:
            return PropertyResult("quantizer", False, -1.0,
                                  f"not idempotent at bits={bits}")
    return PropertyResult("quantizer", True, 0.0, "grid membership and idempotency")


def check_monte_carlo(rng):
    model = _small_model(rng, noise_power=0.7, symbol_power=1.5)
    theta = _rand_theta(rng, model.n_phases)
    geq = equalizer_for(model, theta)
    predicted = mse_full(theta, geq, model)
    draws = 20000
    sym = draw_symbols(rng, model.block_len, model.symbol_power, size=draws)
    received = simulate_received(sym, model, theta, rng)
    err = received @ geq.T - sym @ model.window.T
    per_draw = np.sum(np.abs(err) ** 2, axis=1)
    est = float(np.mean(per_draw))
    stderr = float(np.std(per_draw, ddof=1)) / np.sqrt(draws)
    dev = abs(est - predicted)
    ok = dev <= 4.0 * stderr
    return PropertyResult("monte-carlo-mse", ok, 4.0 * stderr - dev,
                          f"analytic {predicted:.6f}, empirical {est:.6f} "
                          f"(+-{stderr:.6f})")


def check_baseline_dominance(rng):
    model = _small_model(rng, n_surfaces=3, n_elements=4, obs_len=4, lag=2)
    base = perfect_sync_alignment(model.channel)
    base_mse = mse_full(base, equalizer_for(model, base), model)
    result = optimize_phases(model, init=base, tol=1e-6, max_iters=100)
    slack = base_mse - result.mse_final
    return PropertyResult("baseline-dominance", slack >= -1e-9, slack,
                          f"baseline {base_mse:.6f}, optimized {result.mse_final:.6f}")


def validate(config):
    """Run every structural and algorithmic invariant once; deterministic
    given ``config.seed``."""
    config.validate()
    checks = []
    checks.append(check_pulse_tables(config))
    checks.append(check_window_selection(config))
    checks.append(check_model_equivalence(np.random.default_rng(mix_seed(config.seed, 1))))
    checks.append(check_equalizer_stationarity(np.random.default_rng(mix_seed(config.seed, 2))))
    checks.append(check_tangent_bound(np.random.default_rng(mix_seed(config.seed, 3))))
    checks.append(check_majorization(np.random.default_rng(mix_seed(config.seed, 4))))
    checks.append(check_surrogate_sandwich(np.random.default_rng(mix_seed(config.seed, 5))))
    checks.append(check_monotone_run(np.random.default_rng(mix_seed(config.seed, 6))))
    checks.append(check_quantizer(np.random.default_rng(mix_seed(config.seed, 7))))
    checks.append(check_monte_carlo(np.random.default_rng(mix_seed(config.seed, 8))))
    checks.append(check_baseline_dominance(np.random.default_rng(mix_seed(config.seed, 9))))
    return ValidationReport(tuple(checks))

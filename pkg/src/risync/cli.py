"""Command-line front end: solve, sweep-snr, sweep-k, validate.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numeric failure.
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from .baselines import naive_sync_equalizer, perfect_sync_alignment, random_phases
from .errors import ConfigError, ConstraintError, DimensionError, NumericError, ParameterError
from .harness import (
    SweepSettings,
    emit_csv,
    emit_gnuplot_script,
    load_config,
    mix_seed,
    sweep_k,
    sweep_snr,
    validate,
)
from .mm import equalizer_for, mse_full, optimize_phases
from .sysmodel import SystemConfig, model_from_config


def _int_list(text):
    return tuple(int(s) for s in text.split(",") if s.strip())


def _str_list(text):
    return tuple(s.strip() for s in text.split(",") if s.strip())


def build_parser():
    parser = argparse.ArgumentParser(
        prog="risync",
        description="Phase design for distributed reflecting surfaces with "
                    "fractional timing offsets.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="path to a key = value config file")
        p.add_argument("--seed", type=int, help="override the master seed")

    p_solve = sub.add_parser("solve", help="optimize one channel draw and "
                                           "print the iteration trace")
    common(p_solve)
    p_solve.add_argument("--bits", type=int, default=None,
                         help="restrict phases to a 2^bits grid")
    p_solve.add_argument("--init", choices=("alignment", "random"),
                         default="alignment",
                         help="starting phases for the iteration")

    for name, help_text in (("sweep-snr", "Monte-Carlo sweep over the SNR grid"),
                            ("sweep-k", "Monte-Carlo sweep over surface counts")):
        p = sub.add_parser(name, help=help_text)
        common(p)
        p.add_argument("--trials", type=int, help="trials per sweep point")
        p.add_argument("--out", default=f"{name.replace('-', '_')}.csv",
                       help="output CSV path")
        p.add_argument("--schemes", type=_str_list,
                       help="comma list: mm, baseline, baseline-naive-eq, random")
        p.add_argument("--bits", type=_int_list,
                       help="comma list of grid resolutions for discrete runs")
        p.add_argument("--workers", type=int, help="worker threads")
        p.add_argument("--timing", action="store_true",
                       help="measure wall time (breaks byte reproducibility)")
        p.add_argument("--plot-script", dest="plot_script",
                       help="also write a gnuplot script to this path")

    p_val = sub.add_parser("validate", help="run the invariant suite")
    common(p_val)
    return parser


def _load(args, default_config):
    if args.config:
        config, settings = load_config(args.config)
    else:
        config, settings = default_config, SweepSettings()
    if args.seed is not None:
        config = config.updated(seed=args.seed)
    return config, settings


def _apply_sweep_flags(settings, args):
    updates = {}
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.schemes is not None:
        updates["schemes"] = args.schemes
    if args.bits is not None:
        updates["bits_list"] = args.bits
    if args.workers is not None:
        updates["workers"] = args.workers
    if args.timing:
        updates["measure_time"] = True
    return replace(settings, **updates).validate()


def _cmd_solve(args):
    config, _ = _load(args, SystemConfig())
    if args.bits is not None:
        config = config.updated(quant_bits=args.bits)
    model = model_from_config(config)
    base = perfect_sync_alignment(model.channel)
    base_mse = mse_full(base, equalizer_for(model, base), model)
    naive_mse = mse_full(base, naive_sync_equalizer(model, base), model)
    rng = np.random.default_rng(mix_seed(config.seed, 0x52414E44))
    rand = random_phases(rng, model.n_phases)
    rand_mse = mse_full(rand, equalizer_for(model, rand), model)
    init = rand if args.init == "random" else base
    result = optimize_phases(model, init=init, tol=config.tol,
                             max_iters=config.max_iters,
                             quant_bits=config.quant_bits, record_time=True)
    print(f"# seed={config.seed} surfaces={config.n_surfaces} "
          f"elements={config.n_elements} snr_db={config.snr_db}")
    print("iter  reduction            step_ms")
    for i, red in enumerate(result.trace):
        ms = result.iter_ms[i - 1] if 0 < i <= result.iter_ms.size else 0.0
        print(f"{i:4d}  {red: .12e}  {ms:8.3f}")
    tag = "converged" if result.converged else "iteration cap"
    print(f"# stopped after {result.iterations} updates ({tag})")
    print(f"mse optimized         : {result.mse_final:.12e}")
    print(f"mse baseline          : {base_mse:.12e}")
    print(f"mse baseline-naive-eq : {naive_mse:.12e}")
    print(f"mse random            : {rand_mse:.12e}")
    return 0


def _cmd_sweep(args, kind):
    default = SystemConfig() if kind == "snr" else SystemConfig(n_elements=16)
    config, settings = _load(args, default)
    settings = _apply_sweep_flags(settings, args)
    runner = sweep_snr if kind == "snr" else sweep_k
    result = runner(config, settings)
    emit_csv(result, args.out)
    if args.plot_script:
        emit_gnuplot_script(args.out, args.plot_script, result)
    print(f"wrote {len(result.rows)} rows to {args.out}")
    for row in result.rows:
        bits = "cont" if row.bits is None else f"b{row.bits}"
        print(f"  {result.sweep_name}={row.sweep_value:+7.2f} "
              f"{row.scheme:>18s}/{bits:4s} mse={row.mse_mean:.6e} "
              f"(+-{row.mse_stderr:.1e})")
    return 0


def _cmd_validate(args):
    config, _ = _load(args, SystemConfig())
    report = validate(config)
    for line in report.lines():
        print(line)
    if report.passed:
        print("all invariants hold")
        return 0
    print("validation FAILED")
    return 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "sweep-snr":
            return _cmd_sweep(args, "snr")
        if args.command == "sweep-k":
            return _cmd_sweep(args, "k")
        if args.command == "validate":
            return _cmd_validate(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, ParameterError, DimensionError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, ConstraintError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

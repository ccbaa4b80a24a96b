"""Show what the timing-aware equalizer buys on a single channel draw.

Phase alignment concentrates the reflected energy, but with per-surface
timing offsets the symbols still smear into each other.  The closed-form
equalizer undoes that smearing; an equalizer designed as if all offsets
were zero does not.  The gap between the two grows dramatically with SNR,
because residual ISI scales with the signal while noise does not.
"""

import numpy as np

import risync as rs


def main():
    config = rs.SystemConfig(seed=2009)
    model = rs.model_from_config(config)
    offsets = ", ".join(f"{e:+.3f}" for e in model.channel.offsets)
    print(f"{config.n_surfaces} surfaces x {config.n_elements} elements, "
          f"timing offsets [{offsets}] symbols")

    theta = rs.perfect_sync_alignment(model.channel)
    print(f"\n{'SNR dB':>7} {'no equalizer':>14} {'offset-blind eq':>16} "
          f"{'timing-aware eq':>16} {'blind/aware':>12}")
    for snr in (-10.0, 0.0, 10.0, 20.0):
        m = rs.model_from_config(config.updated(snr_db=snr))
        es = m.symbol_power
        raw = rs.mse_no_equalizer(m) / es
        naive = rs.mse_full(theta, rs.naive_sync_equalizer(m, theta), m) / es
        aware = rs.mse_full(theta, rs.equalizer_for(m, theta), m) / es
        print(f"{snr:>7.0f} {raw:>14.6f} {naive:>16.6f} {aware:>16.6f} "
              f"{naive / aware:>11.0f}x")
    print("\n(MSE per unit symbol energy; the offset-blind equalizer was "
          "built from the same channel with all offsets forced to zero)")


if __name__ == "__main__":
    main()

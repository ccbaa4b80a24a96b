"""Reference phase configurations and the offset-blind equalizer.

``perfect_sync_alignment`` is the standard design that ignores timing
offsets: each element cancels the phase of its own cascaded coefficient, so
all per-surface gains add coherently.  ``random_phases`` is the
no-optimization floor.  ``naive_sync_equalizer`` additionally builds the
equalizer as if every surface were symbol-synchronous (all offsets zero),
quantifying the cost of ignoring the offsets on the receive side too.
"""

import numpy as np

from .errors import ParameterError
from .mm import PhaseSolution, optimal_equalizer
from .sysmodel import build_delay_matrix, cascade_gains, cascade_rows


def perfect_sync_alignment(channel):
    """Element phases that co-phase the cascade: exp(-j arg(conj(dest)*source)).

    Elements with an exactly zero cascade coefficient contribute nothing and
    get phase zero.
    """
    cascade = cascade_rows(channel)
    theta = np.where(cascade == 0, 1.0 + 0.0j,
                     np.exp(-1j * np.angle(cascade))).ravel()
    return PhaseSolution(theta)


def random_phases(rng, count):
    """Independent uniform phases on [0, 2 pi)."""
    if count < 1:
        raise ParameterError(f"need at least one phase, got {count}")
    return PhaseSolution(np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=count)))


def naive_sync_equalizer(model, theta):
    """Optimal equalizer of the zero-offset model, for use on the true one.

    Builds the effective channel with every timing offset forced to zero
    (all surfaces share one synchronous delay matrix) and returns its MMSE
    equalizer.  Applying it to the actual offset channel shows the penalty
    of offset-blind equalization.
    """
    sync_block = build_delay_matrix(model.pulse, 0.0)
    gains = cascade_gains(model, theta)
    x_sync = np.sqrt(model.symbol_power) * np.sum(gains) * sync_block
    return optimal_equalizer(x_sync, model.window, model.noise_power,
                             model.symbol_power)

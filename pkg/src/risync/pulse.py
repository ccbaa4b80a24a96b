"""Root-raised-cosine pulse shaping, autocorrelation and the zero-ISI window.

The pulse is the textbook time-domain root-raised-cosine with roll-off
``beta``, truncated to ``|t| <= lag`` symbol periods and scaled so that its
(truncated) autocorrelation at lag zero equals one.  All times are in symbol
units, i.e. ``t = 1.0`` is one symbol period.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError, ParameterError

# Samples per symbol period used for the autocorrelation quadrature.  A step
# of 1/64 keeps the trapezoid error near 1e-6, far below the 1e-4 stopping
# tolerance of the phase optimizer that consumes these tables.
GRID_PER_SYMBOL = 64


def rrc_amplitude(t, beta):
    """Un-normalized root-raised-cosine amplitude at time ``t`` (symbol units).

    Uses the closed form

        g(t) = [sin(pi t (1-beta)) + 4 beta t cos(pi t (1+beta))]
               / [pi t (1 - (4 beta t)^2)]

    with the analytic limits at t = 0 and |t| = 1/(4 beta).  No truncation is
    applied here.

    Parameters
    ----------
    t : float or array_like
        Time in symbol periods.
    beta : float
        Roll-off factor, 0 < beta < 1.
    """
    if not 0.0 < beta < 1.0:
        raise ParameterError(f"roll-off must be in (0, 1), got {beta}")
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape, dtype=float)
    singular = 1.0 / (4.0 * beta)

    near_zero = np.abs(t) < 1e-10
    near_sing = np.abs(np.abs(t) - singular) < 1e-10
    regular = ~(near_zero | near_sing)

    out[near_zero] = 1.0 - beta + 4.0 * beta / np.pi
    out[near_sing] = (beta / np.sqrt(2.0)) * (
        (1.0 + 2.0 / np.pi) * np.sin(np.pi / (4.0 * beta))
        + (1.0 - 2.0 / np.pi) * np.cos(np.pi / (4.0 * beta))
    )
    tr = t[regular]
    num = np.sin(np.pi * tr * (1.0 - beta)) + 4.0 * beta * tr * np.cos(np.pi * tr * (1.0 + beta))
    den = np.pi * tr * (1.0 - (4.0 * beta * tr) ** 2)
    out[regular] = num / den
    return out if out.shape else float(out)


@lru_cache(maxsize=32)
def _grid_samples(beta, lag):
    """Raw pulse on the quadrature grid over [-lag, lag] plus the energy scale.

    Returns ``(samples, scale)`` where ``scale = 1/sqrt(trapz(samples^2))`` so
    that the scaled pulse has unit autocorrelation at lag zero.
    """
    n = lag * GRID_PER_SYMBOL
    grid = np.arange(-n, n + 1) / GRID_PER_SYMBOL
    raw = rrc_amplitude(grid, beta)
    energy = np.trapezoid(raw * raw, dx=1.0 / GRID_PER_SYMBOL)
    raw.setflags(write=False)
    return raw, 1.0 / np.sqrt(energy)


def rrc_sample(t, beta, lag):
    """Truncated, energy-normalized RRC amplitude at time ``t`` (symbol units).

    Zero outside ``|t| > lag``; inside, ``rrc_amplitude`` scaled so the
    truncated pulse autocorrelation at lag zero equals one.
    """
    if lag < 1:
        raise ParameterError(f"pulse lag must be >= 1 symbol, got {lag}")
    _, scale = _grid_samples(beta, int(lag))
    t = np.asarray(t, dtype=float)
    out = np.where(np.abs(t) <= lag, rrc_amplitude(t, beta) * scale, 0.0)
    return out if out.shape else float(out)


@lru_cache(maxsize=32)
def _autocorr_table(beta, lag):
    """Normalized pulse autocorrelation at integer lags 0 .. 2*lag.

    Trapezoid quadrature of g(t) g(t + tau) over the truncated support; the
    table is divided by its lag-zero entry so R(0) == 1.0 exactly.
    """
    raw, _ = _grid_samples(beta, lag)
    step = 1.0 / GRID_PER_SYMBOL
    vals = np.zeros(2 * lag + 1)
    for tau in range(0, 2 * lag):
        shift = tau * GRID_PER_SYMBOL
        prod = raw[: raw.size - shift] * raw[shift:]
        vals[tau] = np.trapezoid(prod, dx=step)
    # at |tau| = 2*lag the supports overlap in a single point: zero measure
    vals /= vals[0]
    vals.setflags(write=False)
    return vals


@dataclass(frozen=True)
class PulseModel:
    """Pulse shape plus the sampling geometry of one observation block.

    Attributes
    ----------
    beta : float
        RRC roll-off, 0 < beta < 1.
    lag : int
        One-sided pulse truncation in symbol periods (also the number of
        leading/trailing interferer symbols kept in the model).
    oversample : int
        Receiver samples per symbol period.
    obs_len : int
        Number of symbol periods in the observation window.
    autocorr : numpy.ndarray
        Pulse autocorrelation at integer lags ``-lag .. lag`` (length
        ``2*lag + 1``), even, with the centre entry exactly 1.
    target_response : numpy.ndarray
        Zero-ISI target: ``autocorr`` padded with ``obs_len - 1`` zeros,
        length ``block_len``.
    energy_norm : float
        Scale applied to the raw pulse so the truncated autocorrelation at
        lag zero equals one.
    """

    beta: float
    lag: int
    oversample: int
    obs_len: int
    autocorr: np.ndarray
    target_response: np.ndarray
    energy_norm: float

    @classmethod
    def build(cls, beta, lag, oversample, obs_len):
        if lag < 1:
            raise ParameterError(f"pulse lag must be >= 1, got {lag}")
        if oversample < 1:
            raise ParameterError(f"oversampling factor must be >= 1, got {oversample}")
        if obs_len < 1:
            raise ParameterError(f"observation length must be >= 1, got {obs_len}")
        if not 0.0 < beta < 1.0:
            raise ParameterError(f"roll-off must be in (0, 1), got {beta}")
        half = _autocorr_table(beta, int(lag))[: lag + 1]
        # mirror the non-negative lags so evenness holds exactly
        table = np.concatenate([half[:0:-1], half])
        target = np.concatenate([table, np.zeros(obs_len - 1)])
        table.setflags(write=False)
        target.setflags(write=False)
        _, scale = _grid_samples(beta, int(lag))
        return cls(float(beta), int(lag), int(oversample), int(obs_len),
                   table, target, float(scale))

    @property
    def block_len(self):
        """Symbols entering one observation window: obs_len + 2*lag."""
        return self.obs_len + 2 * self.lag

    @property
    def n_samples(self):
        """Received samples per observation window: obs_len * oversample."""
        return self.obs_len * self.oversample

    def sample(self, t):
        """Truncated normalized pulse amplitude at time ``t`` (symbol units)."""
        return rrc_sample(t, self.beta, self.lag)


def autocorrelation(p, tau):
    """Pulse autocorrelation R(tau) of ``p`` at integer lag ``tau``.

    Zero for ``|tau| >= 2*p.lag`` (the truncated supports no longer overlap
    on a set of positive measure).
    """
    tau = int(tau)
    if abs(tau) <= p.lag:
        return float(p.autocorr[p.lag + abs(tau)])
    if abs(tau) >= 2 * p.lag:
        return 0.0
    return float(_autocorr_table(p.beta, p.lag)[abs(tau)])


def build_target_response(p):
    """Zero-ISI target vector: R(-lag..lag) padded with obs_len-1 zeros."""
    return p.target_response.copy()


def build_window_matrix(target, rows):
    """Circulant windowing matrix with first row ``target``.

    Entry ``[m, n]`` is ``target[(n - m) mod len(target)]``; each row is the
    previous one cyclically shifted right.  With the ideal zero-ISI target
    (R(tau) = delta(tau)) row ``m`` selects the symbol at vector index
    ``m + lag``.

    Parameters
    ----------
    target : array_like
        First row, length equal to the symbol-block length.
    rows : int
        Number of rows (observation symbols); must not exceed ``len(target)``.
    """
    target = np.asarray(target, dtype=float)
    if target.ndim != 1:
        raise DimensionError("window target must be a 1-D vector")
    if rows > target.size:
        raise DimensionError(
            f"window rows ({rows}) exceed target length ({target.size})")
    n = target.size
    idx = (np.arange(n)[None, :] - np.arange(rows)[:, None]) % n
    return target[idx]

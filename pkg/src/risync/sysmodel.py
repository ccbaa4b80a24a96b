"""Oversampled block model of the asynchronous distributed-surface link.

One observation window spans ``obs_len`` symbols sampled ``oversample`` times
per symbol.  Because every surface re-radiates with its own fractional timing
offset, ``block_len = obs_len + 2*lag`` consecutive symbols contribute to the
window.  The received block is

    y = sum_k gain_k * D_k s + v,

where ``D_k`` is the delay matrix of surface k (pulse samples at the
offset-shifted instants), ``gain_k = sum_n conj(dest[k,n]) * phase[k,n] *
source[k,n]`` is the cascaded per-surface gain, and ``v`` is white complex
noise.  The per-element cascade rows ``conj(dest) * source`` are the whole
structured representation of the element-level channel; nothing larger is
ever materialized outside the test-only dense helpers.
"""

from dataclasses import dataclass, replace

import numpy as np

from .channel import ChannelRealization
from .errors import ConfigError, ConstraintError, DimensionError, ParameterError
from .pulse import PulseModel, build_window_matrix

ARRAY_COLS = 4  # fixed x-extent of every surface; N must divide by it


@dataclass(frozen=True)
class SystemConfig:
    """Scenario parameters for solves and sweeps.

    ``symbol_power`` is derived from the SNR definition
    ``snr_db = 10 log10(symbol_power / noise_power)``.
    """

    n_surfaces: int = 4
    n_elements: int = 32
    obs_len: int = 12
    lag: int = 4
    oversample: int = 2
    beta: float = 0.3
    snr_db: float = 0.0
    noise_power: float = 1.0
    n_paths: int = 10
    tol: float = 1e-4
    max_iters: int = 500
    quant_bits: int | None = None
    seed: int = 12345

    def validate(self):
        problems = []
        if self.n_surfaces < 1:
            problems.append(f"n_surfaces must be >= 1, got {self.n_surfaces}")
        if self.n_elements < 1 or self.n_elements % ARRAY_COLS:
            problems.append(
                f"n_elements must be a positive multiple of {ARRAY_COLS}, "
                f"got {self.n_elements}")
        if self.obs_len < 1:
            problems.append(f"obs_len must be >= 1, got {self.obs_len}")
        if self.lag < 1:
            problems.append(f"lag must be >= 1, got {self.lag}")
        if self.oversample < 1:
            problems.append(f"oversample must be >= 1, got {self.oversample}")
        if not 0.0 < self.beta < 1.0:
            problems.append(f"beta must be in (0, 1), got {self.beta}")
        if self.noise_power <= 0.0:
            problems.append(f"noise_power must be > 0, got {self.noise_power}")
        if self.n_paths < 1:
            problems.append(f"n_paths must be >= 1, got {self.n_paths}")
        if self.tol <= 0.0:
            problems.append(f"tol must be > 0, got {self.tol}")
        if self.max_iters < 1:
            problems.append(f"max_iters must be >= 1, got {self.max_iters}")
        if self.quant_bits is not None and self.quant_bits < 1:
            problems.append(f"quant_bits must be >= 1 or absent, got {self.quant_bits}")
        if self.seed < 0:
            problems.append(f"seed must be >= 0, got {self.seed}")
        if problems:
            raise ConfigError("; ".join(problems))
        return self

    def updated(self, **kwargs):
        return replace(self, **kwargs).validate()

    @property
    def block_len(self):
        return self.obs_len + 2 * self.lag

    @property
    def symbol_power(self):
        return self.noise_power * 10.0 ** (self.snr_db / 10.0)

    @property
    def array_shape(self):
        return ARRAY_COLS, self.n_elements // ARRAY_COLS


def build_delay_matrix(p, eps):
    """Delay matrix of one surface: pulse samples on the offset time grid.

    Entry ``[m, c]`` is the normalized pulse at ``m/oversample - i - eps``
    symbol periods, where ``i = c - lag`` indexes the contributing symbol.
    Shape (obs_len * oversample, block_len); entries vanish where the shifted
    time falls outside the truncated pulse support, giving a banded matrix.
    """
    if not -1.0 < eps < 1.0:
        raise ParameterError(f"timing offset must be in (-1, 1), got {eps}")
    m = np.arange(p.n_samples)[:, None] / p.oversample
    i = np.arange(p.block_len)[None, :] - p.lag
    return p.sample(m - i - eps)


def assemble_delay_blocks(blocks):
    """Stack per-surface delay matrices side by side: (M, K * block_len)."""
    blocks = [np.asarray(b) for b in blocks]
    if not blocks:
        raise DimensionError("need at least one delay block")
    if any(b.shape != blocks[0].shape for b in blocks):
        raise DimensionError("delay blocks must share a common shape")
    return np.hstack(blocks)


def cascade_rows(channel):
    """Per-element cascade coefficients conj(dest) * source, shape (K, N).

    Row k collects the source-to-destination gain seen through each element
    of surface k when that element applies zero phase shift.
    """
    return np.conj(channel.dest) * channel.source


class PhaseExpansion:
    """Block expansion of a phase vector: each entry becomes a scaled
    ``block_len`` identity block stacked over the symbol dimension.

    Stored as the vector plus the expansion rule; ``dense()`` materializes
    the (len(theta) * block_len, block_len) matrix and exists for tests and
    validation only.
    """

    def __init__(self, theta, block_len, tol=1e-9):
        theta = np.asarray(theta, dtype=complex).ravel()
        dev = np.max(np.abs(np.abs(theta) - 1.0)) if theta.size else 0.0
        if dev > tol:
            raise ConstraintError(
                f"phases deviate from unit modulus by {dev:.3e} (tol {tol:.1e})")
        self.theta = theta
        self.block_len = int(block_len)

    @property
    def shape(self):
        return (self.theta.size * self.block_len, self.block_len)

    def frobenius_sq(self):
        return self.block_len * float(np.sum(np.abs(self.theta) ** 2))

    def apply(self, vec):
        """Product with a length-``block_len`` vector, without materializing."""
        vec = np.asarray(vec)
        if vec.shape != (self.block_len,):
            raise DimensionError(f"expected shape ({self.block_len},), got {vec.shape}")
        return (self.theta[:, None] * vec[None, :]).ravel()

    def dense(self):
        return np.kron(self.theta[:, None], np.eye(self.block_len))


def expand_phases(theta, block_len, tol=1e-9):
    """Structured expansion of ``theta``; errors if any modulus is off by
    more than ``tol``."""
    return PhaseExpansion(theta, block_len, tol=tol)


@dataclass(frozen=True)
class ModelMatrices:
    """Everything the optimizer needs about one scenario realization.

    Attributes
    ----------
    pulse : PulseModel
    channel : ChannelRealization
    cascade : numpy.ndarray
        (K, N) per-element cascade rows conj(dest) * source.
    delay_blocks : numpy.ndarray
        (K, M, block_len) per-surface delay matrices, M = obs_len * oversample.
    delay_bank : numpy.ndarray
        (M, K * block_len) horizontal stack of the delay matrices.
    window : numpy.ndarray
        (obs_len, block_len) circulant zero-ISI windowing matrix.
    symbol_power, noise_power : float
        Diagonal levels of the symbol and noise covariances.
    """

    pulse: PulseModel
    channel: ChannelRealization
    cascade: np.ndarray
    delay_blocks: np.ndarray
    delay_bank: np.ndarray
    window: np.ndarray
    symbol_power: float
    noise_power: float

    @property
    def n_surfaces(self):
        return self.cascade.shape[0]

    @property
    def n_elements(self):
        return self.cascade.shape[1]

    @property
    def n_phases(self):
        return self.cascade.size

    @property
    def block_len(self):
        return self.pulse.block_len

    @property
    def obs_len(self):
        return self.pulse.obs_len

    @property
    def n_samples(self):
        return self.pulse.n_samples


def build_model(pulse, channel, symbol_power, noise_power):
    """Assemble delay matrices, cascade rows and the window for one draw."""
    if symbol_power <= 0 or noise_power <= 0:
        raise ParameterError("symbol and noise power must be positive")
    blocks = np.stack([build_delay_matrix(pulse, e) for e in channel.offsets])
    return ModelMatrices(
        pulse=pulse,
        channel=channel,
        cascade=cascade_rows(channel),
        delay_blocks=blocks,
        delay_bank=assemble_delay_blocks(list(blocks)),
        window=build_window_matrix(pulse.target_response, pulse.obs_len),
        symbol_power=float(symbol_power),
        noise_power=float(noise_power),
    )


def model_from_config(config, channel=None, seed=None):
    """Build a model at the configured scale, drawing the channel if needed."""
    config.validate()
    pulse = PulseModel.build(config.beta, config.lag, config.oversample, config.obs_len)
    if channel is None:
        nx, ny = config.array_shape
        channel = ChannelRealization.draw(
            config.seed if seed is None else seed,
            config.n_surfaces, nx, ny, config.n_paths)
    if channel.n_surfaces != config.n_surfaces or channel.n_elements != config.n_elements:
        raise ConfigError(
            f"channel shape {channel.source.shape} does not match config "
            f"({config.n_surfaces}, {config.n_elements})")
    return build_model(pulse, channel, config.symbol_power, config.noise_power)


def _theta_array(theta, model):
    theta = np.asarray(getattr(theta, "theta", theta), dtype=complex).ravel()
    if theta.size != model.n_phases:
        raise DimensionError(
            f"expected {model.n_phases} phases, got {theta.size}")
    return theta


def cascade_gains(model, theta):
    """Per-surface cascaded gains sum_n cascade[k, n] * theta[k, n], (K,)."""
    th = _theta_array(theta, model).reshape(model.cascade.shape)
    return np.sum(model.cascade * th, axis=1)


def effective_channel(model, theta):
    """Symbols-to-samples map with the symbol-power factor absorbed:

        X = sqrt(symbol_power) * sum_k gain_k * delay_blocks[k],

    shape (M, block_len).  Built from the per-surface gains; per-element
    matrices never appear.
    """
    gains = cascade_gains(model, theta)
    return np.sqrt(model.symbol_power) * np.tensordot(gains, model.delay_blocks, axes=1)


def draw_symbols(rng, block_len, symbol_power, size=None, kind="qpsk"):
    """Random symbol block(s) with per-symbol power ``symbol_power``.

    kind="qpsk" gives (+-1 +-1j)/sqrt(2) scaled; kind="gaussian" gives
    circular complex normal.  ``size=None`` returns one block of shape
    (block_len,), otherwise shape (size, block_len).
    """
    shape = (block_len,) if size is None else (int(size), block_len)
    if kind == "qpsk":
        re = rng.integers(0, 2, size=shape) * 2 - 1
        im = rng.integers(0, 2, size=shape) * 2 - 1
        sym = (re + 1j * im) / np.sqrt(2.0)
    elif kind == "gaussian":
        sym = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    else:
        raise ParameterError(f"unknown symbol kind {kind!r}")
    return np.sqrt(symbol_power) * sym


def simulate_received(symbols, model, theta, rng):
    """Received sample block(s) for given symbols, phases and fresh noise.

    ``symbols`` has shape (..., block_len) and is assumed to already carry
    the symbol power; the output has shape (..., M).  With zero noise power
    this is exactly the effective channel applied to the symbols.
    """
    symbols = np.asarray(symbols, dtype=complex)
    if symbols.shape[-1] != model.block_len:
        raise DimensionError(
            f"symbol blocks must have length {model.block_len}, got {symbols.shape}")
    gains = cascade_gains(model, theta)
    clean = symbols @ np.tensordot(gains, model.delay_blocks, axes=1).T
    if model.noise_power > 0:
        scale = np.sqrt(model.noise_power / 2.0)
        noise = scale * (rng.standard_normal(clean.shape)
                         + 1j * rng.standard_normal(clean.shape))
    else:
        noise = 0.0
    return clean + noise


def mse_no_equalizer(model):
    """MSE of the all-zero equalizer: symbol_power * ||window||_F^2.

    Equals symbol_power * obs_len * ||target_response||^2 because every row
    of the circulant window is a cyclic shift of the target response.
    """
    return model.symbol_power * float(np.sum(model.window * model.window))

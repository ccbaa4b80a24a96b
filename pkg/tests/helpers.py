"""Shared test utilities: small-model builders and random draws."""

import numpy as np

import risync as rs


def complex_normal(rng, shape):
    """CN(0, 1) array."""
    return (rng.normal(size=shape) + 1j * rng.normal(size=shape)) / np.sqrt(2.0)


def random_theta(rng, count):
    """Uniform unit-modulus phase vector."""
    return np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=count))


def make_model(rng, n_surfaces=2, n_elements=3, obs_len=4, lag=2, oversample=2,
               beta=0.3, symbol_power=1.0, noise_power=1.0, offsets=None):
    """Model over direct CN(0,1) channel draws.

    Bypasses the geometric channel generator so tests can use element counts
    that are not multiples of the array-column count.
    """
    pulse = rs.PulseModel.build(beta=beta, lag=lag, oversample=oversample,
                                obs_len=obs_len)
    source = complex_normal(rng, (n_surfaces, n_elements))
    dest = complex_normal(rng, (n_surfaces, n_elements))
    if offsets is None:
        offsets = rng.uniform(-0.999, 0.999, size=n_surfaces)
    channel = rs.ChannelRealization(source=source, dest=dest,
                                    offsets=np.asarray(offsets, dtype=float))
    return rs.build_model(pulse, channel, symbol_power, noise_power)


def tiny_config(**overrides):
    """Small but valid scenario for harness-level tests."""
    base = dict(n_surfaces=2, n_elements=4, obs_len=4, lag=2, oversample=2,
                n_paths=3, seed=777)
    base.update(overrides)
    return rs.SystemConfig(**base)

"""Geometric channel draws for the distributed-surface downlink.

Each surface is a half-wavelength uniform rectangular array (URA).  The
source-to-surface link is line-of-sight (a single scaled steering vector);
the surface-to-destination link is a sum of ``n_paths`` steering vectors
with i.i.d. complex-normal gains.  Per-surface timing offsets are uniform
on the open interval (-1, 1) in symbol periods.
"""

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ParameterError


def ura_steering(azimuth, elevation, nx, ny):
    """Steering vector of an nx-by-ny half-wavelength URA, unit norm.

    Element (p, q) has phase pi * (p sin(el) cos(az) + q sin(el) sin(az));
    the vector is flattened row-major (p major) and scaled by 1/sqrt(nx*ny).
    """
    if nx < 1 or ny < 1:
        raise ParameterError(f"array must have positive extent, got {nx}x{ny}")
    p = np.arange(nx)[:, None]
    q = np.arange(ny)[None, :]
    phase = np.pi * (p * np.sin(elevation) * np.cos(azimuth)
                     + q * np.sin(elevation) * np.sin(azimuth))
    return (np.exp(1j * phase) / np.sqrt(nx * ny)).ravel()


def _cn_scalar(rng):
    """One standard circular complex-normal sample."""
    re, im = rng.standard_normal(2)
    return (re + 1j * im) / np.sqrt(2.0)


def draw_los_channel(rng, nx, ny):
    """Line-of-sight link: sqrt(N) * gain * steering(az, el).

    gain ~ CN(0,1), azimuth ~ U(0, 2pi), elevation ~ U(-pi/2, pi/2); draw
    order is gain, azimuth, elevation (fixed for reproducibility).
    Expected squared norm is N = nx*ny.
    """
    n = nx * ny
    gain = _cn_scalar(rng)
    az = rng.uniform(0.0, 2.0 * np.pi)
    el = rng.uniform(-np.pi / 2.0, np.pi / 2.0)
    return np.sqrt(n) * gain * ura_steering(az, el, nx, ny)


def draw_multipath_channel(rng, nx, ny, n_paths):
    """Multipath link: sqrt(N / n_paths) * sum_l conj(gain_l) * steering_l.

    Per path the draw order is gain, azimuth, elevation.  The conjugate keeps
    the usual row-vector form of the link (gain_l times conjugate-transposed
    steering) when the returned column vector is conjugate-transposed.
    Expected squared norm is N.
    """
    if n_paths < 1:
        raise ParameterError(f"need at least one path, got {n_paths}")
    n = nx * ny
    acc = np.zeros(n, dtype=complex)
    for _ in range(n_paths):
        gain = _cn_scalar(rng)
        az = rng.uniform(0.0, 2.0 * np.pi)
        el = rng.uniform(-np.pi / 2.0, np.pi / 2.0)
        acc += np.conj(gain) * ura_steering(az, el, nx, ny)
    return np.sqrt(n / n_paths) * acc


def draw_timing_offsets(rng, count):
    """I.i.d. timing offsets, uniform on the open interval (-1, 1) symbols."""
    eps = rng.uniform(-1.0, 1.0, size=count)
    while np.any(np.abs(eps) >= 1.0):  # endpoints have measure zero; redraw
        bad = np.abs(eps) >= 1.0
        eps[bad] = rng.uniform(-1.0, 1.0, size=int(np.sum(bad)))
    return eps


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of all per-surface links and timing offsets.

    Attributes
    ----------
    source : numpy.ndarray
        (K, N) complex, source-to-surface vectors (one row per surface).
    dest : numpy.ndarray
        (K, N) complex, surface-to-destination vectors; the physical link is
        the conjugate transpose of each row.
    offsets : numpy.ndarray
        (K,) real timing offsets in symbol periods, each in (-1, 1).
    seed : int or None
        Seed used for the draw, if any.
    """

    source: np.ndarray
    dest: np.ndarray
    offsets: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        src = np.atleast_2d(np.asarray(self.source, dtype=complex))
        dst = np.atleast_2d(np.asarray(self.dest, dtype=complex))
        eps = np.atleast_1d(np.asarray(self.offsets, dtype=float))
        if src.shape != dst.shape or src.shape[0] != eps.size:
            raise ParameterError(
                f"inconsistent channel shapes {src.shape}, {dst.shape}, {eps.shape}")
        if np.any(np.abs(eps) >= 1.0):
            raise ParameterError("timing offsets must lie strictly inside (-1, 1)")
        object.__setattr__(self, "source", src)
        object.__setattr__(self, "dest", dst)
        object.__setattr__(self, "offsets", eps)

    @property
    def n_surfaces(self):
        return self.source.shape[0]

    @property
    def n_elements(self):
        return self.source.shape[1]

    @classmethod
    def draw(cls, seed, k_ris, nx, ny, n_paths):
        """Deterministic draw: per surface LOS source link then multipath
        destination link, finally all timing offsets."""
        rng = np.random.default_rng(seed)
        source = np.empty((k_ris, nx * ny), dtype=complex)
        dest = np.empty((k_ris, nx * ny), dtype=complex)
        for k in range(k_ris):
            source[k] = draw_los_channel(rng, nx, ny)
            dest[k] = draw_multipath_channel(rng, nx, ny, n_paths)
        eps = draw_timing_offsets(rng, k_ris)
        return cls(source, dest, eps, seed=seed)

    def save(self, path):
        """Write the realization as structured text (JSON with re/im pairs)."""
        payload = {
            "seed": self.seed,
            "k_ris": int(self.n_surfaces),
            "n_elements": int(self.n_elements),
            "source": [[[z.real, z.imag] for z in row] for row in self.source],
            "dest": [[[z.real, z.imag] for z in row] for row in self.dest],
            "offsets": [float(e) for e in self.offsets],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            try:
                payload = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"malformed channel file {path}: {exc}") from exc
        try:
            source = np.array([[complex(re, im) for re, im in row]
                               for row in payload["source"]])
            dest = np.array([[complex(re, im) for re, im in row]
                             for row in payload["dest"]])
            eps = np.array(payload["offsets"], dtype=float)
            seed = payload["seed"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed channel file {path}: {exc}") from exc
        return cls(source, dest, eps, seed=seed)

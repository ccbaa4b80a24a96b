"""Channel generation: steering vectors, fading draws, offsets, persistence."""

import numpy as np
import pytest

import risync as rs
from risync.errors import ConfigError, ParameterError


def test_steering_matches_elementwise_formula():
    rng = np.random.default_rng(3)
    nx, ny = 3, 5
    az, el = rng.uniform(0, 2 * np.pi, size=2)
    vec = rs.ura_steering(az, el, nx, ny)
    n = nx * ny
    assert vec.shape == (n,)
    a = np.sin(el) * np.cos(az)
    b = np.sin(el) * np.sin(az)
    for p in range(nx):
        for q in range(ny):
            expected = np.exp(1j * np.pi * (p * a + q * b)) / np.sqrt(n)
            assert vec[p * ny + q] == pytest.approx(expected, abs=1e-12)


def test_steering_is_unit_norm():
    for az, el in ((0.0, 0.0), (1.0, 0.4), (4.0, 2.2)):
        vec = rs.ura_steering(az, el, 4, 4)
        assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(np.abs(vec), 0.25, atol=1e-12)


def test_steering_broadside_is_flat():
    vec = rs.ura_steering(1.3, 0.0, 2, 8)
    np.testing.assert_allclose(vec, 0.25, atol=1e-14)


def test_steering_rejects_empty_array():
    with pytest.raises(ParameterError):
        rs.ura_steering(0.0, 0.0, 0, 4)


def test_los_draw_has_constant_modulus():
    rng = np.random.default_rng(11)
    for _ in range(20):
        f = rs.draw_los_channel(rng, 2, 6)
        mags = np.abs(f)
        np.testing.assert_allclose(mags, mags[0], rtol=1e-12)


def test_los_energy_is_element_count_on_average():
    rng = np.random.default_rng(5)
    n = 12
    draws = np.array([np.sum(np.abs(rs.draw_los_channel(rng, 3, 4)) ** 2)
                      for _ in range(4000)])
    stderr = draws.std(ddof=1) / np.sqrt(draws.size)
    assert abs(draws.mean() - n) < 5 * stderr


def test_multipath_energy_is_element_count_on_average():
    rng = np.random.default_rng(6)
    n = 8
    draws = np.array([np.sum(np.abs(rs.draw_multipath_channel(rng, 2, 4, 10)) ** 2)
                      for _ in range(4000)])
    stderr = draws.std(ddof=1) / np.sqrt(draws.size)
    assert abs(draws.mean() - n) < 5 * stderr


def test_single_path_draw_is_rank_one_like():
    rng = np.random.default_rng(7)
    h = rs.draw_multipath_channel(rng, 2, 4, 1)
    mags = np.abs(h)
    np.testing.assert_allclose(mags, mags[0], rtol=1e-12)


def test_multipath_rejects_zero_paths():
    with pytest.raises(ParameterError):
        rs.draw_multipath_channel(np.random.default_rng(0), 2, 2, 0)


def test_offsets_open_interval_and_moments():
    rng = np.random.default_rng(9)
    eps = rs.draw_timing_offsets(rng, 20000)
    assert eps.shape == (20000,)
    assert eps.max() < 1.0 and eps.min() > -1.0
    stderr = 1.0 / np.sqrt(3.0 * eps.size)
    assert abs(eps.mean()) < 5 * stderr
    assert abs(eps.var() - 1.0 / 3.0) < 0.02


def test_realization_draw_is_reproducible():
    a = rs.ChannelRealization.draw(seed=42, k_ris=3, nx=2, ny=4, n_paths=5)
    b = rs.ChannelRealization.draw(seed=42, k_ris=3, nx=2, ny=4, n_paths=5)
    np.testing.assert_array_equal(a.source, b.source)
    np.testing.assert_array_equal(a.dest, b.dest)
    np.testing.assert_array_equal(a.offsets, b.offsets)
    c = rs.ChannelRealization.draw(seed=43, k_ris=3, nx=2, ny=4, n_paths=5)
    assert not np.array_equal(a.source, c.source)


def test_realization_shapes_and_seed():
    ch = rs.ChannelRealization.draw(seed=1, k_ris=2, nx=2, ny=4, n_paths=3)
    assert ch.source.shape == (2, 8)
    assert ch.dest.shape == (2, 8)
    assert ch.offsets.shape == (2,)
    assert ch.seed == 1
    assert np.all(np.abs(ch.offsets) < 1.0)


def test_realization_validates_inputs():
    good = rs.ChannelRealization.draw(seed=2, k_ris=2, nx=2, ny=2, n_paths=2)
    with pytest.raises(ParameterError):
        rs.ChannelRealization(good.source, good.dest[:1], good.offsets)
    with pytest.raises(ParameterError):
        rs.ChannelRealization(good.source, good.dest, np.array([0.2, 1.0]))
    with pytest.raises(ParameterError):
        rs.ChannelRealization(good.source, good.dest, np.array([0.2]))


def test_save_load_round_trip(tmp_path):
    ch = rs.ChannelRealization.draw(seed=8, k_ris=2, nx=2, ny=4, n_paths=4)
    path = tmp_path / "channel.json"
    ch.save(path)
    back = rs.ChannelRealization.load(path)
    np.testing.assert_array_equal(ch.source, back.source)
    np.testing.assert_array_equal(ch.dest, back.dest)
    np.testing.assert_array_equal(ch.offsets, back.offsets)
    assert back.seed == ch.seed


def test_load_rejects_malformed_files(tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("this is not json")
    with pytest.raises(ConfigError):
        rs.ChannelRealization.load(bad)
    bad.write_text('{"source": [[1.0]]}')
    with pytest.raises(ConfigError):
        rs.ChannelRealization.load(bad)

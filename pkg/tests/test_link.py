# SPDX-FileCopyrightText: Copyright (c) 2025 The bounded-cir authors. All rights reserved.
# SPDX-License-Identifier: Apache-2.0
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
from dataclasses import replace

import numpy as np
import pytest

from bounded_cir.channel import ChannelGeometry, cumulative_hits
from bounded_cir.eigen import find_modes
from bounded_cir.link import (
    BerConfig,
    TapVector,
    ber_sweep,
    best_threshold,
    channel_taps,
    match_absorbed_fraction,
    received_counts,
    simulate_ber,
    single_tap_error_probability,
    train_threshold,
)
from bounded_cir.utils.constant import BOUNDED_CIR_MAX_TAPS, ChannelKind, ThresholdPolicy
from bounded_cir.utils.errors import ConfigError
from bounded_cir.utils.util import block_generator


def _geom(D0, D=80.0):
    return ChannelGeometry(d0=5.0, D0=D0, r0=10.0, D=D)


@pytest.fixture(scope="module")
def tables():
    return {D0: find_modes(5.0 / D0, count=2000) for D0 in (15.0, 20.0)}


def _ber(geom, modes, t_s, molecules=1000, seed=0, stream=0):
    cfg = BerConfig(molecules_per_bit=molecules, n_bits=100000, seed=seed)
    return simulate_ber(channel_taps(geom, modes, t_s), cfg, stream=stream)


def _single_tap(p):
    return TapVector(t_s=1.0, taps=np.array([p]), channel_kind=ChannelKind.BOUNDED, D0=15.0)


@pytest.mark.parametrize(
    "p,molecules,threshold",
    [(0.1, 20, 2), (0.3, 10, 3), (0.05, 100, 4)],
)
def test_single_tap_ber_matches_binomial_tail(p, molecules, threshold):
    cfg = BerConfig(
        molecules_per_bit=molecules,
        n_bits=200000,
        threshold_policy=ThresholdPolicy.FIXED,
        threshold=threshold,
        seed=4,
    )
    result = simulate_ber(_single_tap(p), cfg)
    expected = single_tap_error_probability(p, molecules, threshold)
    sigma = math.sqrt(expected * (1.0 - expected) / cfg.n_bits)
    assert abs(result.ber - expected) < 3.0 * sigma
    assert result.ci_lo <= result.ber <= result.ci_hi


def test_single_tap_error_probability_closed_form():
    expected = 0.5 * (0.9**20 + 20 * 0.1 * 0.9**19)
    assert single_tap_error_probability(0.1, 20, 2) == pytest.approx(expected, rel=1e-12)
    assert single_tap_error_probability(0.1, 20, 0) == pytest.approx(0.5)


def test_noise_free_channel_trains_midpoint_threshold():
    taps = TapVector(t_s=1.0, taps=np.array([1.0]), channel_kind=ChannelKind.BOUNDED, D0=15.0)
    cfg = BerConfig(molecules_per_bit=1000, n_bits=10000)
    assert train_threshold(taps, cfg) == 500
    result = simulate_ber(taps, cfg)
    assert result.errors == 0
    assert result.threshold_used == 500
    assert result.ci_lo == pytest.approx(0.0, abs=1e-12)


def test_threshold_ties_take_the_midpoint_of_the_first_run():
    bits = np.array([0, 1])
    counts = np.array([0, 4])
    assert best_threshold(bits, counts) == 2
    # thresholds 1 to 3 each err once
    bits = np.array([0, 0, 1, 1])
    counts = np.array([0, 1, 1, 3])
    assert best_threshold(bits, counts) == 2


def test_silent_channel_is_a_coin_flip():
    taps = TapVector(t_s=1.0, taps=np.zeros(3), channel_kind=ChannelKind.UNBOUNDED)
    cfg = BerConfig(molecules_per_bit=100, n_bits=20000, seed=1)
    result = simulate_ber(taps, cfg)
    assert abs(result.ber - 0.5) < 4.0 * 0.5 / math.sqrt(cfg.n_bits)


def test_received_counts_respect_isi_memory():
    rng = block_generator(0, 0)
    bits = np.array([1, 0, 0, 0, 0])
    counts = received_counts(rng, bits, np.array([1.0, 1.0]), 7)
    np.testing.assert_array_equal(counts, [7, 7, 0, 0, 0])


def test_taps_are_a_partition_of_the_cumulative(tables):
    geom = _geom(15.0)
    taps = channel_taps(geom, tables[15.0], 0.5)
    assert np.all(taps.taps >= 0.0)
    assert taps.taps.sum() == pytest.approx(
        float(cumulative_hits(0.5 * taps.isi_length, geom, tables[15.0])), abs=1e-12
    )
    assert taps.isi_length < BOUNDED_CIR_MAX_TAPS
    assert taps.taps.sum() >= 1.0 - 1e-3 - 1e-12
    assert taps.channel_kind == ChannelKind.BOUNDED


def test_unbounded_taps_hit_the_length_cap():
    taps = channel_taps(_geom(15.0).unbounded(), None, 0.5)
    assert taps.isi_length == BOUNDED_CIR_MAX_TAPS
    assert taps.taps.sum() < 0.5
    assert math.isinf(taps.D0)


def test_invalid_link_settings():
    with pytest.raises(ConfigError):
        channel_taps(_geom(15.0).unbounded(), None, 0.0)
    with pytest.raises(ConfigError):
        BerConfig(n_bits=10)
    with pytest.raises(ConfigError):
        BerConfig(threshold_policy="majority")
    with pytest.raises(ConfigError):
        BerConfig(molecules_per_bit=0)


@pytest.mark.parametrize("t_s", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_unbounded_beats_bounded_at_slow_diffusion(tables, t_s):
    bounded = _ber(_geom(15.0), tables[15.0], t_s)
    unbounded = _ber(_geom(15.0).unbounded(), None, t_s)
    assert unbounded.ci_hi < bounded.ci_lo


@pytest.mark.parametrize("t_s", [0.1, 0.3, 0.5, 0.6])
def test_smaller_boundary_raises_ber(tables, t_s):
    tight = _ber(_geom(15.0), tables[15.0], t_s)
    loose = _ber(_geom(20.0), tables[20.0], t_s)
    assert tight.ci_lo > loose.ci_hi


def test_bounded_beats_unbounded_at_fast_diffusion(tables):
    bounded = _ber(_geom(15.0, D=800.0), tables[15.0], 0.4, molecules=20)
    unbounded = _ber(_geom(15.0, D=800.0).unbounded(), None, 0.4, molecules=20)
    assert bounded.ci_hi < unbounded.ci_lo


def test_trained_threshold_beats_half_of_m():
    taps = channel_taps(_geom(15.0, D=800.0).unbounded(), None, 0.4)
    trained = simulate_ber(taps, BerConfig(molecules_per_bit=20, n_bits=50000, seed=3))
    fixed = simulate_ber(
        taps,
        BerConfig(
            molecules_per_bit=20, n_bits=50000, seed=3, threshold_policy=ThresholdPolicy.FIXED
        ),
    )
    assert fixed.threshold_used == 10
    assert trained.ber < fixed.ber


def test_sweep_is_independent_of_worker_count(tables):
    geoms = [_geom(15.0)]
    cfg = BerConfig(molecules_per_bit=100, n_bits=2000, seed=12)
    kwargs = dict(max_modes=2000, progress=False)
    serial = ber_sweep(geoms, _geom(15.0), [0.5, 1.0], cfg, **kwargs)
    pooled = ber_sweep(geoms, _geom(15.0), [0.5, 1.0], replace(cfg, workers=2), **kwargs)
    assert [r.to_dict() for r in serial] == [r.to_dict() for r in pooled]
    assert [(r.t_s, r.channel_kind) for r in serial] == [
        (0.5, ChannelKind.BOUNDED),
        (0.5, ChannelKind.UNBOUNDED),
        (1.0, ChannelKind.BOUNDED),
        (1.0, ChannelKind.UNBOUNDED),
    ]


def test_sweep_rejects_unbounded_geometry_in_bounded_list():
    with pytest.raises(ConfigError):
        ber_sweep([_geom(15.0).unbounded()], None, [0.5], BerConfig(), progress=False)


def test_caption_fractions_do_not_match(tables):
    tight, loose = _geom(15.0, D=800.0), _geom(20.0, D=800.0)
    match = match_absorbed_fraction(tight, tables[15.0], loose, tables[20.0])
    assert float(cumulative_hits(match.t_s, tight, tables[15.0])) == pytest.approx(0.85, abs=1e-9)
    assert match.predicted < match.fraction
    assert not match.agrees
    assert match.to_dict()["expected"] == 0.65


if __name__ == "__main__":
    pytest.main([__file__])

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
from scipy.integrate import quad

from bounded_cir.channel import (
    ChannelGeometry,
    find_peak,
    hitting_rate,
    peak_sweep,
    t_star,
    t_star_max,
    t_star_sweep,
    unbounded_cdf,
    unbounded_peak,
    unbounded_rate,
)
from bounded_cir.eigen import expansion_coefficients, find_modes
from bounded_cir.utils.constant import ChannelKind
from bounded_cir.utils.errors import DomainError

GEOM = ChannelGeometry(d0=10.0, D0=100.0, r0=20.0, D=80.0)


@pytest.fixture(scope="module")
def modes():
    return find_modes(0.1, count=2000)


def test_unbounded_peak_reference_values():
    peak = unbounded_peak(GEOM)
    assert peak.channel_kind == ChannelKind.UNBOUNDED
    assert peak.tau_peak == pytest.approx(100.0 / 480.0, rel=1e-12)
    assert peak.n_peak == pytest.approx(0.370, rel=1e-3)
    assert unbounded_rate(peak.tau_peak, GEOM) == pytest.approx(peak.n_peak, rel=1e-12)
    for factor in (0.999, 1.001):
        assert unbounded_rate(peak.tau_peak * factor, GEOM) < peak.n_peak


def test_unbounded_cdf_limits_and_integral():
    assert unbounded_cdf(0.0, GEOM) == 0.0
    assert unbounded_cdf(math.inf, GEOM) == GEOM.d0 / GEOM.r0
    for t in (0.1, 1.0, 10.0):
        area, _ = quad(lambda s: unbounded_rate(s, GEOM), 0.0, t, epsabs=1e-13, epsrel=1e-12)
        assert abs(area - unbounded_cdf(t, GEOM)) < 1e-8


def test_unbounded_release_instant_matches_bounded(modes):
    assert unbounded_rate(0.0, GEOM) == 0.0
    assert hitting_rate(0.0, GEOM, modes) == 0.0
    assert np.all(unbounded_rate(np.array([0.0, 1e-6]), GEOM) == 0.0)
    for bad in (-1e-3, math.nan):
        with pytest.raises(DomainError):
            unbounded_rate(bad, GEOM)
        with pytest.raises(DomainError):
            unbounded_cdf(bad, GEOM)


def test_bounded_peak_close_to_free_space_for_near_transmitter(modes):
    peak = find_peak(GEOM, modes)
    reference = unbounded_peak(GEOM)
    assert peak.tau_peak == pytest.approx(reference.tau_peak, rel=0.05)
    assert peak.n_peak == pytest.approx(reference.n_peak, rel=0.05)
    for factor in (1.0 - 1e-3, 1.0 + 1e-3):
        assert hitting_rate(peak.tau_peak * factor, GEOM, modes) < peak.n_peak


def test_peak_time_halves_when_diffusion_doubles(modes):
    faster = replace(GEOM, D=2.0 * GEOM.D)
    assert find_peak(faster, modes).tau_peak == pytest.approx(
        find_peak(GEOM, modes).tau_peak / 2.0, rel=1e-6
    )


def test_peak_trend_against_free_space(modes):
    channel_length = GEOM.D0 - GEOM.d0
    near = [GEOM.d0 + f * channel_length for f in (0.1, 0.2, 0.3, 0.4)]
    far = [GEOM.d0 + f * channel_length for f in (0.8, 0.88)]
    for r0, point in peak_sweep(near, GEOM, modes):
        reference = unbounded_peak(GEOM.with_r0(r0))
        assert point.tau_peak == pytest.approx(reference.tau_peak, rel=0.05)
        assert point.n_peak == pytest.approx(reference.n_peak, rel=0.05)
    for r0, point in peak_sweep(far, GEOM, modes):
        reference = unbounded_peak(GEOM.with_r0(r0))
        assert abs(point.tau_peak - reference.tau_peak) > 0.2 * reference.tau_peak
        assert abs(point.n_peak - reference.n_peak) > 0.2 * reference.n_peak


def test_t_star_max_reference_value(modes):
    assert t_star_max(0.03, GEOM, modes) == pytest.approx(1207.0, abs=1.5)


def test_closed_and_exact_t_star_agree(modes):
    for r0 in (15.0, 20.0, 50.0, 90.0):
        geom = GEOM.with_r0(r0)
        for epsilon in (0.01, 0.03, 0.05):
            closed = t_star(epsilon, geom, modes, method="closed")
            exact = t_star(epsilon, geom, modes, method="exact")
            assert closed == pytest.approx(exact, rel=0.01)


def test_t_star_bound_holds_exactly_when_first_coefficient_below_one(modes):
    for r0 in np.linspace(12.0, 98.0, 20):
        geom = GEOM.with_r0(float(r0))
        a1 = expansion_coefficients(modes.head(1), geom.x0)[0]
        below = t_star(0.03, geom, modes) <= t_star_max(0.03, geom, modes)
        assert below == (a1 <= 1.0)
        if r0 <= 0.6 * GEOM.D0:
            assert below


def test_t_star_sweep_grows_with_distance(modes):
    points = t_star_sweep([15.0, 35.0, 55.0], 0.03, GEOM, modes)
    values = [t for _, t in points]
    assert values == sorted(values)


def test_t_star_rejects_bad_arguments(modes):
    for epsilon in (0.0, 1.0, -0.1):
        with pytest.raises(DomainError):
            t_star(epsilon, GEOM, modes)
    with pytest.raises(DomainError):
        t_star(0.03, GEOM, modes, method="newton")


if __name__ == "__main__":
    pytest.main([__file__])

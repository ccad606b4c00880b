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

"""Closed-form response of an absorbing sphere in free space."""

import math
from typing import Union

import numpy as np
from scipy.special import erfc

from bounded_cir.channel.geometry import ChannelGeometry
from bounded_cir.channel.records import PeakPoint
from bounded_cir.utils.constant import ChannelKind
from bounded_cir.utils.errors import DomainError

ArrayLike = Union[float, np.ndarray]


def _times(t: ArrayLike) -> np.ndarray:
    # t = 0 is allowed and maps to the exact limit 0, as on the bounded side
    times = np.asarray(t, dtype=float)
    if np.any(np.isnan(times)) or np.any(times < 0.0):
        raise DomainError("Times must be non-negative")
    return times


def unbounded_rate(t: ArrayLike, geom: ChannelGeometry) -> ArrayLike:
    """(d0 / r0) d / sqrt(4 pi D t^3) exp(-d^2 / (4 D t)), d = r0 - d0."""
    times = _times(t)
    d = geom.distance
    with np.errstate(divide="ignore", invalid="ignore"):
        values = (
            (geom.d0 / geom.r0)
            * d
            / np.sqrt(4.0 * np.pi * geom.D * times**3)
            * np.exp(-(d * d) / (4.0 * geom.D * times))
        )
    values = np.where((times == 0.0) | np.isinf(times) | np.isnan(values), 0.0, values)
    return float(values) if times.ndim == 0 else values


def unbounded_cdf(t: ArrayLike, geom: ChannelGeometry) -> ArrayLike:
    """(d0 / r0) erfc(d / sqrt(4 D t)); tends to d0 / r0, never to 1."""
    times = _times(t)
    with np.errstate(divide="ignore"):
        values = (geom.d0 / geom.r0) * erfc(geom.distance / np.sqrt(4.0 * geom.D * times))
    values = np.where(times == 0.0, 0.0, values)
    return float(values) if times.ndim == 0 else values


def unbounded_peak(geom: ChannelGeometry) -> PeakPoint:
    d = geom.distance
    tau_peak = d * d / (6.0 * geom.D)
    n_peak = (geom.d0 * geom.D * math.exp(-1.5)) / (
        geom.r0 * d * d * math.sqrt(math.pi / 54.0)
    )
    return PeakPoint(tau_peak=tau_peak, n_peak=n_peak, channel_kind=ChannelKind.UNBOUNDED)

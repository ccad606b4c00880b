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
from dataclasses import dataclass, replace

from bounded_cir.utils.errors import DegenerateGeometry


@dataclass(frozen=True)
class ChannelGeometry:
    """
    Point transmitter at distance r0 from the center of an absorbing receiver
    of radius d0, inside a reflecting sphere of radius D0. Lengths in um,
    diffusion coefficient D in um^2/s. D0 = inf describes the unbounded channel.
    """

    d0: float
    D0: float
    r0: float
    D: float

    def __post_init__(self):
        for name in ("d0", "r0", "D"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise DegenerateGeometry(f"{name} must be positive and finite, got {value}")
        if math.isnan(self.D0):
            raise DegenerateGeometry("D0 must not be NaN")
        if not (self.d0 < self.r0 < self.D0):
            raise DegenerateGeometry(
                f"Radii must satisfy 0 < d0 < r0 < D0, got "
                f"d0={self.d0}, r0={self.r0}, D0={self.D0}"
            )

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.D0)

    @property
    def alpha(self) -> float:
        return self.d0 / self.D0

    @property
    def x0(self) -> float:
        return self.r0 / self.D0

    @property
    def distance(self) -> float:
        """Gap between the transmitter and the receiver surface."""
        return self.r0 - self.d0

    @property
    def channel_length(self) -> float:
        return self.D0 - self.d0

    @property
    def time_scale(self) -> float:
        """D0^2 / D, the time unit of the dimensionless series."""
        return self.D0 * self.D0 / self.D

    def tau(self, t):
        return self.D * t / (self.D0 * self.D0)

    def with_r0(self, r0: float) -> "ChannelGeometry":
        return replace(self, r0=r0)

    def with_D0(self, D0: float) -> "ChannelGeometry":
        return replace(self, D0=D0)

    def unbounded(self) -> "ChannelGeometry":
        return replace(self, D0=math.inf)

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

from bounded_cir.channel.characteristics import (
    TStarMethod,
    find_peak,
    peak_sweep,
    t_star,
    t_star_max,
    t_star_sweep,
)
from bounded_cir.channel.geometry import ChannelGeometry
from bounded_cir.channel.records import PeakPoint, TimeSeries
from bounded_cir.channel.series import (
    DIAGNOSTICS,
    cumulative_hits,
    evaluate_series,
    hitting_rate,
    pdf,
    required_mode_count,
    survival,
)
from bounded_cir.channel.unbounded import unbounded_cdf, unbounded_peak, unbounded_rate

__all__ = [
    "ChannelGeometry",
    "DIAGNOSTICS",
    "PeakPoint",
    "TStarMethod",
    "TimeSeries",
    "cumulative_hits",
    "evaluate_series",
    "find_peak",
    "hitting_rate",
    "pdf",
    "peak_sweep",
    "required_mode_count",
    "survival",
    "t_star",
    "t_star_max",
    "t_star_sweep",
    "unbounded_cdf",
    "unbounded_peak",
    "unbounded_rate",
]

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

import attrs
import numpy as np

from bounded_cir.utils.constant import ChannelKind, SeriesKind


@attrs.define
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    kind: SeriesKind
    channel_kind: ChannelKind = ChannelKind.BOUNDED

    def to_dict(self) -> dict:
        return {
            "kind": str(self.kind),
            "channel_kind": str(self.channel_kind),
            "times": self.times.tolist(),
            "values": self.values.tolist(),
        }


@attrs.define(frozen=True)
class PeakPoint:
    """Time of the maximum hitting rate and the rate there."""

    tau_peak: float  # s
    n_peak: float  # 1/s
    channel_kind: ChannelKind = ChannelKind.BOUNDED

    def to_dict(self) -> dict:
        data = attrs.asdict(self)
        data["channel_kind"] = str(self.channel_kind)
        return data

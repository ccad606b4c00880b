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

from bounded_cir.link.ber import (
    BerConfig,
    BerResult,
    ber_sweep,
    best_threshold,
    received_counts,
    simulate_ber,
    single_tap_error_probability,
    train_threshold,
)
from bounded_cir.link.taps import (
    FractionMatch,
    TapVector,
    channel_taps,
    default_isi_length,
    match_absorbed_fraction,
)

__all__ = [
    "BerConfig",
    "BerResult",
    "FractionMatch",
    "TapVector",
    "ber_sweep",
    "best_threshold",
    "channel_taps",
    "default_isi_length",
    "match_absorbed_fraction",
    "received_counts",
    "simulate_ber",
    "single_tap_error_probability",
    "train_threshold",
]

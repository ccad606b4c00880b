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

from bounded_cir.montecarlo.compare import ComparisonReport, compare_to_analytic
from bounded_cir.montecarlo.simulator import (
    BlockResult,
    HitHistogram,
    SimConfig,
    bin_hit_steps,
    default_dt,
    simulate,
    simulate_block,
)

__all__ = [
    "BlockResult",
    "ComparisonReport",
    "HitHistogram",
    "SimConfig",
    "bin_hit_steps",
    "compare_to_analytic",
    "default_dt",
    "simulate",
    "simulate_block",
]

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

from bounded_cir.eigen.functions import (
    characteristic,
    eta,
    kappa0,
    kappa0_prime,
    norm_In,
)
from bounded_cir.eigen.modes import (
    EigenMode,
    ModeTable,
    ShellRatio,
    completeness_sum,
    expansion_coefficients,
    find_modes,
)

__all__ = [
    "EigenMode",
    "ModeTable",
    "ShellRatio",
    "characteristic",
    "completeness_sum",
    "eta",
    "expansion_coefficients",
    "find_modes",
    "kappa0",
    "kappa0_prime",
    "norm_In",
]

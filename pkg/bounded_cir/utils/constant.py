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

from enum import IntEnum

from strenum import StrEnum

BOUNDED_CIR_MAX_MODES = 2000
BOUNDED_CIR_TAIL_TOLERANCE = 1e-12
BOUNDED_CIR_TAU_FLOOR = 1e-6  # dimensionless time below which the series is not evaluated
BOUNDED_CIR_SHELL_MARGIN = 1e-4
BOUNDED_CIR_NEGATIVE_CLAMP = 1e-9

BOUNDED_CIR_ROOT_SCAN_DIVISIONS = 64
BOUNDED_CIR_ROOT_SCAN_CHUNK = 65536
BOUNDED_CIR_ROOT_XTOL = 1e-13
BOUNDED_CIR_ROOT_RTOL = 1e-12
BOUNDED_CIR_COS_GUARD = 1e-12

BOUNDED_CIR_PEAK_XTOL = 1e-8
BOUNDED_CIR_PEAK_GRID_POINTS = 96

BOUNDED_CIR_MC_BLOCK_SIZE = 8192
BOUNDED_CIR_MC_STEP_FRACTION = 0.025  # default sqrt(2 D dt) = fraction * d0
BOUNDED_CIR_MC_STEP_LIMIT = 0.1  # warn when sqrt(2 D dt) > limit * d0
BOUNDED_CIR_MC_MAX_REDRAWS = 1000

BOUNDED_CIR_PILOT_BITS = 10000
BOUNDED_CIR_MIN_BITS = 1000
BOUNDED_CIR_MAX_TAPS = 100
BOUNDED_CIR_TAP_MASS_COVERAGE = 1.0 - 1e-3

BOUNDED_CIR_CSV_FLOAT_FORMAT = ".17g"


class ChannelKind(StrEnum):
    """
    Enum for the channel model a result was computed with.
    BOUNDED: absorbing receiver inside a reflecting spherical shell.
    UNBOUNDED: absorbing receiver in free space.
    """

    BOUNDED = "bounded"
    UNBOUNDED = "unbounded"


class ReflectionPolicy(StrEnum):
    """
    Enum for how Monte Carlo steps crossing the outer shell are handled.
    """

    RADIAL_FOLD = "radial_fold"
    REJECT_RESAMPLE = "reject_resample"


class ThresholdPolicy(StrEnum):
    """
    Enum for how the receiver decision threshold is chosen.
    """

    FIXED = "fixed"
    TRAINED = "trained"


class SeriesKind(StrEnum):
    RATE = "rate"
    CUMULATIVE = "cumulative"
    SURVIVAL = "survival"


class ExitCode(IntEnum):
    """
    Process exit codes of the command line front end.
    """

    OK = 0
    DEGENERATE_GEOMETRY = 2
    CONVERGENCE_FAILURE = 3
    NOT_CONVERGED = 4
    CONFIG_ERROR = 5

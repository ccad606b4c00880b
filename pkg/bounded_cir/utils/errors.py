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

from typing import Optional

from bounded_cir.utils.constant import ExitCode


class BoundedCirError(Exception):
    """Base class of every error the package raises on purpose."""

    exit_code: ExitCode = ExitCode.CONFIG_ERROR


class ConfigError(BoundedCirError, ValueError):
    exit_code = ExitCode.CONFIG_ERROR


class DomainError(BoundedCirError, ValueError):
    """An argument lies outside the range an operation is defined on."""

    exit_code = ExitCode.CONFIG_ERROR


class DegenerateGeometry(BoundedCirError, ValueError):
    """Radii violate 0 < d0 < r0 < D0 or the shell ratio is too close to 0 or 1."""

    exit_code = ExitCode.DEGENERATE_GEOMETRY


class ConvergenceFailure(BoundedCirError, RuntimeError):
    exit_code = ExitCode.CONVERGENCE_FAILURE


class NoSolution(ConvergenceFailure):
    """The requested inversion has no root in the admissible range."""


class NotConverged(BoundedCirError, RuntimeError):
    """
    The truncated eigen-series cannot reach the tail tolerance at time `t`.

    `required_modes` is the estimated number of modes the truncation rule
    asks for, when it is known.
    """

    exit_code = ExitCode.NOT_CONVERGED

    def __init__(
        self, message: str, t: Optional[float] = None, required_modes: Optional[int] = None
    ):
        super().__init__(message)
        self.t = t
        self.required_modes = required_modes

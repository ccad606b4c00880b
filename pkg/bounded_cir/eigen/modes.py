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
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from bounded_cir.eigen.functions import (
    characteristic,
    characteristic_prime,
    kappa0_of,
    kappa0_prime_of,
    mode_coefficient,
    norm_integral,
)
from bounded_cir.utils.constant import (
    BOUNDED_CIR_MAX_MODES,
    BOUNDED_CIR_ROOT_RTOL,
    BOUNDED_CIR_ROOT_SCAN_CHUNK,
    BOUNDED_CIR_ROOT_SCAN_DIVISIONS,
    BOUNDED_CIR_ROOT_XTOL,
    BOUNDED_CIR_SHELL_MARGIN,
)
from bounded_cir.utils.errors import ConvergenceFailure, DegenerateGeometry, DomainError
from bounded_cir.utils.logging import logger
from bounded_cir.utils.util import read_json_file, write_json_file


@dataclass(frozen=True)
class ShellRatio:
    """alpha = d0 / D0, kept at least `margin` away from 0 and 1."""

    alpha: float
    margin: float = BOUNDED_CIR_SHELL_MARGIN

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.margin < self.alpha < 1.0 - self.margin):
            raise DegenerateGeometry(
                f"Shell ratio alpha={self.alpha} must lie in "
                f"({self.margin}, {1.0 - self.margin})"
            )

    @property
    def u(self) -> float:
        return 1.0 - self.alpha


@dataclass(frozen=True)
class EigenMode:
    n: int
    beta: float
    c: float
    norm: float  # integral of x^2 kappa0(beta x)^2 over [alpha, 1]


@dataclass(frozen=True)
class ModeTable:
    """Eigenmodes of one shell ratio, ordered by increasing beta."""

    alpha: float
    modes: Tuple[EigenMode, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.modes)

    def __getitem__(self, index: int) -> EigenMode:
        return self.modes[index]

    @cached_property
    def betas(self) -> np.ndarray:
        return np.array([m.beta for m in self.modes], dtype=float)

    @cached_property
    def cs(self) -> np.ndarray:
        return np.array([m.c for m in self.modes], dtype=float)

    @cached_property
    def norms(self) -> np.ndarray:
        return np.array([m.norm for m in self.modes], dtype=float)

    def head(self, count: int) -> "ModeTable":
        return ModeTable(alpha=self.alpha, modes=self.modes[:count])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "modes": [
                {"n": m.n, "beta": m.beta, "c": m.c, "I": m.norm} for m in self.modes
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModeTable":
        try:
            alpha = float(data["alpha"])
            modes = tuple(
                EigenMode(
                    n=int(m["n"]), beta=float(m["beta"]), c=float(m["c"]), norm=float(m["I"])
                )
                for m in data["modes"]
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"Malformed mode table: {e}") from e
        ShellRatio(alpha)
        for i, mode in enumerate(modes):
            if mode.n != i + 1:
                raise DomainError(f"Mode table index {mode.n} out of order at position {i}")
            if i > 0 and not mode.beta > modes[i - 1].beta:
                raise DomainError(f"Mode table betas are not increasing at n={mode.n}")
        return cls(alpha=alpha, modes=modes)

    def to_json(self, file_path: str) -> None:
        write_json_file(self.to_dict(), file_path)

    @classmethod
    def from_json(cls, file_path: str) -> "ModeTable":
        return cls.from_dict(read_json_file(file_path))


def _refine_root(a: float, b: float, alpha: float) -> float:
    try:
        root, info = brentq(
            characteristic,
            a,
            b,
            args=(alpha,),
            xtol=BOUNDED_CIR_ROOT_XTOL,
            rtol=BOUNDED_CIR_ROOT_RTOL,
            full_output=True,
        )
    except (RuntimeError, ValueError) as e:
        raise ConvergenceFailure(f"Root refinement failed on [{a}, {b}]: {e}") from e
    if not info.converged:
        raise ConvergenceFailure(f"Root refinement did not converge on [{a}, {b}]")
    # one Newton polish step, kept only if it improves the residual inside the bracket
    slope = characteristic_prime(root, alpha)
    if slope != 0.0:
        polished = root - characteristic(root, alpha) / slope
        if a <= polished <= b and abs(characteristic(polished, alpha)) < abs(
            characteristic(root, alpha)
        ):
            root = polished
    return float(root)


def _bracket_roots(alpha: float, count: int) -> List[Tuple[float, float]]:
    u = 1.0 - alpha
    step = u * math.pi / BOUNDED_CIR_ROOT_SCAN_DIVISIONS
    brackets: List[Tuple[float, float]] = []
    k0 = 1  # beta = 0 is a trivial root and is skipped
    while len(brackets) < count:
        grid = step * np.arange(k0, k0 + BOUNDED_CIR_ROOT_SCAN_CHUNK + 1, dtype=float)
        signs = np.sign(characteristic(grid, alpha))
        change = (signs[:-1] != 0) & (signs[:-1] * signs[1:] <= 0)
        for i in np.flatnonzero(change):
            brackets.append((float(grid[i]), float(grid[i + 1])))
            if len(brackets) == count:
                break
        k0 += BOUNDED_CIR_ROOT_SCAN_CHUNK
    return brackets


def find_modes(
    alpha: Union[float, ShellRatio],
    count: int = BOUNDED_CIR_MAX_MODES,
    margin: float = BOUNDED_CIR_SHELL_MARGIN,
) -> ModeTable:
    """
    First `count` positive roots of the eigen-equation with their coefficients
    and normalization integrals.
    """
    ratio = alpha if isinstance(alpha, ShellRatio) else ShellRatio(float(alpha), margin)
    if count < 1:
        raise DomainError(f"Mode count must be positive, got {count}")
    a = ratio.alpha

    modes = []
    for n, (lo, hi) in enumerate(_bracket_roots(a, count), start=1):
        beta = _refine_root(lo, hi, a)
        c = mode_coefficient(beta, a)
        norm = norm_integral(beta, c, a)
        if not (math.isfinite(norm) and norm > 0.0):
            raise ConvergenceFailure(f"Non-positive normalization I_{n}={norm} at beta={beta}")
        modes.append(EigenMode(n=n, beta=beta, c=c, norm=norm))

    table = ModeTable(alpha=a, modes=tuple(modes))
    logger.info(
        f"Built {len(table)} eigenmodes for alpha={a:.6g} "
        f"(beta_1={table.betas[0]:.10g}, beta_max={table.betas[-1]:.6g})"
    )
    return table


def expansion_coefficients(table: ModeTable, x0: float) -> np.ndarray:
    """
    A_n = alpha^2 kappa0(beta_n x0) kappa0'(beta_n alpha) / (I_n beta_n).

    A_n is the share of molecules released at x0 that mode n carries; the
    coefficients sum to 1 over all modes.
    """
    betas = table.betas
    cs = table.cs
    alpha = table.alpha
    return (
        alpha**2
        * kappa0_of(betas * x0, cs)
        * kappa0_prime_of(betas * alpha, cs)
        / (table.norms * betas)
    )


def completeness_sum(table: ModeTable, x0: float, count: Optional[int] = None) -> float:
    """Partial sum of the A_n; converges to 1 like O(1/count)."""
    if not (table.alpha < x0 <= 1.0):
        raise DomainError(f"x0={x0} must lie in ({table.alpha}, 1]")
    coefficients = expansion_coefficients(table, x0)
    if count is not None:
        coefficients = coefficients[:count]
    return float(np.sum(coefficients))

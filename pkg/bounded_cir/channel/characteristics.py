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
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from bounded_cir.channel.geometry import ChannelGeometry
from bounded_cir.channel.records import PeakPoint
from bounded_cir.channel.series import hitting_rate, survival
from bounded_cir.eigen.modes import ModeTable, expansion_coefficients
from bounded_cir.utils.constant import (
    BOUNDED_CIR_PEAK_GRID_POINTS,
    BOUNDED_CIR_PEAK_XTOL,
    BOUNDED_CIR_TAU_FLOOR,
)
from bounded_cir.utils.errors import ConvergenceFailure, DomainError, NoSolution
from bounded_cir.utils.logging import logger


class TStarMethod:
    CLOSED = "closed"
    EXACT = "exact"
    ALL = [CLOSED, EXACT]


def _floor_time(geom: ChannelGeometry) -> float:
    return BOUNDED_CIR_TAU_FLOOR * geom.time_scale


def _slowest_time(geom: ChannelGeometry, modes: ModeTable) -> float:
    """Decay time of the first mode, D0^2 / (beta_1^2 D)."""
    return geom.time_scale / modes.betas[0] ** 2


def find_peak(geom: ChannelGeometry, modes: ModeTable) -> PeakPoint:
    """
    Global maximum of the hitting rate.

    A log-spaced scan brackets the maximum, then Brent's method refines it to a
    relative tolerance of 1e-8 in t.
    """
    t_direct = geom.distance**2 / (6.0 * geom.D)
    t_lo = max(t_direct / 100.0, 2.0 * _floor_time(geom))
    t_hi = max(100.0 * t_direct, 10.0 * _slowest_time(geom, modes))
    grid = np.geomspace(t_lo, t_hi, BOUNDED_CIR_PEAK_GRID_POINTS)
    rates = hitting_rate(grid, geom, modes)
    i = int(np.argmax(rates))
    if i == 0 or i == len(grid) - 1:
        raise ConvergenceFailure(
            f"Hitting-rate maximum not bracketed on [{t_lo:.6g}, {t_hi:.6g}] s"
        )
    try:
        result = minimize_scalar(
            lambda t: -hitting_rate(t, geom, modes),
            bracket=(grid[i - 1], grid[i], grid[i + 1]),
            method="brent",
            options={"xtol": BOUNDED_CIR_PEAK_XTOL},
        )
    except ValueError as e:
        raise ConvergenceFailure(f"Peak refinement failed: {e}") from e
    if not getattr(result, "success", True):
        raise ConvergenceFailure(f"Peak refinement failed: {result.message}")
    return PeakPoint(tau_peak=float(result.x), n_peak=float(-result.fun))


def _check_epsilon(epsilon: float) -> None:
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")


def t_star_max(epsilon: float, geom: ChannelGeometry, modes: ModeTable) -> float:
    """Single-mode bound -D0^2 ln(epsilon) / (beta_1^2 D)."""
    _check_epsilon(epsilon)
    return -_slowest_time(geom, modes) * math.log(epsilon)


def _t_star_closed(epsilon: float, geom: ChannelGeometry, modes: ModeTable) -> float:
    a1 = float(expansion_coefficients(modes.head(1), geom.x0)[0])
    ratio = a1 / epsilon
    if not ratio > 0.0:
        raise NoSolution(f"First-mode coefficient A_1={a1:.6g} admits no t*")
    value = _slowest_time(geom, modes) * math.log(ratio)
    if not value > 0.0:
        raise NoSolution(
            f"A_1={a1:.6g} is below epsilon={epsilon}; the first-mode estimate of t* is not positive"
        )
    return value


def _t_star_exact(epsilon: float, geom: ChannelGeometry, modes: ModeTable) -> float:
    try:
        center = _t_star_closed(epsilon, geom, modes)
    except NoSolution:
        center = t_star_max(epsilon, geom, modes)
    floor = 2.0 * _floor_time(geom)

    def residual(t: float) -> float:
        return survival(t, geom, modes) - epsilon

    lo = max(center / 10.0, floor)
    hi = center * 10.0
    for _ in range(8):
        if residual(lo) > 0.0:
            break
        if lo == floor:
            raise NoSolution(f"survival already below epsilon={epsilon} at the convergence floor")
        lo = max(lo / 10.0, floor)
    for _ in range(8):
        if residual(hi) < 0.0:
            break
        hi *= 10.0
    if not (residual(lo) > 0.0 > residual(hi)):
        raise NoSolution(f"Cannot bracket survival = {epsilon} on [{lo:.6g}, {hi:.6g}] s")
    return float(brentq(residual, lo, hi, xtol=1e-14, rtol=1e-12))


def t_star(
    epsilon: float,
    geom: ChannelGeometry,
    modes: ModeTable,
    method: str = TStarMethod.CLOSED,
) -> float:
    """
    Time after which fewer than a fraction epsilon of the molecules remain.

    `closed` uses the first mode alone, `exact` inverts the full survival series.
    """
    _check_epsilon(epsilon)
    if method == TStarMethod.CLOSED:
        return _t_star_closed(epsilon, geom, modes)
    if method == TStarMethod.EXACT:
        return _t_star_exact(epsilon, geom, modes)
    raise DomainError(f"Unknown t* method '{method}', expected one of {TStarMethod.ALL}")


def peak_sweep(
    r0_values: Sequence[float], geom: ChannelGeometry, modes: ModeTable
) -> List[Tuple[float, PeakPoint]]:
    """Peak of the hitting rate for each transmitter distance, same shell."""
    points = []
    for r0 in r0_values:
        point = find_peak(geom.with_r0(r0), modes)
        logger.info(f"r0={r0:g} um: tau_peak={point.tau_peak:.6g} s, n_peak={point.n_peak:.6g} 1/s")
        points.append((float(r0), point))
    return points


def t_star_sweep(
    r0_values: Sequence[float],
    epsilon: float,
    geom: ChannelGeometry,
    modes: ModeTable,
    method: str = TStarMethod.CLOSED,
) -> List[Tuple[float, float]]:
    return [
        (float(r0), t_star(epsilon, geom.with_r0(r0), modes, method=method))
        for r0 in r0_values
    ]

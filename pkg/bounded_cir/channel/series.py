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

"""
Eigen-series evaluation of the bounded channel: hitting rate, cumulative
absorbed fraction, survival probability and concentration.

With tau = D t / D0^2 and A_n the expansion coefficients,

    survival(t)      = sum_n A_n exp(-beta_n^2 tau)
    cumulative(t)    = 1 - survival(t)
    hitting_rate(t)  = (D / D0^2) sum_n A_n beta_n^2 exp(-beta_n^2 tau)

Modes are kept while beta_n^2 tau < ln(1 / tail_tolerance) + ln(n + 1).
"""

import math
from typing import Optional, Tuple, Union

import attrs
import numpy as np

from bounded_cir.channel.geometry import ChannelGeometry
from bounded_cir.channel.records import TimeSeries
from bounded_cir.channel.unbounded import unbounded_cdf, unbounded_rate
from bounded_cir.eigen.functions import kappa0_of
from bounded_cir.eigen.modes import ModeTable, expansion_coefficients
from bounded_cir.utils.constant import (
    BOUNDED_CIR_NEGATIVE_CLAMP,
    BOUNDED_CIR_TAIL_TOLERANCE,
    BOUNDED_CIR_TAU_FLOOR,
    ChannelKind,
    SeriesKind,
)
from bounded_cir.utils.errors import DegenerateGeometry, DomainError, NotConverged
from bounded_cir.utils.logging import logger

ArrayLike = Union[float, np.ndarray]


@attrs.define
class SeriesDiagnostics:
    """Counters of numerical events seen while evaluating series."""

    evaluations: int = 0
    clamped_values: int = 0

    def reset(self) -> None:
        self.evaluations = 0
        self.clamped_values = 0


DIAGNOSTICS = SeriesDiagnostics()


def _check_modes(geom: ChannelGeometry, modes: ModeTable) -> None:
    if not geom.bounded:
        raise DegenerateGeometry("The eigen-series needs a finite outer radius D0")
    if not math.isclose(modes.alpha, geom.alpha, rel_tol=1e-12, abs_tol=0.0):
        raise DomainError(
            f"Mode table was built for alpha={modes.alpha}, geometry has alpha={geom.alpha}"
        )


def required_mode_count(
    tau: float, modes: ModeTable, tail_tolerance: float = BOUNDED_CIR_TAIL_TOLERANCE
) -> int:
    """Number of leading modes the truncation rule keeps at dimensionless time tau."""
    n = np.arange(1, len(modes) + 1, dtype=float)
    budget = math.log(1.0 / tail_tolerance) + np.log(n + 1.0)
    keep = modes.betas**2 * tau < budget
    if keep.all():
        u = 1.0 - modes.alpha
        wanted = math.log(1.0 / tail_tolerance) + math.log(len(modes) + 1.0)
        required = int(math.ceil(u * math.sqrt(wanted / tau) / math.pi + 0.5))
        raise NotConverged(
            f"Mode table of {len(modes)} modes is too short at tau={tau:.6g}; "
            f"about {required} modes are needed",
            required_modes=max(required, len(modes) + 1),
        )
    return max(int(np.argmin(keep)), 1)


def _prepare(
    t: ArrayLike,
    geom: ChannelGeometry,
    modes: ModeTable,
    tail_tolerance: float,
    tau_floor: float,
) -> Tuple[np.ndarray, np.ndarray, int]:
    _check_modes(geom, modes)
    times = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(times) & ~np.isposinf(times)) or np.any(times < 0.0):
        raise DomainError("Times must be non-negative")
    tau = geom.tau(times)
    positive = tau > 0.0
    if not positive.any():
        return times, tau, 1
    tau_min = float(np.min(tau[positive]))
    t_min = float(np.min(times[positive]))
    if tau_min < tau_floor:
        raise NotConverged(
            f"t={t_min:.6g} s (tau={tau_min:.3g}) is below the convergence floor "
            f"tau={tau_floor:.3g}",
            t=t_min,
        )
    try:
        count = required_mode_count(tau_min, modes, tail_tolerance)
    except NotConverged as e:
        raise NotConverged(f"{e} (t={t_min:.6g} s)", t=t_min, required_modes=e.required_modes)
    DIAGNOSTICS.evaluations += 1
    logger.debug(f"Evaluating {count} modes down to tau={tau_min:.6g}")
    return times, tau, count


def _decay(tau: np.ndarray, betas: np.ndarray) -> np.ndarray:
    finite_tau = np.where(np.isfinite(tau), tau, 0.0)
    decay = np.exp(-np.multiply.outer(finite_tau, betas**2))
    decay[~np.isfinite(tau)] = 0.0
    return decay


def _clamp_negative(values: np.ndarray, times: np.ndarray, what: str) -> np.ndarray:
    negative = values < 0.0
    if not negative.any():
        return values
    worst = float(values[negative].min())
    if worst <= -BOUNDED_CIR_NEGATIVE_CLAMP:
        t_bad = float(times[np.argmin(values)]) if times.ndim else float(times)
        raise NotConverged(f"{what} evaluated to {worst:.3g} at t={t_bad:.6g} s", t=t_bad)
    DIAGNOSTICS.clamped_values += int(np.count_nonzero(negative))
    logger.warning(f"Clamped {int(np.count_nonzero(negative))} small negative {what} values")
    return np.where(negative, 0.0, values)


def _as_output(values: np.ndarray, times: np.ndarray) -> ArrayLike:
    return float(values) if times.ndim == 0 else values


def survival(
    t: ArrayLike,
    geom: ChannelGeometry,
    modes: ModeTable,
    tail_tolerance: float = BOUNDED_CIR_TAIL_TOLERANCE,
    tau_floor: float = BOUNDED_CIR_TAU_FLOOR,
) -> ArrayLike:
    """Probability that a released molecule has not been absorbed by time t."""
    times, tau, count = _prepare(t, geom, modes, tail_tolerance, tau_floor)
    coefficients = expansion_coefficients(modes, geom.x0)[:count]
    values = _decay(tau, modes.betas[:count]) @ coefficients
    values = np.where(tau == 0.0, 1.0, values)
    values = _clamp_negative(values, times, "survival")
    return _as_output(values, times)


def cumulative_hits(
    t: ArrayLike,
    geom: ChannelGeometry,
    modes: ModeTable,
    clamp: bool = False,
    tail_tolerance: float = BOUNDED_CIR_TAIL_TOLERANCE,
    tau_floor: float = BOUNDED_CIR_TAU_FLOOR,
) -> ArrayLike:
    """
    Fraction of molecules absorbed by time t, evaluated as 1 - survival(t).

    The raw value is returned unless `clamp` is set, which clips to [0, 1].
    """
    times = np.asarray(t, dtype=float)
    values = 1.0 - np.asarray(
        survival(times, geom, modes, tail_tolerance=tail_tolerance, tau_floor=tau_floor)
    )
    values = np.where(times == 0.0, 0.0, values)
    if clamp:
        values = np.clip(values, 0.0, 1.0)
    return _as_output(values, times)


def hitting_rate(
    t: ArrayLike,
    geom: ChannelGeometry,
    modes: ModeTable,
    tail_tolerance: float = BOUNDED_CIR_TAIL_TOLERANCE,
    tau_floor: float = BOUNDED_CIR_TAU_FLOOR,
) -> ArrayLike:
    """Absorption rate in 1/s of a single released molecule."""
    times, tau, count = _prepare(t, geom, modes, tail_tolerance, tau_floor)
    betas = modes.betas[:count]
    weights = expansion_coefficients(modes, geom.x0)[:count] * betas**2
    dimensionless = _decay(tau, betas) @ weights
    dimensionless = np.where(tau == 0.0, 0.0, dimensionless)
    dimensionless = _clamp_negative(dimensionless, times, "hitting rate")
    return _as_output(dimensionless / geom.time_scale, times)


def pdf(
    r: ArrayLike,
    t: float,
    geom: ChannelGeometry,
    modes: ModeTable,
    tail_tolerance: float = BOUNDED_CIR_TAIL_TOLERANCE,
    tau_floor: float = BOUNDED_CIR_TAU_FLOOR,
) -> ArrayLike:
    """
    Concentration in 1/um^3 at radius r and time t > 0 for one released molecule,
    averaged over the sphere of radius r.
    """
    radii = np.asarray(r, dtype=float)
    if np.any(radii < geom.d0) or np.any(radii > geom.D0):
        raise DomainError(f"Radius must lie in [{geom.d0}, {geom.D0}]")
    if not t > 0.0:
        raise DomainError("The concentration is only defined for t > 0")
    _, tau, count = _prepare(t, geom, modes, tail_tolerance, tau_floor)
    betas = modes.betas[:count]
    cs = modes.cs[:count]
    weights = (
        kappa0_of(betas * geom.x0, cs)
        * np.exp(-(betas**2) * float(tau))
        / (4.0 * np.pi * modes.norms[:count] * geom.D0**3)
    )
    x = radii / geom.D0
    values = kappa0_of(np.multiply.outer(x, betas), cs) @ weights
    values = _clamp_negative(values, np.asarray(float(t)), "concentration")
    return float(values) if radii.ndim == 0 else values


def evaluate_series(
    kind: SeriesKind,
    times: np.ndarray,
    geom: ChannelGeometry,
    modes: Optional[ModeTable] = None,
    clamp: bool = False,
    tail_tolerance: float = BOUNDED_CIR_TAIL_TOLERANCE,
    tau_floor: float = BOUNDED_CIR_TAU_FLOOR,
) -> TimeSeries:
    """
    Evaluate one quantity on a time grid, for the bounded or unbounded channel.

    `clamp` clips cumulative fractions to [0, 1] for output.
    """
    kind = SeriesKind(kind)
    times = np.asarray(times, dtype=float)
    if geom.bounded:
        if modes is None:
            raise DomainError("A mode table is required for the bounded channel")
        options = dict(tail_tolerance=tail_tolerance, tau_floor=tau_floor)
        if kind == SeriesKind.RATE:
            values = hitting_rate(times, geom, modes, **options)
        elif kind == SeriesKind.CUMULATIVE:
            values = cumulative_hits(times, geom, modes, clamp=clamp, **options)
        else:
            values = survival(times, geom, modes, **options)
        channel_kind = ChannelKind.BOUNDED
    else:
        if kind == SeriesKind.RATE:
            values = unbounded_rate(times, geom)
        elif kind == SeriesKind.CUMULATIVE:
            values = unbounded_cdf(times, geom)
        else:
            values = 1.0 - unbounded_cdf(times, geom)
        channel_kind = ChannelKind.UNBOUNDED
    return TimeSeries(
        times=times, values=np.asarray(values, dtype=float), kind=kind, channel_kind=channel_kind
    )

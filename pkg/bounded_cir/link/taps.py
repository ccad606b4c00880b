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

import attrs
import numpy as np
from scipy.optimize import brentq

from bounded_cir.channel.geometry import ChannelGeometry
from bounded_cir.channel.series import cumulative_hits
from bounded_cir.channel.unbounded import unbounded_cdf
from bounded_cir.eigen.modes import ModeTable
from bounded_cir.utils.constant import (
    BOUNDED_CIR_MAX_TAPS,
    BOUNDED_CIR_TAP_MASS_COVERAGE,
    BOUNDED_CIR_TAU_FLOOR,
    ChannelKind,
)
from bounded_cir.utils.errors import ConfigError, DomainError, NoSolution
from bounded_cir.utils.logging import logger


@attrs.define(frozen=True)
class TapVector:
    """
    Probability that a molecule released at the start of a symbol is absorbed
    during the k-th symbol slot, k = 1..L.
    """

    t_s: float
    taps: np.ndarray
    channel_kind: ChannelKind
    D0: float = float("inf")

    @property
    def isi_length(self) -> int:
        return int(self.taps.size)


def _cdf(times: np.ndarray, geom: ChannelGeometry, modes: Optional[ModeTable]) -> np.ndarray:
    if geom.bounded:
        if modes is None:
            raise DomainError("A mode table is required for the bounded channel")
        return np.asarray(cumulative_hits(times, geom, modes))
    return np.asarray(unbounded_cdf(times, geom))


def default_isi_length(
    geom: ChannelGeometry, modes: Optional[ModeTable], t_s: float
) -> int:
    """Smallest L whose taps carry 1 - 1e-3 of the absorbable mass, at most 100."""
    total = 1.0 if geom.bounded else geom.d0 / geom.r0
    times = t_s * np.arange(1, BOUNDED_CIR_MAX_TAPS + 1, dtype=float)
    covered = _cdf(times, geom, modes) >= BOUNDED_CIR_TAP_MASS_COVERAGE * total
    if not covered.any():
        return BOUNDED_CIR_MAX_TAPS
    return int(np.argmax(covered)) + 1


def channel_taps(
    geom: ChannelGeometry,
    modes: Optional[ModeTable],
    t_s: float,
    isi_length: Optional[int] = None,
) -> TapVector:
    """p_k = N(k t_s) - N((k - 1) t_s) for the bounded or unbounded channel."""
    if not t_s > 0.0:
        raise ConfigError(f"Symbol duration must be positive, got {t_s}")
    if isi_length is None:
        isi_length = default_isi_length(geom, modes, t_s)
    if isi_length < 1:
        raise ConfigError(f"ISI length must be at least 1, got {isi_length}")
    times = t_s * np.arange(0, isi_length + 1, dtype=float)
    taps = np.clip(np.diff(_cdf(times, geom, modes)), 0.0, 1.0)
    kind = ChannelKind.BOUNDED if geom.bounded else ChannelKind.UNBOUNDED
    return TapVector(t_s=float(t_s), taps=taps, channel_kind=kind, D0=float(geom.D0))


@attrs.define(frozen=True)
class FractionMatch:
    t_s: float
    fraction: float
    predicted: float
    expected: float
    agrees: bool

    def to_dict(self) -> dict:
        return attrs.asdict(self)


def match_absorbed_fraction(
    geom_a: ChannelGeometry,
    modes_a: ModeTable,
    geom_b: ChannelGeometry,
    modes_b: ModeTable,
    fraction: float = 0.85,
    expected: float = 0.65,
    tolerance: float = 0.02,
) -> FractionMatch:
    """
    Symbol duration at which channel a has absorbed `fraction` of a release,
    and the fraction channel b absorbs in the same time.
    """
    if not 0.0 < fraction < 1.0:
        raise DomainError(f"fraction must lie in (0, 1), got {fraction}")

    def residual(t: float) -> float:
        return float(cumulative_hits(t, geom_a, modes_a)) - fraction

    lo = 2.0 * BOUNDED_CIR_TAU_FLOOR * geom_a.time_scale
    hi = geom_a.time_scale
    for _ in range(60):
        if residual(hi) > 0.0:
            break
        hi *= 2.0
    if not (residual(lo) < 0.0 < residual(hi)):
        raise NoSolution(f"Cannot bracket an absorbed fraction of {fraction}")
    t_s = float(brentq(residual, lo, hi, xtol=1e-14, rtol=1e-12))
    predicted = float(cumulative_hits(t_s, geom_b, modes_b))
    agrees = abs(predicted - expected) <= tolerance
    if agrees:
        logger.info(f"t_s={t_s:.6g} s: absorbed fractions {fraction:g} and {predicted:.4f}")
    else:
        logger.warning(
            f"t_s={t_s:.6g} s gives absorbed fraction {predicted:.4f} for D0={geom_b.D0:g} um, "
            f"not the stated {expected:g}"
        )
    return FractionMatch(
        t_s=t_s, fraction=fraction, predicted=predicted, expected=expected, agrees=agrees
    )

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
On-off keyed link over a molecular channel.

A `1` releases M molecules at the start of its slot, a `0` releases none.
Molecules released k - 1 slots earlier are absorbed in the current slot with
probability p_k, so the received count of slot j is
sum_k Binomial(M b_{j-k+1}, p_k). The receiver decides `1` when the count
reaches the threshold.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import attrs
import numpy as np
from scipy.stats import binom, binomtest

from bounded_cir.channel.geometry import ChannelGeometry
from bounded_cir.eigen.modes import ModeTable, find_modes
from bounded_cir.link.taps import TapVector, channel_taps
from bounded_cir.utils.constant import (
    BOUNDED_CIR_MAX_MODES,
    BOUNDED_CIR_MIN_BITS,
    BOUNDED_CIR_PILOT_BITS,
    ChannelKind,
    ThresholdPolicy,
)
from bounded_cir.utils.errors import ConfigError
from bounded_cir.utils.logging import logger
from bounded_cir.utils.parallel import parallel_map
from bounded_cir.utils.util import block_generator


@dataclass(frozen=True)
class BerConfig:
    molecules_per_bit: int = 1000
    n_bits: int = 100000
    isi_length: Optional[int] = None  # None covers 1 - 1e-3 of the tap mass
    threshold_policy: ThresholdPolicy = ThresholdPolicy.TRAINED
    threshold: Optional[int] = None  # fixed policy only; None means M // 2
    pilot_bits: int = BOUNDED_CIR_PILOT_BITS
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.molecules_per_bit < 1:
            raise ConfigError(f"molecules_per_bit must be at least 1, got {self.molecules_per_bit}")
        if self.n_bits < BOUNDED_CIR_MIN_BITS:
            raise ConfigError(f"n_bits must be at least {BOUNDED_CIR_MIN_BITS}, got {self.n_bits}")
        if self.isi_length is not None and self.isi_length < 1:
            raise ConfigError(f"isi_length must be at least 1, got {self.isi_length}")
        if self.pilot_bits < 1:
            raise ConfigError(f"pilot_bits must be at least 1, got {self.pilot_bits}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        try:
            object.__setattr__(self, "threshold_policy", ThresholdPolicy(self.threshold_policy))
        except ValueError as e:
            raise ConfigError(f"Unknown threshold policy '{self.threshold_policy}'") from e

    def fixed_threshold(self) -> int:
        return self.threshold if self.threshold is not None else self.molecules_per_bit // 2


@attrs.define
class BerResult:
    t_s: float
    ber: float
    errors: int
    n_bits: int
    threshold_used: int
    channel_kind: ChannelKind
    D0: float
    ci_lo: float
    ci_hi: float
    molecules_per_bit: int
    isi_length: int

    def to_dict(self) -> dict:
        data = attrs.asdict(self)
        data["channel_kind"] = str(self.channel_kind)
        return data


def received_counts(
    rng: np.random.Generator, bits: np.ndarray, taps: np.ndarray, molecules_per_bit: int
) -> np.ndarray:
    """Molecule counts of every slot; bits before the first slot are zero."""
    n = bits.size
    released = molecules_per_bit * bits.astype(np.int64)
    counts = np.zeros(n, dtype=np.int64)
    for lag, p in enumerate(taps):
        if lag >= n:
            break
        shifted = np.zeros(n, dtype=np.int64)
        shifted[lag:] = released[: n - lag]
        counts += rng.binomial(shifted, p)
    return counts


def best_threshold(bits: np.ndarray, counts: np.ndarray) -> int:
    """
    Threshold with the fewest decision errors on labelled counts.

    Thresholds run over 0..max(count) + 1. Among equally good thresholds the
    run starting at the smallest one is taken, and its midpoint (rounded down)
    is returned.
    """
    size = int(counts.max()) + 2
    ones = np.bincount(counts[bits == 1], minlength=size)
    zeros = np.bincount(counts[bits == 0], minlength=size)
    missed = np.concatenate([[0], np.cumsum(ones)])[:size]
    false_alarms = zeros.sum() - np.concatenate([[0], np.cumsum(zeros)])[:size]
    errors = missed + false_alarms
    optimal = errors == errors.min()
    lo = int(np.argmax(optimal))
    hi = lo
    while hi + 1 < size and optimal[hi + 1]:
        hi += 1
    return (lo + hi) // 2


def train_threshold(
    taps: TapVector, cfg: BerConfig, rng: Optional[np.random.Generator] = None
) -> int:
    """Pick the threshold from a pilot sequence drawn on its own random stream."""
    if rng is None:
        rng = block_generator(cfg.seed, 0, 1)
    bits = rng.integers(0, 2, size=cfg.pilot_bits)
    counts = received_counts(rng, bits, taps.taps, cfg.molecules_per_bit)
    return best_threshold(bits, counts)


def single_tap_error_probability(p1: float, molecules_per_bit: int, threshold: int) -> float:
    """Exact BER of the ISI-free link with equiprobable bits."""
    miss = binom.cdf(threshold - 1, molecules_per_bit, p1)
    false_alarm = 1.0 if threshold <= 0 else 0.0
    return float(0.5 * miss + 0.5 * false_alarm)


def simulate_ber(taps: TapVector, cfg: BerConfig, stream: int = 0) -> BerResult:
    """
    Estimate the BER with a Wilson 95% interval. `stream` selects independent
    random streams for the test and pilot sequences.
    """
    rng = block_generator(cfg.seed, stream, 0)
    if cfg.threshold_policy == ThresholdPolicy.TRAINED:
        threshold = train_threshold(taps, cfg, rng=block_generator(cfg.seed, stream, 1))
    else:
        threshold = cfg.fixed_threshold()

    bits = rng.integers(0, 2, size=cfg.n_bits)
    counts = received_counts(rng, bits, taps.taps, cfg.molecules_per_bit)
    decisions = (counts >= threshold).astype(bits.dtype)
    errors = int(np.count_nonzero(decisions != bits))
    interval = binomtest(errors, cfg.n_bits).proportion_ci(
        confidence_level=0.95, method="wilson"
    )
    return BerResult(
        t_s=taps.t_s,
        ber=errors / cfg.n_bits,
        errors=errors,
        n_bits=cfg.n_bits,
        threshold_used=int(threshold),
        channel_kind=taps.channel_kind,
        D0=taps.D0,
        ci_lo=float(interval.low),
        ci_hi=float(interval.high),
        molecules_per_bit=cfg.molecules_per_bit,
        isi_length=taps.isi_length,
    )


def _run_point(task: Tuple[int, ChannelGeometry, Optional[ModeTable], float, BerConfig]) -> BerResult:
    index, geom, modes, t_s, cfg = task
    taps = channel_taps(geom, modes, t_s, cfg.isi_length)
    return simulate_ber(taps, cfg, stream=index)


def ber_sweep(
    bounded_geoms: Sequence[ChannelGeometry],
    unbounded_geom: Optional[ChannelGeometry],
    symbol_durations: Sequence[float],
    cfg: BerConfig,
    max_modes: int = BOUNDED_CIR_MAX_MODES,
    progress: bool = True,
) -> List[BerResult]:
    """
    BER of every (symbol duration, channel) pair.

    Points are ordered by symbol duration, then the bounded geometries in the
    given order, then the unbounded reference. Point i draws from the random
    streams keyed by i, so results do not depend on the worker count.
    """
    tables: Dict[float, ModeTable] = {}
    for geom in bounded_geoms:
        if not geom.bounded:
            raise ConfigError("bounded_geoms must have a finite D0")
        if geom.alpha not in tables:
            tables[geom.alpha] = find_modes(geom.alpha, count=max_modes)
    channels = [(geom, tables[geom.alpha]) for geom in bounded_geoms]
    if unbounded_geom is not None:
        channels.append((unbounded_geom.unbounded(), None))

    tasks = []
    for t_s in symbol_durations:
        for geom, modes in channels:
            tasks.append((len(tasks), geom, modes, float(t_s), cfg))
    results = parallel_map(_run_point, tasks, workers=cfg.workers, desc="BER points", progress=progress)
    for result in results:
        D0 = "inf" if math.isinf(result.D0) else f"{result.D0:g}"
        logger.info(
            f"t_s={result.t_s:g} s {result.channel_kind} D0={D0}: BER={result.ber:.4g} "
            f"[{result.ci_lo:.3g}, {result.ci_hi:.3g}] threshold={result.threshold_used}"
        )
    return results

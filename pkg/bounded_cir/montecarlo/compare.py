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

from bounded_cir.channel.geometry import ChannelGeometry
from bounded_cir.channel.series import cumulative_hits
from bounded_cir.channel.unbounded import unbounded_cdf
from bounded_cir.eigen.modes import ModeTable
from bounded_cir.montecarlo.simulator import HitHistogram
from bounded_cir.utils.errors import DomainError
from bounded_cir.utils.logging import logger


@attrs.define
class ComparisonReport:
    """Per-bin agreement between simulated and analytic hit counts."""

    bin_edges: np.ndarray
    observed: np.ndarray
    expected: np.ndarray
    z_scores: np.ndarray
    max_abs_z: float
    fraction_within_3sigma: float
    ks_distance: float  # sup over bin edges of |empirical - analytic| absorbed fraction

    def to_dict(self) -> dict:
        return {
            "bin_edges": self.bin_edges.tolist(),
            "observed": np.asarray(self.observed).tolist(),
            "expected": self.expected.tolist(),
            "z_scores": self.z_scores.tolist(),
            "max_abs_z": float(self.max_abs_z),
            "fraction_within_3sigma": float(self.fraction_within_3sigma),
            "ks_distance": float(self.ks_distance),
        }


def analytic_cdf_at_edges(
    edges: np.ndarray, geom: ChannelGeometry, modes: Optional[ModeTable]
) -> np.ndarray:
    if geom.bounded:
        if modes is None:
            raise DomainError("A mode table is required for the bounded channel")
        return np.asarray(cumulative_hits(edges, geom, modes))
    return np.asarray(unbounded_cdf(edges, geom))


def compare_to_analytic(
    histogram: HitHistogram, geom: ChannelGeometry, modes: Optional[ModeTable] = None
) -> ComparisonReport:
    """
    Binomial z-score of each bin count against released * (N(t_hi) - N(t_lo)).
    """
    edges = np.asarray(histogram.bin_edges, dtype=float)
    cdf = analytic_cdf_at_edges(edges, geom, modes)
    p = np.clip(np.diff(cdf), 0.0, 1.0)
    n = histogram.released
    expected = n * p
    observed = np.asarray(histogram.counts, dtype=float)
    deviation = np.sqrt(n * p * (1.0 - p))
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (observed - expected) / deviation
    z = np.where(deviation > 0.0, z, np.where(observed == expected, 0.0, np.inf))

    empirical = histogram.empirical_cdf()
    ks = float(np.max(np.abs(empirical - cdf[1:]))) if empirical.size else 0.0
    report = ComparisonReport(
        bin_edges=edges,
        observed=observed,
        expected=expected,
        z_scores=z,
        max_abs_z=float(np.max(np.abs(z))) if z.size else 0.0,
        fraction_within_3sigma=float(np.mean(np.abs(z) <= 3.0)) if z.size else 1.0,
        ks_distance=ks,
    )
    logger.info(
        f"Monte Carlo vs analytic: max|z|={report.max_abs_z:.3g}, "
        f"{100 * report.fraction_within_3sigma:.1f}% bins within 3 sigma, "
        f"KS distance={report.ks_distance:.4g}"
    )
    return report

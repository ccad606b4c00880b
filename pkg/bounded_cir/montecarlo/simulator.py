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
Particle-based simulation of the bounded channel.

Molecules perform Gaussian random walks with per-axis step deviation
sqrt(2 D dt). A molecule is absorbed at the first step that ends inside the
receiver; the hit is recorded at that step's end time. Steps ending beyond
the outer shell are either folded back radially or redrawn.
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

import attrs
import numpy as np

from bounded_cir.channel.geometry import ChannelGeometry
from bounded_cir.utils.constant import (
    BOUNDED_CIR_MC_BLOCK_SIZE,
    BOUNDED_CIR_MC_MAX_REDRAWS,
    BOUNDED_CIR_MC_STEP_FRACTION,
    BOUNDED_CIR_MC_STEP_LIMIT,
    ReflectionPolicy,
)
from bounded_cir.utils.errors import ConfigError, ConvergenceFailure
from bounded_cir.utils.logging import logger
from bounded_cir.utils.parallel import parallel_map
from bounded_cir.utils.util import block_generator


@dataclass(frozen=True)
class SimConfig:
    dt: float
    particles: int
    t_end: float
    seed: int = 0
    reflection_policy: ReflectionPolicy = ReflectionPolicy.RADIAL_FOLD
    workers: int = 1
    bins: int = 200
    block_size: int = BOUNDED_CIR_MC_BLOCK_SIZE

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.particles < 1:
            raise ConfigError(f"particles must be at least 1, got {self.particles}")
        if not (self.t_end > 0.0 and math.isfinite(self.t_end)):
            raise ConfigError(f"t_end must be positive, got {self.t_end}")
        if self.t_end < self.dt:
            raise ConfigError(f"t_end={self.t_end} is shorter than one step dt={self.dt}")
        if self.bins < 1:
            raise ConfigError(f"bins must be at least 1, got {self.bins}")
        if self.block_size < 1:
            raise ConfigError(f"block_size must be at least 1, got {self.block_size}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        try:
            object.__setattr__(
                self, "reflection_policy", ReflectionPolicy(self.reflection_policy)
            )
        except ValueError as e:
            raise ConfigError(f"Unknown reflection policy '{self.reflection_policy}'") from e

    @property
    def steps_per_bin(self) -> int:
        requested = int(math.floor(self.t_end / self.dt + 1e-9))
        return max(1, int(round(requested / self.bins)))

    @property
    def n_steps(self) -> int:
        # whole bins, so the simulated span may differ slightly from t_end
        return self.bins * self.steps_per_bin

    @property
    def bin_width(self) -> float:
        return self.steps_per_bin * self.dt

    @property
    def t_span(self) -> float:
        return self.n_steps * self.dt

    def step_deviation(self, geom: ChannelGeometry) -> float:
        return math.sqrt(2.0 * geom.D * self.dt)


@attrs.define
class HitHistogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    absorbed_total: int
    released: int
    seed: int

    @property
    def absorbed_fraction(self) -> float:
        return self.absorbed_total / self.released

    def empirical_cdf(self) -> np.ndarray:
        """Absorbed fraction at each right bin edge."""
        return np.cumsum(self.counts) / self.released

    def to_dict(self) -> dict:
        return {
            "bin_edges": self.bin_edges.tolist(),
            "counts": self.counts.tolist(),
            "absorbed_total": int(self.absorbed_total),
            "released": int(self.released),
            "seed": int(self.seed),
        }


@attrs.define
class BlockResult:
    hit_steps: np.ndarray  # step index of absorption, -1 if never absorbed
    positions: np.ndarray  # final (or absorption) positions, shape (n, 3)


def default_dt(geom: ChannelGeometry) -> float:
    """dt with sqrt(2 D dt) = d0 / 40, well inside the d0 / 10 limit."""
    return (BOUNDED_CIR_MC_STEP_FRACTION * geom.d0) ** 2 / (2.0 * geom.D)


def simulate_block(
    geom: ChannelGeometry, cfg: SimConfig, block_index: int, n_particles: int
) -> BlockResult:
    """
    Walk one block of particles. The block's random stream is keyed by
    (seed, block_index) only, so the result is independent of scheduling.
    """
    rng = block_generator(cfg.seed, block_index)
    sigma = cfg.step_deviation(geom)
    d0_sq = geom.d0 * geom.d0
    D0_sq = geom.D0 * geom.D0 if geom.bounded else math.inf
    reject = cfg.reflection_policy == ReflectionPolicy.REJECT_RESAMPLE

    positions = np.zeros((n_particles, 3))
    positions[:, 2] = geom.r0
    hit_steps = np.full(n_particles, -1, dtype=np.int64)
    ids = np.arange(n_particles)
    current = positions.copy()

    for k in range(1, cfg.n_steps + 1):
        if ids.size == 0:
            break
        proposed = current + rng.normal(0.0, sigma, size=current.shape)
        r_sq = np.einsum("ij,ij->i", proposed, proposed)

        if reject and geom.bounded:
            outside = r_sq >= D0_sq
            redraws = 0
            while outside.any():
                redraws += 1
                if redraws > BOUNDED_CIR_MC_MAX_REDRAWS:
                    raise ConvergenceFailure(
                        f"Could not redraw {int(outside.sum())} steps inside the shell"
                    )
                proposed[outside] = current[outside] + rng.normal(
                    0.0, sigma, size=(int(outside.sum()), 3)
                )
                r_sq[outside] = np.einsum(
                    "ij,ij->i", proposed[outside], proposed[outside]
                )
                outside = r_sq >= D0_sq

        absorbed = r_sq <= d0_sq

        if not reject and geom.bounded:
            outside = ~absorbed & (r_sq > D0_sq)
            if outside.any():
                r = np.sqrt(r_sq[outside])
                proposed[outside] *= ((2.0 * geom.D0 - r) / r)[:, None]

        if absorbed.any():
            hit_steps[ids[absorbed]] = k
            positions[ids[absorbed]] = proposed[absorbed]
        keep = ~absorbed
        current = proposed[keep]
        ids = ids[keep]

    positions[ids] = current
    return BlockResult(hit_steps=hit_steps, positions=positions)


def _run_block(task: Tuple[ChannelGeometry, SimConfig, int, int]) -> np.ndarray:
    geom, cfg, block_index, n_particles = task
    steps = simulate_block(geom, cfg, block_index, n_particles).hit_steps
    return steps[steps >= 0]


def _block_sizes(particles: int, block_size: int) -> List[int]:
    full, rest = divmod(particles, block_size)
    return [block_size] * full + ([rest] if rest else [])


def bin_hit_steps(hit_steps: np.ndarray, cfg: SimConfig) -> Tuple[np.ndarray, np.ndarray]:
    """
    Histogram absorption step indices on right-closed bins of `steps_per_bin`
    steps. A hit at step k stands for absorption during ((k-1) dt, k dt], so
    a hit on an edge belongs to the bin ending there.
    """
    edges = np.arange(cfg.bins + 1) * cfg.bin_width
    steps = np.asarray(hit_steps, dtype=np.int64)
    index = np.clip((steps - 1) // cfg.steps_per_bin, 0, cfg.bins - 1)
    counts = np.bincount(index, minlength=cfg.bins).astype(np.int64)
    return edges, counts


def simulate(geom: ChannelGeometry, cfg: SimConfig, progress: bool = True) -> HitHistogram:
    """
    Release `cfg.particles` molecules at r0 and histogram their hit times on
    `cfg.bins` bins of a whole number of steps each, spanning about t_end.
    """
    sigma = cfg.step_deviation(geom)
    if sigma > BOUNDED_CIR_MC_STEP_LIMIT * geom.d0:
        logger.warning(
            f"Step deviation {sigma:.4g} um exceeds d0/10={geom.d0 / 10:.4g} um; "
            f"hit times will be biased late (default dt is {default_dt(geom):.4g} s)"
        )
    sizes = _block_sizes(cfg.particles, cfg.block_size)
    logger.info(
        f"Simulating {cfg.particles} particles in {len(sizes)} blocks, "
        f"{cfg.n_steps} steps of {cfg.dt:.4g} s, "
        f"{cfg.bins} bins of {cfg.steps_per_bin} steps, "
        f"policy={cfg.reflection_policy}"
    )
    tasks = [(geom, cfg, b, n) for b, n in enumerate(sizes)]
    steps = parallel_map(
        _run_block, tasks, workers=cfg.workers, desc="Monte Carlo blocks", progress=progress
    )
    hit_steps = np.concatenate(steps) if steps else np.zeros(0, dtype=np.int64)

    edges, counts = bin_hit_steps(hit_steps, cfg)

    histogram = HitHistogram(
        bin_edges=edges,
        counts=counts,
        absorbed_total=int(hit_steps.size),
        released=cfg.particles,
        seed=cfg.seed,
    )
    logger.info(
        f"Absorbed {histogram.absorbed_total}/{histogram.released} "
        f"({histogram.absorbed_fraction:.4f}) by t={cfg.t_span:g} s"
    )
    return histogram

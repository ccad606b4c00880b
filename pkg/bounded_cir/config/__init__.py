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

import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
import toml

from bounded_cir.channel.geometry import ChannelGeometry
from bounded_cir.link.ber import BerConfig
from bounded_cir.montecarlo.simulator import SimConfig, default_dt
from bounded_cir.utils.constant import (
    BOUNDED_CIR_MAX_MODES,
    BOUNDED_CIR_MC_BLOCK_SIZE,
    BOUNDED_CIR_PILOT_BITS,
    BOUNDED_CIR_SHELL_MARGIN,
    BOUNDED_CIR_TAIL_TOLERANCE,
    BOUNDED_CIR_TAU_FLOOR,
    ReflectionPolicy,
    ThresholdPolicy,
)
from bounded_cir.utils.errors import ConfigError
from bounded_cir.utils.logging import logger
from bounded_cir.utils.manifest import RunManifest
from bounded_cir.utils.util import read_json_file, update_dataclass_with_dict


@dataclass
class GeometryConfig:
    d0: float = field(default=10.0, metadata={"help": "Receiver (absorbing sphere) radius in um"})
    D0: float = field(
        default=100.0,
        metadata={"help": "Outer reflecting sphere radius in um; inf for the unbounded channel"},
    )
    r0: float = field(default=20.0, metadata={"help": "Transmitter distance from the center in um"})
    D: float = field(default=80.0, metadata={"help": "Diffusion coefficient in um^2/s"})

    def to_geometry(self) -> ChannelGeometry:
        return ChannelGeometry(
            d0=float(self.d0), D0=float(self.D0), r0=float(self.r0), D=float(self.D)
        )


@dataclass
class SeriesConfig:
    max_modes: int = field(
        default=BOUNDED_CIR_MAX_MODES, metadata={"help": "Number of eigenmodes to compute"}
    )
    tail_tolerance: float = field(
        default=BOUNDED_CIR_TAIL_TOLERANCE,
        metadata={"help": "Relative size of the dropped series tail"},
    )
    tau_floor: float = field(
        default=BOUNDED_CIR_TAU_FLOOR,
        metadata={"help": "Smallest dimensionless time D t / D0^2 the series is evaluated at"},
    )
    shell_margin: float = field(
        default=BOUNDED_CIR_SHELL_MARGIN,
        metadata={"help": "Minimum distance of d0 / D0 from 0 and 1"},
    )


@dataclass
class GridConfig:
    t_start: float = field(default=0.01, metadata={"help": "First time point in s"})
    t_stop: float = field(default=5.0, metadata={"help": "Last time point in s"})
    n_points: int = field(default=500, metadata={"help": "Number of time points"})
    spacing: str = field(
        default="linear",
        metadata={"help": "Time grid spacing", "choices": ["linear", "log"]},
    )

    def times(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.t_start, self.t_stop, self.n_points)
        return np.linspace(self.t_start, self.t_stop, self.n_points)


@dataclass
class MonteCarloConfig:
    dt: float = field(
        default=0.0, metadata={"help": "Time step in s; 0 picks sqrt(2 D dt) = d0 / 40"}
    )
    particles: int = field(default=100000, metadata={"help": "Number of released molecules"})
    t_end: float = field(default=2.0, metadata={"help": "Simulated time span in s"})
    bins: int = field(default=200, metadata={"help": "Number of hit-time histogram bins, each a whole number of steps"})
    reflection_policy: str = field(
        default=ReflectionPolicy.RADIAL_FOLD.value,
        metadata={
            "help": "Handling of steps crossing the outer sphere",
            "choices": [p.value for p in ReflectionPolicy],
        },
    )
    block_size: int = field(
        default=BOUNDED_CIR_MC_BLOCK_SIZE,
        metadata={"help": "Particles per independent random stream"},
    )
    compare: bool = field(
        default=False, metadata={"help": "Compare the histogram with the analytic model"}
    )

    def to_sim_config(self, geom: ChannelGeometry, seed: int, workers: int) -> SimConfig:
        return SimConfig(
            dt=self.dt if self.dt > 0.0 else default_dt(geom),
            particles=int(self.particles),
            t_end=float(self.t_end),
            seed=int(seed),
            reflection_policy=ReflectionPolicy(self.reflection_policy),
            workers=int(workers),
            bins=int(self.bins),
            block_size=int(self.block_size),
        )


@dataclass
class LinkConfig:
    molecules_per_bit: int = field(default=1000, metadata={"help": "Molecules released per 1 bit"})
    n_bits: int = field(default=100000, metadata={"help": "Bits simulated per BER point"})
    isi_length: int = field(
        default=0, metadata={"help": "Number of ISI taps; 0 covers 1 - 1e-3 of the tap mass"}
    )
    threshold_policy: str = field(
        default=ThresholdPolicy.TRAINED.value,
        metadata={
            "help": "Receiver threshold selection",
            "choices": [p.value for p in ThresholdPolicy],
        },
    )
    threshold: int = field(
        default=-1, metadata={"help": "Fixed threshold; -1 means molecules_per_bit // 2"}
    )
    pilot_bits: int = field(
        default=BOUNDED_CIR_PILOT_BITS, metadata={"help": "Pilot bits for threshold training"}
    )
    symbol_durations: List[float] = field(
        default_factory=lambda: [0.1 * k for k in range(1, 11)],
        metadata={"help": "Symbol durations t_s in s"},
    )
    D0_values: List[float] = field(
        default_factory=lambda: [15.0, 20.0],
        metadata={"help": "Outer radii of the bounded channels in um"},
    )
    include_unbounded: bool = field(
        default=True, metadata={"help": "Also simulate the unbounded reference channel"}
    )
    match_fraction: float = field(
        default=0.0,
        metadata={"help": "Absorbed fraction of the first D0 to match t_s to; 0 disables"},
    )
    expected_fraction: float = field(
        default=0.65,
        metadata={"help": "Absorbed fraction the second D0 is expected to reach at that t_s"},
    )

    def to_ber_config(self, seed: int, workers: int) -> BerConfig:
        return BerConfig(
            molecules_per_bit=int(self.molecules_per_bit),
            n_bits=int(self.n_bits),
            isi_length=int(self.isi_length) if self.isi_length > 0 else None,
            threshold_policy=ThresholdPolicy(self.threshold_policy),
            threshold=int(self.threshold) if self.threshold >= 0 else None,
            pilot_bits=int(self.pilot_bits),
            seed=int(seed),
            workers=int(workers),
        )


@dataclass
class Config:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    series: SeriesConfig = field(default_factory=SeriesConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    montecarlo: MonteCarloConfig = field(default_factory=MonteCarloConfig)
    link: LinkConfig = field(default_factory=LinkConfig)
    epsilon: float = field(
        default=0.03, metadata={"help": "Residual molecule fraction defining t*"}
    )
    tstar_method: str = field(
        default="closed",
        metadata={"help": "t* evaluation", "choices": ["closed", "exact"]},
    )
    r0_sweep: List[float] = field(
        default_factory=list,
        metadata={"help": "Transmitter distances in um for peak and t* sweeps"},
    )
    compare_unbounded: bool = field(
        default=False, metadata={"help": "Add the unbounded-channel reference to outputs"}
    )
    seed: int = field(default=0, metadata={"help": "Root seed of every random stream"})
    workers: int = field(
        default=1, metadata={"help": "Worker processes; 0 uses one per CPU"}
    )

    @classmethod
    def from_dict(cls, config_data: Dict[str, Any]) -> "Config":
        config = Config()
        update_dataclass_with_dict(config, config_data)
        config.validate()
        return config

    def update(self, overrides: Dict[str, Any]) -> "Config":
        update_dataclass_with_dict(self, overrides)
        self.validate()
        return self

    def key_values(self) -> Dict[str, Any]:
        return asdict(self)

    def validate(self):
        try:
            self._validate()
        except AssertionError as e:
            raise ConfigError(str(e)) from e

    def _validate(self):
        g = self.geometry
        for name in ("d0", "D0", "r0", "D"):
            assert isinstance(getattr(g, name), (int, float)), f"geometry.{name} must be a number"
        assert self.series.max_modes >= 1, "series.max_modes must be at least 1"
        assert 0.0 < self.series.tail_tolerance < 1.0, "series.tail_tolerance must lie in (0, 1)"
        assert self.series.tau_floor > 0.0, "series.tau_floor must be positive"
        assert 0.0 < self.series.shell_margin < 0.5, "series.shell_margin must lie in (0, 0.5)"
        assert self.grid.n_points >= 1, "grid.n_points must be at least 1"
        assert 0.0 <= self.grid.t_start <= self.grid.t_stop, "grid needs 0 <= t_start <= t_stop"
        assert self.grid.spacing in ("linear", "log"), "grid.spacing must be linear or log"
        if self.grid.spacing == "log":
            assert self.grid.t_start > 0.0, "log grids need t_start > 0"
        mc = self.montecarlo
        assert mc.dt >= 0.0, "montecarlo.dt must be non-negative"
        assert mc.particles >= 1, "montecarlo.particles must be at least 1"
        assert mc.t_end > 0.0, "montecarlo.t_end must be positive"
        assert mc.bins >= 1, "montecarlo.bins must be at least 1"
        assert mc.block_size >= 1, "montecarlo.block_size must be at least 1"
        assert mc.reflection_policy in [
            p.value for p in ReflectionPolicy
        ], f"Unknown reflection policy {mc.reflection_policy}"
        link = self.link
        assert link.molecules_per_bit >= 1, "link.molecules_per_bit must be at least 1"
        assert link.n_bits >= 1000, "link.n_bits must be at least 1000"
        assert link.isi_length >= 0, "link.isi_length must be non-negative"
        assert link.pilot_bits >= 1, "link.pilot_bits must be at least 1"
        assert link.threshold_policy in [
            p.value for p in ThresholdPolicy
        ], f"Unknown threshold policy {link.threshold_policy}"
        assert all(t > 0.0 for t in link.symbol_durations), "symbol durations must be positive"
        assert 0.0 <= link.match_fraction < 1.0, "link.match_fraction must lie in [0, 1)"
        assert 0.0 < self.epsilon < 1.0, "epsilon must lie in (0, 1)"
        assert self.tstar_method in ("closed", "exact"), "tstar_method must be closed or exact"
        assert self.seed >= 0, "seed must be non-negative"
        assert self.workers >= 0, "workers must be non-negative"


def _read_config_file(path: str) -> Dict[str, Any]:
    if not os.path.exists(path):
        raise ConfigError(f"Config file {path} does not exist")
    try:
        if path.endswith(".toml"):
            with open(path, "r") as f:
                return toml.load(f)
        if path.endswith(".json"):
            return read_json_file(path)
    except (toml.TomlDecodeError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot parse {path}: {e}") from e
    raise ConfigError(f"Config file {path} must be .toml or .json")


def config_hash(config: Config) -> str:
    """Digest of the resolved configuration, recorded in every run manifest."""
    payload = json.dumps(config.key_values(), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def load_config(path: Optional[str]) -> Config:
    """
    Defaults, updated from a TOML/JSON file. A run manifest is accepted too,
    in which case its recorded configuration is used.
    """
    if path is None:
        return Config()
    data = _read_config_file(path)
    recorded = None
    if RunManifest.looks_like_manifest(data):
        manifest = RunManifest.model_validate(data)
        data, recorded = manifest.config, manifest.config_hash
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a table")
    config = Config.from_dict(_restore_infinities(data))
    if recorded and config_hash(config) != recorded:
        logger.warning(f"Manifest {path} was edited after the run; its config hash does not match")
    return config


def _restore_infinities(data: Any) -> Any:
    # JSON has no infinity literal; manifests store the unbounded D0 as "inf"
    if isinstance(data, dict):
        return {k: _restore_infinities(v) for k, v in data.items()}
    if isinstance(data, list):
        return [_restore_infinities(v) for v in data]
    if isinstance(data, str) and data.lower() in ("inf", "infinity"):
        return math.inf
    return data

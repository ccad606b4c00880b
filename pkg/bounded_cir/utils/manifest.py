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

import datetime
import os
from typing import Any, Dict, List

from pydantic import BaseModel, Field, model_validator

import bounded_cir
from bounded_cir.utils.util import read_json_file, write_json_file


class RunManifest(BaseModel):
    """
    Everything needed to reproduce a stochastic run bit for bit.

    A manifest file can be passed back as `--config`; its `config` member is
    then used as the configuration.
    """

    command: str
    config: Dict[str, Any]
    seed: int
    config_hash: str = ""
    tool_version: str = bounded_cir.__version__
    timestamp: str = Field(
        default_factory=lambda: datetime.datetime.now(datetime.timezone.utc).isoformat()
    )
    outputs: List[str] = []
    notes: Dict[str, Any] = {}

    @model_validator(mode="after")
    def validate_manifest(self):
        assert len(self.command) > 0, "command must be a non-empty string"
        assert self.seed >= 0, "seed must be non-negative"
        return self

    def save(self, file_path: str) -> None:
        write_json_file(self.model_dump(), file_path)

    @classmethod
    def load(cls, file_path: str) -> "RunManifest":
        return cls.model_validate(read_json_file(file_path))

    @staticmethod
    def looks_like_manifest(data: Dict[str, Any]) -> bool:
        return isinstance(data, dict) and "command" in data and "config" in data


def manifest_path_for(output_path: str) -> str:
    base, _ = os.path.splitext(output_path)
    return f"{base}.manifest.json"

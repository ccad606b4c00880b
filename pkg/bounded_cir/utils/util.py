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

import csv
import dataclasses
import io
import json
import os
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np

from bounded_cir.utils.constant import BOUNDED_CIR_CSV_FLOAT_FORMAT
from bounded_cir.utils.errors import ConfigError
from bounded_cir.utils.logging import logger


def read_json_file(file_path):
    with open(file_path, "r") as file:
        json_data = json.load(file)
    return json_data


def write_text_atomic(text: str, file_path: str) -> None:
    """Write `text` to `file_path` through a temporary sibling file."""
    directory = os.path.dirname(os.path.abspath(file_path))
    os.makedirs(directory, exist_ok=True)
    tmp_file = f"{file_path}.tmp"
    try:
        with open(tmp_file, "w", newline="") as f:
            f.write(text)
        os.replace(tmp_file, file_path)
    except Exception:
        if os.path.exists(tmp_file):
            os.remove(tmp_file)
        raise
    logger.info(f"Wrote {file_path}")


def write_json_file(data, file_path):
    write_text_atomic(json.dumps(data, indent=4, default=_json_default) + "\n", file_path)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


def format_value(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), BOUNDED_CIR_CSV_FLOAT_FORMAT)
    if isinstance(value, (np.integer,)):
        return str(int(value))
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def write_csv_file(
    header: Sequence[str], rows: Iterable[Sequence[Any]], file_path: Optional[str]
) -> str:
    """
    Render rows as CSV with full double precision and LF line endings.

    When `file_path` is None the text is only returned.
    """
    text = render_csv(header, rows)
    if file_path is not None:
        write_text_atomic(text, file_path)
    return text


def update_dataclass_with_dict(dc_instance, config_data):
    if config_data is None:
        raise ConfigError("Got null config.")
    for key, value in config_data.items():
        if not hasattr(dc_instance, key):
            raise ConfigError(
                f"Unknown config key '{key}' for {type(dc_instance).__name__}"
            )
        current_value = getattr(dc_instance, key)
        if dataclasses.is_dataclass(current_value):
            if value is None:
                continue
            if not isinstance(value, dict):
                raise ConfigError(f"Config section '{key}' must be a table")
            update_dataclass_with_dict(current_value, value)
        else:
            setattr(dc_instance, key, value)


def parse_float_list(text: str) -> List[float]:
    """
    Parse either a comma separated list `a,b,c` or a range `start:stop:step`.

    Ranges include `stop` when it lies on the grid.
    """
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
                raise ConfigError(f"Invalid range '{text}', expected start:stop:step")
            start, stop, step = parts
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(count)]
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise ConfigError(f"Cannot parse number list '{text}': {e}") from e


def block_generator(seed: int, *key: int) -> np.random.Generator:
    """
    Counter-based random stream addressed by `(seed, *key)`.

    Streams for distinct keys are statistically independent and do not depend
    on the order in which they are created.
    """
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=tuple(key)))
    )

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

import json
import os

import numpy as np
import pytest
from pydantic import ValidationError

from bounded_cir.utils.errors import ConfigError
from bounded_cir.utils.logging import logger
from bounded_cir.utils.manifest import RunManifest, manifest_path_for
from bounded_cir.utils.parallel import parallel_map, resolve_workers
from bounded_cir.utils.util import (
    block_generator,
    format_value,
    parse_float_list,
    render_csv,
    write_csv_file,
    write_json_file,
    write_text_atomic,
)


def test_csv_uses_full_precision_and_lf(tmp_path):
    text = render_csv(["t", "n"], [[0.1, np.int64(3)], [np.float64(1.0 / 3.0), 4]])
    assert text == "t,n\n0.10000000000000001,3\n0.33333333333333331,4\n"
    path = tmp_path / "out.csv"
    assert write_csv_file(["t"], [[2.5]], str(path)) == "t\n2.5\n"
    assert path.read_bytes() == b"t\n2.5\n"
    assert format_value(float("inf")) == "inf"


def test_atomic_write_leaves_no_temporary(tmp_path):
    path = tmp_path / "nested" / "result.txt"
    write_text_atomic("first\n", str(path))
    write_text_atomic("second\n", str(path))
    assert path.read_text() == "second\n"
    assert os.listdir(path.parent) == ["result.txt"]


def test_json_writer_handles_numpy(tmp_path):
    path = tmp_path / "data.json"
    write_json_file({"a": np.arange(3), "b": np.float64(0.5)}, str(path))
    assert json.loads(path.read_text()) == {"a": [0, 1, 2], "b": 0.5}


def test_parse_float_list():
    assert parse_float_list("15, 20") == [15.0, 20.0]
    values = parse_float_list("15:95:5")
    assert len(values) == 17
    assert values[0] == 15.0 and values[-1] == 95.0
    values = parse_float_list("0.1:1.0:0.1")
    assert len(values) == 10
    assert values[-1] == pytest.approx(1.0)
    for bad in ("a,b", "5:1:1", "0:1:0", "1:2"):
        with pytest.raises(ConfigError):
            parse_float_list(bad)


def test_block_streams_are_addressed_by_key():
    first = block_generator(7, 3).random(4)
    np.testing.assert_array_equal(first, block_generator(7, 3).random(4))
    assert not np.array_equal(first, block_generator(7, 4).random(4))
    assert not np.array_equal(first, block_generator(8, 3).random(4))
    assert not np.array_equal(block_generator(7, 3, 0).random(4), block_generator(7, 3, 1).random(4))


def test_parallel_map_keeps_item_order():
    items = list(range(-10, 10))
    expected = [abs(x) for x in items]
    assert parallel_map(abs, items, workers=1, progress=False) == expected
    assert parallel_map(abs, items, workers=3, progress=False) == expected
    assert parallel_map(abs, [], workers=3, progress=False) == []
    assert resolve_workers(0) >= 1
    assert resolve_workers(5) == 5


def test_manifest_round_trip(tmp_path):
    manifest = RunManifest(
        command="ber", config={"seed": 3}, seed=3, outputs=["ber.csv"], notes={"k": 1.5}
    )
    path = tmp_path / "ber.manifest.json"
    manifest.save(str(path))
    restored = RunManifest.load(str(path))
    assert restored == manifest
    assert RunManifest.looks_like_manifest(json.loads(path.read_text()))
    assert not RunManifest.looks_like_manifest({"geometry": {}})


def test_manifest_validation():
    with pytest.raises(ValidationError):
        RunManifest(command="ber", config={}, seed=-1)
    with pytest.raises(ValidationError):
        RunManifest(command="", config={}, seed=0)


def test_manifest_path_sits_next_to_output():
    assert manifest_path_for("out/run.csv") == "out/run.manifest.json"
    assert manifest_path_for("run") == "run.manifest.json"


def test_package_logger():
    assert logger.name == "bounded_cir"


if __name__ == "__main__":
    pytest.main([__file__])

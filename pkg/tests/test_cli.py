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
import io
import json

import pytest

from bounded_cir.cli import build_parser, flag_overrides, main, resolve_config
from bounded_cir.config import config_hash, load_config
from bounded_cir.utils.constant import ExitCode


def _rows(text):
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


def test_modes_csv_to_stdout(capsys):
    assert main(["modes", "--alpha", "0.1", "--count", "3"]) == ExitCode.OK
    rows = _rows(capsys.readouterr().out)
    assert [int(r["n"]) for r in rows] == [1, 2, 3]
    assert float(rows[0]["beta"]) == pytest.approx(0.6026, abs=5e-4)
    assert float(rows[0]["c"]) == pytest.approx(0.0603, abs=5e-4)


def test_modes_json_to_file(tmp_path):
    out = tmp_path / "modes.json"
    assert main(["modes", "--count", "4", "--format", "json", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["alpha"] == pytest.approx(0.1)
    assert [m["n"] for m in data["modes"]] == [1, 2, 3, 4]


def test_cir_with_unbounded_column(capsys):
    argv = ["cir", "--t-start", "0.1", "--t-stop", "1", "--n-points", "5", "--compare-unbounded"]
    assert main(argv) == 0
    text = capsys.readouterr().out
    lines = text.splitlines()
    assert lines[0] == "# kind: rate"
    assert lines[1] == "t_s,value,unbounded"
    rows = _rows(text)
    assert len(rows) == 5
    assert all(float(r["value"]) > 0.0 for r in rows)


def test_cumulative_json(capsys):
    assert main(["cumulative", "--n-points", "4", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["kind"] == "cumulative"
    assert data["params"]["r0"] == 20.0
    assert len(data["values"]) == 4
    assert all(0.0 <= v <= 1.0 for v in data["values"])


def test_peak_json_reports_deadline(capsys):
    assert main(["peak", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["tau_peak_s"] == pytest.approx(0.2083, rel=0.05)
    assert data["epsilon"] == 0.03
    assert data["t_star_s"] <= data["t_star_max_s"]
    assert data["t_star_over_tau_peak"] == pytest.approx(data["t_star_s"] / data["tau_peak_s"])


def test_peak_sweep_csv(capsys):
    assert main(["peak", "--r0-sweep", "20:40:10", "--compare-unbounded"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [float(r["r0_um"]) for r in rows] == [20.0, 30.0, 40.0]
    assert set(rows[0]) == {
        "r0_um",
        "tau_peak_s",
        "n_peak_per_s",
        "unbounded_tau_peak_s",
        "unbounded_n_peak_per_s",
    }
    peaks = [float(r["tau_peak_s"]) for r in rows]
    assert peaks == sorted(peaks)


def test_tstar_sweep_csv(capsys):
    assert main(["tstar", "--r0-sweep", "20,60", "--eps", "0.05", "--method", "exact"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 2
    assert float(rows[0]["t_star_s"]) < float(rows[1]["t_star_s"])


def test_montecarlo_replays_from_manifest(tmp_path):
    first = tmp_path / "first.csv"
    argv = [
        "montecarlo",
        "--particles", "500",
        "--t-end", "0.5",
        "--dt", "1e-3",
        "--bins", "10",
        "--seed", "5",
        "--compare",
        "--out", str(first),
    ]
    assert main(argv) == 0
    manifest_file = tmp_path / "first.manifest.json"
    manifest = json.loads(manifest_file.read_text())
    assert manifest["command"] == "montecarlo"
    assert manifest["seed"] == 5
    assert manifest["config_hash"] == config_hash(load_config(str(manifest_file)))
    assert "ks_distance" in manifest["notes"]
    assert manifest["notes"]["steps_per_bin"] == 50
    assert len(_rows(first.read_text())) == 10

    second = tmp_path / "second.csv"
    assert main(["montecarlo", "--config", str(manifest_file), "--out", str(second)]) == 0
    assert second.read_bytes() == first.read_bytes()
    replayed = json.loads((tmp_path / "second.manifest.json").read_text())
    assert replayed["config_hash"] == manifest["config_hash"]


def test_ber_sweep_csv_and_fraction_check(tmp_path):
    out = tmp_path / "ber.csv"
    argv = [
        "ber",
        "--d0", "5",
        "--r0", "10",
        "--D", "800",
        "--D0-values", "15,20",
        "--ts-grid", "0.5",
        "--molecules", "50",
        "--bits", "1000",
        "--pilot-bits", "500",
        "--match-fraction", "0.85",
        "--out", str(out),
    ]
    assert main(argv) == 0
    rows = _rows(out.read_text())
    assert [(r["channel_kind"], r["D0_um"]) for r in rows] == [
        ("bounded", "15"),
        ("bounded", "20"),
        ("unbounded", "inf"),
    ]
    notes = json.loads((tmp_path / "ber.manifest.json").read_text())["notes"]
    assert notes["fraction_match"]["fraction"] == 0.85
    assert notes["fraction_match"]["agrees"] is False


@pytest.mark.parametrize(
    "argv,code",
    [
        (["cir", "--d0", "30"], ExitCode.DEGENERATE_GEOMETRY),
        (["tstar", "--r0", "12", "--eps", "0.5"], ExitCode.CONVERGENCE_FAILURE),
        (["cumulative", "--t-start", "1e-7", "--n-points", "3"], ExitCode.NOT_CONVERGED),
        (["cir", "--n-points", "0"], ExitCode.CONFIG_ERROR),
        (["modes", "--alpha", "1.2"], ExitCode.DEGENERATE_GEOMETRY),
    ],
)
def test_exit_codes(argv, code):
    assert main(argv) == code


def test_flags_override_config_file(tmp_path):
    config_file = tmp_path / "run.toml"
    config_file.write_text("seed = 3\n\n[geometry]\nr0 = 30.0\nd0 = 5.0\n")
    args = build_parser().parse_args(["cir", "--config", str(config_file), "--r0", "40"])
    config = resolve_config(args)
    assert config.geometry.r0 == 40.0
    assert config.geometry.d0 == 5.0
    assert config.seed == 3


def test_flag_overrides_only_carry_given_flags():
    args = build_parser().parse_args(["ber", "--D0-values", "15,20", "--no-unbounded"])
    assert flag_overrides(args) == {
        "link": {"D0_values": [15.0, 20.0], "include_unbounded": False}
    }


def test_unknown_config_key_is_a_config_error(tmp_path):
    config_file = tmp_path / "bad.toml"
    config_file.write_text("[geometry]\nradius = 3.0\n")
    assert main(["cir", "--config", str(config_file)]) == ExitCode.CONFIG_ERROR


if __name__ == "__main__":
    pytest.main([__file__])

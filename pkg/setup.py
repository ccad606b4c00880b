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

import os

import setuptools
from setuptools import setup

with open(os.path.join(os.path.dirname(__file__), "requirements.txt")) as f:
    requirements = [line for line in f.read().splitlines() if line and not line.startswith("#")]

setup(
    name="bounded_cir",
    version="0.1.0",
    packages=setuptools.find_packages(include=["bounded_cir", "bounded_cir.*"]),
    package_data={"bounded_cir": ["**/*.toml"]},
    python_requires=">=3.10",
    install_requires=requirements,
    entry_points={"console_scripts": ["bounded-cir=bounded_cir.cli:main"]},
    zip_safe=False,
)

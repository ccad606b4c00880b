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

import concurrent.futures
import os
from typing import Callable, List, Sequence, TypeVar

from tqdm import tqdm

T = TypeVar("T")
R = TypeVar("R")


def resolve_workers(workers: int) -> int:
    """`0` means one worker per CPU."""
    if workers <= 0:
        return max(os.cpu_count() or 1, 1)
    return workers


def parallel_map(
    fn: Callable[[T], R],
    items: Sequence[T],
    workers: int = 1,
    desc: str = "",
    progress: bool = True,
) -> List[R]:
    """
    Apply `fn` to every item and return the results in item order.

    With more than one worker the calls run in a process pool; `fn` and the
    items must then be picklable. Result order never depends on completion order.
    """
    workers = min(resolve_workers(workers), max(len(items), 1))
    results: List[R] = [None] * len(items)  # type: ignore[list-item]
    with tqdm(total=len(items), desc=desc, disable=not progress) as pbar:
        if workers == 1:
            for i, item in enumerate(items):
                results[i] = fn(item)
                pbar.update(1)
            return results
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(fn, item): i for i, item in enumerate(items)}
            for future in concurrent.futures.as_completed(futures):
                results[futures[future]] = future.result()
                pbar.update(1)
    return results

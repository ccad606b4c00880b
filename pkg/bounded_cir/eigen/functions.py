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
Radial eigenfunctions of the diffusion problem between an absorbing sphere
(radius d0) and a concentric reflecting sphere (radius D0).

Radii are dimensionless, x = r / D0, and the shell ratio is alpha = d0 / D0.
Every mode is kappa0(z) = j0(z) + c y0(z) with z = beta x, written through
elementary trigonometric closed forms.
"""

import math
from typing import Union

import numpy as np

from bounded_cir.utils.constant import BOUNDED_CIR_COS_GUARD
from bounded_cir.utils.errors import DomainError

ArrayLike = Union[float, np.ndarray]


def _alpha_value(alpha) -> float:
    return float(getattr(alpha, "alpha", alpha))


def characteristic(beta: ArrayLike, alpha) -> ArrayLike:
    """
    Scalar eigen-equation h(beta) = sin(u beta) - beta cos(u beta), u = 1 - alpha.

    Its positive roots are exactly the betas for which a combination of j0 and
    y0 vanishes at x = alpha and has zero slope at x = 1.
    """
    u = 1.0 - _alpha_value(alpha)
    return np.sin(u * beta) - beta * np.cos(u * beta)


def characteristic_prime(beta: ArrayLike, alpha) -> ArrayLike:
    a = _alpha_value(alpha)
    u = 1.0 - a
    return -a * np.cos(u * beta) + u * beta * np.sin(u * beta)


def mode_coefficient(beta: float, alpha) -> float:
    """Weight c of y0 making kappa0 vanish at x = alpha."""
    z = beta * _alpha_value(alpha)
    if abs(math.cos(z)) > BOUNDED_CIR_COS_GUARD:
        return math.tan(z)
    # -j0(z) / y0(z)
    return -(math.sin(z) / z) / (-math.cos(z) / z)


def kappa0_of(z: ArrayLike, c: ArrayLike) -> ArrayLike:
    return (np.sin(z) - c * np.cos(z)) / z


def kappa0_prime_of(z: ArrayLike, c: ArrayLike) -> ArrayLike:
    """Derivative of kappa0 with respect to its argument z."""
    return ((z * np.cos(z) - np.sin(z)) + c * (z * np.sin(z) + np.cos(z))) / (z * z)


def kappa0(x: ArrayLike, mode) -> ArrayLike:
    """kappa0 of `mode` evaluated at dimensionless radius x."""
    return kappa0_of(mode.beta * np.asarray(x, dtype=float), mode.c)


def kappa0_prime(x: ArrayLike, mode) -> ArrayLike:
    """d kappa0 / dz at z = beta x, so d/dx kappa0(beta x) = beta * kappa0_prime(x)."""
    return kappa0_prime_of(mode.beta * np.asarray(x, dtype=float), mode.c)


def eta_of(m: float, z: ArrayLike, c: float) -> ArrayLike:
    z = np.asarray(z, dtype=float)
    scale = np.sqrt(2.0 / (np.pi * z))
    sin_z = np.sin(z)
    cos_z = np.cos(z)
    if m == 0.5:
        return scale * (sin_z - c * cos_z)
    if m == 1.5:
        return scale * (sin_z / z - cos_z - c * (cos_z / z + sin_z))
    if m == -0.5:
        return scale * (cos_z + c * sin_z)
    raise DomainError(f"eta is only defined for orders -1/2, 1/2 and 3/2, got {m}")


def eta(m: float, z: ArrayLike, mode) -> ArrayLike:
    """Half-integer cylinder function J_m(z) + c Y_m(z) of `mode`."""
    return eta_of(m, z, mode.c)


def norm_integral(beta: float, c: float, alpha) -> float:
    a = _alpha_value(alpha)

    def primitive(x: float) -> float:
        z = beta * x
        return (x * x / 2.0) * (
            eta_of(0.5, z, c) ** 2 - eta_of(1.5, z, c) * eta_of(-0.5, z, c)
        )

    return float(np.pi / (2.0 * beta) * (primitive(1.0) - primitive(a)))


def norm_In(mode, alpha) -> float:
    """Normalization integral of x^2 kappa0(beta x)^2 over [alpha, 1]."""
    return norm_integral(mode.beta, mode.c, alpha)

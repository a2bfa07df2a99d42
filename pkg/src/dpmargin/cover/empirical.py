# Copyright (c) 2024 dpmargin contributors
# All rights reserved.
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:
#
# * Redistributions of source code must retain the above copyright notice, this
#   list of conditions and the following disclaimer.
#
# * Redistributions in binary form must reproduce the above copyright notice,
#   this list of conditions and the following disclaimer in the documentation
#   and/or other materials provided with the distribution.
#
# * Neither the name of dpmargin nor the names of its
#   contributors may be used to endorse or promote products derived from
#   this software without specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

"""Empirical max-norm covers of truncated hypothesis classes.

For a sample x_1..x_m, a set F of hypotheses is a scale-cover of the
rho-truncated class if every hypothesis h has some f in F with
max_i |trunc(h(x_i)) - trunc(f(x_i))| <= scale. The covers built here only
look at the features, never at the labels."""

import attrs
import numpy as np
from abc import ABC, abstractmethod

from dpmargin.core.errors import CoverUnavailableError, ParameterError
from dpmargin.cover.ball import ball_cover


def truncate(u, rho):
    "rho-truncation: u clipped to [-rho, rho]."
    return np.clip(u, -rho, rho)


class HypothesisFamily(ABC):
    """Parametric hypothesis class. Families that can be covered implement
    parameter_grid(resolution) returning parameter vectors such that every
    admissible parameter lies within `resolution` (Euclidean) of a grid point,
    and output_lipschitz(X) bounding the output change per unit of parameter
    distance on the sample."""

    name = None

    @abstractmethod
    def evaluate(self, params, X):
        "Outputs of every parameter row on every sample point, shape (n_params, m)."
        pass

    def parameter_grid(self, resolution):
        raise CoverUnavailableError("cover unavailable for hypothesis family %s" % self.name)

    def output_lipschitz(self, X):
        raise CoverUnavailableError("cover unavailable for hypothesis family %s" % self.name)


class LinearFamily(HypothesisFamily):
    "Linear predictors x -> <w, x> with ||w|| <= lam."

    name = "linear"

    def __init__(self, d, lam, cap=None):
        self.d = int(d)
        self.lam = float(lam)
        self.cap = cap

    def evaluate(self, params, X):
        return np.asarray(params, dtype=np.float64) @ np.asarray(X, dtype=np.float64).T

    def parameter_grid(self, resolution):
        return ball_cover(self.d, self.lam, resolution, cap=self.cap).points

    def output_lipschitz(self, X):
        return float(np.linalg.norm(X, axis=1).max())


@attrs.frozen(eq=False)
class EmpiricalCover:
    params: np.ndarray
    outputs: np.ndarray
    rho: float
    scale: float

    def __len__(self):
        return self.params.shape[0]


def _greedy_select(outputs, radius):
    selected = [0]
    for i in range(1, outputs.shape[0]):
        dist = np.abs(outputs[selected] - outputs[i]).max(axis=1)
        if dist.min() > radius:
            selected.append(i)
    return np.asarray(selected)


def empirical_linf_cover(family, X, rho, scale=None):
    """Return a greedy near-minimal scale-cover (default scale rho/2) of the
    rho-truncated family on the sample points X.

    The parameter grid is fine enough that its truncated outputs are within
    scale/2 of any hypothesis; greedy deduplication at scale/2 then adds at most
    another scale/2."""
    if not rho > 0:
        raise ParameterError("rho must be positive")
    if scale is None:
        scale = rho / 2.0
    X = np.asarray(X, dtype=np.float64)
    lip = family.output_lipschitz(X)
    if lip > 0:
        grid = family.parameter_grid(scale / (2.0 * lip))
    else:
        grid = family.parameter_grid(np.inf)
    outputs = truncate(family.evaluate(grid, X), rho)
    keep = _greedy_select(outputs, scale / 2.0)
    return EmpiricalCover(params=grid[keep], outputs=outputs[keep], rho=float(rho), scale=float(scale))


def audit_empirical_cover(cover, family, X, params):
    "Largest max-norm distance from the truncated outputs of params to the cover."
    out = truncate(family.evaluate(params, X), cover.rho)
    dist = np.abs(out[:, None, :] - cover.outputs[None, :, :]).max(axis=2)
    return float(dist.min(axis=1).max())

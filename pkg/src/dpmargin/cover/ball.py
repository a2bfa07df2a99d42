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

import attrs
import functools
import numpy as np

from dpmargin.core.errors import CoverTooLargeError, ParameterError
from dpmargin.core.rng import make_rng
from dpmargin.util.basic import get_cover_cap, iter_row_chunks

CONSTRUCTION_AXIS_GRID = "axis_grid"
CONSTRUCTION_RANDOM_NET = "random_net"
cover_constructions = [CONSTRUCTION_AXIS_GRID, CONSTRUCTION_RANDOM_NET]

# number of random targets used to accept a random net
RANDOM_NET_CHECK_TRIALS = 2000


@attrs.frozen(eq=False)
class BallCover:
    """Finite gamma-cover of the Euclidean ball of the given radius in R^k.
    Points are the rows of a read-only array."""

    k: int
    radius: float
    gamma: float
    construction: str
    points: np.ndarray

    def __len__(self):
        return self.points.shape[0]

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def nearest(self, x):
        "Return (index, distance) of the cover point closest to x."
        d = np.linalg.norm(self.points - np.asarray(x, dtype=np.float64), axis=1)
        i = int(np.argmin(d))
        return i, float(d[i])


def uniform_ball(rng, n, k, radius):
    "Draw n points uniformly from the k-dimensional ball of the given radius."
    g = rng.standard_normal((n, k))
    g /= np.maximum(np.linalg.norm(g, axis=1, keepdims=True), 1e-300)
    return g * (radius * rng.random(n) ** (1.0 / k))[:, None]


def _power(base, k):
    "base^k as a float, inf when it overflows."
    with np.errstate(over="ignore"):
        return float(np.power(np.float64(base), k))


def axis_grid_bound(k, radius, gamma):
    "Upper bound (ceil(radius sqrt(k) / gamma) * 2 + 1)^k on the axis-grid cover size."
    return _power(np.ceil(radius * np.sqrt(k) / gamma) * 2 + 1, k)


def _axis_grid_layout(k, radius, gamma):
    pitch = 2.0 * gamma / np.sqrt(k)
    n = int(np.floor((radius + gamma) / pitch))
    return pitch, n, _power(2 * n + 1, k)


@functools.lru_cache(maxsize=32)
def _axis_grid_points(k, radius, gamma):
    pitch, n, _ = _axis_grid_layout(k, radius, gamma)
    coords = np.arange(-n, n + 1) * pitch
    grid = np.stack(np.meshgrid(*([coords] * k), indexing="ij"), axis=-1).reshape(-1, k)
    keep = np.linalg.norm(grid, axis=1) <= (radius + gamma) * (1 + 1e-12)
    points = np.ascontiguousarray(grid[keep])
    points.setflags(write=False)
    return points


def nearest_distances(points, targets, chunk_rows=256):
    "Distance from every target to its closest point."
    points = np.asarray(points, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    psq = np.sum(points * points, axis=1)
    ret = np.empty(targets.shape[0])
    for sl in iter_row_chunks(targets.shape[0], chunk_rows):
        t = targets[sl]
        d2 = np.sum(t * t, axis=1)[:, None] + psq[None, :] - 2.0 * t @ points.T
        ret[sl] = np.sqrt(np.maximum(d2.min(axis=1), 0.0))
    return ret


def audit_cover(points, radius, trials=10**4, seed=0):
    "Largest distance from a random point of the ball to its nearest cover point."
    points = np.asarray(points, dtype=np.float64)
    rng = make_rng(seed, "audit_cover")
    targets = uniform_ball(rng, trials, points.shape[1], radius)
    return float(nearest_distances(points, targets).max())


def _random_net(k, radius, gamma, cap, seed):
    rng = make_rng(seed, "random_net", k)
    batch = max(16, 4**k)
    points = np.zeros((1, k))
    while True:
        if audit_cover(points, radius, RANDOM_NET_CHECK_TRIALS, seed=int(rng.integers(1 << 62))) <= gamma:
            return points
        if points.shape[0] + batch > cap:
            raise CoverTooLargeError(points.shape[0] + batch, cap, "random net did not converge below the cap")
        points = np.concatenate([points, uniform_ball(rng, batch, k, radius)])


def ball_cover(k, radius, gamma, construction=CONSTRUCTION_AXIS_GRID, cap=None, seed=0):
    """Return a gamma-cover of the radius-ball in R^k.

    axis_grid lays a cubic lattice of pitch 2 gamma / sqrt(k) and keeps the
    lattice points of norm <= radius + gamma; rounding any point of the ball to
    the lattice moves it by at most gamma, so this is a cover in the worst case.
    random_net adds uniform points until a Monte-Carlo check passes.

    :param cap: maximum number of points, defaults to get_cover_cap()
    """
    if int(k) < 1:
        raise ParameterError("cover dimension must be >= 1")
    if not gamma > 0:
        raise ParameterError("cover radius gamma must be positive, got %s" % gamma)
    if radius < 0:
        raise ParameterError("ball radius must be nonnegative")
    if construction not in cover_constructions:
        raise ParameterError("unknown cover construction %s" % construction)
    k, radius, gamma = int(k), float(radius), float(gamma)
    if cap is None:
        cap = get_cover_cap()
    if gamma >= radius:
        points = np.zeros((1, k))
        points.setflags(write=False)
    elif construction == CONSTRUCTION_AXIS_GRID:
        _, _, est = _axis_grid_layout(k, radius, gamma)
        if est > cap:
            raise CoverTooLargeError(est, cap, "increase the cover radius or lower the dimension (k=%d)" % k)
        points = _axis_grid_points(k, radius, gamma)
    else:
        points = _random_net(k, radius, gamma, cap, seed)
        points.setflags(write=False)
    return BallCover(k=k, radius=radius, gamma=gamma, construction=construction, points=points)

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

import numpy as np

from dpmargin.core.errors import CoverTooLargeError, ParameterError
from dpmargin.cover.ball import ball_cover
from dpmargin.util.basic import get_cover_cap


class ProductCover:
    """gamma-cover of B^{k x N}(radius) x ... x B^{k x N}(radius) x B^{k x 1}(radius)
    with respect to sqrt(sum_j ||W_j||_F^2). Every factor is an axis-grid cover of
    the flattened matrix ball at radius gamma / sqrt(L), so the product distance
    to the nearest member is at most gamma.

    Members are addressed by a single integer (mixed radix over the factor
    covers), so consumers can shard range(len(cover))."""

    def __init__(self, L, k, N, radius, gamma, cap=None):
        if int(L) < 1 or int(k) < 1 or int(N) < 1:
            raise ParameterError("product cover needs L, k, N >= 1")
        if cap is None:
            cap = get_cover_cap()
        self.L, self.k, self.N = int(L), int(k), int(N)
        self.radius = float(radius)
        self.gamma = float(gamma)
        self.factor_gamma = self.gamma / np.sqrt(self.L)
        self.shapes = [(self.k, self.N)] * (self.L - 1) + [(self.k, 1)]
        self.factors = []
        for shp in self.shapes:
            c = ball_cover(shp[0] * shp[1], self.radius, self.factor_gamma, cap=cap)
            self.factors.append(c)
        self.sizes = tuple(len(c) for c in self.factors)
        total = float(np.prod([float(s) for s in self.sizes]))
        if total > cap:
            raise CoverTooLargeError(
                total, cap, "architecture too large for cover enumeration (L=%d, N=%d, k=%d)" % (self.L, self.N, self.k)
            )
        self.size = int(total)

    def __len__(self):
        return self.size

    def factor_points(self, j):
        "All members of factor j reshaped to its matrix shape, as an (n_j, rows, cols) array."
        return self.factors[j].points.reshape((-1,) + self.shapes[j])

    def index_tuple(self, i):
        if not (0 <= i < self.size):
            raise IndexError("product cover index %d out of range" % i)
        return tuple(int(x) for x in np.unravel_index(i, self.sizes))

    def __getitem__(self, i):
        idx = self.index_tuple(int(i))
        return tuple(self.factors[j].points[idx[j]].reshape(self.shapes[j]) for j in range(self.L))

    def __iter__(self):
        for i in range(self.size):
            yield self[i]


def product_cover(L, k, N, radius, gamma, cap=None):
    return ProductCover(L, k, N, radius, gamma, cap=cap)


def product_distance(weights_a, weights_b):
    "sqrt(sum_j ||A_j - B_j||_F^2) for two weight tuples."
    return float(np.sqrt(sum(np.sum((np.asarray(a) - np.asarray(b)) ** 2) for a, b in zip(weights_a, weights_b))))

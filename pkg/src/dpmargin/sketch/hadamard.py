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

from dpmargin.core.rng import make_rng
from dpmargin.sketch.base import Projection
from dpmargin.util.basic import iter_row_chunks, next_power_of_two, pad_columns_to

# upper bound on the number of doubles transformed at once
CHUNK_ELEMENTS = 1 << 22


def fwht_rows(X):
    """Unnormalized fast Walsh-Hadamard transform of every row of X, in
    Sylvester order, i.e. X @ scipy.linalg.hadamard(X.shape[1]). The row length
    must be a power of two."""
    X = np.array(X, dtype=np.float64)
    n, width = X.shape
    assert width == next_power_of_two(width), "Row length must be a power of two."
    h = 1
    while h < width:
        Y = X.reshape(n, width // (2 * h), 2, h)
        a = Y[:, :, 0, :]
        b = Y[:, :, 1, :]
        s = a + b
        t = a - b
        Y[:, :, 0, :] = s
        Y[:, :, 1, :] = t
        h *= 2
    return X


class FastHadamardProjection(Projection):
    """Subsampled randomized Hadamard transform Phi = S H D / sqrt(k): random
    sign flips D on the zero-padded input, an unnormalized Hadamard transform H
    and a uniform selection S of k rows (without replacement when k does not
    exceed the padded width). Entries of the implied matrix are +-1/sqrt(k),
    and applying it to a vector costs O(d log d + k)."""

    kind = "fast_hadamard"

    def __init__(self, d, k, seed):
        super().__init__(d, k, seed)
        self.padded_d = next_power_of_two(self.d)
        rng = make_rng(self.seed, self.kind)
        self.signs = rng.choice([-1.0, 1.0], size=self.padded_d)
        self.rows = rng.choice(self.padded_d, size=self.k, replace=self.k > self.padded_d)
        self.scale = 1.0 / np.sqrt(self.k)

    def _chunk_rows(self):
        return max(1, CHUNK_ELEMENTS // self.padded_d)

    def _apply(self, X):
        ret = np.empty((X.shape[0], self.k))
        for sl in iter_row_chunks(X.shape[0], self._chunk_rows()):
            Xp = pad_columns_to(X[sl], self.padded_d) * self.signs
            ret[sl] = fwht_rows(Xp)[:, self.rows] * self.scale
        return ret

    def _apply_transpose(self, W):
        c = W.shape[1]
        Z = np.zeros((c, self.padded_d))
        # repeated rows accumulate
        np.add.at(Z.T, self.rows, W)
        ret = np.empty((self.d, c))
        for sl in iter_row_chunks(c, self._chunk_rows()):
            ret[:, sl] = (fwht_rows(Z[sl]) * self.signs)[:, : self.d].T * self.scale
        return ret

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

"""
Guide to writing projections
----------------------------

* A projection is a seeded random linear map Phi from R^d to R^k and must
  inherit the Projection abstract base class.
* The constructor receives (d, k, seed) and draws everything it needs from
  dpmargin.core.rng streams derived from the seed, so that the same triple
  always yields the same map.
* apply(X) maps the rows of an n x d matrix, apply_transpose(W) maps a
  length-k vector or a k x c matrix back to R^d. The two must be exact
  adjoints of each other.
* Register the class in the projection_kinds dict of dpmargin.sketch.
"""

import numpy as np
from abc import ABC, abstractmethod

from dpmargin.core.errors import ParameterError


class Projection(ABC):
    """Base class for all JL-type projections. Subclasses fill in _apply and
    _apply_transpose; shape checking happens here."""

    kind = None

    def __init__(self, d, k, seed):
        super().__init__()
        if int(d) < 1 or int(k) < 1:
            raise ParameterError("projection dimensions must be >= 1, got d=%s k=%s" % (d, k))
        self.d = int(d)
        self.k = int(k)
        self.seed = int(seed)

    @abstractmethod
    def _apply(self, X):
        pass

    @abstractmethod
    def _apply_transpose(self, W):
        pass

    def apply(self, X):
        "Return Phi x for each row x of X (n x d), or for a single length-d vector."
        X = np.asarray(X, dtype=np.float64)
        single = X.ndim == 1
        X2 = X.reshape(1, -1) if single else X
        if X2.ndim != 2 or X2.shape[1] != self.d:
            raise ParameterError("expected input with %d columns, got shape %s" % (self.d, str(X.shape)))
        ret = self._apply(X2)
        return ret[0] if single else ret

    def apply_transpose(self, W):
        "Return Phi^T w for a length-k vector, or Phi^T W for a k x c matrix."
        W = np.asarray(W, dtype=np.float64)
        if W.shape[0] != self.k or W.ndim > 2:
            raise ParameterError("expected input with leading dimension %d, got shape %s" % (self.k, str(W.shape)))
        single = W.ndim == 1
        W2 = W.reshape(-1, 1) if single else W
        ret = self._apply_transpose(W2)
        return ret[:, 0] if single else ret

    def materialize(self):
        "Return the explicit k x d matrix of this projection."
        return self.apply(np.eye(self.d)).T

    def __repr__(self):
        return "%s(d=%d, k=%d, seed=%d)" % (type(self).__name__, self.d, self.k, self.seed)


def required_dim(m, beta, gamma, kind, constant=8.0):
    """Target dimension for which a JL map distorts the squared norms and pairwise
    inner products of m points by at most gamma/3 with probability 1 - beta.
    Dense maps need C log(m/beta) / gamma^2 rows, fast maps pay an extra
    log(m/(gamma beta)) factor."""
    if not (0 < beta < 1):
        raise ParameterError("beta must lie in (0, 1), got %s" % beta)
    if not (0 < gamma < 1):
        raise ParameterError("gamma must lie in (0, 1), got %s" % gamma)
    if int(m) < 1:
        raise ParameterError("m must be >= 1")
    base = constant * np.log(m / beta) / gamma**2
    if kind == "dense_rademacher":
        return int(np.ceil(base))
    elif kind == "fast_hadamard":
        return int(np.ceil(base * np.log(m / (gamma * beta))))
    else:
        raise ParameterError("unknown projection kind %s" % kind)


def jl_distortion(proj, U):
    """Return a dict with the largest relative squared-norm distortion and the
    largest inner-product error (normalized by the norms) of proj over the rows of U."""
    U = np.asarray(U, dtype=np.float64)
    P = proj.apply(U)
    norms = np.linalg.norm(U, axis=1)
    sq = np.sum(P * P, axis=1)
    nz = norms > 0
    norm_dist = np.abs(sq[nz] / norms[nz] ** 2 - 1.0)
    G = U @ U.T
    GP = P @ P.T
    denom = np.outer(norms, norms)
    with np.errstate(divide="ignore", invalid="ignore"):
        ip_err = np.where(denom > 0, np.abs(GP - G) / denom, 0.0)
    np.fill_diagonal(ip_err, 0.0)
    return {
        "max_norm_distortion": float(norm_dist.max()) if norm_dist.size else 0.0,
        "max_inner_product_error": float(ip_err.max()),
    }

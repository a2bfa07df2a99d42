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

"""Pure-DP learner for uniform-width feed-forward sigmoid networks.

Layer j of a network acts through fixed random projections: its effective
weight matrix is Phi_{j-1}^T W~_j, with Phi_0 a k x d and Phi_j (j >= 1) a
k x N dense Rademacher map. The learner enumerates a product cover of the
factors W~_1..W~_L and selects one with the exponential mechanism on the
empirical zero-one error. Enumeration limits this to very small L, N and k."""

import attrs
import numpy as np

from dpmargin.core.errors import CoverTooLargeError, ParameterError
from dpmargin.core.losses import margin_risk, zero_one_risk
from dpmargin.core.rng import derive_seed
from dpmargin.cover.product import ProductCover
from dpmargin.learner.base import CoverLearner
from dpmargin.sketch import sample_projection

# bound on the number of floats in one intermediate activation block
ACTIVATION_CHUNK_ELEMENTS = 1 << 22


def sigmoid_eta(a, eta):
    "(1 - exp(-eta a / 2)) / (1 + exp(-eta a / 2)), computed as tanh(eta a / 4)."
    return np.tanh(eta * np.asarray(a, dtype=np.float64) / 4.0)


@attrs.frozen
class NetworkArch:
    layers: int = attrs.field(default=2, converter=int)
    width: int = attrs.field(default=2, converter=int)
    eta: float = attrs.field(default=1.0, converter=float)

    def __attrs_post_init__(self):
        if self.layers < 1 or self.width < 1:
            raise ParameterError("network needs layers >= 1 and width >= 1")
        if not self.eta > 0:
            raise ParameterError("activation slope eta must be positive")


def _factors_converter(factors):
    ret = []
    for f in factors:
        f = np.array(f, dtype=np.float64, copy=True)
        if f.ndim == 1:
            f = f.reshape(-1, 1)
        f.setflags(write=False)
        ret.append(f)
    return tuple(ret)


@attrs.frozen(eq=False)
class NeuralNet:
    """Network with factors W~_1 (k x N), ..., W~_L (k x 1) and projections
    Phi_0 .. Phi_{L-1}. There is no activation on the output layer."""

    eta: float
    factors: tuple = attrs.field(converter=_factors_converter)
    projections: tuple = attrs.field(converter=tuple)
    provenance: dict = attrs.field(factory=dict)

    def __attrs_post_init__(self):
        if len(self.factors) != len(self.projections) or len(self.factors) < 1:
            raise ParameterError("network needs one projection per layer")
        for j, (f, p) in enumerate(zip(self.factors, self.projections)):
            if f.shape[0] != p.k:
                raise ParameterError("layer %d: factor has %d rows, projection has k=%d" % (j, f.shape[0], p.k))
            if j > 0 and p.d != self.factors[j - 1].shape[1]:
                raise ParameterError("layer %d: projection input %d does not match width" % (j, p.d))
        if self.factors[-1].shape[1] != 1:
            raise ParameterError("the output layer must have a single unit")

    @property
    def L(self):
        return len(self.factors)

    @property
    def N(self):
        return self.factors[0].shape[1] if self.L > 1 else 1

    @property
    def k(self):
        return self.factors[0].shape[0]

    @property
    def d(self):
        return self.projections[0].d

    def effective_weights(self):
        "Phi_{j-1}^T W~_j for every layer."
        return [p.apply_transpose(f) for f, p in zip(self.factors, self.projections)]

    def decision_function(self, X):
        return forward(self, X)

    def predict(self, X):
        return np.where(self.decision_function(X) > 0, 1, -1)

    def scores(self, dataset):
        return dataset.labels * self.decision_function(dataset.features)


def forward(net, X):
    "Network output for one input vector or for every row of X."
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    v = X.reshape(1, -1) if single else X
    for j, (f, p) in enumerate(zip(net.factors, net.projections)):
        a = p.apply(v) @ f
        v = sigmoid_eta(a, net.eta) if j < net.L - 1 else a[:, 0]
    return v[0] if single else v


def dense_forward(weights, X, eta):
    "Output of the plain network with weight matrices W_1 (d x N), ..., W_L (N x 1)."
    v = np.atleast_2d(np.asarray(X, dtype=np.float64))
    for j, W in enumerate(weights):
        a = v @ np.asarray(W, dtype=np.float64).reshape(v.shape[1], -1)
        v = sigmoid_eta(a, eta) if j < len(weights) - 1 else a[:, 0]
    return v


def compressed_network(weights, projections, eta):
    "The network with effective weights Phi_{j-1}^T Phi_{j-1} W_j, i.e. factors Phi_{j-1} W_j."
    factors = [p.apply(np.asarray(W, dtype=np.float64).reshape(p.d, -1).T).T for W, p in zip(weights, projections)]
    return NeuralNet(eta=float(eta), factors=factors, projections=projections)


def nearest_cover_member(cover, factors):
    "Return (index, product distance) of the cover member closest to the given factors."
    idx, sq = [], 0.0
    for j, f in enumerate(factors):
        i, dist = cover.factors[j].nearest(np.asarray(f, dtype=np.float64).reshape(-1))
        idx.append(i)
        sq += dist**2
    return int(np.ravel_multi_index(tuple(idx), cover.sizes)), float(np.sqrt(sq))


def sample_network_projections(d, k, N, L, seed):
    ret = [sample_projection("dense_rademacher", d, k, derive_seed(seed, "projection", 0))]
    for j in range(1, L):
        ret.append(sample_projection("dense_rademacher", N, k, derive_seed(seed, "projection", j)))
    return tuple(ret)


@attrs.frozen(eq=False)
class NetworkCandidates:
    projections: tuple
    cover: ProductCover

    def __len__(self):
        return len(self.cover)


def cover_margins(cands, dataset, eta):
    """y_i h(x_i) for every cover member (rows, in cover index order) and
    every sample point (columns)."""
    cover, projs = cands.cover, cands.projections
    m, L = dataset.m, cover.L
    z0 = projs[0].apply(dataset.features)
    last = cover.factor_points(L - 1)[:, :, 0]
    if L == 1:
        return (z0 @ last.T).T * dataset.labels
    first = cover.factor_points(0)
    rest = int(np.prod(cover.sizes[1:]))
    chunk = max(1, ACTIVATION_CHUNK_ELEMENTS // (m * max(rest, cover.N)))
    ret = np.empty((len(cover), m))
    for start in range(0, first.shape[0], chunk):
        stop = min(start + chunk, first.shape[0])
        H = projs[1].apply(sigmoid_eta(np.einsum("mk,pkn->pmn", z0, first[start:stop]), eta).reshape(-1, cover.N))
        H = H.reshape(-1, m, cover.k)
        for j in range(1, L - 1):
            A = np.einsum("pmk,qkn->pqmn", H, cover.factor_points(j)).reshape(-1, m, cover.N)
            H = projs[j + 1].apply(sigmoid_eta(A, eta).reshape(-1, cover.N)).reshape(-1, m, cover.k)
        out = np.einsum("pmk,qk->pqm", H, last).reshape(-1, m)
        ret[start * rest : stop * rest] = out * dataset.labels
    return ret


class NeuralNetLearner(CoverLearner):
    name = "nn"
    bound_kind = "F5_nn"

    def __init__(self, priv, marg, beta=0.1, constants=None, progress=False, arch=None):
        super().__init__(priv, marg, beta, constants, progress)
        self.arch = arch if arch is not None else NetworkArch()

    def projection_dim(self, r):
        a = self.arch
        k = self.constants.nn_k_constant * r**2 * (2 * a.eta * self.marg.lam) ** (2 * a.layers) / self.marg.rho**2
        return max(1, int(np.ceil(k)))

    def cover_gamma(self, r):
        a = self.arch
        return self.constants.nn_gamma_constant * self.marg.rho / (r * (4 * a.eta * self.marg.lam) ** a.layers)

    def output_bound(self, dataset):
        if self.arch.layers == 1:
            return self.marg.lam * dataset.radius_r
        return 2.0 * self.marg.lam * np.sqrt(self.arch.width)

    def bound_stats(self, dataset):
        return attrs.evolve(
            super().bound_stats(dataset), delta=0.0, layers=self.arch.layers, width=self.arch.width, eta=self.arch.eta
        )

    def candidates(self, dataset, seed):
        r = max(dataset.radius_r, np.finfo(np.float64).tiny)
        k = self.projection_dim(r)
        a = self.arch
        try:
            cover = ProductCover(a.layers, k, a.width, 2 * self.marg.lam, self.cover_gamma(r), cap=self.constants.cover_cap)
        except CoverTooLargeError as e:
            raise CoverTooLargeError(
                e.estimated_size,
                e.cap,
                "architecture too large for cover enumeration (L=%d, N=%d, k=%d)" % (a.layers, a.width, k),
            )
        projs = sample_network_projections(dataset.d, k, a.width, a.layers, seed)
        return NetworkCandidates(projections=projs, cover=cover)

    def candidate_scores(self, cands, dataset):
        return -zero_one_risk(cover_margins(cands, dataset, self.arch.eta), axis=1)

    def model_for(self, cands, index, provenance):
        provenance = dict(provenance, k=cands.cover.k, gamma=cands.cover.gamma, layers=self.arch.layers)
        provenance.update(width=self.arch.width, eta=self.arch.eta)
        provenance["projection_seeds"] = [p.seed for p in cands.projections]
        return NeuralNet(eta=self.arch.eta, factors=cands.cover[index], projections=cands.projections, provenance=provenance)

    def empirical_statistics(self, dataset, rhos):
        """Min rho-margin risk over the union of the covers the learner would use
        at every grid level. Levels whose cover exceeds the cap are left out."""
        rhos = np.asarray(rhos, dtype=np.float64)
        ret = np.full(rhos.size, np.inf)
        last_error = None
        for rho in rhos:
            learner = self.with_margin(rho)
            try:
                cands = learner.candidates(dataset, derive_seed(0, "statistics"))
            except CoverTooLargeError as e:
                last_error = e
                continue
            margins = cover_margins(cands, dataset, self.arch.eta)
            vals = np.array([margin_risk(margins, t, axis=1).min() for t in rhos])
            ret = np.minimum(ret, vals)
        if not np.all(np.isfinite(ret)):
            raise last_error
        return ret


def train_nn_pure_dp(S, arch, priv, marg, beta=0.1, seed=0, constants=None):
    "eps-DP network learner over a product cover of the projected weight factors."
    return NeuralNetLearner(priv, marg, beta, constants, arch=arch).train(S, seed)

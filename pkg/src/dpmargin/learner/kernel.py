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

"""Private classification with shift-invariant kernels through random Fourier
features. The data is mapped through psi(x) = (r/sqrt(D)) (cos<w_1,x>, sin<w_1,x>, ...)
and handed to the efficient linear learner; the resulting predictor is the
finite-dimensional function x -> <w, psi(x)>."""

import attrs
import numpy as np
import warnings

from dpmargin.analysis.erm_oracle import hinge_erm_grid
from dpmargin.core.errors import KernelNotImplementedError, ParameterError
from dpmargin.core.params import MarginParams
from dpmargin.core.rng import derive_seed, make_rng
from dpmargin.learner.base import Learner
from dpmargin.learner.linear import EfficientLinearLearner
from dpmargin.util.basic import iter_row_chunks, next_power_of_two

KERNEL_GAUSSIAN = "gaussian"
kernel_kinds = [KERNEL_GAUSSIAN]

# bound on rows * padded feature dimension held in memory at once
FEATURE_CHUNK_ELEMENTS = 1 << 23
# number of frequencies used when evaluating g_rho for margin selection
STATISTICS_D = 2048


@attrs.frozen
class KernelSpec:
    "Shift-invariant kernel K(x, x') = r^2 kbar(x - x'), currently only the Gaussian."

    kind: str = KERNEL_GAUSSIAN
    bandwidth: float = attrs.field(default=1.0, converter=float)
    r: float = attrs.field(default=1.0, converter=float)

    def __attrs_post_init__(self):
        if self.kind not in kernel_kinds:
            raise KernelNotImplementedError("kernel not implemented: %s, expected one of %s" % (self.kind, kernel_kinds))
        if not self.bandwidth > 0:
            raise ParameterError("kernel bandwidth must be positive")
        if not self.r > 0:
            raise ParameterError("kernel radius r must be positive")


def _omega_converter(x):
    x = np.array(x, dtype=np.float64, copy=True)
    x.setflags(write=False)
    return x


@attrs.frozen(eq=False)
class RFFMap:
    """Random Fourier feature map with frequencies omega (D x d). Works as a
    feature map for EfficientLinearLearner.train (dim, radius, chunk_rows,
    transform)."""

    spec: KernelSpec
    omega: np.ndarray = attrs.field(converter=_omega_converter)
    seed: int = attrs.field(default=0, converter=int)

    @property
    def D(self):
        return self.omega.shape[0]

    @property
    def d(self):
        return self.omega.shape[1]

    @property
    def dim(self):
        return 2 * self.D

    @property
    def radius(self):
        return self.spec.r

    @property
    def chunk_rows(self):
        return max(1, FEATURE_CHUNK_ELEMENTS // next_power_of_two(self.dim))

    def transform(self, X):
        return apply_rff(self, X)


def sample_rff(spec, D, d, seed):
    "Draw D frequencies from the spectral density of spec in dimension d."
    if int(D) < 1 or int(d) < 1:
        raise ParameterError("RFF needs D >= 1 and d >= 1, got D=%s d=%s" % (D, d))
    if spec.kind == KERNEL_GAUSSIAN:
        omega = make_rng(seed, "rff", spec.kind).normal(0.0, 1.0 / spec.bandwidth, size=(int(D), int(d)))
    else:
        raise KernelNotImplementedError("kernel not implemented: %s" % spec.kind)
    return RFFMap(spec=spec, omega=omega, seed=seed)


def apply_rff(rff, X):
    "Feature vectors with interleaved cos/sin per frequency, scaled r/sqrt(D). Accepts one vector or rows."
    X = np.asarray(X, dtype=np.float64)
    single = X.ndim == 1
    X2 = X.reshape(1, -1) if single else X
    if X2.ndim != 2 or X2.shape[1] != rff.d:
        raise ParameterError("expected input with %d columns, got shape %s" % (rff.d, str(X.shape)))
    Z = X2 @ rff.omega.T
    ret = np.empty((X2.shape[0], 2 * rff.D))
    ret[:, 0::2] = np.cos(Z)
    ret[:, 1::2] = np.sin(Z)
    ret *= rff.spec.r / np.sqrt(rff.D)
    return ret[0] if single else ret


def gaussian_kernel(spec, X, Y):
    "Exact kernel matrix r^2 exp(-||x - y||^2 / (2 bandwidth^2))."
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    sq = np.sum(X**2, axis=1)[:, None] + np.sum(Y**2, axis=1)[None, :] - 2.0 * X @ Y.T
    return spec.r**2 * np.exp(-np.maximum(sq, 0.0) / (2.0 * spec.bandwidth**2))


def rff_kernel_error(rff, X):
    "Largest off-diagonal |<psi(x_i), psi(x_j)> - K(x_i, x_j)| on the rows of X."
    P = apply_rff(rff, X)
    err = np.abs(P @ P.T - gaussian_kernel(rff.spec, X, X))
    np.fill_diagonal(err, 0.0)
    return float(err.max())


def rff_tolerance(r, m, beta, D):
    "High-probability bound 2 r^2 sqrt(log(m/beta)/D) on rff_kernel_error."
    return 2.0 * r**2 * np.sqrt(np.log(m / beta) / D)


def rff_dimension(m, beta, cap):
    "Returns (D, cap_bound) with D = ceil(m^2 log(2m/beta)) limited to cap."
    D = int(np.ceil(m**2 * np.log(2.0 * m / beta)))
    return min(D, int(cap)), D > cap


@attrs.frozen(eq=False)
class KernelPredictor:
    "h(x) = <weights, psi(x)>; the map is reproducible from (spec, seed, D, d)."

    rff: RFFMap
    weights: np.ndarray = attrs.field(converter=_omega_converter)
    provenance: dict = attrs.field(factory=dict)

    def __attrs_post_init__(self):
        if self.weights.shape != (self.rff.dim,):
            raise ParameterError("kernel predictor needs %d weights, got %s" % (self.rff.dim, self.weights.shape))

    @property
    def d(self):
        return self.rff.d

    def decision_function(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        ret = np.empty(X.shape[0])
        for sl in iter_row_chunks(X.shape[0], self.rff.chunk_rows):
            ret[sl] = apply_rff(self.rff, X[sl]) @ self.weights
        return ret

    def predict(self, X):
        return np.where(self.decision_function(X) > 0, 1, -1)

    def scores(self, dataset):
        return dataset.labels * self.decision_function(dataset.features)


class KernelLearner(Learner):
    name = "kernel"
    bound_kind = "F3_kernel"

    def __init__(self, priv, marg, beta=0.1, constants=None, progress=False, kernel=None):
        super().__init__(priv, marg, beta, constants, progress)
        self.kernel = kernel if kernel is not None else KernelSpec()

    def output_bound(self, dataset):
        return self.marg.lam * self.kernel.r

    def bound_stats(self, dataset):
        return attrs.evolve(super().bound_stats(dataset), r=self.kernel.r)

    def train(self, dataset, seed):
        D, capped = rff_dimension(dataset.m, self.beta, self.constants.rff_cap)
        if capped:
            warnings.warn("RFF dimension capped at rff_cap=%d" % D)
        rff = sample_rff(self.kernel, D, dataset.d, derive_seed(seed, "rff"))
        inner = EfficientLinearLearner(
            self.priv, MarginParams(self.marg.rho, 2.0 * self.marg.lam), self.beta / 2.0, self.constants, self.progress
        )
        linear = inner.train(dataset, derive_seed(seed, "efficient"), feature_map=rff)
        provenance = dict(linear.provenance, algo=self.name, seed=int(seed), D=D, D_cap_bound=int(capped))
        provenance.update(kernel=self.kernel.kind, bandwidth=self.kernel.bandwidth, kernel_r=self.kernel.r)
        provenance["rff_seed"] = rff.seed
        provenance["d"] = dataset.d
        provenance["feature_dim"] = rff.dim
        provenance["lambda"] = self.marg.lam
        provenance["beta"] = self.beta
        return KernelPredictor(rff=rff, weights=linear.weights, provenance=provenance)

    def empirical_statistics(self, dataset, rhos):
        "Min rho-hinge risk over B(lam) in a fixed, data-independent RFF space of reduced dimension."
        rff = sample_rff(self.kernel, STATISTICS_D, dataset.d, derive_seed(0, "statistics"))
        X = apply_rff(rff, dataset.features)
        return hinge_erm_grid(X, dataset.labels, rhos, self.marg.lam, warn=True)["values"]


def train_kernel_dp(S, spec, priv, marg, beta=0.1, seed=0, constants=None):
    "(eps, delta)-DP kernel classifier; marg.lam bounds the RKHS norm."
    return KernelLearner(priv, marg, beta, constants, kernel=spec).train(S, seed)

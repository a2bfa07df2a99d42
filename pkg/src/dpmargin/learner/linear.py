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

"""Private linear classification.

PureLinearLearner: eps-DP. Sketch the data with a dense Rademacher JL map,
cover the ball B^k(2 lam) and select a cover point with the exponential
mechanism on the sketched empirical error; output Phi^T w~.

EfficientLinearLearner: (eps, delta)-DP. Sketch with a fast Hadamard JL map,
project the sketched points onto B^k(2r), run dp_erm_gll over B^k(2 lam) on
the rho-hinge loss and output Phi^T w~.

Returned weights live in the input space and are not constrained to norm lam."""

import attrs
import warnings
import numpy as np
from tqdm import tqdm

from dpmargin.analysis.erm_oracle import hinge_erm_grid, margin_erm
from dpmargin.core.dataset import Dataset
from dpmargin.core.errors import CoverTooLargeError, ParameterError
from dpmargin.core.losses import hinge_risk, smoothed_hinge_grad, zero_one_risk
from dpmargin.core.params import MarginParams, check_beta
from dpmargin.core.rng import derive_seed, make_rng
from dpmargin.cover.ball import ball_cover
from dpmargin.learner.base import CoverLearner, Learner
from dpmargin.mechanism import ScoredCandidates, exponential_mechanism, gaussian_sigma
from dpmargin.sketch import sample_projection
from dpmargin.util.basic import iter_row_chunks, project_rows_to_ball, project_to_ball
from dpmargin.util.config import AnalysisConstants

# bound on m * cover_chunk when scoring cover points
SCORE_CHUNK_ELEMENTS = 1 << 22


def _weights_converter(w):
    w = np.array(w, dtype=np.float64, copy=True).reshape(-1)
    w.setflags(write=False)
    return w


@attrs.frozen(eq=False)
class LinearModel:
    """Linear predictor h(x) = <w, x> in the input space, with a provenance
    record (algorithm, seeds, k, mechanism trace)."""

    weights: np.ndarray = attrs.field(converter=_weights_converter)
    provenance: dict = attrs.field(factory=dict)

    def __attrs_post_init__(self):
        if not np.all(np.isfinite(self.weights)):
            raise ParameterError("model weights must be finite")

    @property
    def d(self):
        return self.weights.size

    def decision_function(self, X):
        return np.asarray(X, dtype=np.float64) @ self.weights

    def predict(self, X):
        return np.where(self.decision_function(X) > 0, 1, -1)

    def scores(self, dataset):
        "Margins y_i h(x_i)."
        return dataset.labels * self.decision_function(dataset.features)


def score_cover_zero_one(features, labels, points):
    "Empirical zero-one risk of every row of points as a linear predictor, chunked over points."
    m = features.shape[0]
    ret = np.empty(points.shape[0])
    chunk = max(1, SCORE_CHUNK_ELEMENTS // m)
    for sl in iter_row_chunks(points.shape[0], chunk):
        ret[sl] = zero_one_risk((features @ points[sl].T) * labels[:, None], axis=0)
    return ret


@attrs.frozen(eq=False)
class LinearCandidates:
    projection: object
    cover: object

    def __len__(self):
        return len(self.cover)


class PureLinearLearner(CoverLearner):
    name = "pure-linear"
    bound_kind = "F1_pure_linear"

    def projection_dim(self, m, r):
        lam, rho = self.marg.lam, self.marg.rho
        return max(1, int(np.ceil(self.constants.pure_k_constant * lam**2 * r**2 * np.log(m / self.beta) / rho**2)))

    def cover_gamma(self, r):
        return self.marg.rho / (10.0 * r)

    def _check(self, dataset):
        self.priv.require_pure()
        r = dataset.radius_r
        if not (0 < self.marg.rho <= self.marg.lam * r):
            raise ParameterError("requires 0 < rho <= lambda * r = %g, got rho=%g" % (self.marg.lam * r, self.marg.rho))

    def candidates(self, dataset, seed):
        "Projection and cover; they depend on (m, d, r) and the seed only."
        self._check(dataset)
        r = dataset.radius_r
        k = self.projection_dim(dataset.m, r)
        try:
            cover = ball_cover(k, 2 * self.marg.lam, self.cover_gamma(r), cap=self.constants.cover_cap)
        except CoverTooLargeError as e:
            hint = "k=%d; use a larger rho or a smaller lambda*r/rho (now %g)" % (k, self.marg.lam * r / self.marg.rho)
            raise CoverTooLargeError(e.estimated_size, e.cap, hint)
        proj = sample_projection("dense_rademacher", dataset.d, k, derive_seed(seed, "projection"))
        return LinearCandidates(projection=proj, cover=cover)

    def candidate_scores(self, cands, dataset):
        sketched = cands.projection.apply(dataset.features)
        return -score_cover_zero_one(sketched, dataset.labels, cands.cover.points)

    def model_for(self, cands, index, provenance):
        w_tilde = cands.cover.points[index]
        provenance = dict(provenance, k=cands.projection.k, d=cands.projection.d, projection=cands.projection.kind)
        provenance["projection_seed"] = cands.projection.seed
        return LinearModel(cands.projection.apply_transpose(w_tilde), provenance)

    def empirical_statistics(self, dataset, rhos):
        return margin_erm(dataset.features, dataset.labels, rhos, self.marg.lam)["values"]

    def bound_stats(self, dataset):
        return attrs.evolve(super().bound_stats(dataset), delta=0.0)


def train_pure_dp(S, priv, marg, beta=0.1, seed=0, constants=None):
    "eps-DP linear learner over a cover of the sketched parameter ball."
    return PureLinearLearner(priv, marg, beta, constants).train(S, seed)


@attrs.frozen
class DpErmConfig:
    """Parameters of the private GLL solver with confidence boosting: M rounds at
    (eps', delta') = (eps / (4 M log(2M/delta)), delta^2 / (4 M log(2M/delta))),
    each running `steps` noisy projected gradient steps on the smoothed
    rho-hinge over B^k(radius)."""

    rounds: int
    eps_inner: float
    delta_inner: float
    steps: int
    step_size: float
    smoothing: float
    radius: float
    rho: float
    sigma: float
    l2_sensitivity: float
    epsilon: float
    delta: float
    r_tilde: float

    @classmethod
    def from_params(cls, m, k, r_tilde, priv, marg, beta, constants=None):
        constants = constants or AnalysisConstants()
        M = max(1, int(np.ceil(np.log(2.0 / beta))))
        log_term = np.log(2.0 * M / priv.delta)
        eps_inner = priv.epsilon / (4.0 * M * log_term)
        delta_inner = priv.delta**2 / (4.0 * M * log_term)
        steps = constants.erm_steps if constants.erm_steps > 0 else int(np.ceil(np.sqrt(m))) + 50
        # replacing one record moves the averaged gradient by at most 2 r~ / (rho m)
        l2_sens = 2.0 * r_tilde / (marg.rho * m)
        sigma = gaussian_sigma(eps_inner, delta_inner, l2_sens, steps)
        G = r_tilde / marg.rho
        step_size = 2.0 * marg.lam / (np.sqrt(steps) * max(np.sqrt(G**2 + k * sigma**2), 1e-300))
        return cls(
            rounds=M,
            eps_inner=eps_inner,
            delta_inner=delta_inner,
            steps=steps,
            step_size=step_size,
            smoothing=marg.rho / np.sqrt(m),
            radius=marg.lam,
            rho=marg.rho,
            sigma=sigma,
            l2_sensitivity=l2_sens,
            epsilon=priv.epsilon,
            delta=priv.delta,
            r_tilde=r_tilde,
        )

    def selection_sensitivity(self, m):
        "Sensitivity of the empirical rho-hinge risk over B^k(radius) on B^k(r~)."
        ratio = self.radius * self.r_tilde / self.rho
        return min(2.0 * ratio, 1.0 + ratio) / m


def _noisy_gd(X, y, cfg, rng):
    m, k = X.shape
    w = np.zeros(k)
    acc = np.zeros(k)
    n_acc = 0
    for t in range(cfg.steps):
        u = y * (X @ w)
        g = X.T @ (y * smoothed_hinge_grad(u, cfg.rho, cfg.smoothing)) / m
        g = g + rng.normal(0.0, cfg.sigma, size=k)
        w = project_to_ball(w - cfg.step_size * g, cfg.radius)
        if t >= cfg.steps // 2:
            acc += w
            n_acc += 1
    return acc / n_acc


def _dp_erm_run(S, priv, marg, beta, seed, constants=None, progress=False):
    priv.require_approx(S.m)
    beta = check_beta(beta)
    if not S.radius_r > 0:
        raise ParameterError("requires data radius r > 0, got r=%g" % S.radius_r)
    cfg = DpErmConfig.from_params(S.m, S.d, S.radius_r, priv, marg, beta, constants)
    X = S.features
    y = S.labels.astype(np.float64)
    candidates = []
    for t in tqdm(range(cfg.rounds), desc="Boosting rounds", disable=not progress):
        rng = make_rng(seed, "dp_erm", "round", t)
        idx = rng.integers(0, S.m, size=S.m)
        candidates.append(_noisy_gd(X[idx], y[idx], cfg, rng))
    risks = np.array([hinge_risk(y * (X @ w), cfg.rho) for w in candidates])
    scored = ScoredCandidates(-risks, sensitivity=cfg.selection_sensitivity(S.m))
    choice = exponential_mechanism(scored, priv.epsilon / 2.0, make_rng(seed, "dp_erm", "select"))
    trace = {
        "rounds": cfg.rounds,
        "eps_inner": cfg.eps_inner,
        "delta_inner": cfg.delta_inner,
        "sigma": cfg.sigma,
        "steps": cfg.steps,
        "gradient_evaluations": cfg.rounds * cfg.steps * S.m,
        "boost_selected": choice,
    }
    return candidates[choice], trace


def dp_erm_gll(S, priv, marg, beta=0.1, seed=0, constants=None, progress=False):
    """(eps, delta)-DP minimization of the empirical rho-hinge risk over
    B^k(marg.lam) for data in B^k(S.radius_r). Each of M rounds resamples m
    points with replacement and runs the noisy solver at (eps', delta'); the
    exponential mechanism at eps/2 picks the round with the lowest hinge risk.
    Returns the length-k weights."""
    return _dp_erm_run(S, priv, marg, beta, seed, constants, progress)[0]


class EfficientLinearLearner(Learner):
    name = "eff-linear"
    bound_kind = "F2_eff_linear"

    def projection_dim(self, m):
        "Returns (k, cap_bound)."
        eps, delta = self.priv.epsilon, self.priv.delta
        k = eps * m * np.log(m / self.beta) / (np.log(1.0 / delta) ** 1.5 * np.log(1.0 / self.beta))
        k = max(1, int(np.ceil(k)))
        cap = self.constants.eff_k_cap
        return min(k, cap), k > cap

    def train(self, dataset, seed, feature_map=None):
        """Train on dataset. If feature_map is given (an object with dim, radius
        and transform(X)), the learner works on the mapped features, which are
        computed and sketched in row chunks."""
        self.priv.require_approx(dataset.m)
        k, capped = self.projection_dim(dataset.m)
        if capped:
            warnings.warn("sketch dimension capped at eff_k_cap=%d" % k)
        if feature_map is None:
            d_src, r = dataset.d, dataset.radius_r
        else:
            d_src, r = feature_map.dim, feature_map.radius
        if not r > 0:
            raise ParameterError("requires data radius r > 0, got r=%g" % r)
        proj = sample_projection("fast_hadamard", d_src, k, derive_seed(seed, "projection"))
        if feature_map is None:
            sketched = proj.apply(dataset.features)
        else:
            sketched = np.empty((dataset.m, k))
            for sl in iter_row_chunks(dataset.m, feature_map.chunk_rows):
                sketched[sl] = proj.apply(feature_map.transform(dataset.features[sl]))
        sketched = project_rows_to_ball(sketched, 2.0 * r)
        S_tilde = Dataset(sketched, dataset.labels, radius_r=2.0 * r)
        inner_marg = MarginParams(self.marg.rho, 2.0 * self.marg.lam)
        w_tilde, trace = _dp_erm_run(
            S_tilde, self.priv, inner_marg, self.beta, derive_seed(seed, "dp_erm"), self.constants, self.progress
        )
        provenance = {
            "algo": self.name,
            "seed": int(seed),
            "epsilon": self.priv.epsilon,
            "delta": self.priv.delta,
            "rho": self.marg.rho,
            "lambda": self.marg.lam,
            "beta": self.beta,
            "d": d_src,
            "k": k,
            "k_cap_bound": int(capped),
            "projection": proj.kind,
            "projection_seed": proj.seed,
        }
        provenance.update(trace)
        return LinearModel(proj.apply_transpose(w_tilde), provenance)

    def empirical_statistics(self, dataset, rhos):
        return hinge_erm_grid(dataset.features, dataset.labels, rhos, self.marg.lam, warn=True)["values"]


def train_efficient(S, priv, marg, beta=0.1, seed=0, constants=None):
    "(eps, delta)-DP linear learner: fast JL sketch followed by dp_erm_gll."
    return EfficientLinearLearner(priv, marg, beta, constants).train(S, seed)


__all__ = [
    "LinearModel",
    "PureLinearLearner",
    "EfficientLinearLearner",
    "DpErmConfig",
    "train_pure_dp",
    "train_efficient",
    "dp_erm_gll",
]

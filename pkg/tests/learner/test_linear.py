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

import pytest

import numpy as np

from dpmargin.analysis.erm_oracle import hinge_erm
from dpmargin.core.dataset import Dataset
from dpmargin.core.errors import CoverTooLargeError, ParameterError
from dpmargin.core.losses import hinge_risk, zero_one_risk
from dpmargin.core.params import MarginParams, PrivacyParams
from dpmargin.core.rng import derive_seed, make_rng
from dpmargin.learner.linear import (
    DpErmConfig,
    EfficientLinearLearner,
    PureLinearLearner,
    dp_erm_gll,
    train_efficient,
    train_pure_dp,
)
from dpmargin.util.config import AnalysisConstants
from dpmargin.util.test import get_test_dataset

# k = 2 on two-cluster-50d, whose radius lies in (0.7, 0.98)
SMALL_K = AnalysisConstants(pure_k_constant=0.015)


def test_pure_linear_infinite_eps():
    S = get_test_dataset("two-cluster-50d")
    model = train_pure_dp(S, PrivacyParams(np.inf), MarginParams(0.25, 1.0), seed=1, constants=SMALL_K)
    prov = model.provenance
    assert prov["selected_score"] == prov["best_score"]
    assert prov["k"] == 2
    assert model.d == S.d


def test_pure_linear_classification_invariance():
    S = get_test_dataset("two-cluster-50d")
    learner = PureLinearLearner(PrivacyParams(2.0), MarginParams(0.25, 1.0), constants=SMALL_K)
    model = learner.train(S, seed=3)
    cands = learner.candidates(S, derive_seed(3, "public"))
    w_tilde = cands.cover.points[model.provenance["selected"]]
    X = make_rng(0, "points").standard_normal((100, S.d))
    assert (np.sign(model.decision_function(X)) == np.sign(cands.projection.apply(X) @ w_tilde)).all()


def test_pure_linear_utility():
    S = get_test_dataset("two-cluster-50d")
    test = get_test_dataset("two-cluster-50d", seed=100)
    errors = []
    for seed in range(10):
        model = train_pure_dp(S, PrivacyParams(2.0), MarginParams(0.25, 1.0), seed=seed, constants=SMALL_K)
        errors.append(zero_one_risk(model.scores(test)))
    assert np.median(errors) <= 0.2


def test_pure_linear_deterministic():
    S = get_test_dataset("two-cluster-2d")
    a = train_pure_dp(S, PrivacyParams(1.0), MarginParams(0.5, 1.0), seed=5, constants=SMALL_K)
    b = train_pure_dp(S, PrivacyParams(1.0), MarginParams(0.5, 1.0), seed=5, constants=SMALL_K)
    assert (a.weights == b.weights).all()
    assert a.provenance == b.provenance


def test_pure_linear_preconditions():
    S = get_test_dataset("two-cluster-2d")
    with pytest.raises(ParameterError):
        train_pure_dp(S, PrivacyParams(1.0, 1e-5), MarginParams(0.5, 1.0))
    with pytest.raises(ParameterError):
        train_pure_dp(S, PrivacyParams(1.0), MarginParams(10.0, 1.0))
    with pytest.raises(CoverTooLargeError):
        train_pure_dp(S, PrivacyParams(1.0), MarginParams(0.01, 10.0))


def test_dp_erm_config():
    priv, marg = PrivacyParams(1.0, 1e-4), MarginParams(0.5, 1.0)
    cfg = DpErmConfig.from_params(2000, 20, 1.0, priv, marg, beta=0.1)
    assert cfg.rounds == 3
    assert cfg.l2_sensitivity == pytest.approx(2.0 / (0.5 * 2000))
    assert cfg.selection_sensitivity(2000) == pytest.approx(3.0 / 2000)
    # M = 1 when beta >= 2/e
    assert DpErmConfig.from_params(2000, 20, 1.0, priv, marg, beta=0.75).rounds == 1
    stronger = DpErmConfig.from_params(2000, 20, 1.0, PrivacyParams(2.0, 1e-4), marg, beta=0.1)
    assert stronger.sigma < cfg.sigma
    assert DpErmConfig.from_params(2000, 20, 1.0, priv, marg, 0.1, AnalysisConstants(erm_steps=7)).steps == 7


def _sketched_problem(m, k, seed):
    rng = make_rng(seed, "erm_problem")
    y = rng.choice([-1, 1], size=m)
    X = 0.1 * rng.standard_normal((m, k))
    X[:, 0] = y * rng.uniform(0.2, 0.6, size=m)
    flips = rng.random(m) < 0.05
    y = np.where(flips, -y, y)
    norms = np.linalg.norm(X, axis=1, keepdims=True)
    X = X / np.maximum(norms, 1.0)
    return Dataset(X, y, radius_r=1.0)


def test_dp_erm_gll_close_to_oracle():
    # the inner budget eps / (4 M log(2M/delta)) needs a large m for the noise to be negligible
    m, k = 50000, 20
    S = _sketched_problem(m, k, 0)
    delta = 0.5e-6 / m
    priv = PrivacyParams(np.log(1 / delta), delta)
    marg = MarginParams(0.5, 1.0)
    w = dp_erm_gll(S, priv, marg, beta=0.1, seed=1)
    assert w.shape == (k,)
    assert np.linalg.norm(w) <= 1.0 + 1e-9
    oracle = hinge_erm(S.features, S.labels, 0.5, 1.0)
    assert hinge_risk(S.scores(w), 0.5) <= oracle["value"] + 0.05


def test_dp_erm_gll_requires_approx():
    S = _sketched_problem(100, 5, 1)
    with pytest.raises(ParameterError):
        dp_erm_gll(S, PrivacyParams(1.0), MarginParams(0.5, 1.0))
    with pytest.raises(ParameterError):
        dp_erm_gll(S, PrivacyParams(1.0, 0.1), MarginParams(0.5, 1.0))


def test_efficient_rejects_zero_radius():
    labels = np.where(np.arange(200) % 2 == 0, 1, -1)
    S = Dataset(np.zeros((200, 5)), labels)
    assert S.radius_r == 0.0
    with pytest.raises(ParameterError, match="radius"):
        train_efficient(S, PrivacyParams(1.0, 1e-6), MarginParams(0.5, 1.0))
    with pytest.raises(ParameterError, match="radius"):
        dp_erm_gll(S, PrivacyParams(1.0, 1e-6), MarginParams(0.5, 1.0))


def test_train_efficient_output():
    S = get_test_dataset("two-cluster-50d")
    priv, marg = PrivacyParams(1.0, 1e-4), MarginParams(0.25, 1.0)
    model = train_efficient(S, priv, marg, seed=2)
    assert model.weights.shape == (S.d,)
    k, capped = EfficientLinearLearner(priv, marg).projection_dim(S.m)
    assert model.provenance["k"] == k and not capped
    again = train_efficient(S, priv, marg, seed=2)
    assert (again.weights == model.weights).all()


def test_efficient_projection_cap():
    constants = AnalysisConstants(eff_k_cap=16)
    learner = EfficientLinearLearner(PrivacyParams(5.0, 1e-6), MarginParams(0.5, 1.0), constants=constants)
    k, capped = learner.projection_dim(10**5)
    assert k == 16 and capped
    S = _sketched_problem(500, 40, 2)
    with pytest.warns(UserWarning, match="capped"):
        model = learner.train(S, seed=0)
    assert model.provenance["k_cap_bound"] == 1


@pytest.mark.slow
def test_train_efficient_against_oracle():
    S = get_test_dataset("noisy-margin-10k")
    priv, marg, beta = PrivacyParams(1.0, 1e-4), MarginParams(0.1, 1.0), 0.1
    learner = EfficientLinearLearner(priv, marg, beta)
    k, _ = learner.projection_dim(S.m)
    oracle = hinge_erm(S.features, S.labels, marg.rho, marg.lam)["value"]
    slack = (marg.lam * S.radius_r / marg.rho) * (
        1 / np.sqrt(S.m) + np.sqrt(k) * np.log(1 / priv.delta) ** 1.5 * np.log(1 / beta) / (priv.epsilon * S.m)
    )
    ok = 0
    for seed in range(10):
        model = learner.train(S, seed)
        if hinge_risk(model.scores(S), marg.rho) <= oracle + 10 * slack:
            ok += 1
    assert ok >= 8


@pytest.mark.slow
def test_pure_linear_selection_utility():
    S = get_test_dataset("two-cluster-2d")
    eps, beta = 1.0, 0.1
    learner = PureLinearLearner(PrivacyParams(eps), MarginParams(0.5, 1.0), beta, constants=SMALL_K)
    ok = 0
    for seed in range(100):
        prov = learner.train(S, seed).provenance
        gap = 2.0 / (eps * S.m) * np.log(prov["cover_size"] / beta)
        if prov["selected_score"] >= prov["best_score"] - gap:
            ok += 1
    assert ok >= (1 - beta - 0.05) * 100

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

from dpmargin.analysis.bounds import label_bound_M
from dpmargin.core.dataset import Dataset
from dpmargin.core.errors import ParameterError
from dpmargin.core.losses import margin_risk
from dpmargin.core.params import MarginParams, PrivacyParams
from dpmargin.learner.labeldp import LabelDpConfig, LabelDpLearner, label_bound, train_label_dp
from dpmargin.learner.linear import LinearModel
from dpmargin.util.test import get_test_dataset


def line_dataset():
    return Dataset(np.array([[0.8], [0.6], [-0.8], [-0.6]]), np.array([1, 1, -1, -1]))


def test_label_flip_moves_scores_by_one_over_m():
    S = get_test_dataset("two-cluster-2d").subset(np.arange(30))
    learner = LabelDpLearner(PrivacyParams(1.0), MarginParams(0.5, 1.0))
    cands = learner.candidates(S, seed=0)
    flipped = S.flip_label(7)
    # the cover only depends on the features
    assert (learner.candidates(flipped, seed=0).params == cands.params).all()
    diff = learner.candidate_scores(cands, S) - learner.candidate_scores(cands, flipped)
    assert np.abs(diff).max() <= 1.0 / S.m + 1e-12


def test_label_dp_separable_line():
    S = line_dataset()
    model = train_label_dp(S, LabelDpConfig(0.5, np.inf), seed=0)
    assert isinstance(model, LinearModel)
    assert margin_risk(model.scores(S), 0.25) == 0.0
    assert model.provenance["selected_score"] == 0.0
    assert model.provenance["cover_scale"] == 0.25


def test_label_dp_deterministic():
    S = get_test_dataset("two-cluster-2d").subset(np.arange(40))
    a = train_label_dp(S, LabelDpConfig(0.5, 1.0), seed=3)
    b = train_label_dp(S, LabelDpConfig(0.5, 1.0), seed=3)
    assert (a.weights == b.weights).all()


def test_label_dp_config_validation():
    with pytest.raises(ParameterError):
        LabelDpConfig(0.0, 1.0)
    with pytest.raises(ParameterError):
        LabelDpConfig(0.5, -1.0)
    with pytest.raises(ParameterError):
        LabelDpConfig(0.5, 1.0, fat_dim=0.5)


def test_label_bound():
    cfg = LabelDpConfig(0.5, 1.0, fat_dim=4)
    m, beta = 1000, 0.1
    res = label_bound(cfg, m, beta, risk=0.1)
    M = label_bound_M(4, m, beta)
    assert res["M"] == pytest.approx(M)
    assert res["privacy_term"] == pytest.approx(64 * M * np.log(2 / beta) / m)
    assert res["bound"] == pytest.approx(0.1 + res["sqrt_term"] + res["fast_term"] + res["privacy_term"])
    assert label_bound(cfg, m, beta)["sqrt_term"] == 0.0
    free = label_bound(LabelDpConfig(0.5, np.inf, fat_dim=4), m, beta, risk=0.1)
    assert free["privacy_term"] == 0.0
    assert free["sqrt_term"] == res["sqrt_term"] and free["fast_term"] == res["fast_term"]


def test_label_bound_invalid():
    with pytest.raises(ParameterError):
        label_bound(LabelDpConfig(0.5, 1.0), 100, 0.1)
    with pytest.raises(ParameterError):
        label_bound(LabelDpConfig(0.5, 1.0, fat_dim=2), 100, 0.1, risk=1.5)
    with pytest.raises(ParameterError):
        label_bound(LabelDpConfig(0.5, 1.0, fat_dim=2), 0, 0.1)


@pytest.mark.slow
def test_label_dp_selection_utility():
    S = get_test_dataset("two-cluster-2d").subset(np.arange(30))
    eps, beta = 1.0, 0.1
    learner = LabelDpLearner(PrivacyParams(eps), MarginParams(0.5, 1.0), beta)
    ok = 0
    for seed in range(100):
        prov = learner.train(S, seed).provenance
        gap = 2.0 / (eps * S.m) * np.log(prov["cover_size"] / beta)
        if prov["selected_score"] >= prov["best_score"] - gap:
            ok += 1
    assert ok >= (1 - beta - 0.05) * 100

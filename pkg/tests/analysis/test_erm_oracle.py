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

from dpmargin.analysis.erm_oracle import direction_pool, hinge_erm, hinge_erm_grid, margin_erm
from dpmargin.core.losses import hinge_risk
from dpmargin.util.test import get_test_dataset


def test_hinge_erm_separable():
    S = get_test_dataset("two-cluster-2d")
    res = hinge_erm(S.features, S.labels, 0.1, 1.0)
    assert res["value"] <= 1e-3
    assert res["gap"] <= 0.05
    assert np.linalg.norm(res["weights"]) <= 1.0 + 1e-9
    assert hinge_risk(S.scores(res["weights"]), 0.1) == res["value"]


def test_hinge_erm_grid_monotone():
    S = get_test_dataset("noisy-margin-10k").subset(np.arange(300))
    rhos = np.array([0.4, 0.05, 0.1, 0.2])
    values = hinge_erm_grid(S.features[:, :50], S.labels, rhos, 1.0)["values"]
    order = np.argsort(rhos)
    assert np.all(np.diff(values[order]) >= -1e-12)


def test_margin_erm_monotone():
    S = get_test_dataset("two-cluster-2d")
    rhos = np.array([0.05, 0.1, 0.2, 0.4, 0.8])
    res = margin_erm(S.features, S.labels, rhos, 1.0)
    assert np.all(np.diff(res["values"]) >= 0)
    assert res["values"][0] == 0.0
    assert np.allclose(np.linalg.norm(res["pool"], axis=1), 1.0)


def test_direction_pool_degenerate():
    X = np.zeros((4, 3))
    y = np.array([1, -1, 1, -1])
    pool = direction_pool(X, y, [0.5], 1.0, steps=5)
    assert pool.shape == (1, 3)

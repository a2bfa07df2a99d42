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
from hypothesis import given
from hypothesis import strategies as st

from dpmargin.core.errors import ParameterError
from dpmargin.core.losses import (
    hinge_loss,
    hinge_risk,
    linear_scores,
    margin_risk,
    smoothed_hinge,
    smoothed_hinge_grad,
    zero_one_risk,
)

finite_scores = st.lists(st.floats(min_value=-10, max_value=10, allow_nan=False), min_size=1, max_size=50)


def test_zero_one_risk():
    assert zero_one_risk([1, 1, 1]) == 0
    assert zero_one_risk([0]) == 1
    assert zero_one_risk([1, -1, 0, 2]) == 0.5
    with pytest.raises(ParameterError):
        zero_one_risk([])


def test_margin_risk():
    assert margin_risk([0.5, 1.5], 1.0) == 0.5
    assert margin_risk([2.0, 3.0], 1.0) == 0
    with pytest.raises(ParameterError):
        margin_risk([1.0], -0.1)


def test_hinge_risk():
    rho = 0.7
    assert hinge_risk([rho, rho, rho], rho) == 0
    assert hinge_risk([0.0, 0.0], rho) == 1
    assert np.isclose(hinge_risk([-rho], rho), 2)
    with pytest.raises(ParameterError):
        hinge_loss([1.0], 0.0)


@given(finite_scores)
def test_margin_risk_at_zero_is_zero_one(scores):
    assert margin_risk(scores, 0.0) == zero_one_risk(scores)


@given(finite_scores, st.floats(min_value=0.01, max_value=5))
def test_risk_ordering(scores, rho):
    assert zero_one_risk(scores) <= margin_risk(scores, rho)
    assert zero_one_risk(scores) <= hinge_risk(scores, rho) + 1e-12


@given(finite_scores, st.floats(min_value=0.01, max_value=5), st.floats(min_value=0.01, max_value=5))
def test_margin_risk_monotone_in_rho(scores, rho_a, rho_b):
    lo, hi = min(rho_a, rho_b), max(rho_a, rho_b)
    assert margin_risk(scores, lo) <= margin_risk(scores, hi)


@given(
    st.floats(min_value=0.01, max_value=5),
    st.floats(min_value=0.01, max_value=5),
    st.lists(st.floats(min_value=0, max_value=10), min_size=1, max_size=50),
)
def test_hinge_risk_nondecreasing_in_rho(rho_a, rho_b, scores):
    lo, hi = min(rho_a, rho_b), max(rho_a, rho_b)
    assert hinge_risk(scores, hi) >= hinge_risk(scores, lo) - 1e-12


@given(st.floats(min_value=0.05, max_value=5), st.lists(st.floats(min_value=-10, max_value=10), min_size=10, max_size=10))
def test_hinge_loss_lipschitz(rho, u):
    u = np.asarray(u)
    step = 1e-6
    fd = np.abs(hinge_loss(u + step, rho) - hinge_loss(u, rho)) / step
    assert (fd <= 1 / rho + 1e-6 / rho).all()


def test_risk_axis():
    scores = np.array([[1.0, -1.0], [2.0, 0.5], [-0.5, 0.5]])
    assert zero_one_risk(scores, axis=0).tolist() == [1 / 3, 1 / 3]
    assert margin_risk(scores, 1.0, axis=1).tolist() == [1.0, 0.5, 1.0]


def test_smoothed_hinge():
    rho, mu = 0.5, 0.1
    u = np.linspace(-2, 2, 401)
    h = hinge_loss(u, rho)
    s = smoothed_hinge(u, rho, mu)
    # the Moreau envelope lies below the hinge and within mu / (2 rho^2) of it
    assert (s <= h + 1e-12).all()
    assert (h - s <= mu / (2 * rho**2) + 1e-12).all()
    # its derivative matches finite differences
    eps = 1e-6
    fd = (smoothed_hinge(u + eps, rho, mu) - smoothed_hinge(u - eps, rho, mu)) / (2 * eps)
    assert np.allclose(fd, smoothed_hinge_grad(u, rho, mu), atol=1e-4)
    assert (np.abs(smoothed_hinge_grad(u, rho, mu)) <= 1 / rho + 1e-12).all()


def test_linear_scores():
    X = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    y = np.array([1, -1, 1])
    w = np.array([2.0, 1.0])
    assert linear_scores(w, X, y).tolist() == [2.0, -1.0, 3.0]
    W = np.stack([w, -w])
    S = linear_scores(W, X, y)
    assert S.shape == (3, 2)
    assert S[:, 1].tolist() == [-2.0, 1.0, -3.0]

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
from scipy.linalg import hadamard

from dpmargin.core.errors import ParameterError
from dpmargin.core.rng import make_rng
from dpmargin.sketch import jl_distortion, projection_kinds, required_dim, sample_projection
from dpmargin.sketch.hadamard import fwht_rows


@pytest.mark.parametrize("kind", projection_kinds.keys())
@pytest.mark.parametrize("d,k", [(1, 3), (7, 4), (16, 16), (100, 20)])
def test_projection_adjoint(kind, d, k):
    proj = sample_projection(kind, d, k, seed=5)
    rng = make_rng(0, "test")
    X = rng.standard_normal((6, d))
    W = rng.standard_normal((k, 3))
    lhs = proj.apply(X) @ W
    rhs = X @ proj.apply_transpose(W)
    assert np.allclose(lhs, rhs, atol=1e-10)
    assert (proj.apply(np.zeros(d)) == 0).all()
    assert proj.apply(X[0]).shape == (k,)
    assert proj.apply_transpose(W[:, 0]).shape == (d,)
    # sign<w, Phi x> = sign<Phi^T w, x>
    w = W[:, 0]
    assert (np.sign(proj.apply(X) @ w) == np.sign(X @ proj.apply_transpose(w))).all()


@pytest.mark.parametrize("kind", projection_kinds.keys())
def test_projection_materialize(kind):
    proj = sample_projection(kind, 13, 9, seed=2)
    M = proj.materialize()
    assert M.shape == (9, 13)
    assert np.allclose(np.abs(M), 1 / np.sqrt(9))
    X = make_rng(1, "test").standard_normal((5, 13))
    assert np.allclose(proj.apply(X), X @ M.T, atol=1e-9)
    # basis rows reproduce the columns of the matrix
    assert np.allclose(proj.apply(np.eye(13)), M.T)


def test_projection_deterministic():
    for kind in projection_kinds:
        a = sample_projection(kind, 30, 8, seed=11).materialize()
        b = sample_projection(kind, 30, 8, seed=11).materialize()
        c = sample_projection(kind, 30, 8, seed=12).materialize()
        assert (a == b).all()
        assert not (a == c).all()
    with pytest.raises(ParameterError):
        sample_projection("gaussian", 3, 3, seed=0)
    with pytest.raises(ParameterError):
        sample_projection("dense_rademacher", 3, 0, seed=0)
    with pytest.raises(ParameterError):
        sample_projection("dense_rademacher", 3, 2, seed=0).apply(np.ones((2, 4)))


def test_fwht_rows():
    H = hadamard(16)
    X = make_rng(0, "fwht").standard_normal((3, 16))
    assert np.allclose(fwht_rows(X), X @ H)


def test_required_dim():
    assert required_dim(100, 0.1, 0.5, "dense_rademacher") == 222
    k = required_dim(100, 0.1, 0.4, "dense_rademacher")
    assert required_dim(100, 0.1, 0.2, "dense_rademacher") >= 4 * k - 4
    assert required_dim(100, 0.01, 0.5, "dense_rademacher") > 222
    assert required_dim(100, 0.1, 0.5, "fast_hadamard") > 222
    with pytest.raises(ParameterError):
        required_dim(100, 0.1, 1.5, "dense_rademacher")


def test_dense_projection_unbiased():
    u = np.array([3.0, -1.0, 0.5, 2.0, 0.0, 1.0])
    sq = [np.sum(sample_projection("dense_rademacher", 6, 16, seed=s).apply(u) ** 2) for s in range(10**4)]
    assert abs(np.mean(sq) / np.sum(u**2) - 1) <= 0.02


@pytest.mark.slow
def test_jl_distortion_rate():
    m, d, gamma, beta = 100, 1000, 0.5, 0.1
    # the default constant 8 is not enough for norms and all inner products at once
    k = required_dim(m, beta, gamma, "dense_rademacher", constant=64)
    U = make_rng(0, "jl").standard_normal((m, d))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    ok = 0
    for seed in range(100):
        dist = jl_distortion(sample_projection("dense_rademacher", d, k, seed), U)
        if dist["max_norm_distortion"] <= gamma / 3 and dist["max_inner_product_error"] <= gamma / 3:
            ok += 1
    assert ok >= 85
